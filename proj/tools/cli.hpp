#pragma once

#include "fire/agent.hpp"
#include "fire/core.hpp"
#include "fire/providers.hpp"

#include <json.hpp>

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace fire::cli {

using Environment = std::map<std::string, std::string>;

// The FIRE_* variables of the current process.
Environment process_environment();

// Merged view of fire.toml, FIRE_* variables and flags (in increasing priority).
struct CliConfig {
    std::string llm_base_url = "https://api.openai.com/v1";
    std::string llm_api_key;
    std::string serp_base_url = "https://serpapi.com";
    std::string serp_api_key;
    std::size_t max_snippets = 0;
    std::string embed_model;  // empty: local trigram embedder

    std::filesystem::path pricing_path;  // empty: search rate only
    AgentConfig agent;
    std::string runner = "fire";
    std::uint64_t seed = 0;
    int parallelism = 1;
    std::filesystem::path out_dir = "runs";
    std::filesystem::path cache_dir = ".fire-cache";
    std::filesystem::path scripted;  // scripted provider file; empty: live providers
    bool replay = false;
    bool bill_cache_hits = false;
    bool dry_run = false;
    std::string run_id;  // empty: derived from the resolved config

    // API keys are replaced by "***" unless redact is false.
    nlohmann::ordered_json to_json(bool redact = true) const;
};

struct Providers {
    std::shared_ptr<LlmProvider> llm;
    std::shared_ptr<SearchProvider> search;
    std::shared_ptr<Embedder> embedder;
    // Providers whose reported latencies are reproducible (scripted doubles);
    // run time is then the sum of recorded latencies instead of the clock.
    bool recorded_time = false;
};

using ProviderFactory = std::function<Providers(const CliConfig&)>;

// Scripted doubles when cfg.scripted is set, otherwise the HTTP clients.
// Throws InvalidConfig when a needed API key is missing.
Providers default_providers(const CliConfig& cfg);

// Scripted provider file:
//   {"llm": ["...", ...] | {"shared": [...], "per_claim": {"<id>": [...]}},
//    "search": {"<query>": "<snippet>"}, "latency_ms": 0}
Providers load_scripted(const std::filesystem::path& path);

struct Context {
    Environment env;
    ProviderFactory providers = default_providers;
    // Polled between claims; set by the SIGINT handler in main.
    const std::atomic<bool>* stop = nullptr;
};

// Exit codes: verify 0 Factual / 1 Non-Factual, other commands 0 on
// success, 2 on any error.
int run_cli(const std::vector<std::string>& args, const Context& ctx, std::ostream& out, std::ostream& err);

} // namespace fire::cli
