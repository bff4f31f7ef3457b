#pragma once

#include "fire/core.hpp"
#include "fire/prompts.hpp"

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace fire {

struct LlmRequest {
    std::string prompt;
    std::string model_id;
    double temperature = 0.0;
    // Routing hint for scripted doubles; not part of the wire payload or cache key.
    std::string claim_id;
};

struct Completion {
    std::string text;
    std::int64_t prompt_tokens = 0;
    std::int64_t completion_tokens = 0;
    std::string model_id;
    // False for cache hits served in replay mode: they cost nothing.
    bool billable = true;
    // Measured for live calls; recorded value for cache hits.
    double latency_seconds = 0.0;
};

struct SearchResult {
    std::string snippet;
    bool billable = true;
    double latency_seconds = 0.0;
};

// Unit-L2-norm vector of fixed dimension per embedder.
struct EmbeddingVector {
    std::vector<double> values;
};

double cosine(const EmbeddingVector& a, const EmbeddingVector& b);

// Implementations must tolerate concurrent calls.
class LlmProvider {
public:
    virtual ~LlmProvider() = default;
    // Throws ProviderUnavailable, RateLimited, AuthFailure.
    virtual Completion complete(const LlmRequest& request) = 0;
};

class SearchProvider {
public:
    virtual ~SearchProvider() = default;
    // Snippets of all results joined into one string; empty when nothing was found.
    virtual SearchResult search(std::string_view query) = 0;
};

class Embedder {
public:
    virtual ~Embedder() = default;
    virtual EmbeddingVector embed(std::string_view text) = 0;
    // Stable identifier used in cache keys.
    virtual std::string id() const = 0;
};

Completion llm_complete(LlmProvider& llm, const prompts::RenderedPrompt& prompt, const std::string& model_id,
                        double temperature, const std::string& claim_id = {});

// Throws EmptyQuery for a blank query. Rank is assigned by the caller.
Evidence web_search(SearchProvider& search, std::string_view query, SearchResult* raw = nullptr);

// Throws EmptyText for empty input.
EmbeddingVector embed(Embedder& embedder, std::string_view text);

struct ModelRate {
    Money prompt_per_million;
    Money completion_per_million;
};

struct PricingTable {
    std::map<std::string, ModelRate, std::less<>> models;
    Money search_usd_per_request = Money::parse("0.00105");

    // JSON document:
    //   {"search_usd_per_request": "0.00105",
    //    "models": {"gpt-4o-mini": {"prompt_usd_per_million": "0.15",
    //                               "completion_usd_per_million": "0.60"}}}
    // Amounts may be strings (exact) or numbers.
    static PricingTable from_json_text(std::string_view text);
    static PricingTable load(const std::filesystem::path& path);
    std::string to_json_text() const;
};

// prompt_tokens * rate_in / 1e6 + completion_tokens * rate_out / 1e6,
// rounded half-up to the picodollar. Throws UnknownModel.
Money llm_cost(const Completion& usage, const PricingTable& pricing);
Money search_cost(std::int64_t request_count, const PricingTable& pricing);

struct RetryPolicy {
    int attempts = 3;
    std::chrono::milliseconds initial_delay{500};
    double multiplier = 2.0;
    std::function<void(std::chrono::milliseconds)> sleep;  // defaults to std::this_thread::sleep_for
};

// Runs `call`, retrying RateLimited with exponential backoff; after the
// last attempt the failure is reported as ProviderUnavailable.
template <class F>
auto with_rate_limit_retry(F&& call, const RetryPolicy& policy = {}) -> decltype(call());

void sleep_for(const RetryPolicy& policy, std::chrono::milliseconds delay);

template <class F>
auto with_rate_limit_retry(F&& call, const RetryPolicy& policy) -> decltype(call()) {
    auto delay = policy.initial_delay;
    for (int attempt = 1;; ++attempt) {
        try {
            return call();
        } catch (const RateLimited& e) {
            if (attempt >= policy.attempts)
                throw ProviderUnavailable(std::string("rate limited after retries: ") + e.what());
        }
        sleep_for(policy, delay);
        delay = std::chrono::milliseconds(static_cast<long long>(static_cast<double>(delay.count()) * policy.multiplier));
    }
}

} // namespace fire
