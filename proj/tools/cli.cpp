#include "cli.hpp"

#include "fire/cache.hpp"
#include "fire/datasets.hpp"
#include "fire/evaluation.hpp"
#include "fire/http_clients.hpp"
#include "fire/prompts.hpp"
#include "fire/scripted.hpp"
#include "fire/text.hpp"
#include "fire/toml_json.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

extern char** environ;

namespace fire::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

constexpr const char* kEnvBaseUrl = "FIRE_LLM_BASE_URL";
constexpr const char* kEnvApiKey = "FIRE_LLM_API_KEY";
constexpr const char* kEnvModel = "FIRE_LLM_MODEL";
constexpr const char* kEnvSerpKey = "FIRE_SERP_API_KEY";
constexpr const char* kEnvSerpBaseUrl = "FIRE_SERP_BASE_URL";
constexpr const char* kEnvEmbedModel = "FIRE_EMBED_MODEL";

// Raw flag values; presence is checked through the CLI11 option handles.
struct Flags {
    std::string config;
    std::string out;
    std::string cache_dir;
    std::string run_id;
    bool replay = false;
    bool dry_run = false;
    bool bill_cache_hits = false;

    std::string model;
    int max_steps = 0;
    int window = 0;
    bool diversity = false;
    std::string prompt_variant;
    bool no_search = false;
    bool no_reason = false;
    double similarity = 0.0;
    int parse_retries = 0;
    std::string malformed_policy;
    bool enforce_min_evidence = false;
    bool window_counts_pairs = false;
    std::string pricing;
    std::string scripted;

    std::string dataset;
    std::string runner;
    std::string adapter;
    std::string adapter_config;
    int parallelism = 0;
    std::uint64_t seed = 0;

    std::string claim;
    std::string raw;
    std::string output;
    std::size_t sample_true = 0;
    std::vector<std::string> ledgers;
    std::string format = "both";

    // Several subcommands register the same flag name.
    struct Slot {
        std::vector<CLI::Option*> handles;
        Slot& operator=(CLI::Option* o) {
            handles.push_back(o);
            return *this;
        }
    };
    std::map<std::string, Slot> opts;

    bool given(const std::string& name) const {
        auto it = opts.find(name);
        if (it == opts.end()) return false;
        for (auto* o : it->second.handles)
            if (o->count() > 0) return true;
        return false;
    }
};

void add_common(CLI::App* cmd, Flags& f) {
    f.opts["config"] = cmd->add_option("--config", f.config, "Config file (default: ./fire.toml when present)");
    f.opts["out"] = cmd->add_option("--out", f.out, "Output directory for run artifacts (default: runs)");
    f.opts["cache-dir"] = cmd->add_option("--cache-dir", f.cache_dir, "Response cache directory (default: .fire-cache)");
    f.opts["run-id"] = cmd->add_option("--run-id", f.run_id, "Run directory name (default: hash of the resolved config)");
    f.opts["replay"] = cmd->add_flag("--replay", f.replay, "Serve provider calls from the response cache");
    f.opts["dry-run"] = cmd->add_flag("--dry-run", f.dry_run, "Resolve and print the plan without calling providers");
    f.opts["bill-cache-hits"] = cmd->add_flag("--bill-cache-hits", f.bill_cache_hits, "Charge cache hits like live calls");
}

void add_agent(CLI::App* cmd, Flags& f) {
    f.opts["model"] = cmd->add_option("--model", f.model, "LLM model id");
    f.opts["max-steps"] = cmd->add_option("--max-steps", f.max_steps, "Search cap N")->check(CLI::PositiveNumber);
    f.opts["window"] = cmd->add_option("--window", f.window, "Early-termination window W (0 disables)")
                           ->check(CLI::NonNegativeNumber);
    f.opts["diversity"] = cmd->add_flag("--diversity", f.diversity, "Enable the diversity prompt");
    f.opts["prompt-variant"] = cmd->add_option("--prompt-variant", f.prompt_variant,
                                               "default | no-reason | at-least-one | at-least-two | inclusive");
    f.opts["no-search"] = cmd->add_flag("--no-search", f.no_search, "Disable retrieval");
    f.opts["no-reason"] = cmd->add_flag("--no-reason", f.no_reason, "Use the No Reason prompt");
    f.opts["similarity-threshold"] =
        cmd->add_option("--similarity-threshold", f.similarity, "Cosine threshold for repetition")->check(CLI::Range(0.0, 1.0));
    f.opts["parse-retries"] =
        cmd->add_option("--parse-retries", f.parse_retries, "Re-asks after malformed output")->check(CLI::NonNegativeNumber);
    f.opts["malformed-policy"] =
        cmd->add_option("--malformed-policy", f.malformed_policy, "count-as-non-factual | exclude");
    f.opts["enforce-min-evidence"] =
        cmd->add_flag("--enforce-min-evidence", f.enforce_min_evidence, "Reject early answers under AtLeastOne/Two");
    f.opts["window-counts-pairs"] =
        cmd->add_flag("--window-counts-pairs", f.window_counts_pairs, "Window counts similar pairs, not items");
    f.opts["pricing"] = cmd->add_option("--pricing", f.pricing, "Pricing JSON file");
    f.opts["scripted"] = cmd->add_option("--scripted", f.scripted, "Scripted provider file (offline runs)");
}

std::string env_get(const Environment& env, const char* key) {
    auto it = env.find(key);
    return it == env.end() ? std::string() : it->second;
}

template <class T>
T toml_get(const json& table, const std::string& section, const std::string& key) {
    try {
        return table.at(key).get<T>();
    } catch (const json::exception&) {
        throw InvalidConfig("config: [" + section + "] " + key + " has the wrong type");
    }
}

void apply_file(CliConfig& cfg, const json& doc, const fs::path& base, std::vector<std::string>& warnings) {
    auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base / p; };
    for (const auto& [section, table] : doc.items()) {
        if (!table.is_object()) {
            warnings.push_back("config: ignoring top-level key '" + section + "'");
            continue;
        }
        for (const auto& [key, value] : table.items()) {
            auto str = [&] { return toml_get<std::string>(table, section, key); };
            auto num = [&] { return toml_get<std::int64_t>(table, section, key); };
            auto flag = [&] { return toml_get<bool>(table, section, key); };
            auto real = [&] { return toml_get<double>(table, section, key); };
            std::string k = section + "." + key;
            if (k == "llm.base_url") cfg.llm_base_url = str();
            else if (k == "llm.api_key") cfg.llm_api_key = str();
            else if (k == "llm.model") cfg.agent.model_id = str();
            else if (k == "llm.temperature") cfg.agent.temperature = real();
            else if (k == "search.base_url") cfg.serp_base_url = str();
            else if (k == "search.api_key") cfg.serp_api_key = str();
            else if (k == "search.max_snippets") cfg.max_snippets = static_cast<std::size_t>(num());
            else if (k == "embeddings.model") cfg.embed_model = str();
            else if (k == "agent.max_steps") cfg.agent.max_steps = static_cast<int>(num());
            else if (k == "agent.prompt_variant") cfg.agent.prompt_variant = prompt_variant_from_string(str());
            else if (k == "agent.search") cfg.agent.search_enabled = flag();
            else if (k == "agent.window") {
                auto w = static_cast<int>(num());
                cfg.agent.early_termination_window = w > 0 ? std::optional<int>(w) : std::nullopt;
            } else if (k == "agent.diversity") cfg.agent.diversity_prompt = flag();
            else if (k == "agent.similarity_threshold") cfg.agent.similarity_threshold = real();
            else if (k == "agent.parse_retries") cfg.agent.parse_retries = static_cast<int>(num());
            else if (k == "agent.malformed_policy") cfg.agent.malformed_policy = malformed_policy_from_string(str());
            else if (k == "agent.enforce_min_evidence") cfg.agent.enforce_min_evidence = flag();
            else if (k == "agent.window_counts_pairs") cfg.agent.window_counts_pairs = flag();
            else if (k == "run.runner") cfg.runner = str();
            else if (k == "run.seed") cfg.seed = static_cast<std::uint64_t>(num());
            else if (k == "run.parallelism") cfg.parallelism = static_cast<int>(num());
            else if (k == "run.out") cfg.out_dir = resolve(str());
            else if (k == "run.cache_dir") cfg.cache_dir = resolve(str());
            else if (k == "run.pricing") cfg.pricing_path = resolve(str());
            else if (k == "run.scripted") cfg.scripted = resolve(str());
            else if (k == "run.replay") cfg.replay = flag();
            else if (k == "run.bill_cache_hits") cfg.bill_cache_hits = flag();
            else warnings.push_back("config: unknown key " + k);
        }
    }
}

void apply_env(CliConfig& cfg, const Environment& env) {
    if (auto v = env_get(env, kEnvBaseUrl); !v.empty()) cfg.llm_base_url = v;
    if (auto v = env_get(env, kEnvApiKey); !v.empty()) cfg.llm_api_key = v;
    if (auto v = env_get(env, kEnvModel); !v.empty()) cfg.agent.model_id = v;
    if (auto v = env_get(env, kEnvSerpKey); !v.empty()) cfg.serp_api_key = v;
    if (auto v = env_get(env, kEnvSerpBaseUrl); !v.empty()) cfg.serp_base_url = v;
    if (auto v = env_get(env, kEnvEmbedModel); !v.empty()) cfg.embed_model = v;
}

void apply_flags(CliConfig& cfg, const Flags& f) {
    if (f.given("out")) cfg.out_dir = f.out;
    if (f.given("cache-dir")) cfg.cache_dir = f.cache_dir;
    if (f.given("run-id")) cfg.run_id = f.run_id;
    if (f.given("replay")) cfg.replay = f.replay;
    if (f.given("dry-run")) cfg.dry_run = f.dry_run;
    if (f.given("bill-cache-hits")) cfg.bill_cache_hits = f.bill_cache_hits;

    if (f.given("model")) cfg.agent.model_id = f.model;
    if (f.given("max-steps")) cfg.agent.max_steps = f.max_steps;
    if (f.given("window"))
        cfg.agent.early_termination_window = f.window > 0 ? std::optional<int>(f.window) : std::nullopt;
    if (f.given("diversity")) cfg.agent.diversity_prompt = f.diversity;
    if (f.given("prompt-variant")) cfg.agent.prompt_variant = prompt_variant_from_string(f.prompt_variant);
    if (f.given("no-search") && f.no_search) cfg.agent.search_enabled = false;
    if (f.given("no-reason") && f.no_reason) cfg.agent.prompt_variant = PromptVariant::NoReason;
    if (f.given("similarity-threshold")) cfg.agent.similarity_threshold = f.similarity;
    if (f.given("parse-retries")) cfg.agent.parse_retries = f.parse_retries;
    if (f.given("malformed-policy")) cfg.agent.malformed_policy = malformed_policy_from_string(f.malformed_policy);
    if (f.given("enforce-min-evidence")) cfg.agent.enforce_min_evidence = f.enforce_min_evidence;
    if (f.given("window-counts-pairs")) cfg.agent.window_counts_pairs = f.window_counts_pairs;
    if (f.given("pricing")) cfg.pricing_path = f.pricing;
    if (f.given("scripted")) cfg.scripted = f.scripted;

    if (f.given("runner")) cfg.runner = f.runner;
    if (f.given("parallelism")) cfg.parallelism = f.parallelism;
    if (f.given("seed")) cfg.seed = f.seed;
}

CliConfig resolve_config(const Flags& f, const Environment& env, std::ostream& err) {
    CliConfig cfg;
    fs::path file = f.given("config") ? fs::path(f.config) : fs::path("fire.toml");
    std::vector<std::string> warnings;
    if (f.given("config") || fs::exists(file)) {
        apply_file(cfg, load_toml_file(file), file.parent_path(), warnings);
    }
    apply_env(cfg, env);
    apply_flags(cfg, f);
    for (const auto& w : warnings) err << "warning: " << w << "\n";
    if (cfg.parallelism < 1) throw InvalidConfig("parallelism must be >= 1");
    cfg.agent.validate();
    return cfg;
}

PricingTable load_pricing(const CliConfig& cfg, bool needs_model, std::ostream& err) {
    PricingTable p = cfg.pricing_path.empty() ? PricingTable{} : PricingTable::load(cfg.pricing_path);
    if (needs_model && !p.models.contains(cfg.agent.model_id)) {
        err << "warning: model '" << cfg.agent.model_id << "' has no pricing entry; LLM cost is reported as 0\n";
        p.models.emplace(cfg.agent.model_id, ModelRate{});
    }
    return p;
}

std::string derive_run_id(const CliConfig& cfg, const std::string& command, const std::string& subject) {
    ojson doc = cfg.to_json();
    doc["command"] = command;
    doc["subject"] = subject;
    return text::sha256_hex(doc.dump()).substr(0, 12);
}

void write_file(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
    if (!out) throw Error("write failed: " + path.string());
}

fs::path prepare_run_dir(CliConfig& cfg, const std::string& command, const std::string& subject) {
    if (cfg.run_id.empty()) cfg.run_id = derive_run_id(cfg, command, subject);
    auto dir = cfg.out_dir / cfg.run_id;
    ojson echo = cfg.to_json();
    echo["command"] = command;
    write_file(dir / "config.json", echo.dump(2) + "\n");
    return dir;
}

// Owns the optional cache layer placed in front of the providers.
struct ProviderStack {
    Providers base;
    std::unique_ptr<ResponseCache> cache;
    std::unique_ptr<CachingLlm> llm;
    std::unique_ptr<CachingSearch> search;
    std::unique_ptr<CachingEmbedder> embedder;
    bool recorded_time = false;

    agent::ProviderSet set() {
        if (cache) return {*llm, *search, *embedder};
        return {*base.llm, *base.search, *base.embedder};
    }

    void report_cache(std::ostream& err) const {
        if (!cache) return;
        for (const auto& w : cache->warnings()) err << "warning: " << w << "\n";
    }
};

ProviderStack build_stack(const CliConfig& cfg, const Context& ctx) {
    ProviderStack s;
    s.base = ctx.providers(cfg);
    if (!s.base.llm || !s.base.search || !s.base.embedder) throw InvalidConfig("provider factory returned null");
    s.recorded_time = s.base.recorded_time;
    if (cfg.replay) {
        s.cache = std::make_unique<ResponseCache>(cfg.cache_dir);
        CachePolicy policy{.zero_cost_hits = !cfg.bill_cache_hits};
        s.llm = std::make_unique<CachingLlm>(*s.base.llm, *s.cache, policy);
        s.search = std::make_unique<CachingSearch>(*s.base.search, *s.cache, policy);
        s.embedder = std::make_unique<CachingEmbedder>(*s.base.embedder, *s.cache);
        s.recorded_time = true;
    }
    return s;
}

std::string searches_phrase(int n) { return std::to_string(n) + (n == 1 ? " search" : " searches"); }

// ---- verify -----------------------------------------------------------------

int cmd_verify(const Flags& f, const Context& ctx, std::ostream& out, std::ostream& err) {
    CliConfig cfg = resolve_config(f, ctx.env, err);
    Claim claim = make_claim("claim-" + text::sha256_hex(f.claim).substr(0, 8), f.claim);

    if (cfg.dry_run) {
        out << "dry run: verify with " << cfg.agent.model_id << ", variant " << to_string(cfg.agent.prompt_variant)
            << ", max_steps " << cfg.agent.max_steps << (cfg.agent.search_enabled ? "" : ", search disabled") << "\n";
        auto prompt = cfg.agent.search_enabled
                          ? prompts::render_step_prompt(cfg.agent.prompt_variant, claim, EvidenceSet{}, false,
                                                        cfg.agent.labels)
                          : prompts::render_final_prompt(claim, EvidenceSet{}, cfg.agent.labels);
        out << "first prompt:\n" << prompt.text;
        return 0;
    }

    auto stack = build_stack(cfg, ctx);
    auto pricing = load_pricing(cfg, true, err);
    auto time_source = stack.recorded_time ? agent::TimeSource::Recorded : agent::TimeSource::WallClock;
    auto trace = agent::verify_claim(claim, cfg.agent, stack.set(), pricing, time_source);
    stack.report_cache(err);

    auto dir = prepare_run_dir(cfg, "verify", f.claim);
    write_file(dir / "traces.jsonl", agent::trace_to_json(trace, cfg.agent.labels).dump() + "\n");

    if (trace.status == agent::TraceStatus::Aborted) {
        err << "error: claim aborted: " << trace.error << "\n";
        return 2;
    }
    if (trace.status == agent::TraceStatus::Excluded || !trace.final_verdict) {
        err << "error: no verdict (malformed model output, policy exclude)\n";
        return 2;
    }
    out << cfg.agent.labels.token(*trace.final_verdict) << " (" << searches_phrase(trace.search_count) << ")\n";
    out << "cost: llm $" << trace.total_llm_cost.to_string() << ", search $" << trace.total_search_cost.to_string()
        << ", total $" << (trace.total_llm_cost + trace.total_search_cost).to_string() << "\n";
    if (trace.forced_final) out << "final verification prompt used\n";
    out << "trace: " << (dir / "traces.jsonl").string() << "\n";
    return *trace.final_verdict == Verdict::Factual ? 0 : 1;
}

// ---- run --------------------------------------------------------------------

struct LoadedDataset {
    std::string name;
    datasets::LoadResult result;
};

bool looks_like_manifest(const fs::path& path) {
    if (path.extension() == ".toml") return true;
    if (path.extension() != ".json") return false;
    std::ifstream in(path);
    auto doc = json::parse(in, nullptr, false);
    return doc.is_object() && doc.contains("path");
}

datasets::AdapterSpec pick_adapter(const Flags& f) {
    if (!f.adapter_config.empty()) return datasets::AdapterSpec::load(f.adapter_config);
    return datasets::builtin_adapter(f.adapter.empty() ? "normalized" : f.adapter);
}

LoadedDataset load_any(const Flags& f, const fs::path& path, const LabelSet& labels) {
    if (!fs::exists(path)) throw FileNotFound("dataset not found: " + path.string());
    if (looks_like_manifest(path)) {
        auto m = datasets::DatasetManifest::load(path);
        return {m.name, datasets::load_dataset(m, labels)};
    }
    auto adapter = pick_adapter(f);
    return {path.stem().string(), datasets::load_with_adapter(path, adapter, labels)};
}

std::string counts_line(const datasets::LabelCounts& c, const LabelSet& labels) {
    std::string s = labels.factual + ": " + std::to_string(c.factual) + ", " + labels.non_factual + ": " +
                    std::to_string(c.non_factual);
    if (c.unlabeled) s += ", unlabeled: " + std::to_string(c.unlabeled);
    return s;
}

int cmd_run(const Flags& f, const Context& ctx, std::ostream& out, std::ostream& err) {
    CliConfig cfg = resolve_config(f, ctx.env, err);
    auto kind = evaluation::runner_kind_from_string(cfg.runner);
    if (kind == evaluation::RunnerKind::Fire && cfg.agent.prompt_variant == PromptVariant::NoReason)
        kind = evaluation::RunnerKind::FireNoReason;
    if (kind == evaluation::RunnerKind::Fire && !cfg.agent.search_enabled) kind = evaluation::RunnerKind::FireNoSearch;
    auto spec = evaluation::RunnerSpec::make(kind, cfg.agent, cfg.seed);

    auto data = load_any(f, f.dataset, cfg.agent.labels);
    for (const auto& w : data.result.warnings) err << "warning: " << w << "\n";
    const auto& claims = data.result.claims;

    if (cfg.dry_run) {
        out << "dry run: " << evaluation::framework_label(kind) << " on " << data.name << " (" << claims.size()
            << " claims; " << counts_line(datasets::count_labels(claims), cfg.agent.labels) << ")\n";
        out << "parallelism " << cfg.parallelism << ", output " << (cfg.out_dir / (cfg.run_id.empty() ? "<run-id>" : cfg.run_id)).string()
            << "\n";
        return 0;
    }

    PricingTable pricing = load_pricing(cfg, spec.is_fire(), err);
    ProviderStack stack;
    TripwireLlm no_llm;
    TripwireSearch no_search;
    TripwireEmbedder no_embedder;
    // Baselines get tripwires: they must not spend provider budget.
    bool recorded = !spec.is_fire();
    if (spec.is_fire()) {
        stack = build_stack(cfg, ctx);
        recorded = stack.recorded_time;
    }
    agent::ProviderSet providers = spec.is_fire() ? stack.set() : agent::ProviderSet{no_llm, no_search, no_embedder};

    evaluation::RunOptions options;
    options.parallelism = cfg.parallelism;
    options.time_source = recorded ? agent::TimeSource::Recorded : agent::TimeSource::WallClock;
    options.dataset = data.name;
    options.stop = ctx.stop;

    evaluation::RunResult result;
    int status = 0;
    try {
        result = evaluation::run(spec, claims, providers, pricing, options);
    } catch (const evaluation::RunFailed& e) {
        err << "error: " << e.what() << "\n";
        result = e.result();
        status = 2;
    }
    stack.report_cache(err);

    std::vector<agent::ClaimTrace> kept;
    std::size_t interrupted = 0;
    for (auto& t : result.traces) {
        if (t.status == agent::TraceStatus::Aborted && t.error == evaluation::kInterrupted) ++interrupted;
        else kept.push_back(std::move(t));
    }
    if (interrupted) result.ledger = evaluation::aggregate(spec, kept, data.name, result.ledger.wall_time_seconds);

    auto dir = prepare_run_dir(cfg, "run", fs::absolute(f.dataset).lexically_normal().string());
    std::string traces;
    for (const auto& t : kept) traces += agent::trace_to_json(t, cfg.agent.labels).dump() + "\n";
    write_file(dir / "traces.jsonl", traces);
    write_file(dir / "ledger.json", evaluation::ledger_to_json(result.ledger).dump(2) + "\n");
    std::vector<evaluation::ReportEntry> entries{{spec, data.name, result.ledger}};
    auto md = evaluation::emit_report(entries, evaluation::ReportFormat::Markdown);
    write_file(dir / "report.md", md);
    write_file(dir / "report.csv", evaluation::emit_report(entries, evaluation::ReportFormat::CSV));
    write_file(dir / "search_histogram.csv", evaluation::histogram_csv(result.ledger));

    out << md;
    out << "\nclaims " << result.ledger.claims << ", scored " << result.ledger.scored << ", excluded "
        << result.ledger.excluded_count << ", searches " << result.ledger.search_calls << "\n";
    out << "artifacts: " << dir.string() << "\n";
    if (interrupted) {
        err << "interrupted: " << kept.size() << " completed traces written, " << interrupted << " claims skipped\n";
        return 2;
    }
    return status;
}

// ---- datasets normalize -----------------------------------------------------

int cmd_normalize(const Flags& f, const Context& ctx, std::ostream& out, std::ostream& err) {
    CliConfig cfg = resolve_config(f, ctx.env, err);
    fs::path raw = f.raw;
    auto adapter = pick_adapter(f);
    auto loaded = datasets::load_with_adapter(raw, adapter, cfg.agent.labels);
    for (const auto& w : loaded.warnings) err << "warning: " << w << "\n";

    auto claims = std::move(loaded.claims);
    if (f.given("sample-true"))
        claims = datasets::sample_subset(claims, Verdict::Factual, f.sample_true, f.given("seed") ? f.seed : cfg.seed);

    auto counts = datasets::count_labels(claims);
    out << counts_line(counts, cfg.agent.labels) << "\n";
    out << "records " << loaded.records << ", excluded (not supported) " << loaded.excluded_not_supported
        << ", claims " << claims.size() << "\n";
    if (auto pub = datasets::published_counts(adapter.source)) {
        bool match = pub->first == counts.factual && pub->second == counts.non_factual;
        out << "published: " << cfg.agent.labels.factual << ": " << pub->first << ", " << cfg.agent.labels.non_factual
            << ": " << pub->second << (match ? " (match)" : " (differs)") << "\n";
    }
    if (cfg.dry_run) return 0;

    fs::path target = f.output.empty() ? raw.parent_path() / (raw.stem().string() + ".normalized.jsonl") : fs::path(f.output);
    std::ostringstream buf;
    datasets::write_normalized(buf, claims, cfg.agent.labels);
    write_file(target, buf.str());
    out << "wrote " << target.string() << "\n";
    return 0;
}

// ---- report -----------------------------------------------------------------

int cmd_report(const Flags& f, const Context& ctx, std::ostream& out, std::ostream& err) {
    (void)ctx;
    std::vector<evaluation::ReportEntry> entries;
    for (const auto& p : f.ledgers) {
        std::ifstream in(p);
        if (!in) throw FileNotFound("ledger not found: " + p);
        auto doc = json::parse(in, nullptr, false);
        if (doc.is_discarded()) throw SchemaMismatch("ledger is not JSON: " + p);
        auto ledger = evaluation::ledger_from_json(doc);
        AgentConfig agent;
        agent.model_id = ledger.model;
        auto spec = evaluation::RunnerSpec::make(evaluation::runner_kind_from_string(ledger.runner), agent, ledger.seed);
        entries.push_back({spec, ledger.dataset, ledger});
    }
    auto md = evaluation::emit_report(entries, evaluation::ReportFormat::Markdown);
    auto csv = evaluation::emit_report(entries, evaluation::ReportFormat::CSV);
    if (f.format == "md" || f.format == "both") out << md;
    if (f.format == "both") out << "\n";
    if (f.format == "csv" || f.format == "both") out << csv;
    if (f.given("out") && !f.dry_run) {
        write_file(fs::path(f.out) / "report.md", md);
        write_file(fs::path(f.out) / "report.csv", csv);
        err << "wrote " << (fs::path(f.out) / "report.md").string() << " and report.csv\n";
    }
    return 0;
}

std::string read_scripted_list(const json& arr, std::vector<std::string>& into) {
    if (!arr.is_array()) return "expected an array of strings";
    for (const auto& v : arr) {
        if (!v.is_string()) return "expected an array of strings";
        into.push_back(v.get<std::string>());
    }
    return {};
}

} // namespace

Environment process_environment() {
    Environment env;
    for (char** e = environ; e && *e; ++e) {
        std::string_view kv(*e);
        if (!kv.starts_with("FIRE_")) continue;
        auto eq = kv.find('=');
        if (eq == std::string_view::npos) continue;
        env.emplace(std::string(kv.substr(0, eq)), std::string(kv.substr(eq + 1)));
    }
    return env;
}

ojson CliConfig::to_json(bool redact) const {
    auto key = [&](const std::string& k) { return redact && !k.empty() ? std::string("***") : k; };
    ojson a;
    a["model"] = agent.model_id;
    a["temperature"] = agent.temperature;
    a["max_steps"] = agent.max_steps;
    a["prompt_variant"] = std::string(to_string(agent.prompt_variant));
    a["search"] = agent.search_enabled;
    if (agent.early_termination_window) a["window"] = *agent.early_termination_window;
    else a["window"] = nullptr;
    a["diversity"] = agent.diversity_prompt;
    a["similarity_threshold"] = agent.similarity_threshold;
    a["parse_retries"] = agent.parse_retries;
    a["malformed_policy"] = std::string(to_string(agent.malformed_policy));
    a["enforce_min_evidence"] = agent.enforce_min_evidence;
    a["window_counts_pairs"] = agent.window_counts_pairs;

    ojson j;
    j["llm"] = {{"base_url", llm_base_url}, {"api_key", key(llm_api_key)}};
    j["search"] = {{"base_url", serp_base_url}, {"api_key", key(serp_api_key)}, {"max_snippets", max_snippets}};
    j["embeddings"] = {{"model", embed_model.empty() ? std::string("trigram-fnv1a-256 (local)") : embed_model}};
    j["agent"] = std::move(a);
    j["run"] = {{"runner", runner},
                {"seed", seed},
                {"parallelism", parallelism},
                {"out", out_dir.string()},
                {"cache_dir", cache_dir.string()},
                {"pricing", pricing_path.string()},
                {"scripted", scripted.string()},
                {"replay", replay},
                {"bill_cache_hits", bill_cache_hits},
                {"run_id", run_id}};
    return j;
}

Providers load_scripted(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw FileNotFound("scripted provider file not found: " + path.string());
    auto doc = json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) throw InvalidConfig("scripted file is not a JSON object: " + path.string());

    auto llm = std::make_shared<ScriptedLlm>();
    if (doc.contains("llm")) {
        const auto& l = doc["llm"];
        std::vector<std::string> shared;
        std::string problem;
        if (l.is_array()) {
            problem = read_scripted_list(l, shared);
        } else if (l.is_object()) {
            if (l.contains("shared")) problem = read_scripted_list(l["shared"], shared);
            if (problem.empty() && l.contains("per_claim")) {
                for (const auto& [id, list] : l["per_claim"].items()) {
                    std::vector<std::string> items;
                    problem = read_scripted_list(list, items);
                    if (!problem.empty()) break;
                    for (auto& r : items) llm->enqueue_for(id, std::move(r));
                }
            }
        } else {
            problem = "expected an array or an object";
        }
        if (!problem.empty()) throw InvalidConfig("scripted file, llm: " + problem);
        for (auto& r : shared) llm->enqueue(std::move(r));
    }

    auto search = std::make_shared<ScriptedSearch>();
    if (doc.contains("search")) {
        if (!doc["search"].is_object()) throw InvalidConfig("scripted file, search: expected an object");
        for (const auto& [q, s] : doc["search"].items()) {
            if (!s.is_string()) throw InvalidConfig("scripted file, search: snippets must be strings");
            search->set(q, s.get<std::string>());
        }
    }
    if (doc.contains("latency_ms")) {
        std::chrono::microseconds latency(doc["latency_ms"].get<std::int64_t>() * 1000);
        llm->set_latency(latency);
        search->set_latency(latency);
    }
    return Providers{llm, search, std::make_shared<TrigramEmbedder>(), true};
}

Providers default_providers(const CliConfig& cfg) {
    if (!cfg.scripted.empty()) return load_scripted(cfg.scripted);
    if (cfg.llm_api_key.empty())
        throw InvalidConfig(std::string(kEnvApiKey) + " is not set (or pass --scripted for offline runs)");
    Providers p;
    p.llm = std::make_shared<OpenAiChatClient>(cfg.llm_base_url, cfg.llm_api_key);
    if (cfg.agent.search_enabled) {
        if (cfg.serp_api_key.empty()) throw InvalidConfig(std::string(kEnvSerpKey) + " is not set");
        p.search = std::make_shared<SerpApiClient>(cfg.serp_api_key, cfg.serp_base_url, cfg.max_snippets);
    } else {
        p.search = std::make_shared<TripwireSearch>();
    }
    if (!cfg.embed_model.empty()) p.embedder = std::make_shared<OpenAiEmbeddingClient>(cfg.llm_base_url, cfg.llm_api_key, cfg.embed_model);
    else p.embedder = std::make_shared<TrigramEmbedder>();
    return p;
}

int run_cli(const std::vector<std::string>& args, const Context& ctx, std::ostream& out, std::ostream& err) {
    CLI::App app{"Iterative retrieval-and-verification fact checker", "fire"};
    app.require_subcommand(1);
    Flags f;

    auto* verify = app.add_subcommand("verify", "Verify one claim");
    verify->add_option("claim", f.claim, "Atomic claim text")->required();
    add_common(verify, f);
    add_agent(verify, f);

    auto* run = app.add_subcommand("run", "Evaluate a runner over a dataset");
    f.opts["dataset"] = run->add_option("--dataset", f.dataset, "Normalized JSONL, raw file with --adapter, or manifest")->required();
    f.opts["runner"] = run->add_option("--runner", f.runner, "fire | fire-no-reason | fire-no-search | random | always-true | always-false");
    f.opts["adapter"] = run->add_option("--adapter", f.adapter, "Dataset adapter for raw files");
    f.opts["adapter-config"] = run->add_option("--adapter-config", f.adapter_config, "Adapter spec JSON");
    f.opts["parallelism"] = run->add_option("--parallelism", f.parallelism, "Claims in flight")->check(CLI::PositiveNumber);
    f.opts["seed"] = run->add_option("--seed", f.seed, "Seed for the random baseline");
    add_common(run, f);
    add_agent(run, f);

    auto* datasets_cmd = app.add_subcommand("datasets", "Dataset utilities");
    datasets_cmd->require_subcommand(1);
    auto* normalize = datasets_cmd->add_subcommand("normalize", "Convert a released dataset to normalized JSONL");
    normalize->add_option("raw", f.raw, "Raw dataset file")->required();
    f.opts["adapter"] = normalize->add_option("--adapter", f.adapter, "Adapter: " + [] {
        std::string s;
        for (const auto& n : datasets::builtin_adapter_names()) s += (s.empty() ? "" : ", ") + n;
        return s;
    }());
    f.opts["adapter-config"] = normalize->add_option("--adapter-config", f.adapter_config, "Adapter spec JSON");
    f.opts["output"] = normalize->add_option("--output", f.output, "Output JSONL path");
    f.opts["sample-true"] = normalize->add_option("--sample-true", f.sample_true, "Keep a seeded sample of N Factual claims");
    f.opts["seed"] = normalize->add_option("--seed", f.seed, "Sampling seed");
    add_common(normalize, f);

    auto* report = app.add_subcommand("report", "Re-render reports from ledgers");
    report->add_option("ledgers", f.ledgers, "ledger.json files")->required();
    report->add_option("--format", f.format, "md | csv | both")->check(CLI::IsMember({"md", "csv", "both"}));
    add_common(report, f);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (verify->parsed()) return cmd_verify(f, ctx, out, err);
        if (run->parsed()) return cmd_run(f, ctx, out, err);
        if (normalize->parsed()) return cmd_normalize(f, ctx, out, err);
        if (report->parsed()) return cmd_report(f, ctx, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

} // namespace fire::cli
