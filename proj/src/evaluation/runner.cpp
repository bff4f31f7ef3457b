#include "fire/evaluation.hpp"

#include <array>
#include <chrono>
#include <exception>
#include <random>

#ifdef FIRE_HAVE_OPENMP
#include <omp.h>
#endif

namespace fire::evaluation {

namespace {

struct RunnerInfo {
    RunnerKind kind;
    std::string_view name;
    std::string_view label;
};

constexpr std::array<RunnerInfo, 6> kRunners{{
    {RunnerKind::Fire, "fire", "FIRE"},
    {RunnerKind::FireNoReason, "fire-no-reason", "FIRE (No Reason)"},
    {RunnerKind::FireNoSearch, "fire-no-search", "FIRE (No Search)"},
    {RunnerKind::Random, "random", "Random"},
    {RunnerKind::AlwaysTrue, "always-true", "Always True"},
    {RunnerKind::AlwaysFalse, "always-false", "Always False"},
}};

const RunnerInfo& info(RunnerKind k) {
    for (const auto& r : kRunners)
        if (r.kind == k) return r;
    throw InvalidConfig("unknown runner kind");
}

agent::ClaimTrace baseline_trace(const Claim& c, Verdict v) {
    agent::ClaimTrace t;
    t.claim_id = c.id;
    t.claim_text = c.text;
    t.gold_label = c.gold_label;
    t.final_verdict = v;
    return t;
}

agent::ClaimTrace interrupted_trace(const Claim& c) {
    agent::ClaimTrace t;
    t.claim_id = c.id;
    t.claim_text = c.text;
    t.gold_label = c.gold_label;
    t.status = agent::TraceStatus::Aborted;
    t.error = std::string(kInterrupted);
    return t;
}

bool stopped(const RunOptions& o) { return o.stop && o.stop->load(std::memory_order_relaxed); }

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

RunResult finish(const RunnerSpec& spec, std::vector<agent::ClaimTrace> traces, const RunOptions& options,
                 double measured_seconds) {
    double wall = measured_seconds;
    if (options.time_source == agent::TimeSource::Recorded) {
        wall = 0.0;
        for (const auto& t : traces) wall += t.wall_time_seconds;
    }
    RunResult r;
    r.ledger = aggregate(spec, traces, options.dataset, wall);
    r.traces = std::move(traces);

    bool all_aborted = !r.traces.empty();
    for (const auto& t : r.traces)
        if (t.status != agent::TraceStatus::Aborted || t.error == kInterrupted) all_aborted = false;
    if (all_aborted) {
        std::string first = r.traces.front().error;
        throw RunFailed("every claim aborted (first error: " + first + ")", std::move(r));
    }
    return r;
}

// Baselines never consult a provider; their traces are cheap to build serially.
RunResult run_baseline(const RunnerSpec& spec, const std::vector<Claim>& claims, const RunOptions& options) {
    auto start = std::chrono::steady_clock::now();
    auto predictions = baseline_predictions(spec, claims.size());
    std::vector<agent::ClaimTrace> traces;
    traces.reserve(claims.size());
    for (std::size_t i = 0; i < claims.size(); ++i)
        traces.push_back(stopped(options) ? interrupted_trace(claims[i]) : baseline_trace(claims[i], predictions[i]));
    return finish(spec, std::move(traces), options, seconds_since(start));
}

} // namespace

std::vector<std::string> runner_names() {
    std::vector<std::string> out;
    for (const auto& r : kRunners) out.emplace_back(r.name);
    return out;
}

std::string_view runner_name(RunnerKind k) { return info(k).name; }
std::string_view framework_label(RunnerKind k) { return info(k).label; }

RunnerKind runner_kind_from_string(std::string_view name) {
    for (const auto& r : kRunners)
        if (r.name == name) return r.kind;
    std::string valid;
    for (const auto& r : kRunners) valid += (valid.empty() ? "" : ", ") + std::string(r.name);
    throw InvalidConfig("unknown runner '" + std::string(name) + "' (valid: " + valid + ")");
}

RunnerSpec RunnerSpec::make(RunnerKind kind, AgentConfig base, std::uint64_t seed) {
    RunnerSpec s;
    s.kind = kind;
    s.seed = seed;
    if (kind == RunnerKind::FireNoReason) base.prompt_variant = PromptVariant::NoReason;
    if (kind == RunnerKind::FireNoSearch) base.search_enabled = false;
    s.agent = std::move(base);
    return s;
}

std::vector<Verdict> baseline_predictions(const RunnerSpec& spec, std::size_t claim_count) {
    std::vector<Verdict> out;
    out.reserve(claim_count);
    switch (spec.kind) {
    case RunnerKind::AlwaysTrue:
        out.assign(claim_count, Verdict::Factual);
        break;
    case RunnerKind::AlwaysFalse:
        out.assign(claim_count, Verdict::NonFactual);
        break;
    case RunnerKind::Random: {
        std::mt19937_64 rng(spec.seed);
        for (std::size_t i = 0; i < claim_count; ++i)
            out.push_back((rng() >> 63) ? Verdict::Factual : Verdict::NonFactual);
        break;
    }
    default:
        throw InvalidConfig("runner '" + std::string(runner_name(spec.kind)) + "' is not a baseline");
    }
    return out;
}

RunResult run_serial(const RunnerSpec& spec, const std::vector<Claim>& claims, agent::ProviderSet providers,
                     const PricingTable& pricing, const RunOptions& options) {
    if (!spec.is_fire()) return run_baseline(spec, claims, options);
    spec.agent.validate();
    auto start = std::chrono::steady_clock::now();
    std::vector<agent::ClaimTrace> traces;
    traces.reserve(claims.size());
    for (const auto& c : claims) {
        if (stopped(options)) {
            traces.push_back(interrupted_trace(c));
            continue;
        }
        traces.push_back(agent::verify_claim(c, spec.agent, providers, pricing, options.time_source));
    }
    return finish(spec, std::move(traces), options, seconds_since(start));
}

RunResult run(const RunnerSpec& spec, const std::vector<Claim>& claims, agent::ProviderSet providers,
              const PricingTable& pricing, const RunOptions& options) {
    if (options.parallelism < 1) throw InvalidConfig("parallelism must be >= 1");
    if (!spec.is_fire()) return run_baseline(spec, claims, options);
#ifndef FIRE_HAVE_OPENMP
    return run_serial(spec, claims, providers, pricing, options);
#else
    if (options.parallelism == 1) return run_serial(spec, claims, providers, pricing, options);
    spec.agent.validate();

    auto start = std::chrono::steady_clock::now();
    const auto n = static_cast<std::int64_t>(claims.size());
    std::vector<agent::ClaimTrace> traces(claims.size());
    std::vector<std::exception_ptr> errors(claims.size());
    std::atomic<bool> fatal{false};

#pragma omp parallel for schedule(dynamic, 1) num_threads(options.parallelism)
    for (std::int64_t i = 0; i < n; ++i) {
        const auto& c = claims[static_cast<std::size_t>(i)];
        if (stopped(options) || fatal.load(std::memory_order_relaxed)) {
            traces[static_cast<std::size_t>(i)] = interrupted_trace(c);
            continue;
        }
        try {
            traces[static_cast<std::size_t>(i)] =
                agent::verify_claim(c, spec.agent, providers, pricing, options.time_source);
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
            fatal.store(true, std::memory_order_relaxed);
        }
    }

    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return finish(spec, std::move(traces), options, seconds_since(start));
#endif
}

} // namespace fire::evaluation
