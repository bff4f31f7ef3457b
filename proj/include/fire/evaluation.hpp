#pragma once

#include "fire/agent.hpp"
#include "fire/core.hpp"

#include <json.hpp>

#include <atomic>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace fire::evaluation {

// Factual is the positive class.
struct ConfusionCounts {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
    std::int64_t tn = 0;

    std::int64_t total() const { return tp + fp + fn + tn; }
    // Counts with NonFactual as the positive class.
    ConfusionCounts swapped() const { return {tn, fn, fp, tp}; }
    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    friend bool operator==(const ClassMetrics&, const ClassMetrics&) = default;
};

// P = tp/(tp+fp) (0 if no positive predictions), R = tp/(tp+fn) (0 if no
// positive golds), F1 = 2PR/(P+R) (0 if P+R = 0).
ClassMetrics class_metrics(const ConfusionCounts& c);

struct Scores {
    ConfusionCounts counts;
    ClassMetrics true_class;
    ClassMetrics false_class;
};

// Throws MissingGold, DuplicatePrediction.
Scores score(const std::vector<std::pair<std::string, Verdict>>& predictions, const std::vector<Claim>& golds);

enum class RunnerKind { Fire, FireNoReason, FireNoSearch, Random, AlwaysTrue, AlwaysFalse };

std::vector<std::string> runner_names();
std::string_view runner_name(RunnerKind k);     // "fire-no-reason"
std::string_view framework_label(RunnerKind k);  // "FIRE (No Reason)"
// Throws InvalidConfig listing the valid names.
RunnerKind runner_kind_from_string(std::string_view name);

struct RunnerSpec {
    RunnerKind kind = RunnerKind::Fire;
    std::uint64_t seed = 0;  // Random only
    AgentConfig agent;       // Fire kinds only

    // Applies the ablation settings: NoReason prompt, or search disabled.
    static RunnerSpec make(RunnerKind kind, AgentConfig base = {}, std::uint64_t seed = 0);
    bool is_fire() const { return kind == RunnerKind::Fire || kind == RunnerKind::FireNoReason || kind == RunnerKind::FireNoSearch; }
    std::string model_label() const { return is_fire() ? agent.model_id : "-"; }
};

struct HistogramBin {
    std::int64_t instances = 0;
    std::int64_t misclassified = 0;
    friend bool operator==(const HistogramBin&, const HistogramBin&) = default;
};

// search_count → number of traces, including 0.
std::map<int, std::int64_t> histogram_of_searches(const std::vector<agent::ClaimTrace>& traces);
// Same, with the misclassified (scored and wrong) share per bin.
std::map<int, HistogramBin> search_histogram(const std::vector<agent::ClaimTrace>& traces);

struct RunLedger {
    std::string runner;     // runner_name
    std::string framework;  // framework_label
    std::string model;
    std::string dataset;
    std::uint64_t seed = 0;

    std::int64_t claims = 0;
    std::int64_t scored = 0;
    std::int64_t excluded_count = 0;  // aborted, excluded by policy, or unlabeled
    std::int64_t aborted = 0;
    ConfusionCounts counts;
    ClassMetrics metrics_true;
    ClassMetrics metrics_false;

    Money llm_cost;
    Money search_cost;
    double wall_time_seconds = 0.0;
    std::int64_t llm_calls = 0;
    std::int64_t search_calls = 0;
    std::map<int, HistogramBin> per_claim_search_histogram;
};

RunLedger aggregate(const RunnerSpec& spec, const std::vector<agent::ClaimTrace>& traces, const std::string& dataset,
                    double wall_time_seconds);

struct RunResult {
    std::vector<agent::ClaimTrace> traces;  // in claim order
    RunLedger ledger;
};

struct RunOptions {
    int parallelism = 1;
    agent::TimeSource time_source = agent::TimeSource::WallClock;
    std::string dataset;
    // Set asynchronously (e.g. by a signal handler); unstarted claims are
    // then skipped and marked interrupted.
    const std::atomic<bool>* stop = nullptr;
};

// Raised when every claim of a non-empty run aborted; carries the traces.
class RunFailed : public Error {
public:
    RunFailed(std::string what, RunResult result) : Error(std::move(what)), result_(std::move(result)) {}
    const RunResult& result() const { return result_; }

private:
    RunResult result_;
};

inline constexpr std::string_view kInterrupted = "interrupted";

// Bounded worker pool (OpenMP) over claims. Aggregation happens after all
// workers finish; traces are merged in claim order.
RunResult run(const RunnerSpec& spec, const std::vector<Claim>& claims, agent::ProviderSet providers,
              const PricingTable& pricing, const RunOptions& options = {});

// Single-threaded reference for `run`; ignores options.parallelism.
RunResult run_serial(const RunnerSpec& spec, const std::vector<Claim>& claims, agent::ProviderSet providers,
                     const PricingTable& pricing, const RunOptions& options = {});

// The predictions of a baseline runner, without touching any provider.
std::vector<Verdict> baseline_predictions(const RunnerSpec& spec, std::size_t claim_count);

nlohmann::ordered_json ledger_to_json(const RunLedger& ledger);
RunLedger ledger_from_json(const nlohmann::json& doc);

// searches,instances,misclassified_instances (RFC 4180, CRLF line ends).
std::string histogram_csv(const RunLedger& ledger);

enum class ReportFormat { Markdown, CSV };

struct ReportEntry {
    RunnerSpec spec;
    std::string dataset;
    RunLedger ledger;
};

// One row per (framework, model, dataset): Prec/Recall/F1 for both classes
// rounded half-up to 2 d.p., then LLM cost, search cost and hours.
std::string emit_report(const std::vector<ReportEntry>& entries, ReportFormat format);

// Half-up rounding of num/den to 2 d.p.; "0.00" when den == 0.
std::string ratio_cell(std::int64_t num, std::int64_t den);

} // namespace fire::evaluation
