#pragma once

#include "fire/core.hpp"
#include "fire/providers.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace fire::agent {

// ---- output parsing -------------------------------------------------------

// The last balanced top-level JSON object in `text` that carries
// "final_answer" or "search_query". Markdown code fences are stripped first.
std::optional<nlohmann::json> extract_json_object(std::string_view text);

struct FinalAnswer {
    Verdict verdict;
    friend bool operator==(const FinalAnswer&, const FinalAnswer&) = default;
};
struct NextQuery {
    std::string query;  // never empty
    friend bool operator==(const NextQuery&, const NextQuery&) = default;
};
struct Malformed {
    std::string raw;
    friend bool operator==(const Malformed&, const Malformed&) = default;
};

using StepOutcome = std::variant<FinalAnswer, NextQuery, Malformed>;

std::string_view outcome_kind(const StepOutcome& o);

// Malformed when no object is found, both keys are present, the label is
// unknown, or the query is blank.
StepOutcome parse_step_output(const Completion& completion, const LabelSet& labels = default_labels());

// ---- repetition guard ------------------------------------------------------

enum class GuardAction { None, Proceed, InjectDiversity, Terminate };

std::string_view to_string(GuardAction a);
GuardAction guard_action_from_string(std::string_view s);

struct GuardState {
    std::optional<std::string> last_query;
    std::optional<std::string> last_snippet;
    std::optional<EmbeddingVector> last_query_embedding;
    std::optional<EmbeddingVector> last_snippet_embedding;
    int query_run_length = 0;    // >= 1 once a query has been observed
    int snippet_run_length = 0;  // >= 1 once a snippet has been observed
    bool diversity_pending = false;
};

struct GuardDecision {
    GuardState state;
    GuardAction action = GuardAction::Proceed;
    // Cosine to the previous item; nullopt for the first item.
    std::optional<double> similarity;
};

// A streak is a run of consecutive items each with cosine >= threshold to
// its predecessor. Terminate once the streak reaches the window (or, with
// window_counts_pairs, once it holds `window` similar pairs); otherwise
// InjectDiversity for a streak of >= 2 when diversity prompting is on.
GuardDecision guard_observe_query(const GuardState& state, const std::string& query, Embedder& embedder,
                                  const AgentConfig& config);

// Same rule over retrieved snippets. Two empty snippets are similar; an
// empty and a non-empty snippet are not.
GuardDecision guard_observe_snippet(const GuardState& state, const std::string& snippet, Embedder& embedder,
                                    const AgentConfig& config);

// ---- the loop ---------------------------------------------------------------

enum class StepKind { Step, Final };
enum class TraceStatus { Completed, Excluded, Aborted };
enum class TimeSource { WallClock, Recorded };

std::string_view to_string(TraceStatus s);

struct StepRecord {
    int iteration = 0;
    StepKind kind = StepKind::Step;
    PromptVariant prompt_variant = PromptVariant::Default;
    bool diversity_addendum = false;
    std::string rendered_prompt_digest;
    std::string raw_completion;
    StepOutcome parsed = Malformed{};
    std::optional<std::string> query;
    std::optional<std::string> snippet;
    std::optional<std::string> snippet_digest;
    GuardAction guard_action = GuardAction::None;
    std::optional<double> query_similarity;
    std::optional<double> snippet_similarity;
    std::int64_t prompt_tokens = 0;
    std::int64_t completion_tokens = 0;
    Money llm_cost;
    std::string note;
};

struct ClaimTrace {
    std::string claim_id;
    std::string claim_text;
    std::optional<Verdict> gold_label;
    std::vector<StepRecord> steps;
    std::vector<Evidence> evidence;
    int search_count = 0;
    int llm_calls = 0;
    std::optional<Verdict> final_verdict;  // set unless status != Completed
    TraceStatus status = TraceStatus::Completed;
    bool forced_final = false;
    bool early_terminated = false;
    bool malformed_fallback = false;
    double wall_time_seconds = 0.0;
    Money total_llm_cost;
    Money total_search_cost;
    std::string error;
};

struct ProviderSet {
    LlmProvider& llm;
    SearchProvider& search;
    Embedder& embedder;
};

// One claim through the loop: ask for a verdict or a query, search while
// n < max_steps, accumulate evidence, and fall back to the final
// verification prompt when the cap is hit, retrieval is cut off or
// disabled, or parsing keeps failing. ProviderUnavailable yields an
// Aborted trace; AuthFailure and UnknownModel propagate.
ClaimTrace verify_claim(const Claim& claim, const AgentConfig& config, ProviderSet providers,
                        const PricingTable& pricing, TimeSource time_source = TimeSource::WallClock);

// ---- trace export -----------------------------------------------------------

inline constexpr std::string_view kTraceSchema = "fire-trace/1";

nlohmann::ordered_json trace_to_json(const ClaimTrace& trace, const LabelSet& labels = default_labels());
ClaimTrace trace_from_json(const nlohmann::json& doc, const LabelSet& labels = default_labels());

} // namespace fire::agent
