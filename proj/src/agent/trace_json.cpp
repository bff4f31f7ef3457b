#include "fire/agent.hpp"

namespace fire::agent {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

template <class J>
void put_optional(J& j, const char* key, const std::optional<std::string>& v) {
    if (v) j[key] = *v;
    else j[key] = nullptr;
}

template <class J>
void put_optional(J& j, const char* key, const std::optional<double>& v) {
    if (v) j[key] = *v;
    else j[key] = nullptr;
}

ojson outcome_to_json(const StepOutcome& o, const LabelSet& labels) {
    ojson j;
    j["kind"] = std::string(outcome_kind(o));
    if (auto* f = std::get_if<FinalAnswer>(&o)) j["verdict"] = labels.token(f->verdict);
    if (auto* q = std::get_if<NextQuery>(&o)) j["query"] = q->query;
    return j;
}

StepOutcome outcome_from_json(const json& j, const std::string& raw, const LabelSet& labels) {
    auto kind = j.at("kind").get<std::string>();
    if (kind == "FinalAnswer") return FinalAnswer{verdict_from_token(j.at("verdict").get<std::string>(), labels)};
    if (kind == "NextQuery") return NextQuery{j.at("query").get<std::string>()};
    return Malformed{raw};
}

std::optional<std::string> opt_string(const json& j, const char* key) {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    return j[key].get<std::string>();
}

std::optional<double> opt_double(const json& j, const char* key) {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    return j[key].get<double>();
}

std::optional<Verdict> opt_verdict(const json& j, const char* key, const LabelSet& labels) {
    auto s = opt_string(j, key);
    if (!s) return std::nullopt;
    return verdict_from_token(*s, labels);
}

} // namespace

ojson trace_to_json(const ClaimTrace& t, const LabelSet& labels) {
    ojson j;
    j["schema"] = std::string(kTraceSchema);
    j["claim_id"] = t.claim_id;
    j["claim"] = t.claim_text;
    if (t.gold_label) j["gold_label"] = labels.token(*t.gold_label);
    else j["gold_label"] = nullptr;
    j["status"] = std::string(to_string(t.status));
    if (t.final_verdict) j["final_verdict"] = labels.token(*t.final_verdict);
    else j["final_verdict"] = nullptr;
    j["search_count"] = t.search_count;
    j["llm_calls"] = t.llm_calls;
    j["forced_final"] = t.forced_final;
    j["early_terminated"] = t.early_terminated;
    j["malformed_fallback"] = t.malformed_fallback;
    j["wall_time_seconds"] = t.wall_time_seconds;
    j["total_llm_cost"] = t.total_llm_cost.to_string();
    j["total_search_cost"] = t.total_search_cost.to_string();
    if (!t.error.empty()) j["error"] = t.error;

    ojson steps = ojson::array();
    for (const auto& s : t.steps) {
        ojson r;
        r["iteration"] = s.iteration;
        r["kind"] = s.kind == StepKind::Step ? "Step" : "Final";
        r["prompt_variant"] = std::string(to_string(s.prompt_variant));
        r["diversity_addendum"] = s.diversity_addendum;
        r["rendered_prompt_digest"] = s.rendered_prompt_digest;
        r["raw_completion"] = s.raw_completion;
        r["parsed"] = outcome_to_json(s.parsed, labels);
        put_optional(r, "query", s.query);
        put_optional(r, "snippet", s.snippet);
        put_optional(r, "snippet_digest", s.snippet_digest);
        r["guard_action"] = std::string(to_string(s.guard_action));
        put_optional(r, "query_similarity", s.query_similarity);
        put_optional(r, "snippet_similarity", s.snippet_similarity);
        r["prompt_tokens"] = s.prompt_tokens;
        r["completion_tokens"] = s.completion_tokens;
        r["llm_cost"] = s.llm_cost.to_string();
        if (!s.note.empty()) r["note"] = s.note;
        steps.push_back(std::move(r));
    }
    j["steps"] = std::move(steps);

    ojson evidence = ojson::array();
    for (const auto& e : t.evidence) evidence.push_back({{"rank", e.rank}, {"query", e.query}, {"snippet", e.snippet}});
    j["evidence"] = std::move(evidence);
    return j;
}

ClaimTrace trace_from_json(const json& j, const LabelSet& labels) {
    if (j.value("schema", std::string()) != kTraceSchema)
        throw SchemaMismatch("trace schema must be " + std::string(kTraceSchema));
    ClaimTrace t;
    t.claim_id = j.at("claim_id").get<std::string>();
    t.claim_text = j.value("claim", std::string());
    t.gold_label = opt_verdict(j, "gold_label", labels);
    auto status = j.at("status").get<std::string>();
    t.status = status == "Aborted" ? TraceStatus::Aborted
               : status == "Excluded" ? TraceStatus::Excluded
                                      : TraceStatus::Completed;
    t.final_verdict = opt_verdict(j, "final_verdict", labels);
    t.search_count = j.at("search_count").get<int>();
    t.llm_calls = j.value("llm_calls", 0);
    t.forced_final = j.value("forced_final", false);
    t.early_terminated = j.value("early_terminated", false);
    t.malformed_fallback = j.value("malformed_fallback", false);
    t.wall_time_seconds = j.value("wall_time_seconds", 0.0);
    t.total_llm_cost = Money::parse(j.at("total_llm_cost").get<std::string>());
    t.total_search_cost = Money::parse(j.at("total_search_cost").get<std::string>());
    t.error = j.value("error", std::string());

    for (const auto& r : j.at("steps")) {
        StepRecord s;
        s.iteration = r.at("iteration").get<int>();
        s.kind = r.at("kind").get<std::string>() == "Final" ? StepKind::Final : StepKind::Step;
        s.prompt_variant = prompt_variant_from_string(r.at("prompt_variant").get<std::string>());
        s.diversity_addendum = r.value("diversity_addendum", false);
        s.rendered_prompt_digest = r.at("rendered_prompt_digest").get<std::string>();
        s.raw_completion = r.at("raw_completion").get<std::string>();
        s.parsed = outcome_from_json(r.at("parsed"), s.raw_completion, labels);
        s.query = opt_string(r, "query");
        s.snippet = opt_string(r, "snippet");
        s.snippet_digest = opt_string(r, "snippet_digest");
        s.guard_action = guard_action_from_string(r.at("guard_action").get<std::string>());
        s.query_similarity = opt_double(r, "query_similarity");
        s.snippet_similarity = opt_double(r, "snippet_similarity");
        s.prompt_tokens = r.value("prompt_tokens", std::int64_t{0});
        s.completion_tokens = r.value("completion_tokens", std::int64_t{0});
        s.llm_cost = Money::parse(r.at("llm_cost").get<std::string>());
        s.note = r.value("note", std::string());
        t.steps.push_back(std::move(s));
    }
    for (const auto& e : j.at("evidence"))
        t.evidence.push_back(
            Evidence{e.at("query").get<std::string>(), e.at("snippet").get<std::string>(), e.at("rank").get<std::size_t>()});
    return t;
}

} // namespace fire::agent
