#include "fire/agent.hpp"

#include "fire/prompts.hpp"
#include "fire/text.hpp"

#include <chrono>

namespace fire::agent {

std::string_view to_string(TraceStatus s) {
    switch (s) {
    case TraceStatus::Completed: return "Completed";
    case TraceStatus::Excluded: return "Excluded";
    case TraceStatus::Aborted: return "Aborted";
    }
    return "Completed";
}

namespace {

std::size_t minimum_evidence(PromptVariant v) {
    if (v == PromptVariant::AtLeastOne) return 1;
    if (v == PromptVariant::AtLeastTwo) return 2;
    return 0;
}

GuardAction more_severe(GuardAction a, GuardAction b) { return static_cast<int>(a) >= static_cast<int>(b) ? a : b; }

// Holds the mutable state of one verify_claim invocation.
class Run {
public:
    Run(const Claim& claim, const AgentConfig& config, ProviderSet providers, const PricingTable& pricing,
        TimeSource time_source)
        : claim_(claim), config_(config), providers_(providers), pricing_(pricing), time_source_(time_source),
          retries_left_(config.parse_retries) {
        trace_.claim_id = claim.id;
        trace_.claim_text = claim.text;
        trace_.gold_label = claim.gold_label;
    }

    ClaimTrace execute() {
        auto start = std::chrono::steady_clock::now();
        try {
            if (!step_loop()) final_verification();
        } catch (const ProviderUnavailable& e) {
            trace_.status = TraceStatus::Aborted;
            trace_.final_verdict.reset();
            trace_.error = e.what();
        }
        trace_.evidence.assign(evidence_.items().begin(), evidence_.items().end());
        if (time_source_ == TimeSource::WallClock)
            trace_.wall_time_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        else
            trace_.wall_time_seconds = recorded_seconds_;
        return std::move(trace_);
    }

private:
    StepRecord& call_llm(const prompts::RenderedPrompt& prompt, StepKind kind) {
        Completion c = llm_complete(providers_.llm, prompt, config_.model_id, config_.temperature, claim_.id);
        ++trace_.llm_calls;
        recorded_seconds_ += c.latency_seconds;

        StepRecord rec;
        rec.iteration = n_;
        rec.kind = kind;
        rec.prompt_variant = prompt.variant;
        rec.diversity_addendum = prompt.diversity_addendum;
        rec.rendered_prompt_digest = text::sha256_hex(prompt.text);
        rec.prompt_tokens = c.prompt_tokens;
        rec.completion_tokens = c.completion_tokens;
        rec.llm_cost = c.billable ? llm_cost(c, pricing_) : Money{};
        rec.parsed = parse_step_output(c, config_.labels);
        rec.raw_completion = std::move(c.text);
        trace_.total_llm_cost += rec.llm_cost;
        trace_.steps.push_back(std::move(rec));
        return trace_.steps.back();
    }

    bool consume_retry() {
        if (retries_left_ == 0) return false;
        --retries_left_;
        return true;
    }

    // Returns true when a verdict was reached without final verification.
    bool step_loop() {
        bool diversity = false;
        for (;;) {
            auto prompt = prompts::render_step_prompt(config_.prompt_variant, claim_, evidence_, diversity,
                                                      config_.labels);
            StepRecord* rec = nullptr;
            // Malformed output re-issues the identical prompt while retries last.
            for (;;) {
                rec = &call_llm(prompt, StepKind::Step);
                if (config_.enforce_min_evidence && std::holds_alternative<FinalAnswer>(rec->parsed) &&
                    evidence_.size() < minimum_evidence(config_.prompt_variant)) {
                    rec->note = "final answer below minimum evidence";
                    rec->parsed = Malformed{rec->raw_completion};
                }
                if (!std::holds_alternative<Malformed>(rec->parsed)) break;
                if (!consume_retry()) return false;
                rec->note = rec->note.empty() ? "malformed; retrying" : rec->note + "; retrying";
            }
            diversity = false;

            if (auto* fin = std::get_if<FinalAnswer>(&rec->parsed)) {
                trace_.final_verdict = fin->verdict;
                return true;
            }

            std::string query = std::get<NextQuery>(rec->parsed).query;
            rec->query = query;
            if (!config_.search_enabled) {
                rec->note = "search disabled";
                return false;
            }
            if (n_ >= config_.max_steps) {
                rec->note = "step cap reached";
                return false;
            }

            const bool guarded = config_.guard_enabled();
            if (guarded) {
                auto d = guard_observe_query(guard_, query, providers_.embedder, config_);
                guard_ = std::move(d.state);
                rec->query_similarity = d.similarity;
                rec->guard_action = d.action;
                if (d.action == GuardAction::Terminate) {
                    trace_.early_terminated = true;
                    rec->note = "similar queries; retrieval stopped";
                    return false;
                }
            }

            SearchResult raw;
            Evidence ev = web_search(providers_.search, query, &raw);
            ++trace_.search_count;
            recorded_seconds_ += raw.latency_seconds;
            if (raw.billable) trace_.total_search_cost += search_cost(1, pricing_);
            rec->snippet = ev.snippet;
            rec->snippet_digest = text::sha256_hex(ev.snippet);

            if (guarded) {
                auto d = guard_observe_snippet(guard_, ev.snippet, providers_.embedder, config_);
                guard_ = std::move(d.state);
                rec->snippet_similarity = d.similarity;
                rec->guard_action = more_severe(rec->guard_action, d.action);
                if (d.action == GuardAction::Terminate) {
                    trace_.early_terminated = true;
                    rec->note = "similar results; retrieval stopped";
                    return false;
                }
            }

            ev.rank = static_cast<std::size_t>(n_);
            evidence_.append(std::move(ev));
            ++n_;
            if (guard_.diversity_pending) {
                diversity = config_.diversity_prompt;
                guard_.diversity_pending = false;
            }
        }
    }

    void final_verification() {
        trace_.forced_final = true;
        auto prompt = prompts::render_final_prompt(claim_, evidence_, config_.labels);
        for (;;) {
            auto& rec = call_llm(prompt, StepKind::Final);
            // Only a verdict is acceptable here.
            if (std::holds_alternative<NextQuery>(rec.parsed)) rec.parsed = Malformed{rec.raw_completion};
            if (auto* fin = std::get_if<FinalAnswer>(&rec.parsed)) {
                trace_.final_verdict = fin->verdict;
                return;
            }
            if (!consume_retry()) break;
            rec.note = "malformed; retrying";
        }
        trace_.malformed_fallback = true;
        if (config_.malformed_policy == MalformedPolicy::CountAsNonFactual) {
            trace_.final_verdict = Verdict::NonFactual;
        } else {
            trace_.status = TraceStatus::Excluded;
            trace_.final_verdict.reset();
        }
    }

    const Claim& claim_;
    const AgentConfig& config_;
    ProviderSet providers_;
    const PricingTable& pricing_;
    TimeSource time_source_;

    ClaimTrace trace_;
    EvidenceSet evidence_;
    GuardState guard_;
    int n_ = 0;
    int retries_left_;
    double recorded_seconds_ = 0.0;
};

} // namespace

ClaimTrace verify_claim(const Claim& claim, const AgentConfig& config, ProviderSet providers,
                        const PricingTable& pricing, TimeSource time_source) {
    config.validate();
    return Run(claim, config, providers, pricing, time_source).execute();
}

} // namespace fire::agent
