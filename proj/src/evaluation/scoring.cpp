#include "fire/evaluation.hpp"

#include <set>
#include <unordered_map>

namespace fire::evaluation {

ClassMetrics class_metrics(const ConfusionCounts& c) {
    ClassMetrics m;
    if (c.tp + c.fp > 0) m.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
    if (c.tp + c.fn > 0) m.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
    if (m.precision + m.recall > 0) m.f1 = 2 * m.precision * m.recall / (m.precision + m.recall);
    return m;
}

Scores score(const std::vector<std::pair<std::string, Verdict>>& predictions, const std::vector<Claim>& golds) {
    std::unordered_map<std::string, const Claim*> by_id;
    for (const auto& g : golds) by_id.emplace(g.id, &g);

    Scores s;
    std::set<std::string> seen;
    for (const auto& [id, predicted] : predictions) {
        if (!seen.insert(id).second) throw DuplicatePrediction("duplicate prediction for claim '" + id + "'");
        auto it = by_id.find(id);
        if (it == by_id.end() || !it->second->gold_label) throw MissingGold("no gold label for claim '" + id + "'");
        bool gold_pos = *it->second->gold_label == Verdict::Factual;
        bool pred_pos = predicted == Verdict::Factual;
        if (pred_pos && gold_pos) ++s.counts.tp;
        else if (pred_pos) ++s.counts.fp;
        else if (gold_pos) ++s.counts.fn;
        else ++s.counts.tn;
    }
    s.true_class = class_metrics(s.counts);
    s.false_class = class_metrics(s.counts.swapped());
    return s;
}

std::map<int, std::int64_t> histogram_of_searches(const std::vector<agent::ClaimTrace>& traces) {
    std::map<int, std::int64_t> h;
    for (const auto& t : traces) ++h[t.search_count];
    return h;
}

std::map<int, HistogramBin> search_histogram(const std::vector<agent::ClaimTrace>& traces) {
    std::map<int, HistogramBin> h;
    for (const auto& t : traces) {
        auto& bin = h[t.search_count];
        ++bin.instances;
        if (t.status == agent::TraceStatus::Completed && t.gold_label && t.final_verdict &&
            *t.gold_label != *t.final_verdict)
            ++bin.misclassified;
    }
    return h;
}

RunLedger aggregate(const RunnerSpec& spec, const std::vector<agent::ClaimTrace>& traces, const std::string& dataset,
                    double wall_time_seconds) {
    RunLedger l;
    l.runner = std::string(runner_name(spec.kind));
    l.framework = std::string(framework_label(spec.kind));
    l.model = spec.model_label();
    l.dataset = dataset;
    l.seed = spec.seed;
    l.claims = static_cast<std::int64_t>(traces.size());
    l.wall_time_seconds = wall_time_seconds;

    for (const auto& t : traces) {
        l.llm_cost += t.total_llm_cost;
        l.search_cost += t.total_search_cost;
        l.llm_calls += t.llm_calls;
        l.search_calls += t.search_count;
        if (t.status == agent::TraceStatus::Aborted) ++l.aborted;
        if (t.status != agent::TraceStatus::Completed || !t.final_verdict || !t.gold_label) {
            ++l.excluded_count;
            continue;
        }
        ++l.scored;
        bool gold_pos = *t.gold_label == Verdict::Factual;
        bool pred_pos = *t.final_verdict == Verdict::Factual;
        if (pred_pos && gold_pos) ++l.counts.tp;
        else if (pred_pos) ++l.counts.fp;
        else if (gold_pos) ++l.counts.fn;
        else ++l.counts.tn;
    }
    l.metrics_true = class_metrics(l.counts);
    l.metrics_false = class_metrics(l.counts.swapped());
    l.per_claim_search_histogram = search_histogram(traces);
    return l;
}

} // namespace fire::evaluation
