#include "fire/evaluation.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace fire::evaluation {

namespace {

using ojson = nlohmann::ordered_json;
using json = nlohmann::json;

constexpr std::string_view kLedgerSchema = "fire-ledger/1";

ojson counts_json(const ConfusionCounts& c) { return {{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}, {"tn", c.tn}}; }

ojson metrics_json(const ClassMetrics& m) {
    return {{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}};
}

ClassMetrics metrics_from(const json& j) {
    return {j.at("precision").get<double>(), j.at("recall").get<double>(), j.at("f1").get<double>()};
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string csv_row(const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) line += (i ? "," : "") + csv_field(cells[i]);
    return line + "\r\n";
}

std::string md_cell(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '|') out += '\\';
        out += c;
    }
    return out;
}

std::string md_row(const std::vector<std::string>& cells) {
    std::string line = "|";
    for (const auto& c : cells) line += " " + md_cell(c) + " |";
    return line + "\n";
}

std::string md_rule(std::size_t n) {
    std::string line = "|";
    for (std::size_t i = 0; i < n; ++i) line += "---|";
    return line + "\n";
}

// Metric cells from exact rationals over the confusion counts.
std::vector<std::string> metric_cells(const ConfusionCounts& c) {
    auto pos = [](const ConfusionCounts& k) {
        return std::vector<std::string>{ratio_cell(k.tp, k.tp + k.fp), ratio_cell(k.tp, k.tp + k.fn),
                                        ratio_cell(2 * k.tp, 2 * k.tp + k.fp + k.fn)};
    };
    auto cells = pos(c);
    auto neg = pos(c.swapped());
    cells.insert(cells.end(), neg.begin(), neg.end());
    return cells;
}

std::string hours_cell(double seconds) {
    double hundredths = std::floor(seconds / 36.0 + 0.5);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", hundredths / 100.0);
    return buf;
}

} // namespace

std::string ratio_cell(std::int64_t num, std::int64_t den) {
    if (den <= 0) return "0.00";
    auto n = static_cast<__int128>(num);
    auto d = static_cast<__int128>(den);
    auto hundredths = static_cast<std::int64_t>((200 * n + d) / (2 * d));
    char buf[32];
    std::snprintf(buf, sizeof buf, "%lld.%02lld", static_cast<long long>(hundredths / 100),
                  static_cast<long long>(hundredths % 100));
    return buf;
}

nlohmann::ordered_json ledger_to_json(const RunLedger& l) {
    ojson j;
    j["schema"] = std::string(kLedgerSchema);
    j["runner"] = l.runner;
    j["framework"] = l.framework;
    j["model"] = l.model;
    j["dataset"] = l.dataset;
    j["seed"] = l.seed;
    j["claims"] = l.claims;
    j["scored"] = l.scored;
    j["excluded_count"] = l.excluded_count;
    j["aborted"] = l.aborted;
    j["counts"] = counts_json(l.counts);
    j["metrics_true"] = metrics_json(l.metrics_true);
    j["metrics_false"] = metrics_json(l.metrics_false);
    j["llm_cost"] = l.llm_cost.to_string();
    j["search_cost"] = l.search_cost.to_string();
    j["wall_time_seconds"] = l.wall_time_seconds;
    j["llm_calls"] = l.llm_calls;
    j["search_calls"] = l.search_calls;
    ojson hist = ojson::array();
    for (const auto& [searches, bin] : l.per_claim_search_histogram)
        hist.push_back({{"searches", searches}, {"instances", bin.instances}, {"misclassified", bin.misclassified}});
    j["search_histogram"] = std::move(hist);
    return j;
}

RunLedger ledger_from_json(const nlohmann::json& j) {
    if (!j.is_object() || j.value("schema", std::string()) != kLedgerSchema)
        throw SchemaMismatch("ledger schema must be " + std::string(kLedgerSchema));
    try {
        RunLedger l;
        l.runner = j.at("runner").get<std::string>();
        l.framework = j.at("framework").get<std::string>();
        l.model = j.at("model").get<std::string>();
        l.dataset = j.at("dataset").get<std::string>();
        l.seed = j.value("seed", std::uint64_t{0});
        l.claims = j.at("claims").get<std::int64_t>();
        l.scored = j.at("scored").get<std::int64_t>();
        l.excluded_count = j.at("excluded_count").get<std::int64_t>();
        l.aborted = j.value("aborted", std::int64_t{0});
        const auto& c = j.at("counts");
        l.counts = {c.at("tp").get<std::int64_t>(), c.at("fp").get<std::int64_t>(), c.at("fn").get<std::int64_t>(),
                    c.at("tn").get<std::int64_t>()};
        l.metrics_true = metrics_from(j.at("metrics_true"));
        l.metrics_false = metrics_from(j.at("metrics_false"));
        l.llm_cost = Money::parse(j.at("llm_cost").get<std::string>());
        l.search_cost = Money::parse(j.at("search_cost").get<std::string>());
        l.wall_time_seconds = j.at("wall_time_seconds").get<double>();
        l.llm_calls = j.value("llm_calls", std::int64_t{0});
        l.search_calls = j.value("search_calls", std::int64_t{0});
        for (const auto& b : j.at("search_histogram"))
            l.per_claim_search_histogram[b.at("searches").get<int>()] = {b.at("instances").get<std::int64_t>(),
                                                                         b.at("misclassified").get<std::int64_t>()};
        return l;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaMismatch(std::string("malformed ledger: ") + e.what());
    }
}

std::string histogram_csv(const RunLedger& l) {
    std::string out = csv_row({"searches", "instances", "misclassified_instances"});
    for (const auto& [searches, bin] : l.per_claim_search_histogram)
        out += csv_row({std::to_string(searches), std::to_string(bin.instances), std::to_string(bin.misclassified)});
    return out;
}

std::string emit_report(const std::vector<ReportEntry>& entries, ReportFormat format) {
    if (format == ReportFormat::CSV) {
        std::string out = csv_row({"framework", "model", "dataset", "true_precision", "true_recall", "true_f1",
                                   "false_precision", "false_recall", "false_f1", "llm_cost_usd", "search_cost_usd",
                                   "time_hours"});
        for (const auto& e : entries) {
            std::vector<std::string> row{std::string(framework_label(e.spec.kind)), e.spec.model_label(), e.dataset};
            auto m = metric_cells(e.ledger.counts);
            row.insert(row.end(), m.begin(), m.end());
            row.push_back(e.ledger.llm_cost.to_fixed(2));
            row.push_back(e.ledger.search_cost.to_fixed(2));
            row.push_back(hours_cell(e.ledger.wall_time_seconds));
            out += csv_row(row);
        }
        return out;
    }

    std::ostringstream md;
    const std::vector<std::string> metric_head{"Framework", "LLM", "Dataset", "True Prec.", "True Recall", "True F1",
                                               "False Prec.", "False Recall", "False F1"};
    md << "## Metrics\n\n" << md_row(metric_head) << md_rule(metric_head.size());
    for (const auto& e : entries) {
        std::vector<std::string> row{std::string(framework_label(e.spec.kind)), e.spec.model_label(), e.dataset};
        auto m = metric_cells(e.ledger.counts);
        row.insert(row.end(), m.begin(), m.end());
        md << md_row(row);
    }
    const std::vector<std::string> cost_head{"Framework", "LLM", "Dataset", "LLM Cost ($)", "Search Cost ($)",
                                             "Time (hrs)"};
    md << "\n## Cost\n\n" << md_row(cost_head) << md_rule(cost_head.size());
    for (const auto& e : entries)
        md << md_row({std::string(framework_label(e.spec.kind)), e.spec.model_label(), e.dataset,
                      e.ledger.llm_cost.to_fixed(2), e.ledger.search_cost.to_fixed(2),
                      hours_cell(e.ledger.wall_time_seconds)});
    return md.str();
}

} // namespace fire::evaluation
