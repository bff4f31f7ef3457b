#include "fire/providers.hpp"

#include "fire/text.hpp"

#include <json.hpp>

#include <cmath>
#include <limits>
#include <fstream>
#include <sstream>
#include <thread>

namespace fire {

using json = nlohmann::json;

double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.values.size() != b.values.size()) throw Error("cosine: dimension mismatch");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        dot += a.values[i] * b.values[i];
        na += a.values[i] * a.values[i];
        nb += b.values[i] * b.values[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

Completion llm_complete(LlmProvider& llm, const prompts::RenderedPrompt& prompt, const std::string& model_id,
                        double temperature, const std::string& claim_id) {
    return llm.complete(LlmRequest{prompt.text, model_id, temperature, claim_id});
}

Evidence web_search(SearchProvider& search, std::string_view query, SearchResult* raw) {
    if (text::trim(query).empty()) throw EmptyQuery("search query is empty");
    SearchResult r = search.search(query);
    Evidence e{std::string(query), r.snippet, 0};
    if (raw) *raw = std::move(r);
    return e;
}

EmbeddingVector embed(Embedder& embedder, std::string_view text) {
    if (text.empty()) throw EmptyText("cannot embed empty text");
    return embedder.embed(text);
}

namespace {

Money money_from_json(const json& j, const char* what) {
    if (j.is_string()) return Money::parse(j.get<std::string>());
    if (j.is_number()) return Money::from_double(j.get<double>());
    throw InvalidConfig(std::string("pricing: ") + what + " must be a decimal string or number");
}

} // namespace

PricingTable PricingTable::from_json_text(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InvalidConfig(std::string("pricing: ") + e.what());
    }
    if (!doc.is_object()) throw InvalidConfig("pricing: top level must be an object");
    PricingTable table;
    if (doc.contains("search_usd_per_request"))
        table.search_usd_per_request = money_from_json(doc["search_usd_per_request"], "search_usd_per_request");
    if (doc.contains("models")) {
        if (!doc["models"].is_object()) throw InvalidConfig("pricing: models must be an object");
        for (auto& [model, rates] : doc["models"].items()) {
            if (!rates.contains("prompt_usd_per_million") || !rates.contains("completion_usd_per_million"))
                throw InvalidConfig("pricing: model '" + model + "' needs prompt/completion rates");
            table.models[model] = ModelRate{money_from_json(rates["prompt_usd_per_million"], "prompt rate"),
                                            money_from_json(rates["completion_usd_per_million"], "completion rate")};
        }
    }
    return table;
}

PricingTable PricingTable::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileNotFound("pricing file not found: " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

std::string PricingTable::to_json_text() const {
    json doc = json::object();
    doc["search_usd_per_request"] = search_usd_per_request.to_string();
    doc["models"] = json::object();
    for (const auto& [model, rate] : models) {
        doc["models"][model] = {{"prompt_usd_per_million", rate.prompt_per_million.to_string()},
                                {"completion_usd_per_million", rate.completion_per_million.to_string()}};
    }
    return doc.dump(2);
}

Money llm_cost(const Completion& usage, const PricingTable& pricing) {
    auto it = pricing.models.find(usage.model_id);
    if (it == pricing.models.end()) throw UnknownModel("no pricing for model '" + usage.model_id + "'");
    if (usage.prompt_tokens < 0 || usage.completion_tokens < 0) throw Error("negative token count");
    __int128 numerator = static_cast<__int128>(usage.prompt_tokens) * it->second.prompt_per_million.units() +
                         static_cast<__int128>(usage.completion_tokens) * it->second.completion_per_million.units();
    constexpr __int128 kMillion = 1'000'000;
    __int128 units = numerator / kMillion + ((numerator % kMillion) * 2 >= kMillion ? 1 : 0);
    if (units > std::numeric_limits<std::int64_t>::max()) throw Error("Money overflow");
    return Money::from_units(static_cast<std::int64_t>(units));
}

Money search_cost(std::int64_t request_count, const PricingTable& pricing) {
    if (request_count < 0) throw Error("request_count must be >= 0");
    return pricing.search_usd_per_request * request_count;
}

void sleep_for(const RetryPolicy& policy, std::chrono::milliseconds delay) {
    if (policy.sleep)
        policy.sleep(delay);
    else
        std::this_thread::sleep_for(delay);
}

} // namespace fire
