#include "fire/datasets.hpp"

#include "fire/text.hpp"
#include "fire/toml_json.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

namespace fire::datasets {

using json = nlohmann::json;

std::string_view to_string(RawLabel l) {
    switch (l) {
    case RawLabel::Supported: return "supported";
    case RawLabel::PartiallySupported: return "partially supported";
    case RawLabel::NotSupported: return "not supported";
    case RawLabel::Refuted: return "refuted";
    case RawLabel::True_: return "true";
    case RawLabel::False_: return "false";
    }
    return "not supported";
}

std::optional<Verdict> binarize_label(RawLabel raw) {
    switch (raw) {
    case RawLabel::Supported:
    case RawLabel::PartiallySupported:
    case RawLabel::True_: return Verdict::Factual;
    case RawLabel::Refuted:
    case RawLabel::False_: return Verdict::NonFactual;
    case RawLabel::NotSupported: return std::nullopt;
    }
    return std::nullopt;
}

namespace {

std::string normalize_label_spelling(std::string_view s) {
    std::string out;
    for (char c : text::trim(s)) {
        char l = text::ascii_lower(c);
        if (l == '_' || l == '-') l = ' ';
        if (l == ' ' && (out.empty() || out.back() == ' ')) continue;
        out += l;
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

RawLabel raw_label_from_name(std::string_view name) {
    auto key = normalize_label_spelling(name);
    for (auto l : {RawLabel::Supported, RawLabel::PartiallySupported, RawLabel::NotSupported, RawLabel::Refuted,
                   RawLabel::True_, RawLabel::False_})
        if (to_string(l) == key) return l;
    throw InvalidConfig("unknown raw label: '" + std::string(name) + "'");
}

const std::map<std::string, RawLabel> kFourWay{
    {"supported", RawLabel::Supported},
    {"partially supported", RawLabel::PartiallySupported},
    {"not supported", RawLabel::NotSupported},
    {"refuted", RawLabel::Refuted},
};

const std::map<std::string, RawLabel> kBinary{
    {"true", RawLabel::True_},
    {"false", RawLabel::False_},
    {"factual", RawLabel::True_},
    {"non factual", RawLabel::False_},
};

const json* at_path(const json& doc, std::string_view path) {
    if (path.empty()) return &doc;
    const json* cur = &doc;
    for (const auto& part : text::split(path, '.')) {
        if (cur->is_object()) {
            auto it = cur->find(part);
            if (it == cur->end()) return nullptr;
            cur = &*it;
        } else if (cur->is_array()) {
            if (part.empty() || !std::all_of(part.begin(), part.end(), ::isdigit)) return nullptr;
            auto idx = std::stoul(part);
            if (idx >= cur->size()) return nullptr;
            cur = &(*cur)[idx];
        } else {
            return nullptr;
        }
    }
    return cur;
}

std::string scalar_to_string(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) return v.dump();
    return {};
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileNotFound("file not found: " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

AdapterSpec AdapterSpec::from_json(const json& doc) {
    if (!doc.is_object()) throw InvalidConfig("adapter spec must be a JSON object");
    AdapterSpec a;
    a.name = doc.value("name", std::string("custom"));
    a.source = source_dataset_from_string(doc.value("source", std::string("Custom")));
    auto format = doc.value("format", std::string("jsonl"));
    if (format == "jsonl") a.format = Format::Jsonl;
    else if (format == "json") a.format = Format::JsonArray;
    else throw InvalidConfig("adapter format must be 'jsonl' or 'json'");
    a.records_path = doc.value("records", std::string());
    a.claim_path = doc.value("claim", std::string("claim"));
    a.label_path = doc.value("label", std::string("label"));
    a.id_path = doc.value("id", std::string());
    a.normalized = doc.value("normalized", false);
    if (doc.contains("meta")) a.meta_paths = doc["meta"].get<std::vector<std::string>>();
    if (doc.contains("labels")) {
        for (auto& [spelling, raw] : doc["labels"].items())
            a.vocabulary[normalize_label_spelling(spelling)] = raw_label_from_name(raw.get<std::string>());
    } else if (!a.normalized) {
        a.vocabulary = kBinary;
    }
    return a;
}

AdapterSpec AdapterSpec::load(const std::filesystem::path& path) {
    json doc = json::parse(read_file(path), nullptr, false);
    if (doc.is_discarded()) throw InvalidConfig("adapter spec is not valid JSON: " + path.string());
    return from_json(doc);
}

std::vector<std::string> builtin_adapter_names() {
    return {"normalized", "factcheck_bench", "factool_qa", "felm_wk", "bingcheck"};
}

AdapterSpec builtin_adapter(std::string_view name) {
    AdapterSpec a;
    a.name = std::string(name);
    if (name == "normalized") {
        a.normalized = true;
        a.id_path = "id";
        return a;
    }
    a.id_path = "id";
    if (name == "factcheck_bench") {
        a.source = SourceDataset::FactcheckBench;
        a.vocabulary = kFourWay;
    } else if (name == "bingcheck") {
        a.source = SourceDataset::BingCheck;
        a.vocabulary = kFourWay;
    } else if (name == "factool_qa") {
        a.source = SourceDataset::FacToolQA;
        a.vocabulary = kBinary;
    } else if (name == "felm_wk") {
        a.source = SourceDataset::FelmWK;
        a.vocabulary = kBinary;
    } else {
        std::string valid;
        for (const auto& n : builtin_adapter_names()) valid += (valid.empty() ? "" : ", ") + n;
        throw InvalidConfig("unknown adapter '" + std::string(name) + "' (valid: " + valid + ")");
    }
    return a;
}

DatasetManifest DatasetManifest::load(const std::filesystem::path& manifest_path) {
    json doc;
    if (manifest_path.extension() == ".toml") {
        doc = load_toml_file(manifest_path);
    } else {
        doc = json::parse(read_file(manifest_path), nullptr, false);
        if (doc.is_discarded() || !doc.is_object())
            throw InvalidConfig("manifest is not a JSON object: " + manifest_path.string());
    }
    auto base = manifest_path.parent_path();
    auto resolve = [&](const std::string& p) -> std::filesystem::path {
        if (p.empty()) return {};
        std::filesystem::path q(p);
        return q.is_absolute() ? q : base / q;
    };
    DatasetManifest m;
    m.name = doc.value("name", manifest_path.stem().string());
    m.adapter = doc.value("adapter", std::string("normalized"));
    m.adapter_config = resolve(doc.value("adapter_config", std::string()));
    m.path = resolve(doc.at("path").get<std::string>());
    if (doc.contains("claim_count_true")) m.claim_count_true = doc["claim_count_true"].get<std::size_t>();
    if (doc.contains("claim_count_false")) m.claim_count_false = doc["claim_count_false"].get<std::size_t>();
    return m;
}

std::optional<std::pair<std::size_t, std::size_t>> published_counts(SourceDataset source) {
    switch (source) {
    case SourceDataset::FactcheckBench: return std::pair<std::size_t, std::size_t>{472, 159};
    case SourceDataset::FacToolQA: return std::pair<std::size_t, std::size_t>{177, 56};
    case SourceDataset::FelmWK: return std::pair<std::size_t, std::size_t>{99, 85};
    case SourceDataset::BingCheck: return std::pair<std::size_t, std::size_t>{100, 42};
    case SourceDataset::Custom: return std::nullopt;
    }
    return std::nullopt;
}

LabelCounts count_labels(const std::vector<Claim>& claims) {
    LabelCounts c;
    for (const auto& claim : claims) {
        if (!claim.gold_label) ++c.unlabeled;
        else if (*claim.gold_label == Verdict::Factual) ++c.factual;
        else ++c.non_factual;
    }
    return c;
}

LoadResult load_with_adapter(const std::filesystem::path& path, const AdapterSpec& adapter, const LabelSet& labels) {
    std::string content = read_file(path);

    // (record, human-readable location)
    std::vector<std::pair<json, std::string>> records;
    if (adapter.format == AdapterSpec::Format::Jsonl) {
        std::istringstream in(content);
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (text::trim(line).empty()) continue;
            json rec = json::parse(line, nullptr, false);
            if (rec.is_discarded())
                throw SchemaMismatch(path.string() + ": record " + std::to_string(records.size()) + " (line " +
                                     std::to_string(lineno) + ") is not valid JSON");
            records.emplace_back(std::move(rec), "record " + std::to_string(records.size()) + " (line " +
                                                     std::to_string(lineno) + ")");
        }
    } else {
        json doc = json::parse(content, nullptr, false);
        if (doc.is_discarded()) throw SchemaMismatch(path.string() + ": not valid JSON");
        const json* arr = at_path(doc, adapter.records_path);
        if (!arr || !arr->is_array())
            throw SchemaMismatch(path.string() + ": no record array at '" + adapter.records_path + "'");
        for (const auto& rec : *arr) records.emplace_back(rec, "record " + std::to_string(records.size()));
    }
    if (records.empty()) throw SchemaMismatch(path.string() + ": no records");

    LoadResult result;
    result.records = records.size();
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& [rec, where] = records[i];
        auto fail = [&, &where = where](const std::string& why) {
            return SchemaMismatch(path.string() + ": " + where + ": " + why);
        };
        if (!rec.is_object()) throw fail("not a JSON object");

        const json* claim_v = at_path(rec, adapter.claim_path);
        if (!claim_v || !claim_v->is_string()) throw fail("missing string field '" + adapter.claim_path + "'");
        std::string claim_text = claim_v->get<std::string>();
        if (text::trim(claim_text).empty()) throw fail("empty claim text");

        const json* label_v = at_path(rec, adapter.label_path);
        if (!label_v) throw fail("missing field '" + adapter.label_path + "'");
        std::string label_text = scalar_to_string(*label_v);

        std::optional<Verdict> gold;
        if (adapter.normalized) {
            try {
                gold = verdict_from_token(label_text, labels);
            } catch (const UnknownLabel&) {
                throw fail("unknown label '" + label_text + "'");
            }
        } else {
            auto it = adapter.vocabulary.find(normalize_label_spelling(label_text));
            if (it == adapter.vocabulary.end()) throw fail("unknown label '" + label_text + "'");
            gold = binarize_label(it->second);
            if (!gold) {
                ++result.excluded_not_supported;
                continue;
            }
        }

        Claim c;
        c.text = std::move(claim_text);
        c.gold_label = gold;
        c.source_dataset = adapter.source;
        if (!adapter.id_path.empty()) {
            if (const json* id_v = at_path(rec, adapter.id_path)) c.id = scalar_to_string(*id_v);
        }
        if (c.id.empty()) c.id = adapter.name + "-" + std::to_string(i);

        if (adapter.normalized) {
            if (const json* src = at_path(rec, "source"); src && src->is_string())
                c.source_dataset = source_dataset_from_string(src->get<std::string>());
            if (const json* meta = at_path(rec, "meta"); meta && meta->is_object())
                for (auto& [k, v] : meta->items()) c.meta[k] = scalar_to_string(v);
        }
        for (const auto& mp : adapter.meta_paths)
            if (const json* v = at_path(rec, mp)) c.meta[mp] = scalar_to_string(*v);
        result.claims.push_back(std::move(c));
    }

    std::map<std::string, std::size_t> seen;
    for (const auto& c : result.claims)
        if (++seen[c.id] == 2) result.warnings.push_back("duplicate claim id '" + c.id + "'");
    return result;
}

LoadResult load_dataset(const DatasetManifest& manifest, const LabelSet& labels) {
    AdapterSpec adapter =
        manifest.adapter_config.empty() ? builtin_adapter(manifest.adapter) : AdapterSpec::load(manifest.adapter_config);
    LoadResult result = load_with_adapter(manifest.path, adapter, labels);
    auto counts = count_labels(result.claims);
    auto check = [&](const std::optional<std::size_t>& expected, std::size_t actual, const char* which) {
        if (expected && *expected != actual)
            result.warnings.push_back(manifest.name + ": expected " + std::to_string(*expected) + " " + which +
                                      " claims, loaded " + std::to_string(actual));
    };
    check(manifest.claim_count_true, counts.factual, "Factual");
    check(manifest.claim_count_false, counts.non_factual, "Non-Factual");
    return result;
}

namespace {

// Uniform integer in [0, bound) by rejection; identical on every platform,
// unlike std::uniform_int_distribution.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    for (;;) {
        std::uint64_t x = rng();
        if (x < limit) return x % bound;
    }
}

} // namespace

std::vector<Claim> sample_subset(const std::vector<Claim>& claims, Verdict keep_label, std::size_t count,
                                 std::uint64_t seed) {
    std::vector<std::size_t> pool;
    for (std::size_t i = 0; i < claims.size(); ++i)
        if (claims[i].gold_label == keep_label) pool.push_back(i);
    if (count > pool.size())
        throw InsufficientClaims("asked for " + std::to_string(count) + " claims but only " +
                                 std::to_string(pool.size()) + " carry the label");

    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < count; ++i) std::swap(pool[i], pool[i + uniform_below(rng, pool.size() - i)]);
    std::vector<bool> chosen(claims.size(), false);
    for (std::size_t i = 0; i < count; ++i) chosen[pool[i]] = true;

    std::vector<Claim> out;
    for (std::size_t i = 0; i < claims.size(); ++i)
        if (chosen[i] || claims[i].gold_label != keep_label) out.push_back(claims[i]);
    return out;
}

std::string normalized_line(const Claim& claim, const LabelSet& labels) {
    nlohmann::ordered_json j;
    j["id"] = claim.id;
    j["claim"] = claim.text;
    if (claim.gold_label) j["label"] = labels.token(*claim.gold_label);
    else j["label"] = nullptr;
    j["source"] = std::string(to_string(claim.source_dataset));
    j["meta"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : claim.meta) j["meta"][k] = v;
    return j.dump();
}

void write_normalized(std::ostream& out, const std::vector<Claim>& claims, const LabelSet& labels) {
    for (const auto& c : claims) out << normalized_line(c, labels) << '\n';
}

} // namespace fire::datasets
