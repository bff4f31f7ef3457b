#include "fire/core.hpp"

#include "fire/text.hpp"

#include <array>
#include <utility>

namespace fire {

Verdict verdict_from_token(std::string_view token, const LabelSet& labels) {
    std::string_view t = text::trim(token, " \t\r\n\"'`");
    if (text::iequals(t, text::trim(labels.factual))) return Verdict::Factual;
    if (text::iequals(t, text::trim(labels.non_factual))) return Verdict::NonFactual;
    throw UnknownLabel("unknown label token: '" + std::string(token) + "'");
}

namespace {

constexpr std::array<std::pair<SourceDataset, std::string_view>, 5> kSources{{
    {SourceDataset::FactcheckBench, "FactcheckBench"},
    {SourceDataset::FacToolQA, "FacToolQA"},
    {SourceDataset::FelmWK, "FelmWK"},
    {SourceDataset::BingCheck, "BingCheck"},
    {SourceDataset::Custom, "Custom"},
}};

constexpr std::array<std::pair<PromptVariant, std::string_view>, 7> kVariants{{
    {PromptVariant::Default, "Default"},
    {PromptVariant::NoReason, "NoReason"},
    {PromptVariant::AtLeastOne, "AtLeastOne"},
    {PromptVariant::AtLeastTwo, "AtLeastTwo"},
    {PromptVariant::Inclusive, "Inclusive"},
    {PromptVariant::FinalVerification, "FinalVerification"},
    {PromptVariant::DiversityAddendum, "DiversityAddendum"},
}};

// "at-least-one", "at_least_one" and "AtLeastOne" all compare equal.
std::string squash(std::string_view s) {
    std::string out;
    for (char c : s) {
        if (c == '-' || c == '_' || c == ' ') continue;
        out += text::ascii_lower(c);
    }
    return out;
}

} // namespace

std::string_view to_string(SourceDataset s) {
    for (auto& [k, v] : kSources)
        if (k == s) return v;
    return "Custom";
}

SourceDataset source_dataset_from_string(std::string_view name) {
    auto key = squash(name);
    for (auto& [k, v] : kSources)
        if (squash(v) == key) return k;
    if (key == "factool" || key == "factoolqa") return SourceDataset::FacToolQA;
    if (key == "felm" || key == "felmwk") return SourceDataset::FelmWK;
    return SourceDataset::Custom;
}

Claim make_claim(std::string id, std::string text, std::optional<Verdict> gold, SourceDataset source) {
    if (text::trim(text).empty()) throw InvalidConfig("claim '" + id + "' has empty text");
    Claim c;
    c.id = std::move(id);
    c.text = std::move(text);
    c.gold_label = gold;
    c.source_dataset = source;
    return c;
}

void EvidenceSet::append(Evidence e) { items_.push_back(std::move(e)); }

std::string_view to_string(PromptVariant v) {
    for (auto& [k, name] : kVariants)
        if (k == v) return name;
    return "Default";
}

PromptVariant prompt_variant_from_string(std::string_view name) {
    auto key = squash(name);
    for (auto& [k, v] : kVariants)
        if (squash(v) == key) return k;
    throw UnknownVariant("unknown prompt variant: '" + std::string(name) + "'");
}

bool is_step_variant(PromptVariant v) {
    return v != PromptVariant::FinalVerification && v != PromptVariant::DiversityAddendum;
}

std::string_view to_string(MalformedPolicy p) {
    return p == MalformedPolicy::CountAsNonFactual ? "CountAsNonFactual" : "Exclude";
}

MalformedPolicy malformed_policy_from_string(std::string_view name) {
    auto key = squash(name);
    if (key == "countasnonfactual" || key == "nonfactual") return MalformedPolicy::CountAsNonFactual;
    if (key == "exclude") return MalformedPolicy::Exclude;
    throw InvalidConfig("unknown malformed policy: '" + std::string(name) + "'");
}

void AgentConfig::validate() const {
    if (max_steps < 1) throw InvalidConfig("max_steps must be >= 1");
    if (!is_step_variant(prompt_variant)) throw InvalidConfig("prompt_variant must be a step variant");
    if (early_termination_window && *early_termination_window < 1)
        throw InvalidConfig("early_termination_window must be >= 1");
    if (!(similarity_threshold > 0.0 && similarity_threshold <= 1.0))
        throw InvalidConfig("similarity_threshold must lie in (0, 1]");
    if (parse_retries < 0) throw InvalidConfig("parse_retries must be >= 0");
    if (text::iequals(text::trim(labels.factual), text::trim(labels.non_factual)))
        throw InvalidConfig("label tokens must differ");
}

} // namespace fire
