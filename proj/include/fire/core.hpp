#pragma once

#include "fire/errors.hpp"
#include "fire/money.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fire {

enum class Verdict { Factual, NonFactual };

// The two label tokens substituted into prompts and written to datasets.
struct LabelSet {
    std::string factual = "Factual";
    std::string non_factual = "Non-Factual";

    const std::string& token(Verdict v) const { return v == Verdict::Factual ? factual : non_factual; }
};

inline const LabelSet& default_labels() {
    static const LabelSet labels;
    return labels;
}

// Case-insensitive match after trimming whitespace and quotes.
// Throws UnknownLabel when the token matches neither label.
Verdict verdict_from_token(std::string_view token, const LabelSet& labels = default_labels());

inline Verdict flip(Verdict v) { return v == Verdict::Factual ? Verdict::NonFactual : Verdict::Factual; }

enum class SourceDataset { FactcheckBench, FacToolQA, FelmWK, BingCheck, Custom };

std::string_view to_string(SourceDataset s);
SourceDataset source_dataset_from_string(std::string_view name);

struct Claim {
    std::string id;
    std::string text;
    std::optional<Verdict> gold_label;
    SourceDataset source_dataset = SourceDataset::Custom;
    std::map<std::string, std::string> meta;

    friend bool operator==(const Claim&, const Claim&) = default;
};

// Throws InvalidConfig when the text is blank.
Claim make_claim(std::string id, std::string text, std::optional<Verdict> gold = std::nullopt,
                 SourceDataset source = SourceDataset::Custom);

struct Evidence {
    std::string query;
    std::string snippet;  // may be empty: the engine returned nothing
    std::size_t rank = 0;

    friend bool operator==(const Evidence&, const Evidence&) = default;
};

// Append-only accumulation of retrieved evidence.
class EvidenceSet {
public:
    EvidenceSet() = default;

    void append(Evidence e);
    std::size_t size() const { return items_.size(); }
    bool empty() const { return items_.empty(); }
    std::span<const Evidence> items() const { return items_; }
    const Evidence& operator[](std::size_t i) const { return items_[i]; }

    friend bool operator==(const EvidenceSet&, const EvidenceSet&) = default;

private:
    std::vector<Evidence> items_;
};

enum class PromptVariant {
    Default,
    NoReason,
    AtLeastOne,
    AtLeastTwo,
    Inclusive,
    FinalVerification,
    DiversityAddendum,
};

std::string_view to_string(PromptVariant v);
// Accepts the enum spelling or the kebab/snake forms ("at-least-one", "no_reason").
PromptVariant prompt_variant_from_string(std::string_view name);
bool is_step_variant(PromptVariant v);

enum class MalformedPolicy { CountAsNonFactual, Exclude };

std::string_view to_string(MalformedPolicy p);
MalformedPolicy malformed_policy_from_string(std::string_view name);

struct AgentConfig {
    int max_steps = 5;
    PromptVariant prompt_variant = PromptVariant::Default;
    bool search_enabled = true;
    std::optional<int> early_termination_window;
    bool diversity_prompt = false;
    double similarity_threshold = 0.9;
    int parse_retries = 1;
    MalformedPolicy malformed_policy = MalformedPolicy::CountAsNonFactual;

    // Treat a FinalAnswer given with fewer than 1 (AtLeastOne) or 2
    // (AtLeastTwo) evidence items as malformed. Off: the variants are
    // prompt-only.
    bool enforce_min_evidence = false;
    // Window counts similar consecutive pairs instead of items.
    bool window_counts_pairs = false;

    std::string model_id = "gpt-4o-mini";
    double temperature = 0.0;
    LabelSet labels;

    // Throws InvalidConfig.
    void validate() const;
    bool guard_enabled() const { return search_enabled && (early_termination_window.has_value() || diversity_prompt); }
};

} // namespace fire
