#include "fire/prompts.hpp"

#include "prompt_templates.hpp"

#include <cctype>

namespace fire::prompts {

std::string_view template_source(PromptVariant v) {
    switch (v) {
    case PromptVariant::Default: return detail::kDefaultTemplate;
    case PromptVariant::NoReason: return detail::kNoReasonTemplate;
    case PromptVariant::AtLeastOne: return detail::kAtLeastOneTemplate;
    case PromptVariant::AtLeastTwo: return detail::kAtLeastTwoTemplate;
    case PromptVariant::Inclusive: return detail::kInclusiveTemplate;
    case PromptVariant::FinalVerification: return detail::kFinalVerificationTemplate;
    case PromptVariant::DiversityAddendum: return detail::kDiversityAddendumTemplate;
    }
    throw UnknownVariant("unknown prompt variant");
}

std::string_view golden_file_name(PromptVariant v) {
    switch (v) {
    case PromptVariant::Default: return "default.txt";
    case PromptVariant::NoReason: return "no_reason.txt";
    case PromptVariant::AtLeastOne: return "at_least_one.txt";
    case PromptVariant::AtLeastTwo: return "at_least_two.txt";
    case PromptVariant::Inclusive: return "inclusive.txt";
    case PromptVariant::FinalVerification: return "final_verification.txt";
    case PromptVariant::DiversityAddendum: return "diversity_addendum.txt";
    }
    throw UnknownVariant("unknown prompt variant");
}

std::string render_template(std::string_view tmpl, const std::map<std::string, std::string, std::less<>>& fields) {
    std::string out;
    out.reserve(tmpl.size() + 256);
    for (std::size_t i = 0; i < tmpl.size(); ++i) {
        char c = tmpl[i];
        if (c == '{') {
            if (i + 1 < tmpl.size() && tmpl[i + 1] == '{') {
                out += '{';
                ++i;
                continue;
            }
            auto close = tmpl.find('}', i + 1);
            if (close == std::string_view::npos) throw Error("unterminated template field");
            auto name = tmpl.substr(i + 1, close - i - 1);
            auto it = fields.find(name);
            if (it == fields.end()) throw Error("unknown template field: " + std::string(name));
            out += it->second;
            i = close;
        } else if (c == '}') {
            if (i + 1 < tmpl.size() && tmpl[i + 1] == '}') {
                out += '}';
                ++i;
                continue;
            }
            throw Error("single '}' in template");
        } else {
            out += c;
        }
    }
    return out;
}

std::string render_knowledge_block(const EvidenceSet& evidence) {
    if (evidence.empty()) return "N/A";
    std::string out;
    for (const auto& e : evidence.items()) {
        if (!out.empty()) out += '\n';
        out += std::to_string(e.rank + 1);
        out += ". ";
        out += e.snippet;
    }
    return out;
}

namespace {

std::map<std::string, std::string, std::less<>> fields_for(const Claim& claim, const EvidenceSet& evidence,
                                                            const LabelSet& labels) {
    return {
        {"_Factual_LABEL", labels.factual},
        {"_Non_Factual_LABEL", labels.non_factual},
        {"_KNOWLEDGE_PLACEHOLDER", render_knowledge_block(evidence)},
        {"_STATEMENT_PLACEHOLDER", claim.text},
    };
}

// Inserts "<k+1>. <addendum>" after the last numbered instruction, which
// always precedes the blank line in front of "KNOWLEDGE:".
std::string insert_addendum(std::string_view tmpl) {
    static constexpr std::string_view kAnchor = "\n\nKNOWLEDGE:\n";
    auto anchor = tmpl.find(kAnchor);
    if (anchor == std::string_view::npos) throw Error("template has no KNOWLEDGE block");

    int last = 0;
    std::size_t pos = 0;
    while (pos < anchor) {
        auto eol = tmpl.find('\n', pos);
        auto line = tmpl.substr(pos, eol - pos);
        std::size_t digits = 0;
        while (digits < line.size() && std::isdigit(static_cast<unsigned char>(line[digits]))) ++digits;
        if (digits > 0 && digits + 1 < line.size() && line[digits] == '.' && line[digits + 1] == ' ')
            last = std::stoi(std::string(line.substr(0, digits)));
        pos = eol + 1;
    }

    std::string out(tmpl.substr(0, anchor));
    out += '\n';
    out += std::to_string(last + 1);
    out += ". ";
    // The addendum text is plain prose; escape braces so it survives rendering.
    for (char c : detail::kDiversityAddendumTemplate) {
        out += c;
        if (c == '{' || c == '}') out += c;
    }
    out += tmpl.substr(anchor);
    return out;
}

} // namespace

RenderedPrompt render_step_prompt(PromptVariant variant, const Claim& claim, const EvidenceSet& evidence,
                                  bool diversity, const LabelSet& labels) {
    if (!is_step_variant(variant))
        throw UnknownVariant("not a step prompt variant: " + std::string(to_string(variant)));
    std::string_view tmpl = template_source(variant);
    std::string with_addendum;
    if (diversity) {
        with_addendum = insert_addendum(tmpl);
        tmpl = with_addendum;
    }
    return RenderedPrompt{render_template(tmpl, fields_for(claim, evidence, labels)), variant, evidence.size(),
                          diversity};
}

RenderedPrompt render_final_prompt(const Claim& claim, const EvidenceSet& evidence, const LabelSet& labels) {
    return RenderedPrompt{
        render_template(detail::kFinalVerificationTemplate, fields_for(claim, evidence, labels)),
        PromptVariant::FinalVerification, evidence.size(), false};
}

} // namespace fire::prompts
