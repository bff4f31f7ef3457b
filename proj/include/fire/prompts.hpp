#pragma once

#include "fire/core.hpp"

#include <cstddef>
#include <map>
#include <string>
#include <string_view>

namespace fire::prompts {

struct RenderedPrompt {
    std::string text;
    PromptVariant variant = PromptVariant::Default;
    std::size_t knowledge_item_count = 0;
    bool diversity_addendum = false;
};

// The template listing for a variant, exactly as shipped in prompts/.
// Templates use Python f-string syntax: `{{`/`}}` are literal braces and
// `{_NAME}` is a field.
std::string_view template_source(PromptVariant v);
std::string_view golden_file_name(PromptVariant v);

// Single-pass f-string style substitution. Substituted values are never
// rescanned, so claim text containing braces is inserted verbatim.
// Throws Error on an unknown field or an unbalanced brace.
std::string render_template(std::string_view tmpl, const std::map<std::string, std::string, std::less<>>& fields);

// "1. <snippet>" per item joined by newlines; "N/A" when empty.
std::string render_knowledge_block(const EvidenceSet& evidence);

// Throws UnknownVariant when `variant` is not one of the five step variants.
// With `diversity`, the addendum becomes the last numbered instruction.
RenderedPrompt render_step_prompt(PromptVariant variant, const Claim& claim, const EvidenceSet& evidence,
                                  bool diversity, const LabelSet& labels = default_labels());

RenderedPrompt render_final_prompt(const Claim& claim, const EvidenceSet& evidence,
                                   const LabelSet& labels = default_labels());

} // namespace fire::prompts
