#include "fire/agent.hpp"

#include "fire/text.hpp"

#include <cctype>

namespace fire::agent {

using json = nlohmann::json;

namespace {

// Removes ``` fence markers (with an optional language tag) but keeps the
// fenced content in place.
std::string strip_fences(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        if (text.compare(i, 3, "```") == 0) {
            i += 3;
            while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_' ||
                                       text[i] == '-'))
                ++i;
            continue;
        }
        out += text[i++];
    }
    return out;
}

// Index one past the '}' closing the object opened at `start`, or npos.
std::size_t balanced_end(std::string_view s, std::size_t start) {
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    for (std::size_t i = start; i < s.size(); ++i) {
        char c = s[i];
        if (in_string) {
            if (escaped)
                escaped = false;
            else if (c == '\\')
                escaped = true;
            else if (c == '"')
                in_string = false;
            continue;
        }
        if (c == '"')
            in_string = true;
        else if (c == '{')
            ++depth;
        else if (c == '}' && --depth == 0)
            return i + 1;
    }
    return std::string_view::npos;
}

bool has_known_key(const json& obj) {
    return obj.is_object() && (obj.contains("final_answer") || obj.contains("search_query"));
}

} // namespace

std::optional<json> extract_json_object(std::string_view raw) {
    std::string text = strip_fences(raw);
    std::optional<json> last;
    std::size_t i = 0;
    while ((i = text.find('{', i)) != std::string::npos) {
        auto end = balanced_end(text, i);
        if (end == std::string::npos) {
            ++i;
            continue;
        }
        json candidate = json::parse(text.begin() + static_cast<std::ptrdiff_t>(i),
                                     text.begin() + static_cast<std::ptrdiff_t>(end), nullptr, false);
        if (candidate.is_discarded()) {
            // Prose braces: an object may still start inside.
            ++i;
            continue;
        }
        if (has_known_key(candidate)) last = std::move(candidate);
        i = end;
    }
    return last;
}

std::string_view outcome_kind(const StepOutcome& o) {
    if (std::holds_alternative<FinalAnswer>(o)) return "FinalAnswer";
    if (std::holds_alternative<NextQuery>(o)) return "NextQuery";
    return "Malformed";
}

StepOutcome parse_step_output(const Completion& completion, const LabelSet& labels) {
    auto obj = extract_json_object(completion.text);
    Malformed malformed{completion.text};
    if (!obj) return malformed;
    bool has_final = obj->contains("final_answer");
    bool has_query = obj->contains("search_query");
    if (has_final && has_query) return malformed;
    if (has_final) {
        const auto& v = (*obj)["final_answer"];
        if (!v.is_string()) return malformed;
        try {
            return FinalAnswer{verdict_from_token(v.get<std::string>(), labels)};
        } catch (const UnknownLabel&) {
            return malformed;
        }
    }
    const auto& q = (*obj)["search_query"];
    if (!q.is_string()) return malformed;
    auto query = text::trim(q.get_ref<const std::string&>());
    if (query.empty()) return malformed;
    return NextQuery{std::string(query)};
}

} // namespace fire::agent
