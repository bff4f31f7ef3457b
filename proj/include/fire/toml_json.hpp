#pragma once

#include <json.hpp>

#include <filesystem>
#include <string_view>

namespace fire {

// TOML → JSON (tables become objects; dates and times become strings).
// Throws InvalidConfig with the parser's line/column on malformed input.
nlohmann::json toml_to_json(std::string_view text, std::string_view source_name = "<toml>");
// Throws FileNotFound.
nlohmann::json load_toml_file(const std::filesystem::path& path);

} // namespace fire
