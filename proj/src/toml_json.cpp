#include "fire/toml_json.hpp"

#include "fire/errors.hpp"

#include <toml.hpp>

#include <fstream>
#include <sstream>

namespace fire {

namespace {

nlohmann::json convert(const toml::node& node) {
    if (auto* t = node.as_table()) {
        auto obj = nlohmann::json::object();
        for (const auto& [k, v] : *t) obj[std::string(k.str())] = convert(v);
        return obj;
    }
    if (auto* a = node.as_array()) {
        auto arr = nlohmann::json::array();
        for (const auto& v : *a) arr.push_back(convert(v));
        return arr;
    }
    if (auto* s = node.as_string()) return s->get();
    if (auto* i = node.as_integer()) return i->get();
    if (auto* f = node.as_floating_point()) return f->get();
    if (auto* b = node.as_boolean()) return b->get();
    std::ostringstream os;
    node.visit([&](const auto& n) { os << n; });
    return os.str();
}

} // namespace

nlohmann::json toml_to_json(std::string_view text, std::string_view source_name) {
    try {
        return convert(toml::parse(text, source_name));
    } catch (const toml::parse_error& e) {
        std::ostringstream os;
        os << source_name << ":" << e.source().begin.line << ":" << e.source().begin.column << ": "
           << e.description();
        throw InvalidConfig(os.str());
    }
}

nlohmann::json load_toml_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileNotFound("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return toml_to_json(buf.str(), path.string());
}

} // namespace fire
