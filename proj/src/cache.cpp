#include "fire/cache.hpp"

#include "fire/text.hpp"

#include <fstream>
#include <sstream>
#include <thread>

namespace fire {

using json = nlohmann::json;

std::string_view to_string(CacheKind kind) {
    switch (kind) {
    case CacheKind::LLM: return "llm";
    case CacheKind::Search: return "search";
    case CacheKind::Embed: return "embed";
    }
    return "llm";
}

namespace {

CacheKey make_key(CacheKind kind, json payload) {
    payload["kind"] = std::string(to_string(kind));
    // nlohmann::json objects are key-sorted, so dump() is canonical.
    std::string digest = text::sha256_hex(payload.dump());
    return CacheKey{kind, std::move(digest), std::move(payload)};
}

} // namespace

CacheKey llm_cache_key(const LlmRequest& request) {
    return make_key(CacheKind::LLM,
                    {{"prompt", request.prompt}, {"model", request.model_id}, {"temperature", request.temperature}});
}

CacheKey search_cache_key(std::string_view query) { return make_key(CacheKind::Search, {{"query", query}}); }

CacheKey embed_cache_key(std::string_view embedder_id, std::string_view text) {
    return make_key(CacheKind::Embed, {{"embedder", embedder_id}, {"text", text}});
}

ResponseCache::ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::filesystem::path ResponseCache::path_for(const CacheKey& key) const {
    return dir_ / std::string(to_string(key.kind)) / (key.digest + ".json");
}

std::optional<json> ResponseCache::load(const CacheKey& key) const {
    auto path = path_for(key);
    std::error_code ec;
    if (!std::filesystem::exists(path, ec)) return std::nullopt;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CacheCorrupt("cache entry unreadable: " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    json doc = json::parse(ss.str(), nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded() || !doc.is_object() || !doc.contains("response"))
        throw CacheCorrupt("cache entry corrupt: " + path.string());
    if (doc.value("digest", std::string()) != key.digest)
        throw CacheCorrupt("cache entry digest mismatch: " + path.string());
    return doc["response"];
}

void ResponseCache::store(const CacheKey& key, const json& response) {
    auto path = path_for(key);
    std::filesystem::create_directories(path.parent_path());
    json doc = {{"digest", key.digest}, {"request", key.payload}, {"response", response}};
    std::ostringstream tid;
    tid << std::this_thread::get_id();
    auto tmp = path;
    tmp += ".tmp-" + tid.str();
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write cache entry: " + tmp.string());
        out << doc.dump(2) << '\n';
    }
    std::filesystem::rename(tmp, path);
}

std::mutex& ResponseCache::lock_for(const CacheKey& key) {
    std::lock_guard lock(mu_);
    auto& slot = key_locks_[std::string(to_string(key.kind)) + "/" + key.digest];
    if (!slot) slot = std::make_unique<std::mutex>();
    return *slot;
}

void ResponseCache::warn(std::string message) {
    std::lock_guard lock(mu_);
    warnings_.push_back(std::move(message));
}

std::vector<std::string> ResponseCache::warnings() const {
    std::lock_guard lock(mu_);
    return warnings_;
}

Completion CachingLlm::complete(const LlmRequest& request) {
    bool hit = true;
    auto result = cached(
        cache_, llm_cache_key(request),
        [&] {
            hit = false;
            return inner_.complete(request);
        },
        [](const Completion& c) {
            return json{{"text", c.text},
                        {"prompt_tokens", c.prompt_tokens},
                        {"completion_tokens", c.completion_tokens},
                        {"model_id", c.model_id},
                        {"latency_seconds", c.latency_seconds}};
        },
        [](const json& j) {
            Completion c;
            c.text = j.at("text").get<std::string>();
            c.prompt_tokens = j.at("prompt_tokens").get<std::int64_t>();
            c.completion_tokens = j.at("completion_tokens").get<std::int64_t>();
            c.model_id = j.at("model_id").get<std::string>();
            c.latency_seconds = j.value("latency_seconds", 0.0);
            return c;
        });
    if (hit) result.billable = !policy_.zero_cost_hits;
    return result;
}

SearchResult CachingSearch::search(std::string_view query) {
    bool hit = true;
    auto result = cached(
        cache_, search_cache_key(query),
        [&] {
            hit = false;
            return inner_.search(query);
        },
        [](const SearchResult& r) { return json{{"snippet", r.snippet}, {"latency_seconds", r.latency_seconds}}; },
        [](const json& j) {
            SearchResult r;
            r.snippet = j.at("snippet").get<std::string>();
            r.latency_seconds = j.value("latency_seconds", 0.0);
            return r;
        });
    if (hit) result.billable = !policy_.zero_cost_hits;
    return result;
}

EmbeddingVector CachingEmbedder::embed(std::string_view text) {
    return cached(
        cache_, embed_cache_key(inner_.id(), text), [&] { return inner_.embed(text); },
        [](const EmbeddingVector& v) { return json{{"values", v.values}}; },
        [](const json& j) { return EmbeddingVector{j.at("values").get<std::vector<double>>()}; });
}

} // namespace fire
