#pragma once

#include "fire/providers.hpp"

#include <json.hpp>

#include <atomic>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace fire {

enum class CacheKind { LLM, Search, Embed };

std::string_view to_string(CacheKind kind);

struct CacheKey {
    CacheKind kind = CacheKind::LLM;
    std::string digest;  // sha256 hex of the canonical request payload
    nlohmann::json payload;

    friend bool operator==(const CacheKey& a, const CacheKey& b) { return a.kind == b.kind && a.digest == b.digest; }
};

// Payloads cover exactly what goes over the wire (prompt, model, temperature
// for the LLM), so equal requests always share a key.
CacheKey llm_cache_key(const LlmRequest& request);
CacheKey search_cache_key(std::string_view query);
CacheKey embed_cache_key(std::string_view embedder_id, std::string_view text);

// Content-addressed store: <dir>/<kind>/<digest>.json, one document per key.
class ResponseCache {
public:
    explicit ResponseCache(std::filesystem::path dir);

    const std::filesystem::path& dir() const { return dir_; }
    std::filesystem::path path_for(const CacheKey& key) const;

    // nullopt on miss; throws CacheCorrupt when the file is unreadable.
    std::optional<nlohmann::json> load(const CacheKey& key) const;
    void store(const CacheKey& key, const nlohmann::json& response);

    // Serializes work on one key (lookup, live call, store).
    std::mutex& lock_for(const CacheKey& key);

    void record_hit() { ++hits_; }
    void record_miss() { ++misses_; }
    void warn(std::string message);

    std::size_t hits() const { return hits_.load(); }
    std::size_t misses() const { return misses_.load(); }
    std::vector<std::string> warnings() const;

private:
    std::filesystem::path dir_;
    mutable std::mutex mu_;
    std::unordered_map<std::string, std::unique_ptr<std::mutex>> key_locks_;
    std::vector<std::string> warnings_;
    std::atomic<std::size_t> hits_{0};
    std::atomic<std::size_t> misses_{0};
};

// First call executes `call` and stores encode(result); later calls with
// the same key return decode(stored) without invoking `call`. A corrupt
// entry is reported through ResponseCache::warn and replaced by a live call.
template <class Call, class Encode, class Decode>
auto cached(ResponseCache& cache, const CacheKey& key, Call&& call, Encode&& encode, Decode&& decode)
    -> decltype(call()) {
    std::lock_guard lock(cache.lock_for(key));
    try {
        if (auto doc = cache.load(key)) {
            auto result = decode(*doc);
            cache.record_hit();
            return result;
        }
    } catch (const CacheCorrupt& e) {
        cache.warn(e.what());
    } catch (const nlohmann::json::exception& e) {
        cache.warn("cache entry " + cache.path_for(key).string() + " does not decode: " + e.what());
    }
    cache.record_miss();
    auto result = call();
    cache.store(key, encode(result));
    return result;
}

struct CachePolicy {
    // Hits cost nothing (replay). When false they are billed like live calls.
    bool zero_cost_hits = true;
};

class CachingLlm : public LlmProvider {
public:
    CachingLlm(LlmProvider& inner, ResponseCache& cache, CachePolicy policy = {})
        : inner_(inner), cache_(cache), policy_(policy) {}
    Completion complete(const LlmRequest& request) override;

private:
    LlmProvider& inner_;
    ResponseCache& cache_;
    CachePolicy policy_;
};

class CachingSearch : public SearchProvider {
public:
    CachingSearch(SearchProvider& inner, ResponseCache& cache, CachePolicy policy = {})
        : inner_(inner), cache_(cache), policy_(policy) {}
    SearchResult search(std::string_view query) override;

private:
    SearchProvider& inner_;
    ResponseCache& cache_;
    CachePolicy policy_;
};

class CachingEmbedder : public Embedder {
public:
    CachingEmbedder(Embedder& inner, ResponseCache& cache) : inner_(inner), cache_(cache) {}
    EmbeddingVector embed(std::string_view text) override;
    std::string id() const override { return inner_.id(); }

private:
    Embedder& inner_;
    ResponseCache& cache_;
};

} // namespace fire
