#pragma once

// Deterministic in-process doubles for the three provider capabilities.
// None of them has any network capability.

#include "fire/providers.hpp"

#include <atomic>
#include <chrono>
#include <deque>
#include <map>
#include <mutex>
#include <string>
#include <vector>

namespace fire {

// Pops queued responses. A claim-specific queue (keyed by
// LlmRequest::claim_id) takes precedence over the shared queue, so
// concurrent claims stay deterministic. Token counts are synthesized as
// ceil(len/4) of the prompt and of the response.
class ScriptedLlm : public LlmProvider {
public:
    ScriptedLlm() = default;
    explicit ScriptedLlm(std::vector<std::string> shared_queue);

    void enqueue(std::string response);
    void enqueue_for(const std::string& claim_id, std::string response);
    void set_latency(std::chrono::microseconds latency) { latency_ = latency; }

    Completion complete(const LlmRequest& request) override;

    std::size_t calls() const { return calls_.load(); }
    std::vector<LlmRequest> requests() const;

    static std::int64_t synthesized_tokens(std::string_view text) {
        return static_cast<std::int64_t>((text.size() + 3) / 4);
    }

private:
    mutable std::mutex mu_;
    std::deque<std::string> shared_;
    std::map<std::string, std::deque<std::string>> per_claim_;
    std::vector<LlmRequest> log_;
    std::atomic<std::size_t> calls_{0};
    std::chrono::microseconds latency_{0};
};

// Exact-match query → snippet map; unmapped queries return an empty snippet.
class ScriptedSearch : public SearchProvider {
public:
    ScriptedSearch() = default;
    explicit ScriptedSearch(const std::map<std::string, std::string>& results) : results_(results.begin(), results.end()) {}

    void set(std::string query, std::string snippet);
    void set_latency(std::chrono::microseconds latency) { latency_ = latency; }

    SearchResult search(std::string_view query) override;

    std::size_t calls() const { return calls_.load(); }
    std::vector<std::string> queries() const;

private:
    mutable std::mutex mu_;
    std::map<std::string, std::string, std::less<>> results_;
    std::vector<std::string> log_;
    std::atomic<std::size_t> calls_{0};
    std::chrono::microseconds latency_{0};
};

// Character trigrams hashed (FNV-1a) into 256 buckets, counted, then
// L2-normalized. Texts shorter than three bytes form a single gram.
class TrigramEmbedder : public Embedder {
public:
    static constexpr std::size_t kDimension = 256;

    EmbeddingVector embed(std::string_view text) override;
    std::string id() const override { return "trigram-fnv1a-256"; }

    std::size_t calls() const { return calls_.load(); }

private:
    std::atomic<std::size_t> calls_{0};
};

// Doubles that fail the test on contact: every call throws and is counted.
class TripwireLlm : public LlmProvider {
public:
    Completion complete(const LlmRequest&) override;
    std::size_t contacts() const { return contacts_.load(); }

private:
    std::atomic<std::size_t> contacts_{0};
};

class TripwireSearch : public SearchProvider {
public:
    SearchResult search(std::string_view) override;
    std::size_t contacts() const { return contacts_.load(); }

private:
    std::atomic<std::size_t> contacts_{0};
};

class TripwireEmbedder : public Embedder {
public:
    EmbeddingVector embed(std::string_view) override;
    std::string id() const override { return "tripwire"; }
    std::size_t contacts() const { return contacts_.load(); }

private:
    std::atomic<std::size_t> contacts_{0};
};

} // namespace fire
