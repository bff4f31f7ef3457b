#include "fire/scripted.hpp"

#include <cmath>
#include <cstdint>
#include <thread>

namespace fire {

ScriptedLlm::ScriptedLlm(std::vector<std::string> shared_queue) : shared_(shared_queue.begin(), shared_queue.end()) {}

void ScriptedLlm::enqueue(std::string response) {
    std::lock_guard lock(mu_);
    shared_.push_back(std::move(response));
}

void ScriptedLlm::enqueue_for(const std::string& claim_id, std::string response) {
    std::lock_guard lock(mu_);
    per_claim_[claim_id].push_back(std::move(response));
}

Completion ScriptedLlm::complete(const LlmRequest& request) {
    ++calls_;
    std::string text;
    {
        std::lock_guard lock(mu_);
        log_.push_back(request);
        auto it = per_claim_.find(request.claim_id);
        std::deque<std::string>* queue = (it != per_claim_.end() && !it->second.empty()) ? &it->second : &shared_;
        if (queue->empty()) throw ProviderUnavailable("scripted LLM queue exhausted");
        text = std::move(queue->front());
        queue->pop_front();
    }
    if (latency_.count() > 0) std::this_thread::sleep_for(latency_);
    Completion c;
    c.prompt_tokens = synthesized_tokens(request.prompt);
    c.completion_tokens = synthesized_tokens(text);
    c.text = std::move(text);
    c.model_id = request.model_id;
    c.latency_seconds = std::chrono::duration<double>(latency_).count();
    return c;
}

std::vector<LlmRequest> ScriptedLlm::requests() const {
    std::lock_guard lock(mu_);
    return log_;
}

void ScriptedSearch::set(std::string query, std::string snippet) {
    std::lock_guard lock(mu_);
    results_[std::move(query)] = std::move(snippet);
}

SearchResult ScriptedSearch::search(std::string_view query) {
    ++calls_;
    SearchResult r;
    {
        std::lock_guard lock(mu_);
        log_.emplace_back(query);
        if (auto it = results_.find(query); it != results_.end()) r.snippet = it->second;
    }
    if (latency_.count() > 0) std::this_thread::sleep_for(latency_);
    r.latency_seconds = std::chrono::duration<double>(latency_).count();
    return r;
}

std::vector<std::string> ScriptedSearch::queries() const {
    std::lock_guard lock(mu_);
    return log_;
}

namespace {

std::uint32_t fnv1a(std::string_view bytes) {
    std::uint32_t h = 2166136261u;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 16777619u;
    }
    return h;
}

} // namespace

EmbeddingVector TrigramEmbedder::embed(std::string_view text) {
    ++calls_;
    if (text.empty()) throw EmptyText("cannot embed empty text");
    EmbeddingVector v;
    v.values.assign(kDimension, 0.0);
    if (text.size() < 3) {
        v.values[fnv1a(text) % kDimension] = 1.0;
    } else {
        for (std::size_t i = 0; i + 3 <= text.size(); ++i) v.values[fnv1a(text.substr(i, 3)) % kDimension] += 1.0;
    }
    double norm = 0.0;
    for (double x : v.values) norm += x * x;
    norm = std::sqrt(norm);
    for (double& x : v.values) x /= norm;
    return v;
}

Completion TripwireLlm::complete(const LlmRequest&) {
    ++contacts_;
    throw ProviderUnavailable("tripwire LLM contacted");
}

SearchResult TripwireSearch::search(std::string_view) {
    ++contacts_;
    throw ProviderUnavailable("tripwire search contacted");
}

EmbeddingVector TripwireEmbedder::embed(std::string_view) {
    ++contacts_;
    throw ProviderUnavailable("tripwire embedder contacted");
}

} // namespace fire
