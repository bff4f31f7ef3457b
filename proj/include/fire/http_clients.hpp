#pragma once

#include "fire/providers.hpp"

#include <chrono>
#include <string>

namespace fire {

struct HttpOptions {
    std::chrono::seconds connect_timeout{10};
    std::chrono::seconds read_timeout{120};
    RetryPolicy retry;
};

// OpenAI-compatible chat completions: POST <base_url>/chat/completions with a
// single user message. base_url usually ends in "/v1".
class OpenAiChatClient : public LlmProvider {
public:
    OpenAiChatClient(std::string base_url, std::string api_key, HttpOptions options = {});
    Completion complete(const LlmRequest& request) override;

private:
    std::string base_url_;
    std::string api_key_;
    HttpOptions options_;
};

// SerpAPI-compatible search: GET <base_url>/search?engine=google&q=...&api_key=...
// The snippet is organic_results[*].snippet joined with "\n"; max_snippets = 0
// keeps every result on the first page.
class SerpApiClient : public SearchProvider {
public:
    SerpApiClient(std::string api_key, std::string base_url = "https://serpapi.com", std::size_t max_snippets = 0,
                  HttpOptions options = {});
    SearchResult search(std::string_view query) override;

private:
    std::string api_key_;
    std::string base_url_;
    std::size_t max_snippets_;
    HttpOptions options_;
};

// OpenAI-compatible embeddings endpoint (POST <base_url>/embeddings); the
// returned vector is L2-normalized.
class OpenAiEmbeddingClient : public Embedder {
public:
    OpenAiEmbeddingClient(std::string base_url, std::string api_key, std::string model, HttpOptions options = {});
    EmbeddingVector embed(std::string_view text) override;
    std::string id() const override { return "openai-embeddings:" + model_; }

private:
    std::string base_url_;
    std::string api_key_;
    std::string model_;
    HttpOptions options_;
};

// Exposed for tests: joins organic_results[*].snippet of a SerpAPI response body.
std::string serp_snippets(std::string_view response_body, std::size_t max_snippets = 0);

} // namespace fire
