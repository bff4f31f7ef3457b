#include "fire/http_clients.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <json.hpp>

#include <cmath>

namespace fire {

using json = nlohmann::json;

namespace {

struct Endpoint {
    std::string origin;  // scheme://host[:port]
    std::string prefix;  // path prefix without trailing slash
};

Endpoint split_url(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw InvalidConfig("URL needs a scheme: " + url);
    auto path_start = url.find('/', scheme_end + 3);
    Endpoint ep;
    ep.origin = url.substr(0, path_start);
    ep.prefix = path_start == std::string::npos ? "" : url.substr(path_start);
    while (!ep.prefix.empty() && ep.prefix.back() == '/') ep.prefix.pop_back();
    return ep;
}

httplib::Client make_client(const Endpoint& ep, const HttpOptions& options) {
    httplib::Client cli(ep.origin);
    cli.set_connection_timeout(options.connect_timeout);
    cli.set_read_timeout(options.read_timeout);
    cli.set_follow_location(true);
    return cli;
}

// Maps transport and HTTP status failures onto the provider error taxonomy.
void check(const httplib::Result& res, const std::string& what) {
    if (!res) throw ProviderUnavailable(what + ": " + httplib::to_string(res.error()));
    int status = res->status;
    if (status == 401 || status == 403) throw AuthFailure(what + ": HTTP " + std::to_string(status));
    if (status == 429) throw RateLimited(what + ": HTTP 429");
    if (status < 200 || status >= 300)
        throw ProviderUnavailable(what + ": HTTP " + std::to_string(status) + " " + res->body.substr(0, 200));
}

json parse_body(const std::string& body, const std::string& what) {
    json doc = json::parse(body, nullptr, false);
    if (doc.is_discarded()) throw ProviderUnavailable(what + ": response is not JSON");
    return doc;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

} // namespace

OpenAiChatClient::OpenAiChatClient(std::string base_url, std::string api_key, HttpOptions options)
    : base_url_(std::move(base_url)), api_key_(std::move(api_key)), options_(std::move(options)) {}

Completion OpenAiChatClient::complete(const LlmRequest& request) {
    auto ep = split_url(base_url_);
    json body = {{"model", request.model_id},
                 {"temperature", request.temperature},
                 {"messages", json::array({{{"role", "user"}, {"content", request.prompt}}})}};
    auto payload = body.dump();
    auto start = std::chrono::steady_clock::now();
    return with_rate_limit_retry(
        [&] {
            auto cli = make_client(ep, options_);
            httplib::Headers headers{{"Authorization", "Bearer " + api_key_}};
            auto res = cli.Post(ep.prefix + "/chat/completions", headers, payload, "application/json");
            check(res, "chat completion");
            json doc = parse_body(res->body, "chat completion");
            Completion c;
            try {
                const auto& content = doc.at("choices").at(0).at("message").at("content");
                c.text = content.is_null() ? std::string() : content.get<std::string>();
            } catch (const json::exception& e) {
                throw ProviderUnavailable(std::string("chat completion: unexpected response shape: ") + e.what());
            }
            if (doc.contains("usage") && doc["usage"].is_object()) {
                c.prompt_tokens = doc["usage"].value("prompt_tokens", std::int64_t{0});
                c.completion_tokens = doc["usage"].value("completion_tokens", std::int64_t{0});
            }
            // Pricing is keyed by the requested model, not the dated snapshot name.
            c.model_id = request.model_id;
            c.latency_seconds = seconds_since(start);
            return c;
        },
        options_.retry);
}

std::string serp_snippets(std::string_view response_body, std::size_t max_snippets) {
    json doc = parse_body(std::string(response_body), "search");
    std::string out;
    std::size_t taken = 0;
    if (doc.contains("organic_results") && doc["organic_results"].is_array()) {
        for (const auto& r : doc["organic_results"]) {
            if (!r.is_object() || !r.contains("snippet") || !r["snippet"].is_string()) continue;
            if (max_snippets != 0 && taken == max_snippets) break;
            if (taken++ > 0) out += '\n';
            out += r["snippet"].get<std::string>();
        }
    }
    return out;
}

SerpApiClient::SerpApiClient(std::string api_key, std::string base_url, std::size_t max_snippets, HttpOptions options)
    : api_key_(std::move(api_key)), base_url_(std::move(base_url)), max_snippets_(max_snippets),
      options_(std::move(options)) {}

SearchResult SerpApiClient::search(std::string_view query) {
    if (query.empty()) throw EmptyQuery("search query is empty");
    auto ep = split_url(base_url_);
    httplib::Params params{{"engine", "google"}, {"q", std::string(query)}, {"api_key", api_key_}};
    auto path = httplib::append_query_params(ep.prefix + "/search", params);
    auto start = std::chrono::steady_clock::now();
    return with_rate_limit_retry(
        [&] {
            auto cli = make_client(ep, options_);
            auto res = cli.Get(path);
            check(res, "search");
            SearchResult r;
            r.snippet = serp_snippets(res->body, max_snippets_);
            r.latency_seconds = seconds_since(start);
            return r;
        },
        options_.retry);
}

OpenAiEmbeddingClient::OpenAiEmbeddingClient(std::string base_url, std::string api_key, std::string model,
                                             HttpOptions options)
    : base_url_(std::move(base_url)), api_key_(std::move(api_key)), model_(std::move(model)),
      options_(std::move(options)) {}

EmbeddingVector OpenAiEmbeddingClient::embed(std::string_view text) {
    if (text.empty()) throw EmptyText("cannot embed empty text");
    auto ep = split_url(base_url_);
    auto payload = json{{"model", model_}, {"input", std::string(text)}}.dump();
    return with_rate_limit_retry(
        [&] {
            auto cli = make_client(ep, options_);
            httplib::Headers headers{{"Authorization", "Bearer " + api_key_}};
            auto res = cli.Post(ep.prefix + "/embeddings", headers, payload, "application/json");
            check(res, "embeddings");
            json doc = parse_body(res->body, "embeddings");
            EmbeddingVector v;
            try {
                v.values = doc.at("data").at(0).at("embedding").get<std::vector<double>>();
            } catch (const json::exception& e) {
                throw ProviderUnavailable(std::string("embeddings: unexpected response shape: ") + e.what());
            }
            double norm = 0.0;
            for (double x : v.values) norm += x * x;
            norm = std::sqrt(norm);
            if (norm == 0.0) throw ProviderUnavailable("embeddings: zero vector");
            for (double& x : v.values) x /= norm;
            return v;
        },
        options_.retry);
}

} // namespace fire
