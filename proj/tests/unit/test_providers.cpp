#include <doctest.h>

#include "fire/prompts.hpp"
#include "fire/providers.hpp"
#include "fire/scripted.hpp"

#include <cmath>
#include <random>
#include <thread>

using namespace fire;

namespace {

PricingTable mini_pricing() {
    return PricingTable::from_json_text(
        R"({"search_usd_per_request": "0.00105",
            "models": {"gpt-4o-mini": {"prompt_usd_per_million": "0.15", "completion_usd_per_million": "0.60"}}})");
}

Completion usage(std::int64_t in, std::int64_t out, std::string model = "gpt-4o-mini") {
    Completion c;
    c.prompt_tokens = in;
    c.completion_tokens = out;
    c.model_id = std::move(model);
    return c;
}

// Reference trigram embedding, written independently of the library.
std::vector<double> reference_trigrams(const std::string& s) {
    auto fnv = [](const std::string& g) {
        std::uint32_t h = 2166136261u;
        for (unsigned char c : g) {
            h ^= c;
            h *= 16777619u;
        }
        return h;
    };
    std::vector<double> v(256, 0.0);
    if (s.size() < 3) v[fnv(s) % 256] = 1.0;
    else
        for (std::size_t i = 0; i + 3 <= s.size(); ++i) v[fnv(s.substr(i, 3)) % 256] += 1.0;
    double n = 0;
    for (double x : v) n += x * x;
    for (double& x : v) x /= std::sqrt(n);
    return v;
}

} // namespace

TEST_CASE("llm cost follows the token-rate formula") {
    auto p = mini_pricing();
    CHECK(llm_cost(usage(1'000'000, 0), p) == Money::parse("0.15"));
    CHECK(llm_cost(usage(0, 0), p) == Money{});
    CHECK(llm_cost(usage(500'000, 200'000), p) == Money::parse("0.195"));
    // 1 token at $0.15/M is 1.5e-7 USD, exactly representable in picodollars.
    CHECK(llm_cost(usage(1, 0), p) == Money::parse("0.00000015"));
    CHECK_THROWS_AS(llm_cost(usage(1, 1, "unknown-model"), p), UnknownModel);
}

TEST_CASE("llm cost rounds half-up to the picodollar") {
    PricingTable p;
    p.models["m"] = {Money::parse("0.000001"), Money{}};  // 1e-6 USD per million = 1e-12 per token
    CHECK(llm_cost(usage(1, 0, "m"), p).units() == 1);
    p.models["m"] = {Money::parse("0.0000005"), Money{}};  // half a picodollar per token
    CHECK(llm_cost(usage(1, 0, "m"), p).units() == 1);
    CHECK(llm_cost(usage(2, 0, "m"), p).units() == 1);
    CHECK(llm_cost(usage(3, 0, "m"), p).units() == 2);
}

TEST_CASE("llm cost matches an exact rational oracle") {
    std::mt19937_64 rng(5);
    PricingTable p;
    for (int i = 0; i < 500; ++i) {
        auto in_rate = static_cast<std::int64_t>(rng() % 100'000'000'000'000ULL);
        auto out_rate = static_cast<std::int64_t>(rng() % 100'000'000'000'000ULL);
        p.models["m"] = {Money::from_units(in_rate), Money::from_units(out_rate)};
        auto in = static_cast<std::int64_t>(rng() % 5'000'000);
        auto out = static_cast<std::int64_t>(rng() % 5'000'000);
        __int128 num = static_cast<__int128>(in) * in_rate + static_cast<__int128>(out) * out_rate;
        auto want = static_cast<std::int64_t>((2 * num + 1'000'000) / 2'000'000);
        CHECK(llm_cost(usage(in, out, "m"), p).units() == want);
    }
}

TEST_CASE("search cost is linear in the request count") {
    PricingTable p;
    CHECK(search_cost(0, p) == Money{});
    CHECK(search_cost(1, p).to_string() == "0.00105");
    CHECK(search_cost(1000, p).to_string() == "1.05");
    Money sum;
    for (int k = 0; k < 37; ++k) sum += search_cost(1, p);
    CHECK(sum == search_cost(37, p));
}

TEST_CASE("pricing file round-trips and accepts numbers") {
    auto p = mini_pricing();
    auto again = PricingTable::from_json_text(p.to_json_text());
    CHECK(again.search_usd_per_request == p.search_usd_per_request);
    CHECK(again.models.at("gpt-4o-mini").completion_per_million == Money::parse("0.60"));
    auto numeric = PricingTable::from_json_text(R"({"models": {"m": {"prompt_usd_per_million": 2.5,
                                                                       "completion_usd_per_million": 10}}})");
    CHECK(numeric.models.at("m").prompt_per_million == Money::parse("2.5"));
    CHECK(numeric.search_usd_per_request == Money::parse("0.00105"));
    CHECK_THROWS_AS(PricingTable::from_json_text("[1,2]"), Error);
    CHECK_THROWS_AS(PricingTable::from_json_text(R"({"search_usd_per_request": "-1"})"), Error);
}

TEST_CASE("scripted llm pops responses and synthesizes usage") {
    ScriptedLlm llm({R"({"final_answer": "Factual"})", "12345678"});
    auto prompt = prompts::RenderedPrompt{"abcde", PromptVariant::Default, 0, false};
    auto first = llm_complete(llm, prompt, "gpt-4o-mini", 0.0);
    CHECK(first.text == R"({"final_answer": "Factual"})");
    CHECK(first.prompt_tokens == 2);
    auto second = llm_complete(llm, prompt, "gpt-4o-mini", 0.0);
    CHECK(second.completion_tokens == 2);
    CHECK(second.model_id == "gpt-4o-mini");
    CHECK_THROWS_AS(llm_complete(llm, prompt, "gpt-4o-mini", 0.0), ProviderUnavailable);
    CHECK(llm.calls() == 3);
    CHECK(ScriptedLlm::synthesized_tokens("") == 0);
    CHECK(ScriptedLlm::synthesized_tokens("123456789") == 3);
}

TEST_CASE("scripted llm per-claim queues take precedence") {
    ScriptedLlm llm({"shared"});
    llm.enqueue_for("a", "for a");
    auto p = prompts::RenderedPrompt{"x", PromptVariant::Default, 0, false};
    CHECK(llm_complete(llm, p, "m", 0.0, "a").text == "for a");
    CHECK(llm_complete(llm, p, "m", 0.0, "a").text == "shared");
    CHECK_THROWS_AS(llm_complete(llm, p, "m", 0.0, "b"), ProviderUnavailable);
}

TEST_CASE("scripted llm is safe under concurrent use") {
    ScriptedLlm llm;
    for (int c = 0; c < 8; ++c)
        for (int i = 0; i < 100; ++i) llm.enqueue_for("c" + std::to_string(c), std::to_string(i));
    std::vector<std::thread> pool;
    std::vector<std::vector<std::string>> seen(8);
    for (int c = 0; c < 8; ++c)
        pool.emplace_back([&, c] {
            auto p = prompts::RenderedPrompt{"x", PromptVariant::Default, 0, false};
            for (int i = 0; i < 100; ++i) seen[c].push_back(llm_complete(llm, p, "m", 0.0, "c" + std::to_string(c)).text);
        });
    for (auto& t : pool) t.join();
    for (int c = 0; c < 8; ++c)
        for (int i = 0; i < 100; ++i) CHECK(seen[c][i] == std::to_string(i));
    CHECK(llm.calls() == 800);
}

TEST_CASE("scripted search") {
    ScriptedSearch search(std::map<std::string, std::string>{{"capital of France", "Paris is the capital of France."}});
    auto e = web_search(search, "capital of France");
    CHECK(e.snippet == "Paris is the capital of France.");
    CHECK(e.query == "capital of France");
    CHECK(web_search(search, "unmapped").snippet.empty());
    CHECK_THROWS_AS(web_search(search, ""), EmptyQuery);
    CHECK_THROWS_AS(web_search(search, "   "), EmptyQuery);
    CHECK(search.calls() == 2);
}

TEST_CASE("trigram embedder") {
    TrigramEmbedder emb;
    auto a = embed(emb, "the quick brown fox");
    double n = 0;
    for (double x : a.values) n += x * x;
    CHECK(std::sqrt(n) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(a.values.size() == TrigramEmbedder::kDimension);
    CHECK(cosine(a, embed(emb, "the quick brown fox")) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cosine(embed(emb, "aaaa"), embed(emb, "zzzz")) == 0.0);
    auto b = embed(emb, "a quick brown dog");
    CHECK(cosine(a, b) == cosine(b, a));
    CHECK_THROWS_AS(embed(emb, ""), EmptyText);
    CHECK(emb.id() == "trigram-fnv1a-256");
}

TEST_CASE("trigram embedder matches the reference bit-for-bit") {
    TrigramEmbedder emb;
    for (std::string s : {"a", "ab", "abc", "hello world", "Paris is the capital of France.", "\xe2\x82\xac 100"}) {
        CAPTURE(s);
        CHECK(embed(emb, s).values == reference_trigrams(s));
    }
}

TEST_CASE("tripwires count contacts and always fail") {
    TripwireLlm llm;
    TripwireSearch search;
    TripwireEmbedder emb;
    CHECK_THROWS_AS(llm.complete({}), ProviderUnavailable);
    CHECK_THROWS_AS(search.search("q"), ProviderUnavailable);
    CHECK_THROWS_AS(emb.embed("q"), ProviderUnavailable);
    CHECK(llm.contacts() == 1);
    CHECK(search.contacts() == 1);
    CHECK(emb.contacts() == 1);
}

TEST_CASE("rate-limit retry backs off then gives up") {
    std::vector<long long> delays;
    RetryPolicy policy;
    policy.sleep = [&](std::chrono::milliseconds d) { delays.push_back(d.count()); };
    int calls = 0;
    CHECK_THROWS_AS(with_rate_limit_retry([&]() -> int {
                        ++calls;
                        throw RateLimited("429");
                    }, policy),
                    ProviderUnavailable);
    CHECK(calls == 3);
    CHECK(delays == std::vector<long long>{500, 1000});

    calls = 0;
    delays.clear();
    auto v = with_rate_limit_retry([&]() -> int {
        if (++calls < 2) throw RateLimited("429");
        return 7;
    }, policy);
    CHECK(v == 7);
    CHECK(delays == std::vector<long long>{500});
    CHECK_THROWS_AS(with_rate_limit_retry([]() -> int { throw AuthFailure("401"); }, policy), AuthFailure);
}
