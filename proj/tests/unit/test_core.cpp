#include <doctest.h>

#include "fire/core.hpp"
#include "fire/text.hpp"
#include "fire/toml_json.hpp"

#include <random>

using namespace fire;

TEST_CASE("verdict tokens match case-insensitively after trimming quotes") {
    CHECK(verdict_from_token("Factual") == Verdict::Factual);
    CHECK(verdict_from_token(" non-factual ") == Verdict::NonFactual);
    CHECK(verdict_from_token("\"FACTUAL\"") == Verdict::Factual);
    CHECK(verdict_from_token("'Non-Factual'") == Verdict::NonFactual);
    CHECK_THROWS_AS(verdict_from_token("True"), UnknownLabel);
    CHECK_THROWS_AS(verdict_from_token(""), UnknownLabel);

    LabelSet custom{"True", "False"};
    CHECK(verdict_from_token("true", custom) == Verdict::Factual);
    CHECK_THROWS_AS(verdict_from_token("Factual", custom), UnknownLabel);
}

TEST_CASE("flip is an involution") {
    for (auto v : {Verdict::Factual, Verdict::NonFactual}) {
        CHECK(flip(v) != v);
        CHECK(flip(flip(v)) == v);
    }
}

TEST_CASE("money parses exact decimals") {
    CHECK(Money::parse("0.00105").units() == 1'050'000'000);
    CHECK(Money::parse("12").units() == 12 * Money::kUnitsPerUsd);
    CHECK(Money::parse("0.000000000001").units() == 1);
    CHECK(Money::parse(".5").units() == Money::kUnitsPerUsd / 2);
    CHECK_THROWS_AS(Money::parse("0.0000000000001"), Error);
    CHECK_THROWS_AS(Money::parse("-1"), Error);
    CHECK_THROWS_AS(Money::parse("1.2.3"), Error);
    CHECK_THROWS_AS(Money::parse("abc"), Error);
    CHECK_THROWS_AS(Money::parse(""), Error);
}

TEST_CASE("money formatting") {
    CHECK(Money::parse("0.00105").to_string() == "0.00105");
    CHECK(Money{}.to_string() == "0");
    CHECK(Money::parse("1.50").to_string() == "1.5");
    CHECK(Money::parse("0.005").to_fixed(2) == "0.01");
    CHECK(Money::parse("0.004999").to_fixed(2) == "0.00");
    CHECK(Money::parse("2.345").to_fixed(2) == "2.35");
    CHECK(Money::parse("7").to_fixed(2) == "7.00");
    CHECK(Money::from_double(0.00105) == Money::parse("0.00105"));
    CHECK_THROWS_AS(Money::from_double(-0.5), Error);
}

TEST_CASE("money round-trips through its string form") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 2000; ++i) {
        auto m = Money::from_units(static_cast<std::int64_t>(rng() % 1'000'000'000'000'000ULL));
        CHECK(Money::parse(m.to_string()) == m);
    }
}

TEST_CASE("money arithmetic is exact") {
    auto rate = Money::parse("0.00105");
    Money sum;
    for (int k = 0; k < 1000; ++k) sum += rate;
    CHECK(sum == rate * 1000);
    CHECK(sum.to_string() == "1.05");
    CHECK_THROWS_AS(rate * -1, Error);
}

TEST_CASE("claims need text") {
    auto c = make_claim("a", "Paris is in France", Verdict::Factual, SourceDataset::FacToolQA);
    CHECK(c.id == "a");
    CHECK(c.gold_label == Verdict::Factual);
    CHECK_THROWS_AS(make_claim("b", "   "), InvalidConfig);
}

TEST_CASE("evidence set is append-only and ordered") {
    EvidenceSet e;
    CHECK(e.empty());
    e.append({"q1", "s1", 0});
    e.append({"q2", "", 1});
    REQUIRE(e.size() == 2);
    CHECK(e[0].snippet == "s1");
    CHECK(e[1].rank == 1);
    CHECK(e.items().back().query == "q2");
}

TEST_CASE("prompt variant names") {
    CHECK(prompt_variant_from_string("default") == PromptVariant::Default);
    CHECK(prompt_variant_from_string("no-reason") == PromptVariant::NoReason);
    CHECK(prompt_variant_from_string("at_least_two") == PromptVariant::AtLeastTwo);
    CHECK(prompt_variant_from_string("Inclusive") == PromptVariant::Inclusive);
    for (auto v : {PromptVariant::Default, PromptVariant::NoReason, PromptVariant::AtLeastOne, PromptVariant::AtLeastTwo,
                   PromptVariant::Inclusive, PromptVariant::FinalVerification}) {
        CHECK(prompt_variant_from_string(to_string(v)) == v);
    }
    CHECK_THROWS_AS(prompt_variant_from_string("verbose"), UnknownVariant);
    CHECK(is_step_variant(PromptVariant::AtLeastOne));
    CHECK_FALSE(is_step_variant(PromptVariant::FinalVerification));
    CHECK_FALSE(is_step_variant(PromptVariant::DiversityAddendum));
}

TEST_CASE("malformed policy names") {
    CHECK(malformed_policy_from_string("exclude") == MalformedPolicy::Exclude);
    CHECK(malformed_policy_from_string("count-as-non-factual") == MalformedPolicy::CountAsNonFactual);
    CHECK_THROWS_AS(malformed_policy_from_string("ignore"), InvalidConfig);
}

TEST_CASE("agent config validation") {
    AgentConfig c;
    CHECK_NOTHROW(c.validate());
    CHECK(c.max_steps == 5);
    CHECK(c.similarity_threshold == doctest::Approx(0.9));

    auto bad = c;
    bad.max_steps = 0;
    CHECK_THROWS_AS(bad.validate(), InvalidConfig);
    bad = c;
    bad.similarity_threshold = 0.0;
    CHECK_THROWS_AS(bad.validate(), InvalidConfig);
    bad = c;
    bad.similarity_threshold = 1.0;
    CHECK_NOTHROW(bad.validate());
    bad = c;
    bad.early_termination_window = 0;
    CHECK_THROWS_AS(bad.validate(), InvalidConfig);
    bad = c;
    bad.prompt_variant = PromptVariant::FinalVerification;
    CHECK_THROWS_AS(bad.validate(), InvalidConfig);
    bad = c;
    bad.labels = {"same", "SAME"};
    CHECK_THROWS_AS(bad.validate(), InvalidConfig);
}

TEST_CASE("guard is ignored without search") {
    AgentConfig c;
    c.early_termination_window = 2;
    c.diversity_prompt = true;
    CHECK(c.guard_enabled());
    c.search_enabled = false;
    CHECK_FALSE(c.guard_enabled());
}

TEST_CASE("sha256 test vectors") {
    CHECK(text::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(text::sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("toml converts to json") {
    auto j = toml_to_json("[llm]\nmodel = \"gpt-4o\"\ntemperature = 0.5\n[agent]\nmax_steps = 3\ndiversity = true\n");
    CHECK(j["llm"]["model"] == "gpt-4o");
    CHECK(j["llm"]["temperature"].get<double>() == doctest::Approx(0.5));
    CHECK(j["agent"]["max_steps"] == 3);
    CHECK(j["agent"]["diversity"] == true);
    CHECK_THROWS_AS(toml_to_json("[llm\nmodel="), InvalidConfig);
}
