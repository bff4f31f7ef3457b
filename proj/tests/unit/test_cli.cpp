#include <doctest.h>

#include "cli.hpp"
#include "fire/evaluation.hpp"
#include "fire/scripted.hpp"
#include "test_support.hpp"

#include <json.hpp>

#include <sstream>

using namespace fire;
using json = nlohmann::json;
using testing::final_json;
using testing::query_json;
using testing::read_file;
using testing::write_file;

namespace {

struct Outcome {
    int code = -1;
    std::string out;
    std::string err;
};

Outcome invoke(const std::vector<std::string>& args, const cli::Context& ctx = {}) {
    std::ostringstream out, err;
    Outcome o;
    o.code = cli::run_cli(args, ctx, out, err);
    o.out = out.str();
    o.err = err.str();
    return o;
}

std::string scripted_file(const testing::TempDir& tmp, const json& doc, const std::string& name = "script.json") {
    auto path = tmp / name;
    write_file(path, doc.dump());
    return path.string();
}

std::string raw_jsonl(const std::vector<std::pair<std::string, std::size_t>>& label_counts) {
    std::ostringstream os;
    std::size_t n = 0;
    for (const auto& [label, count] : label_counts)
        for (std::size_t i = 0; i < count; ++i, ++n)
            os << json{{"id", "r" + std::to_string(n)}, {"claim", "claim " + std::to_string(n)}, {"label", label}}.dump()
               << "\n";
    return os.str();
}

// Counts factory invocations and hands out tripwires.
struct TripwireFactory {
    std::shared_ptr<TripwireLlm> llm = std::make_shared<TripwireLlm>();
    std::shared_ptr<TripwireSearch> search = std::make_shared<TripwireSearch>();
    std::shared_ptr<TripwireEmbedder> embedder = std::make_shared<TripwireEmbedder>();
    int built = 0;

    cli::Context context() {
        cli::Context ctx;
        ctx.providers = [this](const cli::CliConfig&) {
            ++built;
            return cli::Providers{llm, search, embedder, false};
        };
        return ctx;
    }
    std::size_t contacts() const { return llm->contacts() + search->contacts() + embedder->contacts(); }
};

} // namespace

TEST_CASE("verify with an immediate answer") {
    testing::TempDir tmp;
    auto script = scripted_file(tmp, {{"llm", {final_json("Factual")}}});
    auto r = invoke({"verify", "Paris is the capital of France.", "--scripted", script, "--out", (tmp / "runs").string(),
                  "--run-id", "v1"});
    CHECK(r.code == 0);
    CHECK(r.out.starts_with("Factual (0 searches)\n"));
    auto trace = json::parse(read_file(tmp / "runs" / "v1" / "traces.jsonl"));
    CHECK(trace["schema"] == "fire-trace/1");
    CHECK(trace["search_count"] == 0);
    CHECK(std::filesystem::exists(tmp / "runs" / "v1" / "config.json"));
}

TEST_CASE("verify exit codes") {
    testing::TempDir tmp;
    auto script = scripted_file(tmp, {{"llm", {query_json("q"), final_json("Non-Factual")}}, {"search", {{"q", "s"}}}});
    auto r = invoke({"verify", "The moon is cheese.", "--scripted", script, "--out", (tmp / "runs").string()});
    CHECK(r.code == 1);
    CHECK(r.out.starts_with("Non-Factual (1 search)\n"));

    auto missing = invoke({"verify", "x", "--out", (tmp / "runs").string()});
    CHECK(missing.code == 2);
    CHECK(missing.err.find("FIRE_LLM_API_KEY") != std::string::npos);

    CHECK(invoke({"verify"}).code == 2);
    CHECK(invoke({"--help"}).code == 0);
    CHECK(invoke({}).code == 2);
}

TEST_CASE("verify without search takes the final verification path") {
    testing::TempDir tmp;
    auto script = scripted_file(tmp, {{"llm", {query_json("first look up"), final_json("Factual")}}});
    auto r = invoke({"verify", "x", "--no-search", "--scripted", script, "--out", (tmp / "runs").string(), "--run-id", "n"});
    CHECK(r.code == 0);
    CHECK(r.out.find("Factual (0 searches)") != std::string::npos);
    CHECK(r.out.find("final verification prompt used") != std::string::npos);
    auto trace = json::parse(read_file(tmp / "runs" / "n" / "traces.jsonl"));
    CHECK(trace["forced_final"] == true);
}

TEST_CASE("always-true run reproduces the published row") {
    testing::TempDir tmp;
    write_file(tmp / "factool.jsonl", testing::synthetic_jsonl(177, 56));
    TripwireFactory trip;
    auto r = invoke({"run", "--dataset", (tmp / "factool.jsonl").string(), "--runner", "always-true", "--out",
                  (tmp / "runs").string(), "--run-id", "at"},
                 trip.context());
    CHECK(r.code == 0);
    auto csv = read_file(tmp / "runs" / "at" / "report.csv");
    CHECK(csv.find("Always True,-,factool,0.76,1.00,0.86,0.00,0.00,0.00,0.00,0.00,0.00\r\n") != std::string::npos);
    CHECK(trip.built == 0);
    CHECK(trip.contacts() == 0);
    for (auto f : {"traces.jsonl", "ledger.json", "report.md", "search_histogram.csv", "config.json"})
        CHECK(std::filesystem::exists(tmp / "runs" / "at" / f));
}

TEST_CASE("seeded random runs are byte-identical") {
    testing::TempDir tmp;
    write_file(tmp / "d.jsonl", testing::synthetic_jsonl(60, 40));
    for (auto out : {"a", "b"}) {
        auto r = invoke({"run", "--dataset", (tmp / "d.jsonl").string(), "--runner", "random", "--seed", "7", "--out",
                      (tmp / out).string(), "--run-id", "r"});
        CHECK(r.code == 0);
    }
    for (auto f : {"report.csv", "report.md", "ledger.json", "traces.jsonl", "search_histogram.csv"})
        CHECK(read_file(tmp / "a" / "r" / f) == read_file(tmp / "b" / "r" / f));
}

TEST_CASE("unknown runner lists the valid ones") {
    testing::TempDir tmp;
    write_file(tmp / "d.jsonl", testing::synthetic_jsonl(1, 1));
    auto r = invoke({"run", "--dataset", (tmp / "d.jsonl").string(), "--runner", "oracle", "--out", (tmp / "runs").string()});
    CHECK(r.code == 2);
    for (const auto& name : evaluation::runner_names()) CHECK(r.err.find(name) != std::string::npos);
}

TEST_CASE("dataset errors exit 2") {
    testing::TempDir tmp;
    CHECK(invoke({"run", "--dataset", (tmp / "nope.jsonl").string()}).code == 2);
    write_file(tmp / "bad.jsonl", "{\"claim\": \"x\", \"label\": \"maybe\"}\n");
    auto r = invoke({"run", "--dataset", (tmp / "bad.jsonl").string(), "--runner", "always-true", "--out", (tmp / "runs").string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("record 0") != std::string::npos);
}

TEST_CASE("scripted fire run with per-claim scripts in parallel") {
    testing::TempDir tmp;
    write_file(tmp / "d.jsonl", testing::synthetic_jsonl(3, 3));
    json per_claim;
    for (auto id : {"t0", "t1", "t2"}) per_claim[id] = {query_json(std::string("about ") + id), final_json("Factual")};
    for (auto id : {"f0", "f1", "f2"}) per_claim[id] = {final_json("Factual")};
    auto script = scripted_file(tmp, {{"llm", {{"per_claim", per_claim}}}, {"search", {{"about t0", "evidence"}}}});
    auto r = invoke({"run", "--dataset", (tmp / "d.jsonl").string(), "--scripted", script, "--parallelism", "4", "--out",
                  (tmp / "runs").string(), "--run-id", "f"});
    CHECK(r.code == 0);
    auto ledger = json::parse(read_file(tmp / "runs" / "f" / "ledger.json"));
    CHECK(ledger["counts"]["tp"] == 3);
    CHECK(ledger["counts"]["fp"] == 3);
    CHECK(ledger["search_calls"] == 3);
    CHECK(ledger["search_cost"] == "0.00315");
    auto hist = read_file(tmp / "runs" / "f" / "search_histogram.csv");
    CHECK(hist == "searches,instances,misclassified_instances\r\n0,3,3\r\n1,3,0\r\n");
}

TEST_CASE("fire-no-search runner never searches") {
    testing::TempDir tmp;
    write_file(tmp / "d.jsonl", testing::synthetic_jsonl(2, 0));
    auto script = scripted_file(tmp, {{"llm", {{"per_claim", {{"t0", {query_json("q"), final_json("Factual")}},
                                                              {"t1", {final_json("Non-Factual")}}}}}}});
    auto r = invoke({"run", "--dataset", (tmp / "d.jsonl").string(), "--runner", "fire-no-search", "--scripted", script,
                  "--out", (tmp / "runs").string(), "--run-id", "ns"});
    CHECK(r.code == 0);
    CHECK(r.out.find("FIRE (No Search)") != std::string::npos);
    auto ledger = json::parse(read_file(tmp / "runs" / "ns" / "ledger.json"));
    CHECK(ledger["search_calls"] == 0);
    CHECK(ledger["framework"] == "FIRE (No Search)");
}

TEST_CASE("an interrupted run keeps completed traces and exits 2") {
    testing::TempDir tmp;
    write_file(tmp / "d.jsonl", testing::synthetic_jsonl(2, 2));
    auto script = scripted_file(tmp, {{"llm", json::array()}});
    std::atomic<bool> stop{true};
    cli::Context ctx;
    ctx.stop = &stop;
    auto r = invoke({"run", "--dataset", (tmp / "d.jsonl").string(), "--scripted", script, "--out", (tmp / "runs").string(),
                  "--run-id", "i"},
                 ctx);
    CHECK(r.code == 2);
    CHECK(r.err.find("interrupted") != std::string::npos);
    CHECK(read_file(tmp / "runs" / "i" / "traces.jsonl").empty());
}

TEST_CASE("normalize prints counts and writes JSONL") {
    testing::TempDir tmp;
    write_file(tmp / "fcb.jsonl",
               raw_jsonl({{"supported", 450}, {"partially supported", 22}, {"not supported", 30}, {"refuted", 159}}));
    auto r = invoke({"datasets", "normalize", (tmp / "fcb.jsonl").string(), "--adapter", "factcheck_bench"});
    CHECK(r.code == 0);
    CHECK(r.out.find("Factual: 472, Non-Factual: 159") != std::string::npos);
    CHECK(r.out.find("(match)") != std::string::npos);
    auto normalized = tmp / "fcb.normalized.jsonl";
    REQUIRE(std::filesystem::exists(normalized));

    auto again = invoke({"datasets", "normalize", normalized.string(), "--output", (tmp / "again.jsonl").string()});
    CHECK(again.code == 0);
    CHECK(read_file(tmp / "again.jsonl") == read_file(normalized));
}

TEST_CASE("normalize with sampling") {
    testing::TempDir tmp;
    write_file(tmp / "bing.jsonl", raw_jsonl({{"supported", 3581}, {"refuted", 42}}));
    auto r = invoke({"datasets", "normalize", (tmp / "bing.jsonl").string(), "--adapter", "bingcheck", "--sample-true", "100",
                  "--seed", "1", "--output", (tmp / "s.jsonl").string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("claims 142") != std::string::npos);
    auto lines = read_file(tmp / "s.jsonl");
    CHECK(std::count(lines.begin(), lines.end(), '\n') == 142);

    write_file(tmp / "bad.jsonl", raw_jsonl({{"supported", 2}}) + "{\"id\": \"z\", \"label\": \"refuted\"}\n");
    auto bad = invoke({"datasets", "normalize", (tmp / "bad.jsonl").string(), "--adapter", "bingcheck"});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("record 2") != std::string::npos);
    CHECK(invoke({"datasets", "normalize", (tmp / "bing.jsonl").string(), "--adapter", "nope"}).code == 2);
}

TEST_CASE("dry runs never reach a provider") {
    testing::TempDir tmp;
    write_file(tmp / "d.jsonl", testing::synthetic_jsonl(5, 5));
    write_file(tmp / "raw.jsonl", raw_jsonl({{"true", 3}}));
    TripwireFactory trip;
    auto ctx = trip.context();
    ctx.env["FIRE_LLM_API_KEY"] = "sk-x";
    ctx.env["FIRE_SERP_API_KEY"] = "serp-x";
    auto out = (tmp / "runs").string();
    CHECK(invoke({"verify", "x", "--dry-run", "--out", out}, ctx).code == 0);
    CHECK(invoke({"run", "--dataset", (tmp / "d.jsonl").string(), "--dry-run", "--out", out}, ctx).code == 0);
    CHECK(invoke({"run", "--dataset", (tmp / "d.jsonl").string(), "--runner", "random", "--dry-run", "--out", out}, ctx).code == 0);
    CHECK(invoke({"datasets", "normalize", (tmp / "raw.jsonl").string(), "--adapter", "factool_qa", "--dry-run"}, ctx).code == 0);
    CHECK_FALSE(std::filesystem::exists(tmp / "raw.normalized.jsonl"));
    CHECK(trip.contacts() == 0);
    CHECK(trip.built == 0);
    CHECK_FALSE(std::filesystem::exists(tmp / "runs"));
}

TEST_CASE("report re-renders ledgers") {
    testing::TempDir tmp;
    write_file(tmp / "d.jsonl", testing::synthetic_jsonl(100, 42));
    auto out = (tmp / "runs").string();
    REQUIRE(invoke({"run", "--dataset", (tmp / "d.jsonl").string(), "--runner", "always-false", "--out", out, "--run-id", "af"}).code == 0);
    REQUIRE(invoke({"run", "--dataset", (tmp / "d.jsonl").string(), "--runner", "always-true", "--out", out, "--run-id", "at"}).code == 0);
    auto af = (tmp / "runs" / "af" / "ledger.json").string();
    auto at = (tmp / "runs" / "at" / "ledger.json").string();

    auto r = invoke({"report", af, "--format", "csv"});
    CHECK(r.code == 0);
    CHECK(r.out == read_file(tmp / "runs" / "af" / "report.csv"));
    CHECK(r.out.find("Always False,-,d,0.00,0.00,0.00,0.30,1.00,0.46,") != std::string::npos);

    auto both = invoke({"report", af, at, "--format", "md"});
    CHECK(both.out.find("| Always False |") < both.out.find("| Always True |"));

    auto written = invoke({"report", af, "--out", (tmp / "rep").string()});
    CHECK(written.code == 0);
    CHECK(read_file(tmp / "rep" / "report.csv") == read_file(tmp / "runs" / "af" / "report.csv"));

    CHECK(invoke({"report", (tmp / "missing.json").string()}).code == 2);
    CHECK(invoke({"report", af, "--format", "pdf"}).code == 2);
}

TEST_CASE("flags override environment, environment overrides the file") {
    testing::TempDir tmp;
    auto script = scripted_file(tmp, {{"llm", {final_json("Factual")}}});
    write_file(tmp / "fire.toml", "[llm]\nmodel = \"file-model\"\napi_key = \"file-key\"\n[agent]\nmax_steps = 3\nwindow = 2\n");
    auto config_of = [&](const std::vector<std::string>& extra, const cli::Environment& env, const std::string& id) {
        cli::Context ctx;
        ctx.env = env;
        std::vector<std::string> args{"verify", "x", "--config", (tmp / "fire.toml").string(), "--scripted", script,
                                      "--out", (tmp / "runs").string(), "--run-id", id};
        args.insert(args.end(), extra.begin(), extra.end());
        auto r = invoke(args, ctx);
        REQUIRE(r.code == 0);
        return json::parse(read_file(tmp / "runs" / id / "config.json"));
    };

    auto file_only = config_of({}, {}, "a");
    CHECK(file_only["agent"]["model"] == "file-model");
    CHECK(file_only["agent"]["max_steps"] == 3);
    CHECK(file_only["agent"]["window"] == 2);

    auto with_env = config_of({}, {{"FIRE_LLM_MODEL", "env-model"}, {"FIRE_LLM_API_KEY", "sk-secret"}}, "b");
    CHECK(with_env["agent"]["model"] == "env-model");
    CHECK(with_env["llm"]["api_key"] == "***");
    CHECK(read_file(tmp / "runs" / "b" / "config.json").find("sk-secret") == std::string::npos);
    CHECK(read_file(tmp / "runs" / "a" / "config.json").find("file-key") == std::string::npos);

    auto with_flag = config_of({"--model", "flag-model", "--max-steps", "4", "--window", "0"},
                               {{"FIRE_LLM_MODEL", "env-model"}}, "c");
    CHECK(with_flag["agent"]["model"] == "flag-model");
    CHECK(with_flag["agent"]["max_steps"] == 4);
    CHECK(with_flag["agent"]["window"].is_null());

    write_file(tmp / "broken.toml", "[agent\n");
    CHECK(invoke({"verify", "x", "--config", (tmp / "broken.toml").string(), "--scripted", script}).code == 2);
    write_file(tmp / "typed.toml", "[agent]\nmax_steps = \"five\"\n");
    CHECK(invoke({"verify", "x", "--config", (tmp / "typed.toml").string(), "--scripted", script}).code == 2);
}

TEST_CASE("replay serves recorded calls without the network") {
    testing::TempDir tmp;
    write_file(tmp / "d.jsonl", testing::synthetic_jsonl(2, 2));
    json per_claim;
    for (auto id : {"t0", "t1", "f0", "f1"})
        per_claim[id] = {query_json(std::string("q ") + id), final_json(id[0] == 't' ? "Factual" : "Non-Factual")};
    json search;
    for (auto id : {"t0", "t1", "f0", "f1"}) search[std::string("q ") + id] = std::string("snippet ") + id;
    auto script = scripted_file(tmp, {{"llm", {{"per_claim", per_claim}}}, {"search", search}, {"latency_ms", 1}});
    auto cache = (tmp / "cache").string();
    auto base = std::vector<std::string>{"run", "--dataset", (tmp / "d.jsonl").string(), "--replay", "--cache-dir", cache,
                                         "--run-id", "r"};

    auto record_args = base;
    record_args.insert(record_args.end(), {"--scripted", script, "--out", (tmp / "rec").string()});
    REQUIRE(invoke(record_args).code == 0);
    auto recorded = json::parse(read_file(tmp / "rec" / "r" / "ledger.json"));
    CHECK(recorded["search_cost"] == "0.0042");

    TripwireFactory trip;
    for (auto out : {"p1", "p2"}) {
        auto args = base;
        args.insert(args.end(), {"--out", (tmp / out).string()});
        auto r = invoke(args, trip.context());
        CHECK(r.code == 0);
    }
    CHECK(trip.contacts() == 0);
    CHECK(read_file(tmp / "p1" / "r" / "report.csv") == read_file(tmp / "p2" / "r" / "report.csv"));
    CHECK(read_file(tmp / "p1" / "r" / "traces.jsonl") == read_file(tmp / "p2" / "r" / "traces.jsonl"));
    auto replayed = json::parse(read_file(tmp / "p1" / "r" / "ledger.json"));
    CHECK(replayed["search_cost"] == "0");
    CHECK(replayed["counts"] == recorded["counts"]);
    CHECK(replayed["wall_time_seconds"] == recorded["wall_time_seconds"]);
}
