#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rdcache/cli.hpp"
#include "rdcache/serialize.hpp"
#include "support/naive.hpp"

using namespace rdcache;
using nlohmann::json;

namespace {

namespace fs = std::filesystem;

fs::path scratch_dir() {
    static const fs::path dir = [] {
        const fs::path path =
            fs::temp_directory_path() / ("rdcache_cli_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
        return path;
    }();
    return dir;
}

// run_cli writes reports to stdout when --out is absent; keep test output clean
struct CoutCapture {
    std::ostringstream captured;
    std::streambuf* saved = nullptr;
    CoutCapture() : saved(std::cout.rdbuf(captured.rdbuf())) {}
    ~CoutCapture() { std::cout.rdbuf(saved); }
};

int run(const std::vector<std::string>& args) {
    CoutCapture capture;
    return run_cli(args);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

fs::path write_fig2_trace() {
    const fs::path path = scratch_dir() / "fig2.trace";
    std::ofstream out(path);
    for (uint64_t byte_address : {0x0, 0x40, 0x80, 0x0, 0xc0, 0x40, 0x40, 0x0, 0x0, 0x40}) {
        out << "0x" << std::hex << byte_address << '\n';
    }
    return path;
}

fs::path write_config(uint64_t l1_lines, uint64_t l2_lines, uint32_t cores,
                      const std::string& name) {
    CacheConfig config;
    config.core_count = cores;
    config.levels.push_back({l1_lines * 64, kFullyAssociative, CacheScope::Private, 10, 1.0});
    config.levels.push_back({l2_lines * 64, kFullyAssociative, CacheScope::Shared, 130, 0.25});
    const fs::path path = scratch_dir() / name;
    write_json_file(path.string(), cache_config_to_json(config));
    return path;
}

}  // namespace

TEST_CASE("analyze reproduces the worked example histogram") {
    const fs::path trace = write_fig2_trace();
    const fs::path out = scratch_dir() / "fig2_profile.json";
    CHECK(run({"analyze", "--trace", trace.string(), "--app-id", "fig2", "--out", out.string()}) ==
          kExitOk);

    const json report = read_json_file(out.string());
    CHECK(report["command"] == "analyze");
    CHECK(report["inputs"]["trace"]["path"] == trace.string());
    const json& result = report["result"];
    CHECK(result["histogram"] == json::parse("[[0,2],[1,1],[2,2],[3,1]]"));
    CHECK(result["cold_count"] == 4);
    CHECK(result["n"] == 10);
}

TEST_CASE("reports are deterministic") {
    const fs::path trace = write_fig2_trace();
    const fs::path out_a = scratch_dir() / "det_a.json";
    const fs::path out_b = scratch_dir() / "det_b.json";
    REQUIRE(run({"analyze", "--trace", trace.string(), "--out", out_a.string()}) == kExitOk);
    REQUIRE(run({"analyze", "--trace", trace.string(), "--out", out_b.string()}) == kExitOk);
    CHECK(slurp(out_a) == slurp(out_b));
}

TEST_CASE("generate is seed-deterministic and analyzable") {
    const fs::path trace_a = scratch_dir() / "gen_a.trace";
    const fs::path trace_b = scratch_dir() / "gen_b.trace";
    const std::vector<std::string> base{"generate", "--kind",  "zipf_reuse", "--footprint", "512",
                                        "--length", "20000",   "--seed",     "9"};
    auto with_out = [&](const fs::path& out) {
        std::vector<std::string> args = base;
        args.insert(args.end(), {"--out", out.string()});
        return args;
    };
    REQUIRE(run(with_out(trace_a)) == kExitOk);
    REQUIRE(run(with_out(trace_b)) == kExitOk);
    CHECK(fnv1a64_file_hex(trace_a.string()) == fnv1a64_file_hex(trace_b.string()));

    const fs::path profile = scratch_dir() / "gen_a_profile.json";
    REQUIRE(run({"analyze", "--trace", trace_a.string(), "--out", profile.string()}) == kExitOk);
    const AppProfile loaded = profile_from_json(read_json_file(profile.string()));
    CHECK(loaded.n == 20000);
    CHECK(loaded.footprint <= 512);
}

TEST_CASE("pipeline documents equal the in-process run bit for bit") {
    // two synthetic apps, written and re-read through every document format
    const fs::path trace_a = scratch_dir() / "pipe_a.trace";
    const fs::path trace_b = scratch_dir() / "pipe_b.trace";
    REQUIRE(run({"generate", "--kind", "cyclic_sweep", "--footprint", "700", "--length", "30000",
                 "--out", trace_a.string()}) == kExitOk);
    REQUIRE(run({"generate", "--kind", "zipf_reuse", "--footprint", "900", "--length", "24000",
                 "--seed", "4", "--out", trace_b.string()}) == kExitOk);

    const fs::path profile_a = scratch_dir() / "pipe_a_profile.json";
    const fs::path profile_b = scratch_dir() / "pipe_b_profile.json";
    REQUIRE(run({"analyze", "--trace", trace_a.string(), "--out", profile_a.string()}) == kExitOk);
    REQUIRE(run({"analyze", "--trace", trace_b.string(), "--out", profile_b.string()}) == kExitOk);

    const fs::path aggregate_doc = scratch_dir() / "pipe_aggregate.json";
    REQUIRE(run({"aggregate", "--profile", profile_a.string(), "--profile", profile_b.string(),
                 "--out", aggregate_doc.string()}) == kExitOk);

    const fs::path config = write_config(64, 1024, 2, "pipe_config.json");
    const fs::path estimate_files = scratch_dir() / "pipe_estimate.json";
    REQUIRE(run({"estimate", "--profile", profile_a.string(), "--profile", profile_b.string(),
                 "--config", config.string(), "--out", estimate_files.string()}) == kExitOk);

    // the same estimate fed by the precomputed aggregate document
    const fs::path estimate_agg = scratch_dir() / "pipe_estimate_agg.json";
    REQUIRE(run({"estimate", "--profile", profile_a.string(), "--profile", profile_b.string(),
                 "--config", config.string(), "--aggregate", aggregate_doc.string(), "--out",
                 estimate_agg.string()}) == kExitOk);
    CHECK(read_json_file(estimate_files.string())["result"] ==
          read_json_file(estimate_agg.string())["result"]);

    // in-process reference: library calls on the same inputs
    const AppProfile a = profile_from_json(read_json_file(profile_a.string()));
    const AppProfile b = profile_from_json(read_json_file(profile_b.string()));
    const CacheConfig cache_config = cache_config_from_json(read_json_file(config.string()));
    const EvalResult eval =
        evaluate_pair(a, b, aggregate_pair(a, b), cache_config);
    json expected = eval_to_json(eval, cache_config, {a.app_id, b.app_id}, {a.n, b.n});
    expected["private_levels"] = "standalone";
    CHECK(read_json_file(estimate_files.string())["result"] == expected);
}

TEST_CASE("validate reports zero error when the model is exact") {
    const fs::path trace = write_fig2_trace();
    const fs::path config = write_config(2, 4, 1, "validate_config.json");
    const fs::path out = scratch_dir() / "validate.json";
    CHECK(run({"validate", "--trace", trace.string(), "--config", config.string(), "--out",
               out.string()}) == kExitOk);

    const json result = read_json_file(out.string())["result"];
    for (const auto& level : result["error_rates"]["levels"]) {
        for (const auto& epsilon : level["epsilon"]) CHECK(epsilon == 0.0);
    }
    CHECK(result["error_rates"]["geomean_abs_epsilon"] < 1e-9);
    CHECK(result["model"]["levels"][0]["misses"][0] == 7);
    CHECK(result["simulator"]["levels"][0]["misses"][0] == 7);
}

TEST_CASE("simulate honors policies and interleave syntax") {
    const fs::path trace = write_fig2_trace();
    const fs::path config = write_config(2, 4, 2, "simulate_config.json");
    const fs::path trace_b = scratch_dir() / "partner.trace";
    {
        std::ofstream out(trace_b);
        out << "0x1000\n0x1040\n0x1000\n0x1040\n";
    }
    const fs::path out = scratch_dir() / "simulate.json";
    CHECK(run({"simulate", "--trace", trace.string(), "--trace", trace_b.string(), "--config",
               config.string(), "--llc-update", "on-l1-miss", "--interleave", "2:1", "--out",
               out.string()}) == kExitOk);
    const json result = read_json_file(out.string())["result"];
    CHECK(result["llc_update"] == "on-l1-miss");
    CHECK(result["interleave"] == "2:1");
    CHECK(result["levels"].size() == 2);

    CHECK(run({"simulate", "--trace", trace.string(), "--trace", trace_b.string(), "--config",
               config.string(), "--interleave", "bogus"}) == kExitInput);
}

TEST_CASE("optimize emits a winner, a ranked list and a pareto front") {
    const fs::path trace_a = scratch_dir() / "opt_a.trace";
    const fs::path trace_b = scratch_dir() / "opt_b.trace";
    REQUIRE(run({"generate", "--kind", "zipf_reuse", "--footprint", "2048", "--length", "40000",
                 "--seed", "21", "--out", trace_a.string()}) == kExitOk);
    REQUIRE(run({"generate", "--kind", "cyclic_sweep", "--footprint", "1500", "--length", "30000",
                 "--out", trace_b.string()}) == kExitOk);
    const fs::path profile_a = scratch_dir() / "opt_a_profile.json";
    const fs::path profile_b = scratch_dir() / "opt_b_profile.json";
    REQUIRE(run({"analyze", "--trace", trace_a.string(), "--out", profile_a.string()}) == kExitOk);
    REQUIRE(run({"analyze", "--trace", trace_b.string(), "--out", profile_b.string()}) == kExitOk);

    DesignSpace space;
    space.core_count = 2;
    space.levels.push_back({1 << 12, 1 << 14, kFullyAssociative, CacheScope::Private, 10, 1.0});
    space.levels.push_back({1 << 15, 1 << 18, kFullyAssociative, CacheScope::Shared, 130, 0.25});
    const fs::path space_path = scratch_dir() / "opt_space.json";
    write_json_file(space_path.string(), design_space_to_json(space));

    const fs::path out = scratch_dir() / "optimize.json";
    const fs::path csv = scratch_dir() / "pareto.csv";
    CHECK(run({"optimize", "--profile", profile_a.string(), "--profile", profile_b.string(),
               "--space", space_path.string(), "--budget", "1e9", "--csv", csv.string(), "--out",
               out.string()}) == kExitOk);

    const json result = read_json_file(out.string())["result"];
    CHECK(result["mode"] == "budget");
    CHECK_FALSE(result["winner"].is_null());
    CHECK(result["feasible_count"].get<size_t>() > 0);
    CHECK(result["pareto"].size() >= 1);

    const std::string csv_text = slurp(csv);
    CHECK(csv_text.find("size_l1_bytes,size_l2_bytes,objective_f,cost_g") == 0);
    CHECK(std::count(csv_text.begin(), csv_text.end(), '\n') ==
          static_cast<long>(result["pareto"].size()) + 1);

    // an unsatisfiable budget is reported as infeasible with exit code 3
    const fs::path infeasible_out = scratch_dir() / "infeasible.json";
    CHECK(run({"optimize", "--profile", profile_a.string(), "--profile", profile_b.string(),
               "--space", space_path.string(), "--budget", "1", "--out",
               infeasible_out.string()}) == kExitInfeasible);
    const json infeasible = read_json_file(infeasible_out.string())["result"];
    CHECK(infeasible["winner"].is_null());
    CHECK(infeasible["feasible_count"] == 0);

    // both constraint flags at once is a usage problem, reported as input error
    CHECK(run({"optimize", "--profile", profile_a.string(), "--profile", profile_b.string(),
               "--space", space_path.string(), "--budget", "1", "--slowdown-limit", "2"}) ==
          kExitInput);
}

TEST_CASE("usage and input errors") {
    CHECK(run({"frobnicate"}) == kExitUsage);
    CHECK(run({}) == kExitUsage);
    CHECK(run({"analyze"}) == kExitUsage);  // missing required --trace
    CHECK(run({"analyze", "--trace", (scratch_dir() / "missing.trace").string()}) == kExitInput);

    const fs::path bad = scratch_dir() / "bad.trace";
    {
        std::ofstream out(bad);
        out << "0x10\nnot-hex\n";
    }
    CHECK(run({"analyze", "--trace", bad.string()}) == kExitInput);
    CHECK(run({"analyze", "--trace", bad.string(), "--format", "morse"}) == kExitInput);
}
