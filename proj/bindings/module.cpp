#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "rdcache/aggregate.hpp"
#include "rdcache/cli.hpp"
#include "rdcache/errors.hpp"
#include "rdcache/missmodel.hpp"
#include "rdcache/optimizer.hpp"
#include "rdcache/rdist.hpp"
#include "rdcache/serialize.hpp"
#include "rdcache/simulator.hpp"
#include "rdcache/trace.hpp"
#include "rdcache/workloads.hpp"

namespace py = pybind11;
using namespace rdcache;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Reuse-distance shared-cache modeling and design exploration";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<UndefinedError>(m, "UndefinedError", PyExc_ValueError);

    // trace
    py::enum_<TraceFormat>(m, "TraceFormat")
        .value("TEXT_HEX", TraceFormat::TextHex)
        .value("BINARY_LE64", TraceFormat::BinaryLe64);
    py::class_<AccessTrace>(m, "AccessTrace")
        .def(py::init<>())
        .def(py::init([](std::string app_id, std::vector<uint64_t> accesses, uint64_t line_size) {
                 AccessTrace trace;
                 trace.app_id = std::move(app_id);
                 trace.accesses = std::move(accesses);
                 trace.line_size_bytes = line_size;
                 return trace;
             }),
             py::arg("app_id"), py::arg("accesses"), py::arg("line_size_bytes") = kDefaultLineSizeBytes)
        .def_readwrite("app_id", &AccessTrace::app_id)
        .def_readwrite("accesses", &AccessTrace::accesses)
        .def_readwrite("line_size_bytes", &AccessTrace::line_size_bytes)
        .def("__len__", [](const AccessTrace& t) { return t.accesses.size(); });
    m.def("parse_trace_file", &parse_trace_file, py::arg("path"), py::arg("format"));
    m.def(
        "write_trace_file",
        [](const std::string& path, const std::vector<uint64_t>& addresses, TraceFormat format) {
            write_trace_file(path, addresses, format);
        },
        py::arg("path"), py::arg("addresses"), py::arg("format"));
    m.def(
        "to_line_trace",
        [](std::string app_id, const std::vector<uint64_t>& bytes, uint64_t line_size) {
            return to_line_trace(std::move(app_id), bytes, line_size);
        },
        py::arg("app_id"), py::arg("byte_addresses"), py::arg("line_size_bytes") = kDefaultLineSizeBytes);

    // rdist
    py::class_<ReuseHistogram>(m, "ReuseHistogram")
        .def(py::init<>())
        .def_readwrite("finite", &ReuseHistogram::finite)
        .def_readwrite("cold_count", &ReuseHistogram::cold_count)
        .def_readwrite("total", &ReuseHistogram::total)
        .def("add", &ReuseHistogram::add, py::arg("distance"), py::arg("count") = 1)
        .def("add_cold", &ReuseHistogram::add_cold, py::arg("count") = 1);
    py::class_<AppProfile>(m, "AppProfile")
        .def(py::init<>())
        .def_readwrite("app_id", &AppProfile::app_id)
        .def_readwrite("histogram", &AppProfile::histogram)
        .def_readwrite("rd_table", &AppProfile::rd_table)
        .def_readwrite("n", &AppProfile::n)
        .def_readwrite("footprint", &AppProfile::footprint);
    m.def("build_profile", &build_profile, py::arg("trace"));
    m.def(
        "reuse_distance_sequence",
        [](const AccessTrace& trace) {
            std::vector<std::pair<std::optional<uint64_t>, uint64_t>> out;
            for (const ReuseEvent& event : reuse_distance_sequence(trace)) {
                out.emplace_back(event.is_cold() ? std::nullopt : std::optional<uint64_t>(event.distance),
                                 event.span);
            }
            return out;
        },
        py::arg("trace"), "per-access (distance, span); distance is None on first touch");

    // aggregate
    py::class_<AggregatedHistogram>(m, "AggregatedHistogram")
        .def(py::init<>())
        .def_readwrite("app_ids", &AggregatedHistogram::app_ids)
        .def_readwrite("per_app", &AggregatedHistogram::per_app)
        .def_readwrite("combined", &AggregatedHistogram::combined);
    py::class_<ShiftRecord>(m, "ShiftRecord")
        .def_readonly("distance", &ShiftRecord::distance)
        .def_readonly("count", &ShiftRecord::count)
        .def_readonly("avg_span", &ShiftRecord::avg_span)
        .def_readonly("interleaved", &ShiftRecord::interleaved)
        .def_readonly("unique", &ShiftRecord::unique)
        .def_readonly("shifted", &ShiftRecord::shifted);
    m.def("access_ratio", &access_ratio, py::arg("base"), py::arg("other"));
    m.def("interleaved_span", &interleaved_span, py::arg("avg_span"), py::arg("ratio"));
    m.def("unique_count_lookup", &unique_count_lookup, py::arg("other"), py::arg("delta"));
    m.def("shift_plan", &shift_plan, py::arg("base"), py::arg("other"));
    m.def("shift_histogram", &shift_histogram, py::arg("base"), py::arg("other"));
    m.def("aggregate_pair", &aggregate_pair, py::arg("a"), py::arg("b"));

    // missmodel
    m.attr("FULLY_ASSOCIATIVE") = kFullyAssociative;
    py::enum_<CacheScope>(m, "CacheScope")
        .value("PRIVATE", CacheScope::Private)
        .value("SHARED", CacheScope::Shared);
    py::class_<CacheLevelSpec>(m, "CacheLevelSpec")
        .def(py::init<>())
        .def(py::init([](uint64_t size_bytes, uint32_t ways, CacheScope scope,
                         uint64_t miss_penalty_cycles, double unit_cost_per_byte) {
                 return CacheLevelSpec{size_bytes, ways, scope, miss_penalty_cycles,
                                       unit_cost_per_byte};
             }),
             py::arg("size_bytes"), py::arg("ways") = kFullyAssociative,
             py::arg("scope") = CacheScope::Private, py::arg("miss_penalty_cycles") = 0,
             py::arg("unit_cost_per_byte") = 0.0)
        .def_readwrite("size_bytes", &CacheLevelSpec::size_bytes)
        .def_readwrite("ways", &CacheLevelSpec::ways)
        .def_readwrite("scope", &CacheLevelSpec::scope)
        .def_readwrite("miss_penalty_cycles", &CacheLevelSpec::miss_penalty_cycles)
        .def_readwrite("unit_cost_per_byte", &CacheLevelSpec::unit_cost_per_byte);
    py::class_<CacheConfig>(m, "CacheConfig")
        .def(py::init<>())
        .def(py::init([](uint64_t line_size, uint32_t cores, std::vector<CacheLevelSpec> levels) {
                 CacheConfig config;
                 config.line_size_bytes = line_size;
                 config.core_count = cores;
                 config.levels = std::move(levels);
                 return config;
             }),
             py::arg("line_size_bytes"), py::arg("core_count"), py::arg("levels"))
        .def_readwrite("line_size_bytes", &CacheConfig::line_size_bytes)
        .def_readwrite("core_count", &CacheConfig::core_count)
        .def_readwrite("levels", &CacheConfig::levels)
        .def("validate", &CacheConfig::validate)
        .def("lines", &CacheConfig::lines, py::arg("level"));
    m.def(
        "hit_miss_counts",
        [](const ReuseHistogram& histogram, uint64_t size_lines) {
            const HitMiss counts = hit_miss_counts(histogram, size_lines);
            return std::make_pair(counts.hits, counts.misses);
        },
        py::arg("histogram"), py::arg("size_lines"));
    py::enum_<PrivateLevelModel>(m, "PrivateLevelModel")
        .value("STANDALONE", PrivateLevelModel::Standalone)
        .value("AGGREGATED", PrivateLevelModel::Aggregated);
    m.def("hierarchy_miss_counts", &hierarchy_miss_counts, py::arg("a"), py::arg("b"),
          py::arg("aggregated"), py::arg("config"),
          py::arg("private_model") = PrivateLevelModel::Standalone);
    m.def("slowdown_objective", &slowdown_objective, py::arg("misses"), py::arg("config"));
    m.def("cache_cost", &cache_cost, py::arg("config"));
    py::class_<EvalResult>(m, "EvalResult")
        .def_readonly("misses", &EvalResult::misses)
        .def_readonly("objective_f", &EvalResult::objective_f)
        .def_readonly("cost_g", &EvalResult::cost_g);
    m.def("evaluate_pair", &evaluate_pair, py::arg("a"), py::arg("b"), py::arg("aggregated"),
          py::arg("config"), py::arg("private_model") = PrivateLevelModel::Standalone);

    // simulator
    py::class_<MergedAccess>(m, "MergedAccess")
        .def_readonly("owner", &MergedAccess::owner)
        .def_readonly("line", &MergedAccess::line);
    py::class_<MergedTrace>(m, "MergedTrace")
        .def_readonly("app_ids", &MergedTrace::app_ids)
        .def_readonly("accesses", &MergedTrace::accesses)
        .def("__len__", [](const MergedTrace& t) { return t.accesses.size(); });
    py::class_<InterleavePolicy>(m, "InterleavePolicy")
        .def_static("proportional", &InterleavePolicy::proportional)
        .def_static("bursts", &InterleavePolicy::bursts, py::arg("k"), py::arg("m"));
    m.def("interleave_traces", &interleave_traces, py::arg("a"), py::arg("b"),
          py::arg("policy") = InterleavePolicy::proportional());
    py::class_<FlatSimResult>(m, "FlatSimResult")
        .def_readonly("hits", &FlatSimResult::hits)
        .def_readonly("misses", &FlatSimResult::misses);
    m.def(
        "simulate_flat_lru",
        [](const MergedTrace& trace, uint64_t size_lines, uint32_t ways) {
            return simulate_flat_lru(trace, size_lines, ways);
        },
        py::arg("trace"), py::arg("size_lines"), py::arg("ways") = kFullyAssociative);
    m.def(
        "simulate_flat_lru",
        [](const AccessTrace& trace, uint64_t size_lines, uint32_t ways) {
            return simulate_flat_lru(trace, size_lines, ways);
        },
        py::arg("trace"), py::arg("size_lines"), py::arg("ways") = kFullyAssociative);
    py::enum_<LlcUpdatePolicy>(m, "LlcUpdatePolicy")
        .value("EVERY_ACCESS", LlcUpdatePolicy::EveryAccess)
        .value("ON_L1_MISS", LlcUpdatePolicy::OnL1Miss);
    py::class_<SimResult>(m, "SimResult")
        .def_readonly("hits", &SimResult::hits)
        .def_readonly("misses", &SimResult::misses);
    m.def("simulate_hierarchy", &simulate_hierarchy, py::arg("per_core_traces"), py::arg("config"),
          py::arg("policy"), py::arg("interleave") = InterleavePolicy::proportional());
    m.def("error_rate", &error_rate, py::arg("simulated_misses"), py::arg("modeled_misses"));

    // workloads
    py::enum_<WorkloadKind>(m, "WorkloadKind")
        .value("CYCLIC_SWEEP", WorkloadKind::CyclicSweep)
        .value("ZIPF_REUSE", WorkloadKind::ZipfReuse)
        .value("RANDOM_UNIFORM", WorkloadKind::RandomUniform)
        .value("POINTER_CHASE", WorkloadKind::PointerChase);
    py::class_<WorkloadSpec>(m, "WorkloadSpec")
        .def(py::init<>())
        .def_readwrite("kind", &WorkloadSpec::kind)
        .def_readwrite("footprint_lines", &WorkloadSpec::footprint_lines)
        .def_readwrite("length", &WorkloadSpec::length)
        .def_readwrite("seed", &WorkloadSpec::seed)
        .def_readwrite("stride", &WorkloadSpec::stride)
        .def_readwrite("zipf_exponent", &WorkloadSpec::zipf_exponent)
        .def_readwrite("app_id", &WorkloadSpec::app_id);
    m.def("generate", &generate, py::arg("spec"));
    py::class_<WorkloadPreset>(m, "WorkloadPreset")
        .def_readonly("name", &WorkloadPreset::name)
        .def_readonly("category", &WorkloadPreset::category)
        .def_readonly("spec", &WorkloadPreset::spec);
    m.def("preset_suite", &preset_suite);
    m.def("preset_spec", &preset_spec, py::arg("name"));

    // optimizer
    py::class_<LevelRange>(m, "LevelRange")
        .def(py::init<>())
        .def_readwrite("min_size_bytes", &LevelRange::min_size_bytes)
        .def_readwrite("max_size_bytes", &LevelRange::max_size_bytes)
        .def_readwrite("ways", &LevelRange::ways)
        .def_readwrite("scope", &LevelRange::scope)
        .def_readwrite("miss_penalty_cycles", &LevelRange::miss_penalty_cycles)
        .def_readwrite("unit_cost_per_byte", &LevelRange::unit_cost_per_byte);
    py::class_<DesignSpace>(m, "DesignSpace")
        .def(py::init<>())
        .def_readwrite("line_size_bytes", &DesignSpace::line_size_bytes)
        .def_readwrite("core_count", &DesignSpace::core_count)
        .def_readwrite("levels", &DesignSpace::levels);
    m.def("enumerate_space", &enumerate_space, py::arg("space"));
    py::enum_<OptimizeMode>(m, "OptimizeMode")
        .value("BUDGET", OptimizeMode::Budget)
        .value("SLOWDOWN", OptimizeMode::Slowdown);
    py::class_<DesignPoint>(m, "DesignPoint")
        .def_readonly("config", &DesignPoint::config)
        .def_readonly("eval", &DesignPoint::eval)
        .def_readonly("feasible", &DesignPoint::feasible);
    py::class_<OptimizeOutcome>(m, "OptimizeOutcome")
        .def_readonly("points", &OptimizeOutcome::points)
        .def_readonly("ranked", &OptimizeOutcome::ranked)
        .def_readonly("winner", &OptimizeOutcome::winner);
    m.def("optimize", &optimize, py::arg("a"), py::arg("b"), py::arg("space"), py::arg("mode"),
          py::arg("limit"), py::arg("private_model") = PrivateLevelModel::Standalone);
    m.def("pareto_front", &pareto_front, py::arg("points"));

    // document bridges and the CLI entry point
    m.def("profile_to_json", [](const AppProfile& p) { return profile_to_json(p).dump(2); });
    m.def("profile_from_json", [](const std::string& text) {
        return profile_from_json(nlohmann::json::parse(text));
    });
    m.def("config_to_json", [](const CacheConfig& c) { return cache_config_to_json(c).dump(2); });
    m.def("config_from_json", [](const std::string& text) {
        return cache_config_from_json(nlohmann::json::parse(text));
    });
    m.def("space_to_json", [](const DesignSpace& s) { return design_space_to_json(s).dump(2); });
    m.def("space_from_json", [](const std::string& text) {
        return design_space_from_json(nlohmann::json::parse(text));
    });
    m.def("run_cli", &run_cli, py::arg("args"), "run a CLI subcommand in-process");
}
