#include "rdcache/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "rdcache/aggregate.hpp"
#include "rdcache/errors.hpp"
#include "rdcache/missmodel.hpp"
#include "rdcache/optimizer.hpp"
#include "rdcache/rdist.hpp"
#include "rdcache/serialize.hpp"
#include "rdcache/simulator.hpp"
#include "rdcache/trace.hpp"
#include "rdcache/workloads.hpp"

namespace rdcache {

namespace {

using nlohmann::json;

json make_report(const std::string& command, json inputs, json result) {
    return json{{"schema", kReportSchema},
                {"command", command},
                {"inputs", std::move(inputs)},
                {"result", std::move(result)}};
}

json input_entry(const std::string& path) {
    return json{{"path", path}, {"fnv1a64", fnv1a64_file_hex(path)}};
}

void emit_report(const std::string& out_path, const json& report) {
    if (out_path.empty()) {
        std::cout << report.dump(2) << '\n';
    } else {
        write_json_file(out_path, report);
    }
}

std::string stem_of(const std::string& path) {
    return std::filesystem::path(path).stem().string();
}

AccessTrace load_line_trace(const std::string& path, const std::string& format,
                            uint64_t line_size, const std::string& app_id) {
    const auto bytes = parse_trace_file(path, trace_format_from_name(format));
    return to_line_trace(app_id.empty() ? stem_of(path) : app_id, bytes, line_size);
}

InterleavePolicy interleave_from_name(const std::string& name) {
    if (name == "proportional") return InterleavePolicy::proportional();
    const auto colon = name.find(':');
    if (colon != std::string::npos) {
        try {
            const uint64_t k = std::stoull(name.substr(0, colon));
            const uint64_t m = std::stoull(name.substr(colon + 1));
            return InterleavePolicy::bursts(k, m);
        } catch (const std::exception&) {
            // fall through to the error below
        }
    }
    throw ConfigError("interleave must be 'proportional' or 'k:m', got '" + name + "'");
}

std::string interleave_name(const InterleavePolicy& policy) {
    if (policy.is_proportional()) return "proportional";
    return std::to_string(policy.burst_a) + ":" + std::to_string(policy.burst_b);
}

LlcUpdatePolicy llc_update_from_name(const std::string& name) {
    if (name == "every-access") return LlcUpdatePolicy::EveryAccess;
    if (name == "on-l1-miss") return LlcUpdatePolicy::OnL1Miss;
    throw ConfigError("llc-update must be 'every-access' or 'on-l1-miss', got '" + name + "'");
}

PrivateLevelModel private_model_from_name(const std::string& name) {
    if (name == "standalone") return PrivateLevelModel::Standalone;
    if (name == "aggregated") return PrivateLevelModel::Aggregated;
    throw ConfigError("private-levels must be 'standalone' or 'aggregated', got '" + name + "'");
}

// Geometric mean of |values| with near-zero entries floored to keep the log
// finite; exact zeros stay meaningful through the floor.
double geomean_abs(const std::vector<double>& values) {
    if (values.empty()) return 0.0;
    double log_sum = 0.0;
    for (double value : values) log_sum += std::log(std::max(std::abs(value), 1e-12));
    return std::exp(log_sum / static_cast<double>(values.size()));
}

struct CommonOptions {
    std::string out;
    std::string format = "text";
    uint64_t line_size = kDefaultLineSizeBytes;
};

// ---- analyze ---------------------------------------------------------------

struct AnalyzeOptions : CommonOptions {
    std::string trace_path;
    std::string app_id;
};

int cmd_analyze(const AnalyzeOptions& opt) {
    const AccessTrace trace = load_line_trace(opt.trace_path, opt.format, opt.line_size, opt.app_id);
    const AppProfile profile = build_profile(trace);
    json inputs{{"trace", input_entry(opt.trace_path)}};
    emit_report(opt.out, make_report("analyze", std::move(inputs), profile_to_json(profile)));
    return kExitOk;
}

// ---- generate --------------------------------------------------------------

struct GenerateOptions : CommonOptions {
    std::string spec_path;
    std::string preset;
    std::string kind;
    uint64_t footprint = 0;
    uint64_t length = 0;
    uint64_t seed = 1;
    uint64_t stride = 1;
    double zipf_exponent = 1.0;
    std::string app_id;
};

int cmd_generate(const GenerateOptions& opt) {
    WorkloadSpec spec;
    json inputs = json::object();
    if (!opt.spec_path.empty()) {
        spec = workload_spec_from_json(read_json_file(opt.spec_path));
        inputs["spec"] = input_entry(opt.spec_path);
    } else if (!opt.preset.empty()) {
        spec = preset_spec(opt.preset);
        inputs["preset"] = opt.preset;
    } else {
        if (opt.kind.empty() || opt.footprint == 0) {
            throw ConfigError("generate needs --spec, --preset, or --kind with --footprint");
        }
        spec.kind = workload_kind_from_name(opt.kind);
        spec.footprint_lines = opt.footprint;
        spec.length = opt.length;
        spec.seed = opt.seed;
        spec.stride = opt.stride;
        spec.zipf_exponent = opt.zipf_exponent;
    }
    if (!opt.app_id.empty()) spec.app_id = opt.app_id;

    const AccessTrace trace = generate(spec);
    // Trace files carry byte addresses; scale the generated line ids so a
    // later analyze at the same line size recovers them exactly.
    std::vector<uint64_t> byte_addresses;
    byte_addresses.reserve(trace.accesses.size());
    for (uint64_t line : trace.accesses) byte_addresses.push_back(line * opt.line_size);
    write_trace_file(opt.out, byte_addresses, trace_format_from_name(opt.format));

    uint64_t distinct = build_profile(trace).footprint;
    json result{{"trace", opt.out},
                {"format", opt.format},
                {"app_id", trace.app_id},
                {"accesses", trace.accesses.size()},
                {"distinct_lines", distinct},
                {"line_size_bytes", opt.line_size},
                {"spec", workload_spec_to_json(spec)}};
    std::cout << make_report("generate", std::move(inputs), std::move(result)).dump(2) << '\n';
    return kExitOk;
}

// ---- aggregate -------------------------------------------------------------

struct AggregateOptions : CommonOptions {
    std::vector<std::string> profile_paths;
};

int cmd_aggregate(const AggregateOptions& opt) {
    const AppProfile a = profile_from_json(read_json_file(opt.profile_paths[0]));
    const AppProfile b = profile_from_json(read_json_file(opt.profile_paths[1]));
    const AggregatedHistogram aggregated = aggregate_pair(a, b);
    json inputs{{"profile_a", input_entry(opt.profile_paths[0])},
                {"profile_b", input_entry(opt.profile_paths[1])}};
    emit_report(opt.out, make_report("aggregate", std::move(inputs), aggregate_to_json(aggregated)));
    return kExitOk;
}

// ---- estimate --------------------------------------------------------------

struct EstimateOptions : CommonOptions {
    std::vector<std::string> profile_paths;
    std::string config_path;
    std::string aggregate_path;
    std::string private_levels = "standalone";
};

int cmd_estimate(const EstimateOptions& opt) {
    const AppProfile a = profile_from_json(read_json_file(opt.profile_paths[0]));
    const AppProfile b = profile_from_json(read_json_file(opt.profile_paths[1]));
    const CacheConfig config = cache_config_from_json(read_json_file(opt.config_path));

    json inputs{{"profile_a", input_entry(opt.profile_paths[0])},
                {"profile_b", input_entry(opt.profile_paths[1])},
                {"config", input_entry(opt.config_path)}};

    AggregatedHistogram aggregated;
    if (opt.aggregate_path.empty()) {
        aggregated = aggregate_pair(a, b);
    } else {
        aggregated = aggregate_from_json(read_json_file(opt.aggregate_path));
        inputs["aggregate"] = input_entry(opt.aggregate_path);
        if (aggregated.app_ids[0] != a.app_id || aggregated.app_ids[1] != b.app_id) {
            throw ConfigError("aggregate document apps do not match the given profiles");
        }
        if (aggregated.per_app[0].total != a.n || aggregated.per_app[1].total != b.n) {
            throw ConfigError("aggregate document totals do not match the given profiles");
        }
    }

    const EvalResult eval =
        evaluate_pair(a, b, aggregated, config, private_model_from_name(opt.private_levels));
    json result = eval_to_json(eval, config, {a.app_id, b.app_id}, {a.n, b.n});
    result["private_levels"] = opt.private_levels;
    emit_report(opt.out, make_report("estimate", std::move(inputs), std::move(result)));
    return kExitOk;
}

// ---- simulate --------------------------------------------------------------

struct SimulateOptions : CommonOptions {
    std::vector<std::string> trace_paths;
    std::string config_path;
    std::string llc_update = "every-access";
    std::string interleave = "proportional";
};

std::vector<AccessTrace> load_core_traces(const SimulateOptions& opt, uint64_t line_size) {
    std::vector<AccessTrace> traces;
    for (const std::string& path : opt.trace_paths) {
        traces.push_back(load_line_trace(path, opt.format, line_size, ""));
    }
    return traces;
}

int cmd_simulate(const SimulateOptions& opt) {
    const CacheConfig config = cache_config_from_json(read_json_file(opt.config_path));
    const std::vector<AccessTrace> traces = load_core_traces(opt, config.line_size_bytes);
    const InterleavePolicy interleave = interleave_from_name(opt.interleave);
    const SimResult sim =
        simulate_hierarchy(traces, config, llc_update_from_name(opt.llc_update), interleave);

    json inputs{{"config", input_entry(opt.config_path)}};
    for (size_t i = 0; i < opt.trace_paths.size(); ++i) {
        inputs["trace_" + std::string(1, static_cast<char>('a' + i))] = input_entry(opt.trace_paths[i]);
    }
    std::array<std::string, 2> app_ids{traces[0].app_id,
                                       traces.size() > 1 ? traces[1].app_id : ""};
    json result = sim_to_json(sim, config, app_ids);
    result["llc_update"] = opt.llc_update;
    result["interleave"] = interleave_name(interleave);
    emit_report(opt.out, make_report("simulate", std::move(inputs), std::move(result)));
    return kExitOk;
}

// ---- validate --------------------------------------------------------------

struct ValidateOptions : SimulateOptions {
    std::string private_levels = "standalone";
};

int cmd_validate(const ValidateOptions& opt) {
    const CacheConfig config = cache_config_from_json(read_json_file(opt.config_path));
    const std::vector<AccessTrace> traces = load_core_traces(opt, config.line_size_bytes);
    const InterleavePolicy interleave = interleave_from_name(opt.interleave);

    const AppProfile a = build_profile(traces[0]);
    AppProfile b;
    b.app_id = "idle";
    if (traces.size() > 1) b = build_profile(traces[1]);

    const AggregatedHistogram aggregated = aggregate_pair(a, b);
    const EvalResult model =
        evaluate_pair(a, b, aggregated, config, private_model_from_name(opt.private_levels));
    const SimResult sim =
        simulate_hierarchy(traces, config, llc_update_from_name(opt.llc_update), interleave);

    json level_errors = json::array();
    std::vector<double> defined;
    for (size_t l = 0; l < config.num_levels(); ++l) {
        json epsilon = json::array();
        for (size_t app = 0; app < 2; ++app) {
            try {
                const double e = error_rate(sim.misses[l][app], model.misses[l][app]);
                epsilon.push_back(e);
                defined.push_back(e);
            } catch (const UndefinedError&) {
                epsilon.push_back(nullptr);
            }
        }
        level_errors.push_back({{"level", l + 1}, {"epsilon", epsilon}});
    }
    double abs_sum = 0.0;
    for (double e : defined) abs_sum += std::abs(e);

    json inputs{{"config", input_entry(opt.config_path)}};
    for (size_t i = 0; i < opt.trace_paths.size(); ++i) {
        inputs["trace_" + std::string(1, static_cast<char>('a' + i))] = input_entry(opt.trace_paths[i]);
    }
    json result{{"model", eval_to_json(model, config, {a.app_id, b.app_id}, {a.n, b.n})},
                {"simulator", sim_to_json(sim, config, {a.app_id, b.app_id})},
                {"error_rates",
                 {{"levels", level_errors},
                  {"geomean_abs_epsilon", geomean_abs(defined)},
                  {"mean_abs_epsilon",
                   defined.empty() ? 0.0 : abs_sum / static_cast<double>(defined.size())}}},
                {"llc_update", opt.llc_update},
                {"interleave", interleave_name(interleave)},
                {"private_levels", opt.private_levels}};
    emit_report(opt.out, make_report("validate", std::move(inputs), std::move(result)));
    return kExitOk;
}

// ---- optimize --------------------------------------------------------------

struct OptimizeOptions : CommonOptions {
    std::vector<std::string> profile_paths;
    std::string space_path;
    std::string csv_path;
    std::string private_levels = "standalone";
    std::optional<double> budget;
    std::optional<double> slowdown_limit;
};

void write_pareto_csv(const std::string& path, const std::vector<DesignPoint>& front,
                      size_t level_count) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open output file: " + path);
    for (size_t l = 0; l < level_count; ++l) out << "size_l" << l + 1 << "_bytes,";
    out << "objective_f,cost_g";
    for (size_t l = 0; l < level_count; ++l) {
        out << ",misses_l" << l + 1 << "_app0,misses_l" << l + 1 << "_app1";
    }
    out << '\n';
    for (const DesignPoint& point : front) {
        for (size_t l = 0; l < level_count; ++l) out << point.config.levels[l].size_bytes << ',';
        out << point.eval.objective_f << ',' << point.eval.cost_g;
        for (size_t l = 0; l < level_count; ++l) {
            out << ',' << point.eval.misses[l][0] << ',' << point.eval.misses[l][1];
        }
        out << '\n';
    }
}

int cmd_optimize(const OptimizeOptions& opt) {
    if (opt.budget.has_value() == opt.slowdown_limit.has_value()) {
        throw ConfigError("optimize needs exactly one of --budget or --slowdown-limit");
    }
    const AppProfile a = profile_from_json(read_json_file(opt.profile_paths[0]));
    const AppProfile b = profile_from_json(read_json_file(opt.profile_paths[1]));
    const DesignSpace space = design_space_from_json(read_json_file(opt.space_path));

    const OptimizeMode mode = opt.budget ? OptimizeMode::Budget : OptimizeMode::Slowdown;
    const double limit = opt.budget ? *opt.budget : *opt.slowdown_limit;
    const OptimizeOutcome outcome =
        optimize(a, b, space, mode, limit, private_model_from_name(opt.private_levels));
    const std::vector<DesignPoint> front = pareto_front(outcome.points);

    json ranked = json::array();
    for (const DesignPoint& point : outcome.ranked) ranked.push_back(design_point_to_json(point));
    json pareto = json::array();
    for (const DesignPoint& point : front) pareto.push_back(design_point_to_json(point));

    json result{{"mode", opt.budget ? "budget" : "slowdown"},
                {"limit", limit},
                {"evaluated", outcome.points.size()},
                {"feasible_count", outcome.ranked.size()},
                {"winner", outcome.winner ? design_point_to_json(*outcome.winner) : json(nullptr)},
                {"ranked", std::move(ranked)},
                {"pareto", std::move(pareto)},
                {"private_levels", opt.private_levels}};
    json inputs{{"profile_a", input_entry(opt.profile_paths[0])},
                {"profile_b", input_entry(opt.profile_paths[1])},
                {"space", input_entry(opt.space_path)}};

    if (!opt.csv_path.empty()) write_pareto_csv(opt.csv_path, front, space.levels.size());
    emit_report(opt.out, make_report("optimize", std::move(inputs), std::move(result)));
    return outcome.winner ? kExitOk : kExitInfeasible;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"reuse-distance shared-cache modeling and design exploration"};
    app.require_subcommand(1);

    AnalyzeOptions analyze_opt;
    auto* analyze = app.add_subcommand("analyze", "build a locality profile from a trace");
    analyze->add_option("--trace", analyze_opt.trace_path, "trace file")->required();
    analyze->add_option("--format", analyze_opt.format, "trace format: text|binary");
    analyze->add_option("--line-size", analyze_opt.line_size, "cache line size in bytes");
    analyze->add_option("--app-id", analyze_opt.app_id, "profile identifier");
    analyze->add_option("--out", analyze_opt.out, "report destination");

    GenerateOptions generate_opt;
    auto* gen = app.add_subcommand("generate", "write a synthetic workload trace");
    gen->add_option("--spec", generate_opt.spec_path, "workload spec document");
    gen->add_option("--preset", generate_opt.preset, "workload preset name");
    gen->add_option("--kind", generate_opt.kind,
                    "cyclic_sweep|zipf_reuse|random_uniform|pointer_chase");
    gen->add_option("--footprint", generate_opt.footprint, "distinct lines");
    gen->add_option("--length", generate_opt.length, "access count");
    gen->add_option("--seed", generate_opt.seed, "generator seed");
    gen->add_option("--stride", generate_opt.stride, "sweep stride");
    gen->add_option("--zipf-exponent", generate_opt.zipf_exponent, "popularity skew");
    gen->add_option("--app-id", generate_opt.app_id, "trace identifier");
    gen->add_option("--format", generate_opt.format, "trace format: text|binary");
    gen->add_option("--line-size", generate_opt.line_size, "byte-address scale");
    gen->add_option("--out", generate_opt.out, "trace destination")->required();

    AggregateOptions aggregate_opt;
    auto* agg = app.add_subcommand("aggregate", "combine two profiles under concurrency");
    agg->add_option("--profile", aggregate_opt.profile_paths, "profile document (give twice)")
        ->expected(2);
    agg->add_option("--out", aggregate_opt.out, "report destination");

    EstimateOptions estimate_opt;
    auto* est = app.add_subcommand("estimate", "model per-level miss counts, f and g");
    est->add_option("--profile", estimate_opt.profile_paths, "profile document (give twice)")
        ->expected(2);
    est->add_option("--config", estimate_opt.config_path, "cache config document")->required();
    est->add_option("--aggregate", estimate_opt.aggregate_path, "precomputed aggregate document");
    est->add_option("--private-levels", estimate_opt.private_levels, "standalone|aggregated");
    est->add_option("--out", estimate_opt.out, "report destination");

    SimulateOptions simulate_opt;
    auto* sim = app.add_subcommand("simulate", "trace-driven hierarchy simulation");
    sim->add_option("--trace", simulate_opt.trace_paths, "per-core trace file (1 or 2)")
        ->expected(1, 2);
    sim->add_option("--format", simulate_opt.format, "trace format: text|binary");
    sim->add_option("--config", simulate_opt.config_path, "cache config document")->required();
    sim->add_option("--llc-update", simulate_opt.llc_update, "every-access|on-l1-miss");
    sim->add_option("--interleave", simulate_opt.interleave, "proportional|k:m");
    sim->add_option("--out", simulate_opt.out, "report destination");

    ValidateOptions validate_opt;
    auto* val = app.add_subcommand("validate", "model vs simulator error rates");
    val->add_option("--trace", validate_opt.trace_paths, "per-core trace file (1 or 2)")
        ->expected(1, 2);
    val->add_option("--format", validate_opt.format, "trace format: text|binary");
    val->add_option("--config", validate_opt.config_path, "cache config document")->required();
    val->add_option("--llc-update", validate_opt.llc_update, "every-access|on-l1-miss");
    val->add_option("--interleave", validate_opt.interleave, "proportional|k:m");
    val->add_option("--private-levels", validate_opt.private_levels, "standalone|aggregated");
    val->add_option("--out", validate_opt.out, "report destination");

    OptimizeOptions optimize_opt;
    auto* opt = app.add_subcommand("optimize", "scan a design space for the best config");
    opt->add_option("--profile", optimize_opt.profile_paths, "profile document (give twice)")
        ->expected(2);
    opt->add_option("--space", optimize_opt.space_path, "design space document")->required();
    double budget_value = 0.0, slowdown_value = 0.0;
    auto* budget_flag = opt->add_option("--budget", budget_value, "cost limit G (min f)");
    auto* slowdown_flag =
        opt->add_option("--slowdown-limit", slowdown_value, "slowdown limit F (min g)");
    opt->add_option("--private-levels", optimize_opt.private_levels, "standalone|aggregated");
    opt->add_option("--csv", optimize_opt.csv_path, "Pareto front CSV destination");
    opt->add_option("--out", optimize_opt.out, "report destination");

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("rdcache");
    for (const std::string& arg : args) argv.push_back(arg.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (analyze->parsed()) return cmd_analyze(analyze_opt);
        if (gen->parsed()) return cmd_generate(generate_opt);
        if (agg->parsed()) return cmd_aggregate(aggregate_opt);
        if (est->parsed()) return cmd_estimate(estimate_opt);
        if (sim->parsed()) return cmd_simulate(simulate_opt);
        if (val->parsed()) return cmd_validate(validate_opt);
        if (opt->parsed()) {
            if (budget_flag->count() > 0) optimize_opt.budget = budget_value;
            if (slowdown_flag->count() > 0) optimize_opt.slowdown_limit = slowdown_value;
            return cmd_optimize(optimize_opt);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    }
    return kExitUsage;
}

}  // namespace rdcache
