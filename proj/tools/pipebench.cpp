// pipebench: generate synthetic pipelines, group them with a strategy, run
// the deployment simulator and export experiment matrices, mirroring the
// library modules one subcommand each.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pipeopt/bench.hpp"
#include "pipeopt/json_io.hpp"
#include "pipeopt/pddl.hpp"
#include "pipeopt/planning.hpp"
#include "pipeopt/simulator.hpp"
#include "pipeopt/strategies.hpp"
#include "pipeopt/workload.hpp"

namespace {

using namespace pipeopt;

struct WorkloadFlags {
    std::string topology = "line";
    std::size_t special_ops = 1;
    int fib_step = 1;
    int base_n = 5;
    int rounds = 5;
    std::size_t lines = 3;
    std::size_t ops_per_line = 4;
    std::uint64_t seed = 1;
    bool literal_tags = false;

    void attach(CLI::App* cmd, bool with_topology = true) {
        if (with_topology) {
            cmd->add_option("--topology", topology, "Topology: line or parallel")
                ->check(CLI::IsMember({"line", "parallel"}));
        }
        cmd->add_option("--special-ops", special_ops, "Operators carrying a special tag");
        cmd->add_option("--fib-step", fib_step, "Fibonacci argument increment per hop");
        cmd->add_option("--base-n", base_n, "Fibonacci argument at each chain head");
        cmd->add_option("--rounds", rounds, "Messages the generator emits per successor");
        cmd->add_option("--lines", lines, "Parallel topology: number of lines");
        cmd->add_option("--ops-per-line", ops_per_line, "Parallel topology: fibs per line");
        cmd->add_option("--seed", seed, "Workload / strategy seed");
        cmd->add_flag("--literal-tags", literal_tags,
                      "Permissive catalog: special images also carry the default tag");
    }

    WorkloadParams params() const {
        WorkloadParams p;
        p.topology = topology_from_name(topology);
        p.special_ops = special_ops;
        p.fib_step = fib_step;
        p.base_n = base_n;
        p.rounds = rounds;
        p.lines = lines;
        p.ops_per_line = ops_per_line;
        p.seed = seed;
        p.literal_tags = literal_tags;
        return p;
    }
};

struct SimFlags {
    std::string params_file;
    double t_pod = 200, t_pull = 1000, l_intra = 1, l_inter = 20, t_unit = 1;
    std::optional<std::uint64_t> jitter_seed;
    double jitter_amplitude = 0.05;

    void attach(CLI::App* cmd) {
        cmd->add_option("--sim-params", params_file, "JSON file with simulator parameters");
        cmd->add_option("--t-pod", t_pod, "Setup time per group pod");
        cmd->add_option("--t-pull", t_pull, "Cold-start pull time per distinct image");
        cmd->add_option("--l-intra", l_intra, "Latency per intra-group message");
        cmd->add_option("--l-inter", l_inter, "Latency per inter-group message");
        cmd->add_option("--t-unit", t_unit, "Time per fibonacci work unit");
        cmd->add_option("--jitter-seed", jitter_seed, "Enable work-duration jitter");
        cmd->add_option("--jitter-amplitude", jitter_amplitude, "Relative jitter amplitude");
    }

    SimParams params() const {
        SimParams sim;
        sim.t_pod = t_pod;
        sim.t_pull = t_pull;
        sim.l_intra = l_intra;
        sim.l_inter = l_inter;
        sim.t_unit = t_unit;
        sim.jitter_seed = jitter_seed;
        sim.jitter_amplitude = jitter_amplitude;
        if (!params_file.empty()) {
            auto doc = nlohmann::json::parse(read_text_file(params_file));
            sim.t_pod = doc.value("t_pod", sim.t_pod);
            sim.t_pull = doc.value("t_pull", sim.t_pull);
            sim.l_intra = doc.value("l_intra", sim.l_intra);
            sim.l_inter = doc.value("l_inter", sim.l_inter);
            sim.t_unit = doc.value("t_unit", sim.t_unit);
            if (doc.contains("jitter_seed") && !doc["jitter_seed"].is_null()) {
                sim.jitter_seed = doc["jitter_seed"].get<std::uint64_t>();
            }
            sim.jitter_amplitude = doc.value("jitter_amplitude", sim.jitter_amplitude);
        }
        return sim;
    }
};

void write_or_print(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
    } else {
        write_text_file(path, text);
    }
}

std::string derive_images_path(const std::string& pipeline_path) {
    auto dot = pipeline_path.rfind(".json");
    if (dot != std::string::npos && dot == pipeline_path.size() - 5) {
        return pipeline_path.substr(0, dot) + ".images.json";
    }
    return pipeline_path + ".images.json";
}

struct FileInputs {
    std::string pipeline_path;
    std::string images_path;

    void attach(CLI::App* cmd, bool required) {
        auto* p = cmd->add_option("--pipeline", pipeline_path, "Pipeline JSON document");
        auto* i = cmd->add_option("--images", images_path, "Image catalog JSON document");
        if (required) {
            p->required();
            i->required();
        }
    }

    bool provided() const { return !pipeline_path.empty(); }

    std::pair<Pipeline, ImageCatalog> load() const {
        auto catalog = catalog_from_json(nlohmann::json::parse(read_text_file(images_path)));
        auto pipeline =
            pipeline_from_json(nlohmann::json::parse(read_text_file(pipeline_path)), catalog);
        return {std::move(pipeline), std::move(catalog)};
    }
};

// task inputs shared by `pddl export` and `pddl import`: explicit files or a
// generated workload
struct TaskInputs {
    FileInputs files;
    WorkloadFlags workload;
    std::string strategy = "connection";
    std::size_t max_groups = 0;

    void attach(CLI::App* cmd) {
        files.attach(cmd, false);
        workload.attach(cmd);
        cmd->add_option("--strategy", strategy, "Weight profile: connection or node")
            ->check(CLI::IsMember({"connection", "node"}));
        cmd->add_option("--max-groups", max_groups, "Cap on group count (0 = operator count)");
    }

    GroupingTask build() const {
        StrategyWeights weights =
            strategy == "node" ? node_weights() : connection_weights();
        std::optional<std::size_t> cap;
        if (max_groups > 0) cap = max_groups;
        if (files.provided()) {
            auto [pipeline, catalog] = files.load();
            return build_grouping_task(pipeline, catalog, weights, cap);
        }
        auto generated = generate_pipeline(workload.params());
        return build_grouping_task(generated.pipeline, generated.images, weights, cap);
    }
};

std::string render_rows(const std::vector<ResultRow>& rows, const std::string& format) {
    if (format == "json") return dump_json(rows_to_json(rows));
    return rows_to_csv(rows);
}

int cmd_generate(const WorkloadFlags& flags, const std::string& out,
                 const std::string& images_out) {
    auto workload = generate_pipeline(flags.params());
    write_or_print(out, dump_json(pipeline_to_json(workload.pipeline)));
    std::string images_path =
        !images_out.empty() ? images_out
        : (out.empty() || out == "-") ? std::string{} : derive_images_path(out);
    if (!images_path.empty()) {
        write_text_file(images_path, dump_json(catalog_to_json(workload.images)));
    } else if (out.empty() || out == "-") {
        std::cout << dump_json(catalog_to_json(workload.images));
    }
    return 0;
}

int cmd_optimize(const FileInputs& files, const std::string& strategy, std::uint64_t seed,
                 bool allow_universal, const std::string& out,
                 const std::string& images_out) {
    auto [pipeline, catalog] = files.load();
    StrategyKind kind = strategy_from_name(strategy);

    GroupingConfig config;
    std::optional<Cost> plan_cost;
    if (kind == StrategyKind::Connection || kind == StrategyKind::Node) {
        StrategyWeights weights =
            kind == StrategyKind::Connection ? connection_weights() : node_weights();
        auto task = build_grouping_task(pipeline, catalog, weights);
        auto plan = solve_optimal(task);
        config = plan_to_config(plan, task);
        plan_cost = plan.total_cost;
    } else {
        config = run_strategy(kind, pipeline, catalog, seed, allow_universal);
    }

    write_or_print(out, dump_json(config_to_json(config)));

    // synthetic images are not part of the input catalog: emit an augmented
    // catalog so the config document stays resolvable
    bool has_synthetic = false;
    for (const auto& g : config.groups) has_synthetic |= g.image.synthetic;
    if (has_synthetic || !images_out.empty()) {
        ImageCatalog augmented = catalog;
        for (const auto& g : config.groups) {
            bool known = false;
            for (const auto& img : augmented) known |= img.id == g.image.id;
            if (!known) augmented.push_back(g.image);
        }
        std::string path = !images_out.empty()
                               ? images_out
                               : (out.empty() || out == "-") ? std::string{}
                                                             : derive_images_path(out);
        if (!path.empty()) {
            write_text_file(path, dump_json(catalog_to_json(augmented)));
        } else {
            std::cout << dump_json(catalog_to_json(augmented));
        }
    }

    auto counts = edge_counts(config);
    std::fprintf(stderr, "strategy=%s groups=%zu intra=%zu inter=%zu", strategy.c_str(),
                 config.groups.size(), counts.intra, counts.inter);
    if (plan_cost) std::fprintf(stderr, " plan_cost=%lld", (long long)*plan_cost);
    std::fprintf(stderr, "\n");
    return 0;
}

int cmd_simulate(const FileInputs& files, const WorkloadFlags& workload,
                 const SimFlags& sim_flags, int reps, const std::string& format,
                 const std::string& out) {
    auto catalog = catalog_from_json(nlohmann::json::parse(read_text_file(files.images_path)));
    auto config =
        config_from_json(nlohmann::json::parse(read_text_file(files.pipeline_path)), catalog);

    CellKey key{topology_from_name(workload.topology), workload.special_ops,
                workload.fib_step, StrategyKind::Default, workload.seed};
    auto rows = simulate_config_rows(key, config, std::nullopt, workload.params(),
                                     sim_flags.params(), reps);
    // the strategy is whatever produced the input file
    for (auto& row : rows) row.strategy = "file";
    write_or_print(out, render_rows(rows, format));
    return 0;
}

int cmd_bench(const std::vector<std::string>& topologies,
              const std::vector<std::size_t>& special_ops, const std::vector<int>& fib_steps,
              const std::vector<std::string>& strategies,
              const std::vector<std::uint64_t>& seeds, int reps, bool allow_universal,
              const WorkloadFlags& workload, const SimFlags& sim_flags,
              const std::string& format, const std::string& out,
              const std::string& summary_out, bool strict) {
    ExperimentSpec spec;
    spec.topologies.clear();
    for (const auto& t : topologies) spec.topologies.push_back(topology_from_name(t));
    spec.special_ops = special_ops;
    spec.fib_steps = fib_steps;
    spec.strategies.clear();
    for (const auto& s : strategies) spec.strategies.push_back(strategy_from_name(s));
    spec.seeds = seeds;
    spec.reps = reps;
    spec.allow_universal = allow_universal;
    spec.sim = sim_flags.params();
    spec.workload_base = workload.params();

    auto rows = run_matrix(spec);
    write_or_print(out, render_rows(rows, format));
    if (!summary_out.empty()) {
        auto summary = summarize(rows);
        if (format == "json") {
            write_or_print(summary_out, dump_json(summary_to_json(summary)));
        } else {
            write_or_print(summary_out, summary_to_csv(summary));
        }
    }

    std::size_t failures = 0;
    for (const auto& row : rows) {
        if (!row.error.empty()) ++failures;
    }
    if (failures > 0) {
        std::fprintf(stderr, "%zu error row(s)\n", failures);
        if (strict) return 1;
    }
    return 0;
}

int cmd_summarize(const std::string& in, const std::string& format, const std::string& out) {
    auto rows = rows_from_csv(read_text_file(in));
    auto summary = summarize(rows);
    if (format == "json") {
        write_or_print(out, dump_json(summary_to_json(summary)));
    } else {
        write_or_print(out, summary_to_csv(summary));
    }
    return 0;
}

int cmd_pddl_export(const TaskInputs& inputs, const std::string& out_dir) {
    auto task = inputs.build();
    auto artifacts = emit_pddl(task);
    write_text_file(out_dir + "/domain.pddl", artifacts.domain_text);
    write_text_file(out_dir + "/problem.pddl", artifacts.problem_text);
    std::fprintf(stderr, "wrote %s/domain.pddl and %s/problem.pddl\n", out_dir.c_str(),
                 out_dir.c_str());
    return 0;
}

int cmd_pddl_import(const TaskInputs& inputs, const std::string& plan_path,
                    const SimFlags& sim_flags, int reps, const std::string& format,
                    const std::string& out, const std::string& out_config) {
    auto task = inputs.build();
    auto plan = parse_plan(read_text_file(plan_path), task);
    auto config = plan_to_config(plan, task);
    if (!out_config.empty()) {
        write_text_file(out_config, dump_json(config_to_json(config)));
    }

    WorkloadParams params = inputs.workload.params();
    CellKey key{params.topology, params.special_ops, params.fib_step,
                strategy_from_name(inputs.strategy), params.seed};
    auto rows =
        simulate_config_rows(key, config, plan.total_cost, params, sim_flags.params(), reps);
    write_or_print(out, render_rows(rows, format));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Data pipeline grouping optimizer and deployment simulator"};
    app.require_subcommand(1);

    // generate
    auto* generate = app.add_subcommand("generate", "Emit a synthetic workload as JSON");
    WorkloadFlags gen_workload;
    gen_workload.attach(generate);
    std::string gen_out, gen_images_out;
    generate->add_option("--out", gen_out, "Pipeline output path (- for stdout)");
    generate->add_option("--images-out", gen_images_out, "Image catalog output path");

    // optimize
    auto* optimize = app.add_subcommand("optimize", "Group a pipeline with one strategy");
    FileInputs opt_files;
    opt_files.attach(optimize, true);
    std::string opt_strategy = "connection";
    std::uint64_t opt_seed = 1;
    bool opt_allow_universal = false;
    std::string opt_out, opt_images_out;
    optimize->add_option("--strategy", opt_strategy, "connection, node, random or default")
        ->check(CLI::IsMember({"connection", "node", "random", "default"}));
    optimize->add_option("--seed", opt_seed, "Seed for the random strategy");
    optimize->add_flag("--allow-universal-image", opt_allow_universal,
                       "Let the default baseline synthesize a universal image");
    optimize->add_option("--out", opt_out, "Config output path (- for stdout)");
    optimize->add_option("--images-out", opt_images_out,
                         "Augmented catalog output path (synthetic images)");

    // simulate
    auto* simulate_cmd = app.add_subcommand("simulate", "Run the simulator on a grouped config");
    FileInputs sim_files;
    sim_files.attach(simulate_cmd, true);
    WorkloadFlags sim_workload;
    sim_workload.attach(simulate_cmd);
    SimFlags sim_flags;
    sim_flags.attach(simulate_cmd);
    int sim_reps = 1;
    std::string sim_format = "csv", sim_out;
    simulate_cmd->add_option("--reps", sim_reps, "Repetitions (first one cold)");
    simulate_cmd->add_option("--format", sim_format)->check(CLI::IsMember({"csv", "json"}));
    simulate_cmd->add_option("--out", sim_out, "Output path (- for stdout)");

    // bench
    auto* bench = app.add_subcommand("bench", "Run the full experiment matrix");
    std::vector<std::string> bench_topologies = {"line", "parallel"};
    std::vector<std::size_t> bench_special = {2, 4};
    std::vector<int> bench_steps = {1, 2, 3};
    std::vector<std::string> bench_strategies = {"connection", "node", "random", "default"};
    std::vector<std::uint64_t> bench_seeds = {1};
    int bench_reps = 5;
    bool bench_allow_universal = true;
    bool bench_strict = false;
    std::string bench_format = "csv", bench_out, bench_summary_out;
    WorkloadFlags bench_workload;
    SimFlags bench_sim;
    bench->add_option("--topology", bench_topologies, "Topologies to run")
        ->check(CLI::IsMember({"line", "parallel"}));
    bench->add_option("--special-ops", bench_special, "Special operator counts");
    bench->add_option("--fib-step", bench_steps, "Fibonacci steps");
    bench->add_option("--strategy", bench_strategies, "Strategies to run")
        ->check(CLI::IsMember({"connection", "node", "random", "default"}));
    bench->add_option("--seed", bench_seeds, "Workload seeds");
    bench->add_option("--reps", bench_reps, "Repetitions per cell (first one cold)");
    bench->add_flag("--allow-universal-image,!--no-allow-universal-image",
                    bench_allow_universal,
                    "Default baseline may synthesize a universal image (on by default)");
    bench->add_option("--base-n", bench_workload.base_n, "Fibonacci argument at chain heads");
    bench->add_option("--rounds", bench_workload.rounds, "Generator rounds");
    bench->add_option("--lines", bench_workload.lines, "Parallel lines");
    bench->add_option("--ops-per-line", bench_workload.ops_per_line, "Fibs per line");
    bench->add_flag("--literal-tags", bench_workload.literal_tags, "Permissive catalog");
    bench_sim.attach(bench);
    bench->add_option("--format", bench_format)->check(CLI::IsMember({"csv", "json"}));
    bench->add_option("--out", bench_out, "Results output path (- for stdout)");
    bench->add_option("--summary-out", bench_summary_out, "Also write summary statistics");
    bench->add_flag("--strict", bench_strict, "Exit nonzero when any cell errors");

    // summarize
    auto* summarize_cmd = app.add_subcommand("summarize", "Aggregate a results CSV");
    std::string sum_in, sum_format = "csv", sum_out;
    summarize_cmd->add_option("--in", sum_in, "Results CSV path")->required();
    summarize_cmd->add_option("--format", sum_format)->check(CLI::IsMember({"csv", "json"}));
    summarize_cmd->add_option("--out", sum_out, "Output path (- for stdout)");

    // pddl export / import
    auto* pddl = app.add_subcommand("pddl", "PDDL bridge for external planners");
    pddl->require_subcommand(1);
    auto* pddl_export = pddl->add_subcommand("export", "Write domain.pddl and problem.pddl");
    TaskInputs export_inputs;
    export_inputs.attach(pddl_export);
    std::string export_dir = ".";
    pddl_export->add_option("--out-dir", export_dir, "Directory for the two files");

    auto* pddl_import = pddl->add_subcommand("import", "Validate an external plan and simulate");
    TaskInputs import_inputs;
    import_inputs.attach(pddl_import);
    SimFlags import_sim;
    import_sim.attach(pddl_import);
    std::string import_plan, import_format = "csv", import_out, import_out_config;
    int import_reps = 5;
    pddl_import->add_option("--plan", import_plan, "Plan file to import")->required();
    pddl_import->add_option("--reps", import_reps, "Repetitions (first one cold)");
    pddl_import->add_option("--format", import_format)->check(CLI::IsMember({"csv", "json"}));
    pddl_import->add_option("--out", import_out, "Result rows output path");
    pddl_import->add_option("--out-config", import_out_config, "Grouped config output path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed()) return cmd_generate(gen_workload, gen_out, gen_images_out);
        if (optimize->parsed()) {
            return cmd_optimize(opt_files, opt_strategy, opt_seed, opt_allow_universal,
                                opt_out, opt_images_out);
        }
        if (simulate_cmd->parsed()) {
            return cmd_simulate(sim_files, sim_workload, sim_flags, sim_reps, sim_format,
                                sim_out);
        }
        if (bench->parsed()) {
            return cmd_bench(bench_topologies, bench_special, bench_steps, bench_strategies,
                             bench_seeds, bench_reps, bench_allow_universal, bench_workload,
                             bench_sim, bench_format, bench_out, bench_summary_out,
                             bench_strict);
        }
        if (summarize_cmd->parsed()) return cmd_summarize(sum_in, sum_format, sum_out);
        if (pddl->parsed()) {
            if (pddl_export->parsed()) return cmd_pddl_export(export_inputs, export_dir);
            if (pddl_import->parsed()) {
                return cmd_pddl_import(import_inputs, import_plan, import_sim, import_reps,
                                       import_format, import_out, import_out_config);
            }
        }
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return 1;
    }
    return 0;
}
