#include "pipeopt/bench.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

#include "pipeopt/planning.hpp"

namespace pipeopt {

namespace {

std::string format_time(double t) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.4f", t);
    return buffer;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string quoted = "\"";
    for (char c : field) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

WorkloadParams cell_params(const ExperimentSpec& spec, const CellKey& key) {
    WorkloadParams params = spec.workload_base;
    params.topology = key.topology;
    params.special_ops = key.special_ops;
    params.fib_step = key.fib_step;
    params.seed = key.seed;
    return params;
}

ResultRow base_row(const CellKey& key) {
    ResultRow row;
    row.topology = topology_name(key.topology);
    row.special_ops = key.special_ops;
    row.fib_step = key.fib_step;
    row.strategy = strategy_name(key.strategy);
    row.seed = key.seed;
    return row;
}

}  // namespace

std::vector<ResultRow> simulate_config_rows(const CellKey& key,
                                            const GroupingConfig& config,
                                            std::optional<Cost> plan_cost,
                                            const WorkloadParams& params,
                                            const SimParams& sim, int reps) {
    auto report = validate_config(config);
    if (!report.empty()) {
        throw std::invalid_argument("invalid configuration: " + report.front().message);
    }
    EdgeCounts counts = edge_counts(config);
    auto results = run_repetitions(config, params, sim, reps);

    std::vector<ResultRow> rows;
    for (int r = 0; r < reps; ++r) {
        ResultRow row = base_row(key);
        row.rep = r;
        row.cold = (r == 0);
        row.group_count = config.groups.size();
        row.inter_edges = counts.inter;
        row.plan_cost = plan_cost;
        row.setup_time = results[r].setup_time;
        row.execution_time = results[r].execution_time;
        row.total_time = results[r].total_time;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<ResultRow> run_matrix(const ExperimentSpec& spec) {
    if (spec.reps < 1) throw std::invalid_argument("reps must be at least 1");

    std::vector<ResultRow> rows;
    for (Topology topology : spec.topologies) {
        for (std::size_t special : spec.special_ops) {
            for (int step : spec.fib_steps) {
                for (StrategyKind strategy : spec.strategies) {
                    for (std::uint64_t seed : spec.seeds) {
                        CellKey key{topology, special, step, strategy, seed};
                        WorkloadParams params = cell_params(spec, key);
                        try {
                            Workload workload = generate_pipeline(params);
                            GroupingConfig config;
                            std::optional<Cost> plan_cost;
                            if (strategy == StrategyKind::Connection ||
                                strategy == StrategyKind::Node) {
                                StrategyWeights weights =
                                    strategy == StrategyKind::Connection
                                        ? connection_weights()
                                        : node_weights();
                                GroupingTask task = build_grouping_task(
                                    workload.pipeline, workload.images, weights);
                                Plan plan = solve_optimal(task);
                                config = plan_to_config(plan, task);
                                plan_cost = plan.total_cost;
                            } else {
                                config = run_strategy(strategy, workload.pipeline,
                                                      workload.images, seed,
                                                      spec.allow_universal);
                            }
                            auto cell_rows = simulate_config_rows(
                                key, config, plan_cost, params, spec.sim, spec.reps);
                            rows.insert(rows.end(), cell_rows.begin(), cell_rows.end());
                        } catch (const std::exception& ex) {
                            for (int r = 0; r < spec.reps; ++r) {
                                ResultRow row = base_row(key);
                                row.rep = r;
                                row.cold = (r == 0);
                                row.error = ex.what();
                                rows.push_back(std::move(row));
                            }
                        }
                    }
                }
            }
        }
    }
    return rows;
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows) {
    if (rows.empty()) throw std::invalid_argument("no rows to summarize");

    struct Samples {
        std::vector<double> setup, execution, total;
    };
    // key: cell + cache state, in first-appearance (matrix) order
    std::vector<std::pair<std::string, SummaryRow>> order;
    std::map<std::string, Samples> samples;

    for (const auto& row : rows) {
        if (!row.error.empty()) continue;
        std::string cache = row.cold ? "cold" : "warm";
        std::string key = row.topology + '|' + std::to_string(row.special_ops) + '|' +
                          std::to_string(row.fib_step) + '|' + row.strategy + '|' +
                          std::to_string(row.seed) + '|' + cache;
        if (!samples.count(key)) {
            SummaryRow summary;
            summary.topology = row.topology;
            summary.special_ops = row.special_ops;
            summary.fib_step = row.fib_step;
            summary.strategy = row.strategy;
            summary.seed = row.seed;
            summary.cache = cache;
            order.emplace_back(key, summary);
        }
        auto& s = samples[key];
        s.setup.push_back(row.setup_time);
        s.execution.push_back(row.execution_time);
        s.total.push_back(row.total_time);
    }

    auto mean_of = [](const std::vector<double>& xs) {
        double sum = 0;
        for (double x : xs) sum += x;
        return xs.empty() ? 0.0 : sum / static_cast<double>(xs.size());
    };
    auto sample_std = [&](const std::vector<double>& xs) {
        if (xs.size() <= 1) return 0.0;
        double m = mean_of(xs);
        double acc = 0;
        for (double x : xs) acc += (x - m) * (x - m);
        return std::sqrt(acc / static_cast<double>(xs.size() - 1));
    };

    std::vector<SummaryRow> out;
    for (auto& [key, summary] : order) {
        const Samples& s = samples.at(key);
        summary.n = s.setup.size();
        summary.setup_mean = mean_of(s.setup);
        summary.setup_std = sample_std(s.setup);
        summary.execution_mean = mean_of(s.execution);
        summary.execution_std = sample_std(s.execution);
        summary.total_mean = mean_of(s.total);
        summary.total_std = sample_std(s.total);
        out.push_back(summary);
    }
    return out;
}

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
    std::ostringstream out;
    out << "topology,special_ops,fib_step,strategy,seed,rep,cold,group_count,"
           "inter_edges,plan_cost,setup_time,execution_time,total_time,error\n";
    for (const auto& row : rows) {
        out << csv_escape(row.topology) << ',' << row.special_ops << ',' << row.fib_step
            << ',' << csv_escape(row.strategy) << ',' << row.seed << ',' << row.rep
            << ',' << (row.cold ? "true" : "false") << ',' << row.group_count << ','
            << row.inter_edges << ',';
        if (row.plan_cost) out << *row.plan_cost;
        out << ',' << format_time(row.setup_time) << ',' << format_time(row.execution_time)
            << ',' << format_time(row.total_time) << ',' << csv_escape(row.error) << '\n';
    }
    return out.str();
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field += c;
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

}  // namespace

std::vector<ResultRow> rows_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<ResultRow> rows;
    bool header = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        auto fields = split_csv_line(line);
        if (fields.size() != 14) {
            throw std::runtime_error("malformed result row: " + line);
        }
        ResultRow row;
        row.topology = fields[0];
        row.special_ops = std::stoul(fields[1]);
        row.fib_step = std::stoi(fields[2]);
        row.strategy = fields[3];
        row.seed = std::stoull(fields[4]);
        row.rep = std::stoi(fields[5]);
        row.cold = fields[6] == "true";
        row.group_count = std::stoul(fields[7]);
        row.inter_edges = std::stoul(fields[8]);
        if (!fields[9].empty()) row.plan_cost = std::stoll(fields[9]);
        row.setup_time = std::stod(fields[10]);
        row.execution_time = std::stod(fields[11]);
        row.total_time = std::stod(fields[12]);
        row.error = fields[13];
        rows.push_back(std::move(row));
    }
    return rows;
}

nlohmann::ordered_json rows_to_json(const std::vector<ResultRow>& rows) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
        nlohmann::ordered_json entry;
        entry["topology"] = row.topology;
        entry["special_ops"] = row.special_ops;
        entry["fib_step"] = row.fib_step;
        entry["strategy"] = row.strategy;
        entry["seed"] = row.seed;
        entry["rep"] = row.rep;
        entry["cold"] = row.cold;
        entry["group_count"] = row.group_count;
        entry["inter_edges"] = row.inter_edges;
        if (row.plan_cost) {
            entry["plan_cost"] = *row.plan_cost;
        } else {
            entry["plan_cost"] = nullptr;
        }
        entry["setup_time"] = row.setup_time;
        entry["execution_time"] = row.execution_time;
        entry["total_time"] = row.total_time;
        entry["error"] = row.error;
        arr.push_back(std::move(entry));
    }
    return arr;
}

std::string summary_to_csv(const std::vector<SummaryRow>& rows) {
    std::ostringstream out;
    out << "topology,special_ops,fib_step,strategy,seed,cache,n,setup_mean,setup_std,"
           "execution_mean,execution_std,total_mean,total_std\n";
    for (const auto& row : rows) {
        out << csv_escape(row.topology) << ',' << row.special_ops << ',' << row.fib_step
            << ',' << csv_escape(row.strategy) << ',' << row.seed << ',' << row.cache
            << ',' << row.n << ',' << format_time(row.setup_mean) << ','
            << format_time(row.setup_std) << ',' << format_time(row.execution_mean)
            << ',' << format_time(row.execution_std) << ',' << format_time(row.total_mean)
            << ',' << format_time(row.total_std) << '\n';
    }
    return out.str();
}

nlohmann::ordered_json summary_to_json(const std::vector<SummaryRow>& rows) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
        nlohmann::ordered_json entry;
        entry["topology"] = row.topology;
        entry["special_ops"] = row.special_ops;
        entry["fib_step"] = row.fib_step;
        entry["strategy"] = row.strategy;
        entry["seed"] = row.seed;
        entry["cache"] = row.cache;
        entry["n"] = row.n;
        entry["setup_mean"] = row.setup_mean;
        entry["setup_std"] = row.setup_std;
        entry["execution_mean"] = row.execution_mean;
        entry["execution_std"] = row.execution_std;
        entry["total_mean"] = row.total_mean;
        entry["total_std"] = row.total_std;
        arr.push_back(std::move(entry));
    }
    return arr;
}

}  // namespace pipeopt
