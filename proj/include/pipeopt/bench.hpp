#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pipeopt/core.hpp"
#include "pipeopt/simulator.hpp"
#include "pipeopt/strategies.hpp"
#include "pipeopt/workload.hpp"

namespace pipeopt {

// Run matrix: the cross-product of the list fields, `reps` simulator runs
// each (first one cold). Defaults mirror the evaluation protocol.
struct ExperimentSpec {
    std::vector<Topology> topologies = {Topology::Line, Topology::Parallel};
    std::vector<std::size_t> special_ops = {2, 4};
    std::vector<int> fib_steps = {1, 2, 3};
    std::vector<StrategyKind> strategies = {StrategyKind::Connection, StrategyKind::Node,
                                            StrategyKind::Random, StrategyKind::Default};
    std::vector<std::uint64_t> seeds = {1};
    int reps = 5;
    SimParams sim;
    WorkloadParams workload_base;  // base_n / rounds / lines / ops_per_line knobs
    // The single-group baseline needs a universal image whenever special tags
    // are present, so benches allow it unless told otherwise.
    bool allow_universal = true;
};

struct ResultRow {
    std::string topology;
    std::size_t special_ops = 0;
    int fib_step = 0;
    std::string strategy;
    std::uint64_t seed = 0;
    int rep = 0;
    bool cold = false;
    std::size_t group_count = 0;
    std::size_t inter_edges = 0;
    std::optional<Cost> plan_cost;  // planner strategies only
    double setup_time = 0;
    double execution_time = 0;
    double total_time = 0;
    std::string error;  // non-empty marks a failed cell
};

struct CellKey {
    Topology topology;
    std::size_t special_ops;
    int fib_step;
    StrategyKind strategy;
    std::uint64_t seed;
};

// Simulates one already-grouped cell; shared by run_matrix and the plan
// import path so both produce identical rows.
std::vector<ResultRow> simulate_config_rows(const CellKey& key,
                                            const GroupingConfig& config,
                                            std::optional<Cost> plan_cost,
                                            const WorkloadParams& params,
                                            const SimParams& sim, int reps);

// One row per (matrix cell, repetition), in matrix order. Cell failures
// (e.g. an infeasible default baseline) become error rows, never aborts.
std::vector<ResultRow> run_matrix(const ExperimentSpec& spec);

struct SummaryRow {
    std::string topology;
    std::size_t special_ops = 0;
    int fib_step = 0;
    std::string strategy;
    std::uint64_t seed = 0;
    std::string cache;  // "cold" or "warm"
    std::size_t n = 0;
    double setup_mean = 0, setup_std = 0;
    double execution_mean = 0, execution_std = 0;
    double total_mean = 0, total_std = 0;
};

// Mean and sample (n-1) standard deviation per cell and cache state; warm
// statistics exclude repetition 0. Error rows are skipped. Throws on empty
// input.
std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows);

std::string rows_to_csv(const std::vector<ResultRow>& rows);
std::vector<ResultRow> rows_from_csv(const std::string& text);
nlohmann::ordered_json rows_to_json(const std::vector<ResultRow>& rows);

std::string summary_to_csv(const std::vector<SummaryRow>& rows);
nlohmann::ordered_json summary_to_json(const std::vector<SummaryRow>& rows);

}  // namespace pipeopt
