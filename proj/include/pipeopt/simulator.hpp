#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "pipeopt/core.hpp"
#include "pipeopt/workload.hpp"

namespace pipeopt {

// Deterministic stand-in for the container runtime. Time units are
// dimensionless; defaults make setup dominate tiny workloads and execution
// dominate large ones.
struct SimParams {
    double t_pod = 200;    // per group pod start
    double t_pull = 1000;  // per distinct image pull, cold start only
    double l_intra = 1;    // per intra-group message
    double l_inter = 20;   // per inter-group message
    double t_unit = 1;     // per fibonacci work unit
    // Optional multiplicative noise on work durations; off by default, the
    // simulator is exactly reproducible without it.
    std::optional<std::uint64_t> jitter_seed;
    double jitter_amplitude = 0.05;
};

struct CacheState {
    bool cold = true;
};

struct SimResult {
    double setup_time = 0;
    double execution_time = 0;
    double total_time = 0;
    std::map<OperatorId, double> per_operator_completion;
    std::size_t terminator_messages = 0;
};

// Number of calls made by the naive recursive fibonacci: 2*F(n+1) - 1 with
// F(1) = F(2) = 1. Throws for n < 1.
std::uint64_t work_units(int n);

// Event-driven deployment model: each group owns one worker that serializes
// its operators' work (a pod runs its group sequentially), messages pay
// intra- or inter-group latency, the generator releases all rounds at time
// zero and the terminator consumes messages in zero time.
//
//   setup_time     = t_pod * |groups| + (cold ? t_pull * |distinct images| : 0)
//   execution_time = timestamp of the last processed event
//   total_time     = setup_time + execution_time
SimResult simulate(const GroupingConfig& config, const WorkloadParams& workload,
                   const SimParams& sim, CacheState cache);

// First repetition cold, the rest warm.
std::vector<SimResult> run_repetitions(const GroupingConfig& config,
                                       const WorkloadParams& workload,
                                       const SimParams& sim, int reps);

}  // namespace pipeopt
