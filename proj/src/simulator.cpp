#include "pipeopt/simulator.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>

#include "pipeopt/rng.hpp"

namespace pipeopt {

std::uint64_t work_units(int n) {
    if (n < 1) throw std::invalid_argument("fibonacci index must be at least 1");
    if (n > 90) throw std::invalid_argument("fibonacci index too large: " + std::to_string(n));
    // F(n+1) with F(1) = F(2) = 1; F(91) still fits in 64 bits
    std::uint64_t a = 1, b = 1;  // F(1), F(2)
    for (int i = 2; i <= n; ++i) {
        std::uint64_t next = a + b;
        a = b;
        b = next;
    }
    return 2 * b - 1;  // b = F(n+1)
}

namespace {

// Pending work item of a group worker, ordered FIFO by arrival time with a
// deterministic tiebreak.
struct Task {
    double arrival;
    OperatorId op_id;
    int round;
    std::uint64_t seq;
    int op_index;
    int n_value;

    bool operator<(const Task& other) const {
        return std::tie(arrival, op_id, round, seq) <
               std::tie(other.arrival, other.op_id, other.round, other.seq);
    }
};

enum EventKind { kArrival = 0, kFinish = 1, kDispatch = 2 };

struct Event {
    double time;
    int kind;
    std::uint64_t seq;
    int op_index = -1;  // arrival target / finished operator
    int group = -1;     // dispatch/finish group
    int n_value = 0;
    int round = 0;

    bool operator>(const Event& other) const {
        return std::tie(time, kind, seq) > std::tie(other.time, other.kind, other.seq);
    }
};

}  // namespace

SimResult simulate(const GroupingConfig& config, const WorkloadParams& workload,
                   const SimParams& sim, CacheState cache) {
    require_valid(config);

    const Pipeline& pipeline = config.pipeline;
    const std::size_t n_ops = pipeline.operators.size();

    std::vector<int> group_of(n_ops, -1);
    for (std::size_t g = 0; g < config.groups.size(); ++g) {
        for (const auto& oid : config.groups[g].operator_ids) {
            group_of[pipeline.operator_index(oid)] = static_cast<int>(g);
        }
    }
    std::vector<std::vector<int>> successors(n_ops);
    for (const auto& e : pipeline.edges) {
        successors[pipeline.operator_index(e.from)].push_back(pipeline.operator_index(e.to));
    }
    std::vector<OperatorRole> roles(n_ops);
    int generator = -1;
    for (std::size_t i = 0; i < n_ops; ++i) {
        roles[i] = role_of(pipeline.operators[i].id);
        if (roles[i] == OperatorRole::Generator) generator = static_cast<int>(i);
        if (roles[i] == OperatorRole::Fibonacci) {
            // rejects operators that are not on a single chain; the messages
            // themselves carry the propagated argument during the run
            fib_argument(pipeline, pipeline.operators[i].id, workload);
        }
    }

    SimResult result;
    result.setup_time = sim.t_pod * static_cast<double>(config.groups.size());
    if (cache.cold) {
        std::set<ImageId> distinct;
        for (const auto& g : config.groups) distinct.insert(g.image.id);
        result.setup_time += sim.t_pull * static_cast<double>(distinct.size());
    }

    auto latency = [&](int from, int to) {
        return group_of[from] == group_of[to] ? sim.l_intra : sim.l_inter;
    };

    std::optional<Rng> jitter;
    if (sim.jitter_seed) jitter.emplace(*sim.jitter_seed);
    auto work_duration = [&](int n) {
        double d = static_cast<double>(work_units(n)) * sim.t_unit;
        if (jitter) {
            d *= 1.0 + sim.jitter_amplitude * (2.0 * jitter->unit_double() - 1.0);
        }
        return d;
    };

    std::priority_queue<Event, std::vector<Event>, std::greater<Event>> events;
    std::uint64_t seq = 0;
    std::vector<std::set<Task>> pending(config.groups.size());
    std::vector<bool> busy(config.groups.size(), false);
    double last_event = 0;

    // the generator releases every round at time zero
    if (generator >= 0) {
        for (int r = 0; r < workload.rounds; ++r) {
            for (int succ : successors[generator]) {
                events.push(Event{latency(generator, succ), kArrival, seq++, succ, -1,
                                  workload.base_n, r});
            }
        }
    }

    while (!events.empty()) {
        Event ev = events.top();
        events.pop();
        last_event = std::max(last_event, ev.time);

        switch (ev.kind) {
        case kArrival: {
            int op = ev.op_index;
            if (roles[op] == OperatorRole::Fibonacci) {
                int g = group_of[op];
                pending[g].insert(Task{ev.time, pipeline.operators[op].id, ev.round,
                                       seq++, op, ev.n_value});
                if (!busy[g]) {
                    events.push(Event{ev.time, kDispatch, seq++, -1, g});
                }
            } else {
                // generator and terminator consume messages in zero time
                auto& done = result.per_operator_completion[pipeline.operators[op].id];
                done = std::max(done, ev.time);
                if (roles[op] == OperatorRole::Terminator) {
                    result.terminator_messages += 1;
                }
            }
            break;
        }
        case kFinish: {
            int op = ev.op_index;
            int g = ev.group;
            auto& done = result.per_operator_completion[pipeline.operators[op].id];
            done = std::max(done, ev.time);
            for (int succ : successors[op]) {
                events.push(Event{ev.time + latency(op, succ), kArrival, seq++, succ,
                                  -1, ev.n_value + workload.fib_step, ev.round});
            }
            busy[g] = false;
            events.push(Event{ev.time, kDispatch, seq++, -1, g});
            break;
        }
        case kDispatch: {
            int g = ev.group;
            if (busy[g] || pending[g].empty()) break;
            Task task = *pending[g].begin();
            pending[g].erase(pending[g].begin());
            busy[g] = true;
            double finish = ev.time + work_duration(task.n_value);
            events.push(Event{finish, kFinish, seq++, task.op_index, g,
                              task.n_value, task.round});
            break;
        }
        }
    }

    result.execution_time = last_event;
    result.total_time = result.setup_time + result.execution_time;
    return result;
}

std::vector<SimResult> run_repetitions(const GroupingConfig& config,
                                       const WorkloadParams& workload,
                                       const SimParams& sim, int reps) {
    if (reps < 1) throw std::invalid_argument("reps must be at least 1");
    std::vector<SimResult> results;
    results.reserve(reps);
    for (int r = 0; r < reps; ++r) {
        SimParams rep_sim = sim;
        if (sim.jitter_seed) rep_sim.jitter_seed = *sim.jitter_seed + r;
        results.push_back(
            simulate(config, workload, rep_sim, CacheState{r == 0}));
    }
    return results;
}

}  // namespace pipeopt
