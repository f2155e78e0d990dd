#include <doctest.h>

#include <cstdint>

#include "pipeopt/simulator.hpp"
#include "pipeopt/strategies.hpp"
#include "pipeopt/workload.hpp"
#include "test_util.hpp"

using namespace pipeopt;
using namespace pipeopt::test;

namespace {

// oracle: literally count the calls of the naive recursive fibonacci
// (fib(0) = 0 and fib(1) = 1 are the leaf calls)
std::uint64_t naive_fib_calls(int n) {
    if (n <= 1) return 1;
    return 1 + naive_fib_calls(n - 1) + naive_fib_calls(n - 2);
}

GroupingConfig single_group_chain(int fibs) {
    std::vector<Operator> ops;
    ops.push_back(op("gen", {"golang"}));
    for (int i = 1; i <= fibs; ++i) ops.push_back(op("fib-" + std::to_string(i), {"golang"}));
    ops.push_back(op("term", {"golang"}));
    Pipeline p = line_pipeline(std::move(ops));

    GroupingConfig config;
    config.pipeline = p;
    std::vector<OperatorId> all;
    for (const auto& o : p.operators) all.push_back(o.id);
    config.groups = {group("g1", all, image("img-default", {"golang"}))};
    return config;
}

WorkloadParams chain_params(int rounds, int step = 1) {
    WorkloadParams params;
    params.topology = Topology::Line;
    params.rounds = rounds;
    params.fib_step = step;
    return params;
}

SimParams unit_sim() {
    SimParams sim;
    sim.t_pod = 200;
    sim.t_pull = 1000;
    sim.l_intra = 1;
    sim.l_inter = 20;
    sim.t_unit = 1;
    return sim;
}

}  // namespace

TEST_CASE("work_units equals the naive recursion call count") {
    CHECK(work_units(1) == 1);
    CHECK(work_units(5) == 15);
    CHECK(work_units(10) == 177);
    for (int n = 1; n <= 20; ++n) {
        CHECK(work_units(n) == naive_fib_calls(n));
    }
    CHECK_THROWS_AS(work_units(0), std::invalid_argument);
    CHECK(work_units(90) > work_units(89));  // still in 64-bit range
    CHECK_THROWS_AS(work_units(91), std::invalid_argument);
}

TEST_CASE("zero rounds means zero execution time") {
    auto config = single_group_chain(2);
    auto result = simulate(config, chain_params(0), unit_sim(), CacheState{true});
    CHECK(result.execution_time == 0);
    CHECK(result.setup_time == 200 + 1000);  // one group, one image, cold
    CHECK(result.total_time == result.setup_time);
}

TEST_CASE("two-fib chain closed form") {
    // gen -> f1 -> f2 -> term in one group, one round, base 5, step 1:
    // 1 (hop) + 15 (fib 5) + 1 + 25 (fib 6) + 1 = 43
    auto config = single_group_chain(2);
    auto result = simulate(config, chain_params(1), unit_sim(), CacheState{false});
    CHECK(result.execution_time == 43.0);
    CHECK(result.setup_time == 200.0);
    CHECK(result.total_time == 243.0);
    CHECK(result.per_operator_completion.at("term") == 43.0);
}

TEST_CASE("total time is always setup plus execution") {
    auto config = single_group_chain(3);
    for (int rounds : {0, 1, 5}) {
        for (bool cold : {true, false}) {
            auto result = simulate(config, chain_params(rounds), unit_sim(), CacheState{cold});
            CHECK(result.total_time == result.setup_time + result.execution_time);
        }
    }
}

TEST_CASE("cold setup exceeds warm by pull cost times distinct images") {
    WorkloadParams params;
    params.topology = Topology::Parallel;
    params.special_ops = 2;
    params.seed = 3;
    auto workload = generate_pipeline(params);
    auto config = connection_strategy(workload.pipeline, workload.images);

    auto sim = unit_sim();
    auto cold = simulate(config, params, sim, CacheState{true});
    auto warm = simulate(config, params, sim, CacheState{false});

    std::set<ImageId> distinct;
    for (const auto& g : config.groups) distinct.insert(g.image.id);
    CHECK(cold.setup_time - warm.setup_time ==
          doctest::Approx(sim.t_pull * static_cast<double>(distinct.size())));
    CHECK(cold.execution_time == doctest::Approx(warm.execution_time));
}

TEST_CASE("setup grows strictly with group count") {
    WorkloadParams params;
    params.topology = Topology::Parallel;
    params.special_ops = 1;
    auto workload = generate_pipeline(params);

    auto single = default_strategy(workload.pipeline, workload.images, true);
    auto random = random_strategy(workload.pipeline, workload.images, 5);
    REQUIRE(random.groups.size() > single.groups.size());

    auto sim = unit_sim();
    auto a = simulate(single, params, sim, CacheState{false});
    auto b = simulate(random, params, sim, CacheState{false});
    CHECK(a.setup_time < b.setup_time);
}

namespace {

// parallel workload with per-line groups, synthetic images so mixed tag sets
// stay hostable; gen and term ride with line 1
GroupingConfig per_line_config(const Workload& workload, std::size_t lines,
                               std::size_t ops_per_line) {
    GroupingConfig config;
    config.pipeline = workload.pipeline;
    for (std::size_t l = 1; l <= lines; ++l) {
        Group g;
        g.id = "g" + std::to_string(l);
        if (l == 1) {
            g.operator_ids.push_back("gen");
            g.operator_ids.push_back("term");
        }
        for (std::size_t j = 1; j <= ops_per_line; ++j) {
            g.operator_ids.push_back("fib-" + std::to_string(l) + "-" + std::to_string(j));
        }
        Image img;
        img.id = "img-line-" + std::to_string(l);
        for (const auto& oid : g.operator_ids) {
            const auto* o = workload.pipeline.find_operator(oid);
            img.tags.insert(o->required_tags.begin(), o->required_tags.end());
        }
        img.synthetic = true;
        g.image = img;
        config.groups.push_back(std::move(g));
    }
    return config;
}

}  // namespace

TEST_CASE("single group serializes the parallel topology") {
    WorkloadParams params;
    params.topology = Topology::Parallel;
    params.special_ops = 1;
    params.rounds = 1;
    auto workload = generate_pipeline(params);

    SimParams sim;
    sim.l_intra = 0;
    sim.l_inter = 0;
    sim.t_unit = 1;

    auto single = default_strategy(workload.pipeline, workload.images, true);
    auto merged = simulate(single, params, sim, CacheState{false});

    // all twelve computing operators on one worker: the full work sum
    double total_work = 0;
    for (const auto& o : workload.pipeline.operators) {
        if (role_of(o.id) == OperatorRole::Fibonacci) {
            total_work += static_cast<double>(
                work_units(fib_argument(workload.pipeline, o.id, params)));
        }
    }
    CHECK(merged.execution_time == doctest::Approx(total_work));

    auto split = per_line_config(workload, params.lines, params.ops_per_line);
    REQUIRE(validate_config(split).empty());
    auto parallel = simulate(split, params, sim, CacheState{false});
    CHECK(parallel.execution_time == doctest::Approx(total_work / 3));
    CHECK(merged.execution_time / parallel.execution_time >= 2.5);
}

TEST_CASE("parallelism never hurts under equal latency") {
    WorkloadParams params;
    params.topology = Topology::Parallel;
    params.special_ops = 1;
    params.rounds = 2;
    auto workload = generate_pipeline(params);

    SimParams sim;
    sim.l_intra = 1;
    sim.l_inter = 1;  // equal latency regime

    auto single = default_strategy(workload.pipeline, workload.images, true);
    auto split = per_line_config(workload, params.lines, params.ops_per_line);
    auto merged = simulate(single, params, sim, CacheState{false});
    auto parallel = simulate(split, params, sim, CacheState{false});
    CHECK(merged.execution_time >= parallel.execution_time);
}

TEST_CASE("terminator message conservation") {
    // line: one tail plus the control edge; parallel: three tails plus control
    WorkloadParams line;
    line.topology = Topology::Line;
    auto line_workload = generate_pipeline(line);
    auto line_config = default_strategy(line_workload.pipeline, line_workload.images, true);
    auto result = simulate(line_config, line, unit_sim(), CacheState{false});
    CHECK(result.terminator_messages == static_cast<std::size_t>(line.rounds) * 2);

    WorkloadParams parallel;
    parallel.topology = Topology::Parallel;
    auto par_workload = generate_pipeline(parallel);
    auto par_config = default_strategy(par_workload.pipeline, par_workload.images, true);
    result = simulate(par_config, parallel, unit_sim(), CacheState{false});
    CHECK(result.terminator_messages == static_cast<std::size_t>(parallel.rounds) * 4);
}

TEST_CASE("run_repetitions: first cold, identical warm results") {
    WorkloadParams params;
    params.topology = Topology::Line;
    auto workload = generate_pipeline(params);
    auto config = connection_strategy(workload.pipeline, workload.images);

    auto results = run_repetitions(config, params, unit_sim(), 5);
    REQUIRE(results.size() == 5);
    CHECK(results[0].setup_time > results[1].setup_time);
    for (std::size_t r = 2; r < results.size(); ++r) {
        CHECK(results[r].setup_time == results[1].setup_time);
        CHECK(results[r].execution_time == results[1].execution_time);
    }

    auto one = run_repetitions(config, params, unit_sim(), 1);
    CHECK(one.size() == 1);
    CHECK(one[0].setup_time == results[0].setup_time);

    CHECK_THROWS_AS(run_repetitions(config, params, unit_sim(), 0), std::invalid_argument);
}

TEST_CASE("jitter perturbs work durations reproducibly") {
    auto config = single_group_chain(2);
    auto params = chain_params(1);
    SimParams sim = unit_sim();
    sim.jitter_seed = 99;

    auto a = simulate(config, params, sim, CacheState{false});
    auto b = simulate(config, params, sim, CacheState{false});
    CHECK(a.execution_time == b.execution_time);
    CHECK(a.execution_time != doctest::Approx(43));  // noise applied

    auto reps = run_repetitions(config, params, sim, 3);
    CHECK(reps[1].execution_time != reps[2].execution_time);
}

TEST_CASE("invalid configs are rejected before simulation") {
    auto config = single_group_chain(2);
    config.groups[0].operator_ids.pop_back();
    CHECK_THROWS_AS(simulate(config, chain_params(1), unit_sim(), CacheState{true}),
                    std::invalid_argument);
}
