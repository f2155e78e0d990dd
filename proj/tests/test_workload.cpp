#include <doctest.h>

#include <map>
#include <set>

#include "pipeopt/json_io.hpp"
#include "pipeopt/workload.hpp"
#include "test_util.hpp"

using namespace pipeopt;

namespace {

WorkloadParams line_params(std::size_t special_ops = 1, int step = 1,
                           std::uint64_t seed = 1) {
    WorkloadParams params;
    params.topology = Topology::Line;
    params.special_ops = special_ops;
    params.fib_step = step;
    params.seed = seed;
    return params;
}

WorkloadParams parallel_params(std::size_t special_ops = 1, int step = 1,
                               std::uint64_t seed = 1) {
    WorkloadParams params = line_params(special_ops, step, seed);
    params.topology = Topology::Parallel;
    return params;
}

}  // namespace

TEST_CASE("line workload has 14 operators and 14 edges") {
    auto workload = generate_pipeline(line_params());
    CHECK(workload.pipeline.operators.size() == 14);
    CHECK(workload.pipeline.edges.size() == 14);
    CHECK(pipeline_issues(workload.pipeline).empty());
    CHECK(workload.images.size() == 4);
}

TEST_CASE("parallel workload has 14 operators and 16 edges") {
    auto workload = generate_pipeline(parallel_params());
    CHECK(workload.pipeline.operators.size() == 14);
    CHECK(workload.pipeline.edges.size() == 16);
    CHECK(pipeline_issues(workload.pipeline).empty());
}

TEST_CASE("generated workloads are acyclic") {
    for (auto params : {line_params(4, 2, 7), parallel_params(4, 2, 7)}) {
        auto workload = generate_pipeline(params);
        const auto& p = workload.pipeline;
        // Kahn's algorithm
        std::map<std::string, int> indegree;
        for (const auto& o : p.operators) indegree[o.id] = 0;
        for (const auto& e : p.edges) indegree[e.to]++;
        std::vector<std::string> queue;
        for (auto& [id, d] : indegree) {
            if (d == 0) queue.push_back(id);
        }
        std::size_t visited = 0;
        while (!queue.empty()) {
            auto id = queue.back();
            queue.pop_back();
            ++visited;
            for (const auto& e : p.edges) {
                if (e.from == id && --indegree[e.to] == 0) queue.push_back(e.to);
            }
        }
        CHECK(visited == p.operators.size());
    }
}

TEST_CASE("special tag counts and cycling") {
    auto count_tags = [](const Pipeline& p) {
        std::map<Tag, int> counts;
        for (const auto& o : p.operators) {
            for (const auto& t : o.required_tags) {
                if (t.rfind("spt-", 0) == 0) counts[t]++;
            }
        }
        return counts;
    };

    auto three = generate_pipeline(line_params(3));
    auto counts = count_tags(three.pipeline);
    CHECK(counts.size() == 3);
    CHECK(counts["spt-1"] == 1);
    CHECK(counts["spt-2"] == 1);
    CHECK(counts["spt-3"] == 1);

    auto four = generate_pipeline(line_params(4));
    counts = count_tags(four.pipeline);
    CHECK(counts["spt-1"] == 2);
    CHECK(counts["spt-2"] == 1);
    CHECK(counts["spt-3"] == 1);

    auto one = generate_pipeline(line_params(1));
    counts = count_tags(one.pipeline);
    CHECK(counts.size() == 1);
}

TEST_CASE("generator and terminator are never special") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        auto workload = generate_pipeline(line_params(12, 1, seed));
        const auto* gen = workload.pipeline.find_operator("gen");
        const auto* term = workload.pipeline.find_operator("term");
        CHECK(gen->required_tags == std::set<Tag>{"golang"});
        CHECK(term->required_tags == std::set<Tag>{"golang"});
    }
}

TEST_CASE("special op count is validated") {
    WorkloadParams zero = line_params(0);
    CHECK_THROWS_AS(generate_pipeline(zero), std::invalid_argument);

    auto workload = generate_pipeline(line_params(1));
    CHECK_THROWS_AS(assign_special_tags(workload.pipeline, 13, 1), std::invalid_argument);
    CHECK_THROWS_AS(assign_special_tags(workload.pipeline, 0, 1), std::invalid_argument);
}

TEST_CASE("every operator is satisfied by exactly one catalog image") {
    for (auto params : {line_params(4, 1, 3), parallel_params(4, 1, 3)}) {
        auto workload = generate_pipeline(params);
        for (const auto& o : workload.pipeline.operators) {
            int hosts = 0;
            for (const auto& img : workload.images) {
                if (satisfies(img, o)) ++hosts;
            }
            CHECK(hosts == 1);
        }
    }
}

TEST_CASE("literal tag reading keeps the default tag everywhere") {
    auto params = line_params(2);
    params.literal_tags = true;
    auto workload = generate_pipeline(params);
    for (const auto& img : workload.images) {
        CHECK(img.tags.count("golang") == 1);
    }
    // under the literal reading a special image hosts default operators too
    const Image* spt1 = nullptr;
    for (const auto& img : workload.images) {
        if (img.id == "img-spt-1") spt1 = &img;
    }
    REQUIRE(spt1 != nullptr);
    CHECK(satisfies(*spt1, *workload.pipeline.find_operator("gen")));
}

TEST_CASE("fib_argument follows base plus depth times step") {
    auto params = line_params(1, 3);
    auto workload = generate_pipeline(params);
    CHECK(fib_argument(workload.pipeline, "fib-1", params) == 5);
    CHECK(fib_argument(workload.pipeline, "fib-3", params) == 11);
    CHECK(fib_argument(workload.pipeline, "fib-12", params) == 38);

    params = line_params(1, 1);
    workload = generate_pipeline(params);
    CHECK(fib_argument(workload.pipeline, "fib-12", params) == 16);

    CHECK_THROWS_AS(fib_argument(workload.pipeline, "gen", params), std::invalid_argument);
}

TEST_CASE("fib_argument in the parallel topology restarts per line") {
    auto params = parallel_params(1, 2);
    auto workload = generate_pipeline(params);
    for (int line = 1; line <= 3; ++line) {
        for (int j = 1; j <= 4; ++j) {
            auto id = "fib-" + std::to_string(line) + "-" + std::to_string(j);
            CHECK(fib_argument(workload.pipeline, id, params) == 5 + (j - 1) * 2);
        }
    }
}

TEST_CASE("identical params produce identical pipeline bytes") {
    auto params = parallel_params(4, 3, 11);
    auto a = generate_pipeline(params);
    auto b = generate_pipeline(params);
    CHECK(dump_json(pipeline_to_json(a.pipeline)) == dump_json(pipeline_to_json(b.pipeline)));
    CHECK(dump_json(catalog_to_json(a.images)) == dump_json(catalog_to_json(b.images)));

    params.seed = 12;
    auto c = generate_pipeline(params);
    CHECK(dump_json(pipeline_to_json(a.pipeline)) != dump_json(pipeline_to_json(c.pipeline)));
}
