#include <doctest.h>

#include <string>

#include "pipeopt/json_io.hpp"
#include "pipeopt/pddl.hpp"
#include "pipeopt/strategies.hpp"
#include "pipeopt/workload.hpp"
#include "test_util.hpp"

using namespace pipeopt;
using namespace pipeopt::test;

namespace {

std::size_t count_occurrences(const std::string& text, const std::string& needle) {
    std::size_t count = 0;
    for (std::size_t pos = text.find(needle); pos != std::string::npos;
         pos = text.find(needle, pos + needle.size())) {
        ++count;
    }
    return count;
}

GroupingTask one_op_task() {
    Pipeline p = line_pipeline({op("op1", {"golang"})});
    ImageCatalog images = {image("img-default", {"golang"})};
    return build_grouping_task(p, images, connection_weights());
}

}  // namespace

TEST_CASE("one-operator problem lists one operator object and goal fact") {
    auto task = one_op_task();
    auto artifacts = emit_pddl(task);
    CHECK(count_occurrences(artifacts.problem_text, "(assigned op1)") == 1);
    CHECK(count_occurrences(artifacts.problem_text, "(current-op op1)") == 1);
    CHECK(artifacts.problem_text.find("op1 - operator") != std::string::npos);
    CHECK(artifacts.domain_text.find("(:action create-group") != std::string::npos);
    CHECK(artifacts.domain_text.find("(:action assign-operator") != std::string::npos);
    CHECK(artifacts.domain_text.find("(:metric") == std::string::npos);
    CHECK(artifacts.problem_text.find("(:metric minimize (total-cost))") != std::string::npos);
}

TEST_CASE("emitted fact counts match pipeline cardinalities") {
    Pipeline p = line_pipeline({op("a", {"golang"}), op("b", {"golang"}),
                                op("c", {"spt-1"})});
    ImageCatalog images = {image("img-default", {"golang"}), image("img-spt-1", {"spt-1"})};
    auto task = build_grouping_task(p, images, connection_weights());
    auto artifacts = emit_pddl(task);

    CHECK(count_occurrences(artifacts.problem_text, "(edge ") == p.edges.size());
    std::size_t op_tag_facts = 0;
    for (const auto& o : p.operators) op_tag_facts += o.required_tags.size();
    CHECK(count_occurrences(artifacts.problem_text, "(requires-tag ") == op_tag_facts);
    std::size_t img_tag_facts = 0;
    for (const auto& img : images) img_tag_facts += img.tags.size();
    CHECK(count_occurrences(artifacts.problem_text, "(supports-tag ") == img_tag_facts);
}

TEST_CASE("emission matches the frozen fixtures byte for byte") {
    WorkloadParams params;
    params.topology = Topology::Line;
    params.special_ops = 2;
    params.fib_step = 1;
    params.seed = 1;
    auto workload = generate_pipeline(params);
    auto task = build_grouping_task(workload.pipeline, workload.images, connection_weights());
    auto artifacts = emit_pddl(task);

    std::string fixture_dir = PIPEOPT_FIXTURE_DIR;
    CHECK(artifacts.domain_text == read_text_file(fixture_dir + "/line_seed1_domain.pddl"));
    CHECK(artifacts.problem_text == read_text_file(fixture_dir + "/line_seed1_problem.pddl"));

    // stable across re-emission
    auto again = emit_pddl(task);
    CHECK(again.domain_text == artifacts.domain_text);
    CHECK(again.problem_text == artifacts.problem_text);
}

TEST_CASE("node weights land in the domain text") {
    Pipeline p = line_pipeline({op("a", {"golang"})});
    ImageCatalog images = {image("img-default", {"golang"})};
    auto task = build_grouping_task(p, images, node_weights());
    auto artifacts = emit_pddl(task);
    CHECK(artifacts.domain_text.find("(increase (total-cost) 1000)") != std::string::npos);
}

TEST_CASE("forced one-op plan text parses") {
    auto task = one_op_task();
    Plan plan = parse_plan("(create-group g1 img-default)\n(assign-operator op1 g1)\n", task);
    REQUIRE(plan.actions.size() == 2);
    CHECK(plan.total_cost == 50);
}

TEST_CASE("comments and cost footers are ignored") {
    auto task = one_op_task();
    std::string text =
        "; produced by an external planner\n"
        "(create-group g1 img-default) ; opens the group\n"
        "\n"
        "(assign-operator op1 g1)\n"
        "; cost = 50\n";
    Plan plan = parse_plan(text, task);
    CHECK(plan.total_cost == 50);
}

TEST_CASE("empty plan is valid only when the goal already holds") {
    auto task = one_op_task();
    CHECK_THROWS_WITH_AS(parse_plan("", task), doctest::Contains("goal"),
                         std::runtime_error);

    Pipeline done = line_pipeline({op("op1", {"golang"})});
    Image img = image("img-default", {"golang"});
    done.groups = {group("user", {"op1"}, img)};
    auto done_task = build_grouping_task(done, {img}, connection_weights());
    Plan plan = parse_plan("", done_task);
    CHECK(plan.actions.empty());
    CHECK(plan.total_cost == 0);
}

TEST_CASE("parse errors carry line numbers") {
    auto task = one_op_task();
    CHECK_THROWS_WITH_AS(parse_plan("(create-group g1 img-default)\n(fly-to-moon op1)\n", task),
                         doctest::Contains("plan line 2: unknown action fly-to-moon"),
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_plan("(create-group g1)\n", task),
                         doctest::Contains("plan line 1: wrong arity"), std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_plan("(create-group g9 img-default)\n", task),
                         doctest::Contains("plan line 1: unknown action instance"),
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_plan("(assign-operator op1 g1)\n", task),
                         doctest::Contains("plan line 1: inapplicable action"),
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_plan("create-group g1 img-default\n", task),
                         doctest::Contains("plan line 1: malformed"), std::runtime_error);
}

TEST_CASE("serialize and parse round-trips the induced config") {
    for (int round = 0; round < 20; ++round) {
        auto inst = random_instance(11000 + round);
        CAPTURE(round);
        auto task = build_grouping_task(inst.pipeline, inst.images, connection_weights());
        auto plan = solve_optimal(task);
        auto parsed = parse_plan(serialize_plan(plan), task);
        CHECK(parsed.total_cost == plan.total_cost);
        auto original = config_to_json(plan_to_config(plan, task));
        auto recovered = config_to_json(plan_to_config(parsed, task));
        CHECK(dump_json(original) == dump_json(recovered));
    }
}
