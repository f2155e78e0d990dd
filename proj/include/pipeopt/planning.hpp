#pragma once

#include <compare>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pipeopt/core.hpp"

namespace pipeopt {

// Ground fact: predicate applied to constant arguments.
struct Fact {
    std::string predicate;
    std::vector<std::string> args;

    auto operator<=>(const Fact&) const = default;
};

// Closed-world state: facts in the set are true, everything else false.
using State = std::set<Fact>;

struct Condition {
    std::set<Fact> positive;
    std::set<Fact> negative;
};

bool holds(const State& state, const Condition& condition);

// Ground action. The cost is a total function of the state it is applied in.
struct ActionInstance {
    std::string name;
    std::vector<std::string> args;
    Condition pre;
    std::set<Fact> add;
    std::set<Fact> del;
    std::function<Cost(const State&)> cost;

    // "name arg1 arg2 ..." — unique within a task, used for lookup.
    std::string signature() const;
};

// s' = (s ∪ add) − del. Throws std::runtime_error("inapplicable action ...")
// when the precondition does not hold in `state`.
State apply(const State& state, const ActionInstance& action);

struct Plan {
    std::vector<ActionInstance> actions;
    Cost total_cost = 0;
};

// Replays the plan from `initial`, charging each action's cost in the state
// it is applied in. Throws std::runtime_error("inapplicable plan ...").
Cost plan_cost(const Plan& plan, const State& initial);

// The grouping problem encoded as a planning task.
//
// Actions:
//   create-group(gk, img)   cost: weights.group_cost
//       pre: group k-1 exists (k > 1), group k does not exist
//   assign-operator(op, gk) cost: sum over already-assigned neighbors j of op
//                                 of (weights.intra if j is in gk else inter)
//       pre: op is the cursor operator, gk exists, gk's image satisfies op
//
// Operators are assigned in pipeline declaration order (cursor facts), and
// groups carry contiguous indices; both break permutation symmetries without
// excluding any partition. Pre-assigned pipeline groups are part of the
// initial state and never touched by actions.
struct GroupingTask {
    Pipeline pipeline;
    ImageCatalog images;
    StrategyWeights weights;
    std::size_t max_groups = 0;  // total cap, including pre-assigned groups

    State initial;
    Condition goal;
    std::vector<ActionInstance> actions;

    // --- derived, used by the solver and the PDDL bridge ---
    std::vector<int> order;            // unassigned operator indices, pipeline order
    std::vector<int> fixed_group_of;   // per operator index: fixed group slot or -1
    std::vector<Group> fixed_groups;
    std::vector<GroupId> group_ids;    // slot (0-based) -> group id, fixed first
    std::vector<std::vector<int>> neighbors;  // per operator index, from edges
    std::vector<std::vector<bool>> op_image_ok;  // [op index][image index]
    std::vector<std::vector<std::size_t>> create_action_at;  // [slot][image index]
    std::vector<std::vector<std::size_t>> assign_action_at;  // [order pos][slot]

    const ActionInstance* find_action(const std::string& signature) const;

private:
    std::unordered_map<std::string, std::size_t> action_by_signature_;
    friend GroupingTask build_grouping_task(const Pipeline&, const ImageCatalog&,
                                            const StrategyWeights&,
                                            std::optional<std::size_t>);
};

// max_groups defaults to |operators|. Throws "unsatisfiable operator: <id>"
// when some unassigned operator is satisfied by no catalog image.
GroupingTask build_grouping_task(const Pipeline& pipeline, const ImageCatalog& images,
                                 const StrategyWeights& weights,
                                 std::optional<std::size_t> max_groups = std::nullopt);

// Uniform-cost best-first search over canonical grouping states with
// duplicate detection. Returns a minimum-cost plan; deterministic for a
// given task. Throws std::runtime_error("no plan") when unsolvable.
Plan solve_optimal(const GroupingTask& task);

// Optional admissible lower bound (remaining unassigned operators times the
// cheapest incident-edge cost); off by default, for experimentation.
Plan solve_optimal(const GroupingTask& task, bool use_lower_bound);

// Mirrors the plan's create/assign actions into a GroupingConfig (fixed
// groups included). Validates applicability and the resulting config.
GroupingConfig plan_to_config(const Plan& plan, const GroupingTask& task);

struct OracleResult {
    GroupingConfig config;
    Cost cost = 0;
};

// Exhaustive set-partition enumeration, the verification oracle for
// solve_optimal. Throws "instance too large for oracle" above `cap`
// operators and "unsatisfiable" when no feasible partition exists.
OracleResult brute_force_grouping(const Pipeline& pipeline, const ImageCatalog& images,
                                  const StrategyWeights& weights, std::size_t cap = 10);

}  // namespace pipeopt
