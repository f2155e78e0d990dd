#include "pipeopt/planning.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <queue>
#include <stdexcept>

namespace pipeopt {

bool holds(const State& state, const Condition& condition) {
    for (const auto& fact : condition.positive) {
        if (!state.count(fact)) return false;
    }
    for (const auto& fact : condition.negative) {
        if (state.count(fact)) return false;
    }
    return true;
}

std::string ActionInstance::signature() const {
    std::string sig = name;
    for (const auto& arg : args) {
        sig += ' ';
        sig += arg;
    }
    return sig;
}

State apply(const State& state, const ActionInstance& action) {
    if (!holds(state, action.pre)) {
        throw std::runtime_error("inapplicable action: " + action.signature());
    }
    State next = state;
    for (const auto& fact : action.add) next.insert(fact);
    for (const auto& fact : action.del) next.erase(fact);
    return next;
}

Cost plan_cost(const Plan& plan, const State& initial) {
    State state = initial;
    Cost total = 0;
    for (std::size_t i = 0; i < plan.actions.size(); ++i) {
        const ActionInstance& action = plan.actions[i];
        if (!holds(state, action.pre)) {
            throw std::runtime_error("inapplicable plan: step " + std::to_string(i + 1) +
                                     " (" + action.signature() + ")");
        }
        total += action.cost(state);  // cost evaluated in the state it fires in
        state = pipeopt::apply(state, action);
    }
    return total;
}

namespace {

Fact fact(std::string predicate, std::vector<std::string> args) {
    return Fact{std::move(predicate), std::move(args)};
}

}  // namespace

const ActionInstance* GroupingTask::find_action(const std::string& signature) const {
    auto it = action_by_signature_.find(signature);
    if (it == action_by_signature_.end()) return nullptr;
    return &actions[it->second];
}

GroupingTask build_grouping_task(const Pipeline& pipeline, const ImageCatalog& images,
                                 const StrategyWeights& weights,
                                 std::optional<std::size_t> max_groups) {
    auto issues = pipeline_issues(pipeline);
    if (!issues.empty()) {
        throw std::invalid_argument("invalid pipeline: " + issues.front());
    }
    if (images.empty()) {
        throw std::invalid_argument("invalid pipeline: empty image catalog");
    }

    GroupingTask task;
    task.pipeline = pipeline;
    task.images = images;
    task.weights = weights;

    const std::size_t n_ops = pipeline.operators.size();
    task.fixed_group_of.assign(n_ops, -1);
    task.fixed_groups = pipeline.groups;
    for (std::size_t g = 0; g < task.fixed_groups.size(); ++g) {
        for (const auto& oid : task.fixed_groups[g].operator_ids) {
            int idx = pipeline.operator_index(oid);
            task.fixed_group_of[idx] = static_cast<int>(g);
            if (!satisfies(task.fixed_groups[g].image, pipeline.operators[idx])) {
                throw std::invalid_argument("invalid pre-assigned group " +
                                            task.fixed_groups[g].id + ": image " +
                                            task.fixed_groups[g].image.id +
                                            " does not satisfy operator " + oid);
            }
        }
    }
    for (std::size_t i = 0; i < n_ops; ++i) {
        if (task.fixed_group_of[i] < 0) task.order.push_back(static_cast<int>(i));
    }

    const std::size_t fixed_count = task.fixed_groups.size();
    task.max_groups = max_groups.value_or(std::max<std::size_t>(n_ops, 1));
    if (task.max_groups < 1) {
        throw std::invalid_argument("max_groups must be at least 1");
    }

    task.op_image_ok.assign(n_ops, std::vector<bool>(images.size(), false));
    for (std::size_t i = 0; i < n_ops; ++i) {
        for (std::size_t m = 0; m < images.size(); ++m) {
            task.op_image_ok[i][m] = satisfies(images[m], pipeline.operators[i]);
        }
    }
    for (int oi : task.order) {
        bool any = false;
        for (std::size_t m = 0; m < images.size() && !any; ++m) {
            any = task.op_image_ok[oi][m];
        }
        if (!any) {
            throw std::runtime_error("unsatisfiable operator: " +
                                     pipeline.operators[oi].id);
        }
    }

    task.neighbors.assign(n_ops, {});
    for (const auto& e : pipeline.edges) {
        int u = pipeline.operator_index(e.from);
        int v = pipeline.operator_index(e.to);
        task.neighbors[u].push_back(v);
        task.neighbors[v].push_back(u);
    }

    // Group slot ids: fixed groups keep their declared ids, new slots are
    // named g<slot+1>, dodging collisions with user-chosen ids.
    std::set<GroupId> used_ids;
    for (const auto& g : task.fixed_groups) {
        task.group_ids.push_back(g.id);
        used_ids.insert(g.id);
    }
    for (std::size_t k = fixed_count; k < task.max_groups; ++k) {
        GroupId id = "g" + std::to_string(k + 1);
        while (used_ids.count(id)) id += "-opt";
        used_ids.insert(id);
        task.group_ids.push_back(id);
    }

    // Initial state: pre-assigned groups exist and their members are placed;
    // the cursor sits on the first unassigned operator.
    for (std::size_t k = 0; k < fixed_count; ++k) {
        const Group& g = task.fixed_groups[k];
        task.initial.insert(fact("group-exists", {g.id}));
        task.initial.insert(fact("group-image", {g.id, g.image.id}));
        for (const auto& op : pipeline.operators) {
            if (satisfies(g.image, op)) {
                task.initial.insert(fact("can-host", {g.id, op.id}));
            }
        }
        for (const auto& oid : g.operator_ids) {
            task.initial.insert(fact("assigned", {oid}));
            task.initial.insert(fact("in-group", {oid, g.id}));
        }
    }
    if (!task.order.empty()) {
        task.initial.insert(
            fact("current-op", {pipeline.operators[task.order[0]].id}));
    }
    for (const auto& op : pipeline.operators) {
        task.goal.positive.insert(fact("assigned", {op.id}));
    }

    // Ground create-group actions for every creatable slot and image.
    std::vector<std::vector<std::size_t>> create_at(task.max_groups);
    for (std::size_t k = fixed_count; k < task.max_groups; ++k) {
        for (std::size_t m = 0; m < images.size(); ++m) {
            ActionInstance a;
            a.name = "create-group";
            a.args = {task.group_ids[k], images[m].id};
            if (k > 0) {
                a.pre.positive.insert(fact("group-exists", {task.group_ids[k - 1]}));
            }
            a.pre.negative.insert(fact("group-exists", {task.group_ids[k]}));
            a.add.insert(fact("group-exists", {task.group_ids[k]}));
            a.add.insert(fact("group-image", {task.group_ids[k], images[m].id}));
            for (std::size_t i = 0; i < n_ops; ++i) {
                if (task.op_image_ok[i][m]) {
                    a.add.insert(fact("can-host",
                                      {task.group_ids[k], pipeline.operators[i].id}));
                }
            }
            Cost gc = weights.group_cost;
            a.cost = [gc](const State&) { return gc; };
            create_at[k].push_back(task.actions.size());
            task.actions.push_back(std::move(a));
        }
    }

    // Ground assign-operator actions for every (cursor operator, slot) pair.
    // Pre-assigned groups are frozen, so only created slots are targets. The
    // cost reads the state: already-assigned neighbors sharing the target
    // group are charged intra, the rest inter.
    constexpr std::size_t kNoAction = static_cast<std::size_t>(-1);
    std::vector<std::vector<std::size_t>> assign_at(
        task.order.size(), std::vector<std::size_t>(task.max_groups, kNoAction));
    for (std::size_t p = 0; p < task.order.size(); ++p) {
        int oi = task.order[p];
        const Operator& op = pipeline.operators[oi];
        std::vector<OperatorId> neighbor_ids;
        for (int j : task.neighbors[oi]) neighbor_ids.push_back(pipeline.operators[j].id);

        for (std::size_t k = fixed_count; k < task.max_groups; ++k) {
            const GroupId& gid = task.group_ids[k];
            ActionInstance a;
            a.name = "assign-operator";
            a.args = {op.id, gid};
            a.pre.positive.insert(fact("current-op", {op.id}));
            a.pre.positive.insert(fact("group-exists", {gid}));
            a.pre.positive.insert(fact("can-host", {gid, op.id}));
            a.add.insert(fact("assigned", {op.id}));
            a.add.insert(fact("in-group", {op.id, gid}));
            if (p + 1 < task.order.size()) {
                a.add.insert(
                    fact("current-op", {pipeline.operators[task.order[p + 1]].id}));
            }
            a.del.insert(fact("current-op", {op.id}));
            Cost intra = weights.intra;
            Cost inter = weights.inter;
            a.cost = [neighbor_ids, gid, intra, inter](const State& s) {
                Cost c = 0;
                for (const auto& nb : neighbor_ids) {
                    if (s.count(Fact{"assigned", {nb}})) {
                        c += s.count(Fact{"in-group", {nb, gid}}) ? intra : inter;
                    }
                }
                return c;
            };
            assign_at[p][k] = task.actions.size();
            task.actions.push_back(std::move(a));
        }
    }

    task.create_action_at = std::move(create_at);
    task.assign_action_at = std::move(assign_at);
    for (std::size_t i = 0; i < task.actions.size(); ++i) {
        task.action_by_signature_[task.actions[i].signature()] = i;
    }
    return task;
}

namespace {

struct SearchNode {
    std::vector<std::uint8_t> assignment;  // slot per assigned order position
    std::vector<std::uint8_t> new_images;  // image index per created slot
    Cost g = 0;
    int parent = -1;
    int create_action = -1;
    int assign_action = -1;
};

std::string encode(const SearchNode& node) {
    std::string key(node.assignment.begin(), node.assignment.end());
    key.push_back('\xff');
    key.append(node.new_images.begin(), node.new_images.end());
    return key;
}

}  // namespace

Plan solve_optimal(const GroupingTask& task) { return solve_optimal(task, false); }

Plan solve_optimal(const GroupingTask& task, bool use_lower_bound) {
    const auto& pipeline = task.pipeline;
    const std::size_t n_free = task.order.size();
    const std::size_t fixed_count = task.fixed_groups.size();

    // state encoding packs slot and image indices into single bytes
    if (task.max_groups > 255 || task.images.size() > 255) {
        throw std::invalid_argument("solver supports at most 255 group slots and images");
    }

    // position of each operator in the assignment order, -1 for fixed ops
    std::vector<int> pos_in_order(pipeline.operators.size(), -1);
    for (std::size_t p = 0; p < n_free; ++p) pos_in_order[task.order[p]] = static_cast<int>(p);

    // admissible suffix bound: edges whose later endpoint is still unassigned
    // will each cost at least min(intra, inter) when it gets assigned
    std::vector<Cost> suffix_bound(n_free + 1, 0);
    if (use_lower_bound) {
        Cost min_edge = std::min(task.weights.intra, task.weights.inter);
        for (std::size_t p = n_free; p-- > 0;) {
            int oi = task.order[p];
            Cost incident = 0;
            for (int j : task.neighbors[oi]) {
                if (pos_in_order[j] < 0 || pos_in_order[j] < static_cast<int>(p)) {
                    incident += min_edge;
                }
            }
            suffix_bound[p] = suffix_bound[p + 1] + incident;
        }
    }

    std::vector<SearchNode> nodes;
    nodes.push_back(SearchNode{});

    // min-heap on (priority, insertion sequence): deterministic tie-breaking
    using Entry = std::tuple<Cost, std::uint64_t, std::size_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> open;
    std::unordered_map<std::string, Cost> best_g;
    std::uint64_t seq = 0;

    best_g[encode(nodes[0])] = 0;
    open.push({suffix_bound[0], seq++, 0});

    auto assign_edge_cost = [&](const SearchNode& node, int oi, std::size_t slot) {
        Cost c = 0;
        std::size_t p = node.assignment.size();
        for (int j : task.neighbors[oi]) {
            std::size_t js;
            if (task.fixed_group_of[j] >= 0) {
                js = static_cast<std::size_t>(task.fixed_group_of[j]);
            } else if (pos_in_order[j] >= 0 && pos_in_order[j] < static_cast<int>(p)) {
                js = node.assignment[pos_in_order[j]];
            } else {
                continue;  // neighbor not assigned yet
            }
            c += (js == slot) ? task.weights.intra : task.weights.inter;
        }
        return c;
    };

    while (!open.empty()) {
        auto [f, s, idx] = open.top();
        open.pop();
        SearchNode node = nodes[idx];
        auto key = encode(node);
        if (node.g > best_g.at(key)) continue;  // stale entry

        std::size_t p = node.assignment.size();
        if (p == n_free) {
            // reconstruct the action sequence along the parent chain
            std::vector<const SearchNode*> chain;
            for (int cur = static_cast<int>(idx); cur >= 0; cur = nodes[cur].parent) {
                chain.push_back(&nodes[cur]);
            }
            Plan plan;
            for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
                if ((*it)->create_action >= 0)
                    plan.actions.push_back(task.actions[(*it)->create_action]);
                if ((*it)->assign_action >= 0)
                    plan.actions.push_back(task.actions[(*it)->assign_action]);
            }
            plan.total_cost = node.g;
            return plan;
        }

        int oi = task.order[p];
        std::size_t open_slots = fixed_count + node.new_images.size();

        auto push_child = [&](SearchNode child) {
            auto ck = encode(child);
            auto it = best_g.find(ck);
            if (it != best_g.end() && it->second <= child.g) return;
            best_g[ck] = child.g;
            Cost priority = child.g +
                (use_lower_bound ? suffix_bound[child.assignment.size()] : 0);
            nodes.push_back(std::move(child));
            open.push({priority, seq++, nodes.size() - 1});
        };

        // assign to an existing created group (fixed groups are frozen)
        for (std::size_t k = fixed_count; k < open_slots; ++k) {
            if (!task.op_image_ok[oi][node.new_images[k - fixed_count]]) continue;
            SearchNode child;
            child.assignment = node.assignment;
            child.assignment.push_back(static_cast<std::uint8_t>(k));
            child.new_images = node.new_images;
            child.g = node.g + assign_edge_cost(node, oi, k);
            child.parent = static_cast<int>(idx);
            child.assign_action = static_cast<int>(task.assign_action_at[p][k]);
            push_child(std::move(child));
        }
        // open the next group slot and assign there (groups are created
        // exactly when first used; creating earlier never changes the cost)
        if (open_slots < task.max_groups) {
            std::size_t k = open_slots;
            for (std::size_t m = 0; m < task.images.size(); ++m) {
                if (!task.op_image_ok[oi][m]) continue;
                SearchNode child;
                child.assignment = node.assignment;
                child.assignment.push_back(static_cast<std::uint8_t>(k));
                child.new_images = node.new_images;
                child.new_images.push_back(static_cast<std::uint8_t>(m));
                child.g = node.g + task.weights.group_cost + assign_edge_cost(node, oi, k);
                child.parent = static_cast<int>(idx);
                child.create_action = static_cast<int>(task.create_action_at[k][m]);
                child.assign_action = static_cast<int>(task.assign_action_at[p][k]);
                push_child(std::move(child));
            }
        }
    }
    throw std::runtime_error("no plan");
}

GroupingConfig plan_to_config(const Plan& plan, const GroupingTask& task) {
    // validates applicability and recomputes the cost along the way
    State state = task.initial;
    for (std::size_t i = 0; i < plan.actions.size(); ++i) {
        state = pipeopt::apply(state, plan.actions[i]);  // throws on inapplicable step
    }
    if (!holds(state, task.goal)) {
        throw std::runtime_error("invalid plan: goal not reached");
    }

    GroupingConfig config;
    config.pipeline = task.pipeline;
    config.groups = task.fixed_groups;
    std::unordered_map<std::string, std::size_t> slot_by_id;
    for (std::size_t k = 0; k < config.groups.size(); ++k) {
        slot_by_id[config.groups[k].id] = k;
    }
    for (const auto& action : plan.actions) {
        if (action.name == "create-group") {
            const auto& gid = action.args[0];
            const auto& img_id = action.args[1];
            auto img = std::find_if(task.images.begin(), task.images.end(),
                                    [&](const Image& im) { return im.id == img_id; });
            if (img == task.images.end()) {
                throw std::runtime_error("invalid plan: unknown image " + img_id);
            }
            slot_by_id[gid] = config.groups.size();
            config.groups.push_back(Group{gid, {}, *img});
        } else if (action.name == "assign-operator") {
            config.groups[slot_by_id.at(action.args[1])].operator_ids.push_back(
                action.args[0]);
        }
    }
    require_valid(config);
    return config;
}

namespace {

// Recursive restricted-growth-string enumeration of set partitions.
template <typename Visit>
void enumerate_partitions(std::size_t n, std::vector<int>& rgs, std::size_t i,
                          int max_used, const Visit& visit) {
    if (i == n) {
        visit(rgs, max_used + 1);
        return;
    }
    for (int b = 0; b <= max_used + 1; ++b) {
        rgs[i] = b;
        enumerate_partitions(n, rgs, i + 1, std::max(max_used, b), visit);
    }
}

}  // namespace

OracleResult brute_force_grouping(const Pipeline& pipeline, const ImageCatalog& images,
                                  const StrategyWeights& weights, std::size_t cap) {
    auto issues = pipeline_issues(pipeline);
    if (!issues.empty()) {
        throw std::invalid_argument("invalid pipeline: " + issues.front());
    }
    if (pipeline.operators.size() > cap) {
        throw std::runtime_error("instance too large for oracle");
    }

    const std::size_t n_ops = pipeline.operators.size();
    std::vector<int> fixed_slot(n_ops, -1);
    for (std::size_t g = 0; g < pipeline.groups.size(); ++g) {
        for (const auto& oid : pipeline.groups[g].operator_ids) {
            fixed_slot[pipeline.operator_index(oid)] = static_cast<int>(g);
        }
    }
    std::vector<int> free_ops;
    for (std::size_t i = 0; i < n_ops; ++i) {
        if (fixed_slot[i] < 0) free_ops.push_back(static_cast<int>(i));
    }
    const std::size_t fixed_count = pipeline.groups.size();

    std::vector<std::vector<bool>> sat(n_ops, std::vector<bool>(images.size(), false));
    for (std::size_t i = 0; i < n_ops; ++i) {
        for (std::size_t m = 0; m < images.size(); ++m) {
            sat[i][m] = satisfies(images[m], pipeline.operators[i]);
        }
    }

    struct Edgei {
        int u, v;
    };
    std::vector<Edgei> edges;
    for (const auto& e : pipeline.edges) {
        edges.push_back({pipeline.operator_index(e.from), pipeline.operator_index(e.to)});
    }

    Cost best_cost = std::numeric_limits<Cost>::max();
    std::vector<int> best_rgs;
    std::vector<std::size_t> best_block_images;

    std::vector<int> rgs(free_ops.size());
    auto visit = [&](const std::vector<int>& part, int n_blocks) {
        // pick the first catalog image feasible for every block
        std::vector<std::size_t> block_images(n_blocks, images.size());
        for (int b = 0; b < n_blocks; ++b) {
            for (std::size_t m = 0; m < images.size(); ++m) {
                bool all = true;
                for (std::size_t i = 0; i < free_ops.size() && all; ++i) {
                    if (part[i] == b) all = sat[free_ops[i]][m];
                }
                if (all) {
                    block_images[b] = m;
                    break;
                }
            }
            if (block_images[b] == images.size()) return;  // infeasible partition
        }
        std::vector<int> slot(n_ops);
        for (std::size_t i = 0; i < n_ops; ++i) slot[i] = fixed_slot[i];
        for (std::size_t i = 0; i < free_ops.size(); ++i) {
            slot[free_ops[i]] = static_cast<int>(fixed_count) + part[i];
        }
        Cost cost = weights.group_cost * static_cast<Cost>(fixed_count + n_blocks);
        for (const auto& e : edges) {
            cost += (slot[e.u] == slot[e.v]) ? weights.intra : weights.inter;
        }
        if (cost < best_cost) {
            best_cost = cost;
            best_rgs = part;
            best_block_images = block_images;
        }
    };

    if (free_ops.empty()) {
        std::vector<int> empty;
        visit(empty, 0);
    } else {
        enumerate_partitions(free_ops.size(), rgs, 0, -1, visit);
    }

    if (best_cost == std::numeric_limits<Cost>::max()) {
        throw std::runtime_error("unsatisfiable");
    }

    OracleResult result;
    result.config.pipeline = pipeline;
    result.config.groups = pipeline.groups;
    int n_blocks = best_rgs.empty() ? 0 : *std::max_element(best_rgs.begin(), best_rgs.end()) + 1;
    for (int b = 0; b < n_blocks; ++b) {
        Group group;
        group.id = "g" + std::to_string(fixed_count + b + 1);
        for (std::size_t i = 0; i < free_ops.size(); ++i) {
            if (best_rgs[i] == b) {
                group.operator_ids.push_back(pipeline.operators[free_ops[i]].id);
            }
        }
        group.image = images[best_block_images[b]];
        result.config.groups.push_back(std::move(group));
    }
    result.cost = best_cost;
    return result;
}

}  // namespace pipeopt
