#include "pipeopt/strategies.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

#include "pipeopt/rng.hpp"

namespace pipeopt {

std::string strategy_name(StrategyKind kind) {
    switch (kind) {
    case StrategyKind::Connection: return "connection";
    case StrategyKind::Node: return "node";
    case StrategyKind::Random: return "random";
    case StrategyKind::Default: return "default";
    }
    return "unknown";
}

StrategyKind strategy_from_name(const std::string& name) {
    if (name == "connection") return StrategyKind::Connection;
    if (name == "node") return StrategyKind::Node;
    if (name == "random") return StrategyKind::Random;
    if (name == "default") return StrategyKind::Default;
    throw std::invalid_argument("unknown strategy: " + name);
}

StrategyWeights connection_weights() { return StrategyWeights{5, 20, 50}; }

StrategyWeights node_weights() { return StrategyWeights{5, 5, 1000}; }

GroupingConfig connection_strategy(const Pipeline& pipeline, const ImageCatalog& images) {
    GroupingTask task = build_grouping_task(pipeline, images, connection_weights());
    return plan_to_config(solve_optimal(task), task);
}

GroupingConfig node_strategy(const Pipeline& pipeline, const ImageCatalog& images) {
    GroupingTask task = build_grouping_task(pipeline, images, node_weights());
    return plan_to_config(solve_optimal(task), task);
}

GroupingConfig random_strategy(const Pipeline& pipeline, const ImageCatalog& images,
                               std::uint64_t seed) {
    auto issues = pipeline_issues(pipeline);
    if (!issues.empty()) {
        throw std::invalid_argument("invalid pipeline: " + issues.front());
    }
    if (images.empty()) {
        throw std::invalid_argument("invalid pipeline: empty image catalog");
    }

    GroupingConfig config;
    config.pipeline = pipeline;
    config.groups = pipeline.groups;  // pre-assigned groups are kept as-is

    std::unordered_set<std::string> grouped;
    for (const auto& g : pipeline.groups) {
        grouped.insert(g.operator_ids.begin(), g.operator_ids.end());
    }

    Rng rng(seed);
    std::size_t next_group = pipeline.groups.size() + 1;
    while (grouped.size() < pipeline.operators.size()) {
        // guard: every ungrouped operator must still be reachable by some image
        for (const auto& op : pipeline.operators) {
            if (grouped.count(op.id)) continue;
            bool any = std::any_of(images.begin(), images.end(),
                                   [&](const Image& img) { return satisfies(img, op); });
            if (!any) throw std::runtime_error("unsatisfiable operator: " + op.id);
        }

        const Image& image = images[rng.bounded(images.size())];
        std::vector<OperatorId> candidates;
        for (const auto& op : pipeline.operators) {
            if (!grouped.count(op.id) && satisfies(image, op)) {
                candidates.push_back(op.id);
            }
        }
        if (candidates.empty()) continue;  // image satisfies nothing, redraw

        std::size_t m = rng.in_range(1, candidates.size());
        auto selected = rng.sample(candidates, m);

        Group group;
        group.id = "g" + std::to_string(next_group++);
        // members in pipeline order for stable serialization
        for (const auto& op : pipeline.operators) {
            if (std::find(selected.begin(), selected.end(), op.id) != selected.end()) {
                group.operator_ids.push_back(op.id);
                grouped.insert(op.id);
            }
        }
        group.image = image;
        config.groups.push_back(std::move(group));
    }
    return config;
}

GroupingConfig default_strategy(const Pipeline& pipeline, const ImageCatalog& images,
                                bool allow_universal) {
    auto issues = pipeline_issues(pipeline);
    if (!issues.empty()) {
        throw std::invalid_argument("invalid pipeline: " + issues.front());
    }

    std::unordered_set<std::string> preassigned;
    for (const auto& g : pipeline.groups) {
        preassigned.insert(g.operator_ids.begin(), g.operator_ids.end());
    }
    std::vector<const Operator*> free_ops;
    for (const auto& op : pipeline.operators) {
        if (!preassigned.count(op.id)) free_ops.push_back(&op);
    }

    GroupingConfig config;
    config.pipeline = pipeline;
    config.groups = pipeline.groups;
    if (free_ops.empty()) return config;

    const Image* chosen = nullptr;
    for (const auto& img : images) {
        bool all = std::all_of(free_ops.begin(), free_ops.end(),
                               [&](const Operator* op) { return satisfies(img, *op); });
        if (all) {
            chosen = &img;
            break;
        }
    }

    Group group;
    group.id = "g" + std::to_string(pipeline.groups.size() + 1);
    for (const Operator* op : free_ops) group.operator_ids.push_back(op->id);
    if (chosen != nullptr) {
        group.image = *chosen;
    } else if (allow_universal) {
        Image universal;
        universal.id = "img-universal";
        auto taken = [&](const std::string& id) {
            return std::any_of(images.begin(), images.end(),
                               [&](const Image& img) { return img.id == id; });
        };
        while (taken(universal.id)) universal.id += "-x";
        for (const Operator* op : free_ops) {
            universal.tags.insert(op->required_tags.begin(), op->required_tags.end());
        }
        universal.synthetic = true;
        group.image = std::move(universal);
    } else {
        throw std::runtime_error(
            "default baseline infeasible: no catalog image satisfies all operators");
    }
    config.groups.push_back(std::move(group));
    return config;
}

GroupingConfig run_strategy(StrategyKind kind, const Pipeline& pipeline,
                            const ImageCatalog& images, std::uint64_t seed,
                            bool allow_universal) {
    switch (kind) {
    case StrategyKind::Connection: return connection_strategy(pipeline, images);
    case StrategyKind::Node: return node_strategy(pipeline, images);
    case StrategyKind::Random: return random_strategy(pipeline, images, seed);
    case StrategyKind::Default: return default_strategy(pipeline, images, allow_universal);
    }
    throw std::logic_error("unreachable strategy kind");
}

}  // namespace pipeopt
