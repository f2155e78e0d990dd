#include "pipeopt/core.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace pipeopt {

const Operator* Pipeline::find_operator(const OperatorId& id) const {
    for (const auto& op : operators) {
        if (op.id == id) return &op;
    }
    return nullptr;
}

int Pipeline::operator_index(const OperatorId& id) const {
    for (std::size_t i = 0; i < operators.size(); ++i) {
        if (operators[i].id == id) return static_cast<int>(i);
    }
    return -1;
}

bool satisfies(const Image& image, const Operator& op) {
    return std::includes(image.tags.begin(), image.tags.end(),
                         op.required_tags.begin(), op.required_tags.end());
}

std::vector<std::string> pipeline_issues(const Pipeline& pipeline) {
    std::vector<std::string> issues;
    std::unordered_set<std::string> ids;
    for (const auto& op : pipeline.operators) {
        if (op.id.empty()) issues.push_back("operator with empty id");
        if (!ids.insert(op.id).second)
            issues.push_back("duplicate operator id: " + op.id);
        if (op.required_tags.empty())
            issues.push_back("operator " + op.id + " has no required tags");
    }
    std::set<std::pair<std::string, std::string>> seen_edges;
    for (const auto& e : pipeline.edges) {
        if (!ids.count(e.from))
            issues.push_back("edge endpoint not in pipeline: " + e.from);
        if (!ids.count(e.to))
            issues.push_back("edge endpoint not in pipeline: " + e.to);
        if (e.from == e.to)
            issues.push_back("self-loop edge on " + e.from);
        if (!seen_edges.insert({e.from, e.to}).second)
            issues.push_back("duplicate edge " + e.from + " -> " + e.to);
    }
    std::unordered_set<std::string> preassigned;
    for (const auto& g : pipeline.groups) {
        if (g.operator_ids.empty())
            issues.push_back("pre-assigned group " + g.id + " is empty");
        for (const auto& oid : g.operator_ids) {
            if (!ids.count(oid))
                issues.push_back("pre-assigned group " + g.id +
                                 " names unknown operator " + oid);
            if (!preassigned.insert(oid).second)
                issues.push_back("operator " + oid +
                                 " pre-assigned to more than one group");
        }
    }
    return issues;
}

ValidationReport validate_config(const GroupingConfig& config) {
    ValidationReport report;
    const auto& pipeline = config.pipeline;

    std::unordered_map<std::string, int> assignment_count;
    for (const auto& op : pipeline.operators) assignment_count[op.id] = 0;

    for (const auto& group : config.groups) {
        for (const auto& oid : group.operator_ids) {
            const Operator* op = pipeline.find_operator(oid);
            if (op == nullptr) {
                report.push_back({ViolationKind::UnknownOperator, oid, group.id,
                                  "group " + group.id + " names unknown operator " + oid});
                continue;
            }
            assignment_count[oid] += 1;
            if (!satisfies(group.image, *op)) {
                report.push_back({ViolationKind::TagUnsatisfied, oid, group.id,
                                  "image " + group.image.id + " does not satisfy operator " + oid});
            }
        }
    }
    for (const auto& op : pipeline.operators) {
        int n = assignment_count[op.id];
        if (n == 0) {
            report.push_back({ViolationKind::MissingOperator, op.id, "",
                              "operator " + op.id + " assigned to no group"});
        } else if (n > 1) {
            report.push_back({ViolationKind::DuplicateAssignment, op.id, "",
                              "operator " + op.id + " assigned to " + std::to_string(n) + " groups"});
        }
    }
    return report;
}

void require_valid(const GroupingConfig& config) {
    ValidationReport report = validate_config(config);
    if (!report.empty()) {
        throw std::invalid_argument("invalid configuration: " + report.front().message);
    }
}

EdgeCounts edge_counts(const GroupingConfig& config) {
    require_valid(config);
    std::unordered_map<std::string, const Group*> group_of;
    for (const auto& group : config.groups) {
        for (const auto& oid : group.operator_ids) group_of[oid] = &group;
    }
    EdgeCounts counts;
    for (const auto& e : config.pipeline.edges) {
        if (group_of.at(e.from) == group_of.at(e.to)) {
            counts.intra += 1;
        } else {
            counts.inter += 1;
        }
    }
    return counts;
}

Cost objective_cost(const GroupingConfig& config, const StrategyWeights& w) {
    EdgeCounts counts = edge_counts(config);  // validates
    return w.group_cost * static_cast<Cost>(config.groups.size()) +
           w.intra * static_cast<Cost>(counts.intra) +
           w.inter * static_cast<Cost>(counts.inter);
}

}  // namespace pipeopt
