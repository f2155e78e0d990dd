#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace pipeopt {

using Cost = std::int64_t;

using Tag = std::string;
using OperatorId = std::string;
using ImageId = std::string;
using GroupId = std::string;

// A pipeline node. `sdk` is carried as metadata only; executability is
// expressed entirely through required_tags.
struct Operator {
    OperatorId id;
    std::string sdk;
    std::set<Tag> required_tags;
};

struct Image {
    ImageId id;
    std::set<Tag> tags;
    // Set only on images synthesized for the single-group baseline; such
    // images exist for simulation purposes and are flagged in serialized
    // output so downstream consumers can reject them.
    bool synthetic = false;
};

using ImageCatalog = std::vector<Image>;

struct Edge {
    OperatorId from;
    OperatorId to;

    bool operator==(const Edge& other) const = default;
};

// A set of operators deployed together on one image (one pod).
struct Group {
    GroupId id;
    std::vector<OperatorId> operator_ids;
    Image image;
};

// Operator declaration order is significant: it fixes the assignment order
// used by the planner and makes serialization deterministic.
struct Pipeline {
    std::vector<Operator> operators;
    std::vector<Edge> edges;
    std::vector<Group> groups;  // pre-assigned groups, may be empty

    const Operator* find_operator(const OperatorId& id) const;
    // Index into `operators`, or -1 when absent.
    int operator_index(const OperatorId& id) const;
};

// A complete grouping of a pipeline's operators. Groups must partition the
// operator set and every group's image must satisfy its members.
struct GroupingConfig {
    Pipeline pipeline;
    std::vector<Group> groups;
};

struct StrategyWeights {
    Cost intra;       // cost per intra-group edge
    Cost inter;       // cost per inter-group edge
    Cost group_cost;  // cost per instantiated group
};

enum class ViolationKind {
    MissingOperator,      // pipeline operator not assigned to any group
    DuplicateAssignment,  // operator present in more than one group
    TagUnsatisfied,       // group image does not satisfy a member's tags
    UnknownOperator,      // group member that is not a pipeline operator
};

struct Violation {
    ViolationKind kind;
    OperatorId operator_id;
    GroupId group_id;  // empty for MissingOperator
    std::string message;
};

// Empty when the config is valid. Violations are data, not failures.
using ValidationReport = std::vector<Violation>;

struct EdgeCounts {
    std::size_t intra = 0;
    std::size_t inter = 0;
};

// True iff every tag the operator requires is supported by the image.
bool satisfies(const Image& image, const Operator& op);

// Structural issues of a bare pipeline (duplicate ids, dangling edges,
// self-loops, empty tag sets, overlapping pre-assigned groups). Returned as
// human-readable messages; empty means well-formed.
std::vector<std::string> pipeline_issues(const Pipeline& pipeline);

ValidationReport validate_config(const GroupingConfig& config);

// Throws std::invalid_argument("invalid configuration: ...") unless
// validate_config(config) is empty.
void require_valid(const GroupingConfig& config);

EdgeCounts edge_counts(const GroupingConfig& config);

// J = group_cost * |groups| + intra * |intra edges| + inter * |inter edges|.
Cost objective_cost(const GroupingConfig& config, const StrategyWeights& w);

}  // namespace pipeopt
