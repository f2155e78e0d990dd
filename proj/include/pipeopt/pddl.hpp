#pragma once

#include <string>

#include "pipeopt/planning.hpp"

namespace pipeopt {

struct PddlArtifacts {
    std::string domain_text;
    std::string problem_text;
};

// Renders the grouping task for external numeric planners: a domain whose
// create-group / assign-operator schemas increase total-cost (the task's
// weights are baked into the domain, per-neighbor penalties as conditional
// effects), and a problem listing operator/image/group/tag objects, edge and
// tag facts, the empty-groups initial state and the all-assigned goal under
// a minimize total-cost metric. Emission is deterministic: identical task,
// identical bytes.
PddlArtifacts emit_pddl(const GroupingTask& task);

// One action per line, "(create-group g1 img-default)" style, with a cost
// footer comment.
std::string serialize_plan(const Plan& plan);

// Parses a plan file (one s-expression per line, ";" comments ignored),
// resolves each line against the task's actions, validates applicability by
// replay and recomputes the cost; any cost footer is advisory only. Errors
// carry the offending line number.
Plan parse_plan(const std::string& text, const GroupingTask& task);

}  // namespace pipeopt
