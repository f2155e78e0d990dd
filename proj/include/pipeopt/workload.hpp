#pragma once

#include <cstdint>
#include <string>

#include "pipeopt/core.hpp"

namespace pipeopt {

enum class Topology { Line, Parallel };

std::string topology_name(Topology t);
Topology topology_from_name(const std::string& name);

enum class OperatorRole { Generator, Fibonacci, Terminator };

// Knobs for the synthetic fibonacci pipelines. The line topology always has
// 12 computing operators; the parallel one has lines * ops_per_line.
struct WorkloadParams {
    Topology topology = Topology::Line;
    std::size_t special_ops = 1;  // >= 1: every pipeline carries a special tag
    int fib_step = 1;
    int base_n = 5;
    int rounds = 5;
    std::size_t lines = 3;         // parallel only
    std::size_t ops_per_line = 4;  // parallel only
    std::uint64_t seed = 1;
    // Permissive tag reading: special images also carry the default tag (and
    // special operators keep it). Off by default: with it on, a single
    // special image can host every operator and grouping turns trivial.
    bool literal_tags = false;
};

struct Workload {
    Pipeline pipeline;
    ImageCatalog images;
};

// Deterministic for identical params. Line: gen -> fib-1 -> ... -> fib-12 ->
// term plus a gen -> term control edge. Parallel: gen fans out to `lines`
// chains of `ops_per_line` fibs, every tail feeds term, plus the control
// edge. Special tags are placed by assign_special_tags with params.seed.
Workload generate_pipeline(const WorkloadParams& params);

// Retags n distinct fibonacci operators (chosen uniformly, seeded) with
// special tags cycling spt-1, spt-2, spt-3, spt-1, ... Generator and
// terminator are never special.
Pipeline assign_special_tags(Pipeline pipeline, std::size_t n, std::uint64_t seed,
                             bool literal_tags = false);

// Role is encoded in the operator id ("gen", "term", "fib-...").
OperatorRole role_of(const OperatorId& id);

// Fibonacci argument for a computing operator: base_n + depth * fib_step,
// where depth counts the fibonacci predecessors along its chain.
int fib_argument(const Pipeline& pipeline, const OperatorId& id,
                 const WorkloadParams& params);

}  // namespace pipeopt
