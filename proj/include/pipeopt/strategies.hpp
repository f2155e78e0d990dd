#pragma once

#include <cstdint>
#include <string>

#include "pipeopt/core.hpp"
#include "pipeopt/planning.hpp"

namespace pipeopt {

enum class StrategyKind { Connection, Node, Random, Default };

std::string strategy_name(StrategyKind kind);
StrategyKind strategy_from_name(const std::string& name);

// Weight profiles behind the two planner-backed strategies. Connection makes
// inter-group links expensive relative to a medium group cost; node makes
// group instantiation dominate everything, so group count is minimized.
StrategyWeights connection_weights();  // intra 5, inter 20, group 50
StrategyWeights node_weights();        // intra 5, inter 5, group 1000

// Cross-group links minimized: optimal plan under connection_weights.
GroupingConfig connection_strategy(const Pipeline& pipeline, const ImageCatalog& images);

// Group count minimized: optimal plan under node_weights.
GroupingConfig node_strategy(const Pipeline& pipeline, const ImageCatalog& images);

// Baseline: repeatedly pick a catalog image uniformly at random, collect the
// ungrouped operators it satisfies, and group a uniform-size random subset of
// them. Bit-identical output for equal seeds.
GroupingConfig random_strategy(const Pipeline& pipeline, const ImageCatalog& images,
                               std::uint64_t seed);

// Baseline: everything in one group. Uses the first catalog image satisfying
// all operators; when none exists and allow_universal is set, synthesizes a
// simulation-only image carrying the union of all required tags. Otherwise
// throws "default baseline infeasible".
GroupingConfig default_strategy(const Pipeline& pipeline, const ImageCatalog& images,
                                bool allow_universal);

// Dispatch helper for the CLI and bench harness.
GroupingConfig run_strategy(StrategyKind kind, const Pipeline& pipeline,
                            const ImageCatalog& images, std::uint64_t seed,
                            bool allow_universal);

}  // namespace pipeopt
