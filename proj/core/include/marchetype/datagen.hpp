#pragma once

#include <cstdint>
#include <vector>

#include "marchetype/targeting.hpp"

namespace marchetype {

// Synthetic-instance generator configuration. Customers land uniformly on
// the leaf segments of a zip-code-style hierarchy; profits follow a sparse
// response mixture: a rare large positive draw (a responder) against a small
// negative one (the mailing cost). Fixed per-action multipliers on the
// responder mean make some actions better than others, so with five actions
// four carry a positive average profit and one a negative average.
struct GenConfig {
  Index n_customers = 1000;
  Index n_actions = 5;
  int zip_depth = 5;                  // 3, 4 or 5: granularity of the leaves
  std::vector<Index> branching = {2, 3, 4};  // children per level, leaves = product
  double response_rate = 0.03;
  double profit_mean_hit = 40.0;
  double profit_mean_miss = -0.6;
  std::uint64_t seed = 0;

  void validate() const;
};

// Labeled segment tree. Leaf k's path lists its ancestor indices from the
// top level down; sharing a longer path suffix prefix means geographically
// closer (same 4-digit prefix, same 3-digit prefix, same state).
struct SegmentHierarchy {
  int zip_depth = 5;
  Index n_leaves = 0;
  std::vector<Index> branching;
  std::vector<std::vector<Index>> leaf_paths;  // per leaf, one index per level

  // Levels separating two leaves from their lowest common ancestor:
  // 1 = siblings, up to branching.size() = only the root is shared.
  Index lca_rung(Index leaf_a, Index leaf_b) const;
};

SegmentHierarchy make_hierarchy(const GenConfig& config);

// Deterministic for a fixed seed. Every leaf segment is nonempty (requires
// n_customers >= number of leaves); action segments start equal to the
// constraint segments and the per-customer action cap is 1.
TargetingInstance generate_instance(const GenConfig& config);

// The hierarchical default menu: per-action count corridors as fractions of
// each segment (0.3-0.35 or 0.05-0.1, cycled), a lower-only weighted total of
// 70% of the attainable per-segment budget, similarity ratio ladders
// 1.1/1.2/1.3/1.4 by hierarchy distance with zero offsets over unordered
// pairs, per-action outcome weights 0.3/0.3/0.2/0.1/0.1 (cycled for other
// action counts), and the per-customer cap from the instance.
ConstraintMenu default_constraint_menu(const TargetingInstance& instance,
                                       const SegmentHierarchy& hierarchy);

// Ratio for a segment pair at the given leaf depth: the ladder starts at 1.1
// for five-digit siblings and shifts up one rung per coarser leaf level.
double similarity_ratio(const SegmentHierarchy& hierarchy, Index leaf_a, Index leaf_b);

}  // namespace marchetype
