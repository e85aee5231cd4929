#pragma once

#include <optional>
#include <string>
#include <vector>

#include "marchetype/sparse.hpp"

namespace marchetype {

// A targeting problem over I customers and J marketing actions. profits holds
// the incremental profit of giving customer i action j (row-major I x J);
// negative entries are allowed. Each customer belongs to one constraint
// segment (used by volume/similarity constraints) and one action segment
// (used only when decisions are made per segment).
struct TargetingInstance {
  Index n_customers = 0;
  Index n_actions = 0;
  std::vector<double> profits;                // I * J, row-major
  std::vector<Index> constraint_segment_of;   // length I, values in [0, K)
  std::vector<Index> action_segment_of;       // length I, values in [0, K*)
  std::vector<Index> max_actions;             // length I, each in (0, J]
  std::vector<Index> segment_sizes;           // length K, derived

  double profit(Index customer, Index action) const {
    return profits[static_cast<std::size_t>(customer * n_actions + action)];
  }
  Index n_segments() const { return static_cast<Index>(segment_sizes.size()); }
  Index n_action_segments() const;

  void recompute_segment_sizes();
  // Throws std::invalid_argument when any structural invariant fails.
  void validate() const;
};

// Per-action count bounds on one segment: lower <= sum_{i in S_k} x_i^j <= upper.
struct VolumeIEntry {
  Index segment = 0;
  Index action = 0;
  double lower = 0.0;
  double upper = 0.0;
};

// Weighted total bounds per segment across all actions. upper may be +inf,
// lower may be -inf; an infinite bound emits no row. weights is I x J.
struct VolumeII {
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> weights;
};

// Per-action rate comparison between two segments:
//   (1/n_a) sum_{S_a} x^j <= ratio * (1/n_b) sum_{S_b} x^j + offset.
struct SimilarityIEntry {
  Index action = 0;
  Index seg_a = 0;
  Index seg_b = 0;
  double ratio = 1.0;
  double offset = 0.0;
};

struct SimilarityIIPair {
  Index seg_a = 0;
  Index seg_b = 0;
  double ratio = 1.0;
  double offset = 0.0;
};

// Weighted-outcome comparison between two segments; weights is I x J.
struct SimilarityII {
  std::vector<SimilarityIIPair> pairs;
  std::vector<double> weights;
};

struct ConstraintMenu {
  std::optional<std::vector<VolumeIEntry>> volume1;
  std::optional<VolumeII> volume2;
  std::optional<std::vector<SimilarityIEntry>> similarity1;
  std::optional<SimilarityII> similarity2;
  bool targeting_enabled = true;

  void validate(const TargetingInstance& instance) const;
};

enum class VarKind {
  customer_action,  // x_i^j in the individual-level model
  segment_action,   // x_{k*}^j in the segment-level model
  single_action,    // z_i^j in the interdependent model
  pair_action,      // y_i^{j1,j2} in the interdependent model
  aux_action,       // x_i^j auxiliary column in the interdependent model
};

struct ColumnLabel {
  VarKind kind = VarKind::customer_action;
  Index owner = 0;    // customer or action-segment index
  Index action = 0;   // first action
  Index action2 = -1; // second action for pair columns, -1 otherwise
};

// Minimization form: min objective . x  s.t.  constraints x <= rhs, 0 <= x <= 1.
// The unit box is carried as variable bounds, never as rows. Rows appear in a
// fixed family order (Volume I, Volume II, Similarity I, Similarity II,
// Targeting, then auxiliary-equality rows) so dual variables are attributable.
struct StandardLP {
  DenseVector objective;       // length W
  SparseMatrix constraints;    // L x W
  DenseVector rhs;             // length L
  std::vector<ColumnLabel> column_labels;

  Index n_vars() const { return constraints.n_cols; }
  Index n_rows() const { return constraints.n_rows; }
  void validate() const;
};

// Action probabilities per customer (rows == I) or per action segment
// (rows == K*), entries in [0, 1]. objective_value is in profit orientation.
struct Policy {
  Index n_rows = 0;
  Index n_actions = 0;
  std::vector<double> assignment;  // row-major
  double objective_value = 0.0;

  double at(Index row, Index action) const {
    return assignment[static_cast<std::size_t>(row * n_actions + action)];
  }
};

// Which constraint families a menu activates, for closed-form row counting.
// volume2_sides counts the finite bounds per segment (0, 1 or 2).
struct MenuShape {
  bool volume1 = true;
  int volume2_sides = 2;
  bool similarity1 = true;
  bool similarity2 = true;
  bool ordered_pairs = true;
  bool targeting = true;

  static MenuShape full_ordered() { return MenuShape{}; }
  // Lower-bound-only volume totals and unordered similarity pairs.
  static MenuShape hierarchical_default() {
    MenuShape s;
    s.volume2_sides = 1;
    s.ordered_pairs = false;
    return s;
  }
};

struct ConstraintCounts {
  std::int64_t volume1 = 0;
  std::int64_t volume2 = 0;
  std::int64_t similarity1 = 0;
  std::int64_t similarity2 = 0;
  std::int64_t targeting = 0;
  std::int64_t total = 0;
};

ConstraintCounts constraint_count(Index n_segments, Index n_actions, Index n_customers,
                                  const MenuShape& shape);

// Individual-level compilation: one column per (customer, action); objective
// is the negated profit. Finite two-sided source constraints become two
// one-sided rows; infinite bounds emit no row.
StandardLP compile_ipwc(const TargetingInstance& instance, const ConstraintMenu& menu);

// Segment-level compilation: one column per (action segment, action). Every
// constraint row is the individual-level row with x_i^j replaced by
// x_{k*(i)}^j; the per-customer action cap becomes a per-segment cap equal to
// the minimum cap inside the segment.
StandardLP compile_spwc(const TargetingInstance& instance, const ConstraintMenu& menu);

// Pairwise-interdependent compilation: per customer, a column z_i^j for each
// single action, y_i^{j1,j2} for each unordered pair (profit taken from
// pair_profits, an I x J x J row-major tensor read at j1 < j2), and an
// auxiliary marginal x_i^j tied to them by an equality emitted as two
// inequality rows. Volume and similarity rows are written over the x columns.
StandardLP compile_interdependent(const TargetingInstance& instance, const ConstraintMenu& menu,
                                  const std::vector<double>& pair_profits);

// Reshapes an LP solution into a policy using the column labels; for the
// interdependent model the auxiliary marginals become the assignment. Entries
// are clamped to [0, 1] and the objective is flipped to profit orientation.
Policy extract_policy(const StandardLP& lp, const DenseVector& primal,
                      const TargetingInstance& instance);

enum class ConstraintFamily { volume1, volume2, similarity1, similarity2, targeting, box };

struct Violation {
  ConstraintFamily family;
  Index seg_a = -1;    // segment (or customer for targeting/box)
  Index seg_b = -1;
  Index action = -1;
  double amount = 0.0; // how far past the bound
};

std::string to_string(ConstraintFamily family);

// Evaluates every menu family directly on the policy, independently of any
// compiled matrix. Segment-level policies are expanded through
// action_segment_of first. Empty report iff feasible within tolerance.
std::vector<Violation> validate_policy(const Policy& policy, const TargetingInstance& instance,
                                       const ConstraintMenu& menu, double tolerance);

}  // namespace marchetype
