#include "marchetype/targeting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace marchetype {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::vector<Index>> members_by_segment(const std::vector<Index>& segment_of,
                                                   Index n_segments) {
  std::vector<std::vector<Index>> members(static_cast<std::size_t>(n_segments));
  for (Index i = 0; i < static_cast<Index>(segment_of.size()); ++i) {
    members[static_cast<std::size_t>(segment_of[static_cast<std::size_t>(i)])].push_back(i);
  }
  return members;
}

// Accumulates one row at a time into a dense scratch; duplicate column hits
// within a row sum, exact zeros are dropped by the CSR constructor.
class LpBuilder {
 public:
  explicit LpBuilder(Index n_cols) : n_cols_(n_cols), acc_(static_cast<std::size_t>(n_cols), 0.0) {}

  void add(Index col, double coeff) {
    std::size_t c = static_cast<std::size_t>(col);
    if (acc_[c] == 0.0) touched_.push_back(col);
    acc_[c] += coeff;
  }

  void end_row(double rhs_value) {
    for (Index col : touched_) {
      std::size_t c = static_cast<std::size_t>(col);
      if (acc_[c] != 0.0) triplets_.push_back({row_, col, acc_[c]});
      acc_[c] = 0.0;
    }
    touched_.clear();
    rhs_.push_back(rhs_value);
    ++row_;
  }

  StandardLP finish(DenseVector objective, std::vector<ColumnLabel> labels) {
    StandardLP lp;
    lp.constraints = csr_from_triplets(row_, n_cols_, std::move(triplets_));
    lp.objective = std::move(objective);
    lp.rhs = std::move(rhs_);
    lp.column_labels = std::move(labels);
    return lp;
  }

 private:
  Index n_cols_;
  Index row_ = 0;
  DenseVector acc_;
  std::vector<Index> touched_;
  std::vector<Triplet> triplets_;
  DenseVector rhs_;
};

void require_nonempty_segment(const TargetingInstance& instance, Index segment,
                              const char* family) {
  if (instance.segment_sizes[static_cast<std::size_t>(segment)] == 0) {
    throw std::invalid_argument(std::string(family) + " row references empty segment " +
                                std::to_string(segment));
  }
}

// Emits the Volume I, Volume II, Similarity I and Similarity II families in
// that order. col_of(i, j) maps a per-customer action coefficient to an LP
// column, which is how the three compilation modes share these families.
template <class ColOf>
void emit_menu_rows(LpBuilder& b, const TargetingInstance& instance, const ConstraintMenu& menu,
                    const std::vector<std::vector<Index>>& segment_members, ColOf col_of) {
  const Index J = instance.n_actions;

  if (menu.volume1) {
    for (const VolumeIEntry& e : *menu.volume1) {
      for (Index i : segment_members[static_cast<std::size_t>(e.segment)]) {
        b.add(col_of(i, e.action), 1.0);
      }
      b.end_row(e.upper);
      for (Index i : segment_members[static_cast<std::size_t>(e.segment)]) {
        b.add(col_of(i, e.action), -1.0);
      }
      b.end_row(-e.lower);
    }
  }

  if (menu.volume2) {
    const VolumeII& v = *menu.volume2;
    for (Index k = 0; k < instance.n_segments(); ++k) {
      double up = v.upper[static_cast<std::size_t>(k)];
      double lo = v.lower[static_cast<std::size_t>(k)];
      if (up < kInf) {
        for (Index i : segment_members[static_cast<std::size_t>(k)]) {
          for (Index j = 0; j < J; ++j) {
            b.add(col_of(i, j), v.weights[static_cast<std::size_t>(i * J + j)]);
          }
        }
        b.end_row(up);
      }
      if (lo > -kInf) {
        for (Index i : segment_members[static_cast<std::size_t>(k)]) {
          for (Index j = 0; j < J; ++j) {
            b.add(col_of(i, j), -v.weights[static_cast<std::size_t>(i * J + j)]);
          }
        }
        b.end_row(-lo);
      }
    }
  }

  if (menu.similarity1) {
    for (const SimilarityIEntry& e : *menu.similarity1) {
      require_nonempty_segment(instance, e.seg_a, "similarity1");
      require_nonempty_segment(instance, e.seg_b, "similarity1");
      double inv_a = 1.0 / static_cast<double>(instance.segment_sizes[static_cast<std::size_t>(e.seg_a)]);
      double inv_b = 1.0 / static_cast<double>(instance.segment_sizes[static_cast<std::size_t>(e.seg_b)]);
      for (Index i : segment_members[static_cast<std::size_t>(e.seg_a)]) {
        b.add(col_of(i, e.action), inv_a);
      }
      for (Index i : segment_members[static_cast<std::size_t>(e.seg_b)]) {
        b.add(col_of(i, e.action), -e.ratio * inv_b);
      }
      b.end_row(e.offset);
    }
  }

  if (menu.similarity2) {
    const SimilarityII& s = *menu.similarity2;
    for (const SimilarityIIPair& e : s.pairs) {
      require_nonempty_segment(instance, e.seg_a, "similarity2");
      require_nonempty_segment(instance, e.seg_b, "similarity2");
      double inv_a = 1.0 / static_cast<double>(instance.segment_sizes[static_cast<std::size_t>(e.seg_a)]);
      double inv_b = 1.0 / static_cast<double>(instance.segment_sizes[static_cast<std::size_t>(e.seg_b)]);
      for (Index i : segment_members[static_cast<std::size_t>(e.seg_a)]) {
        for (Index j = 0; j < J; ++j) {
          b.add(col_of(i, j), s.weights[static_cast<std::size_t>(i * J + j)] * inv_a);
        }
      }
      for (Index i : segment_members[static_cast<std::size_t>(e.seg_b)]) {
        for (Index j = 0; j < J; ++j) {
          b.add(col_of(i, j), -e.ratio * s.weights[static_cast<std::size_t>(i * J + j)] * inv_b);
        }
      }
      b.end_row(e.offset);
    }
  }
}

}  // namespace

Index TargetingInstance::n_action_segments() const {
  Index max_seg = -1;
  for (Index k : action_segment_of) max_seg = std::max(max_seg, k);
  return max_seg + 1;
}

void TargetingInstance::recompute_segment_sizes() {
  Index max_seg = -1;
  for (Index k : constraint_segment_of) max_seg = std::max(max_seg, k);
  segment_sizes.assign(static_cast<std::size_t>(max_seg + 1), 0);
  for (Index k : constraint_segment_of) ++segment_sizes[static_cast<std::size_t>(k)];
}

void TargetingInstance::validate() const {
  if (n_customers < 0 || n_actions <= 0) {
    throw std::invalid_argument("instance: need n_customers >= 0 and n_actions >= 1");
  }
  if (static_cast<Index>(profits.size()) != n_customers * n_actions) {
    throw std::invalid_argument("instance: profits must have n_customers * n_actions entries");
  }
  require_finite(profits, "instance profits");
  if (static_cast<Index>(constraint_segment_of.size()) != n_customers ||
      static_cast<Index>(action_segment_of.size()) != n_customers ||
      static_cast<Index>(max_actions.size()) != n_customers) {
    throw std::invalid_argument("instance: per-customer arrays must have length n_customers");
  }
  const Index K = n_segments();
  std::vector<Index> counted(static_cast<std::size_t>(K), 0);
  for (Index i = 0; i < n_customers; ++i) {
    Index k = constraint_segment_of[static_cast<std::size_t>(i)];
    if (k < 0 || k >= K) {
      throw std::invalid_argument("instance: constraint segment out of range for customer " +
                                  std::to_string(i));
    }
    ++counted[static_cast<std::size_t>(k)];
    if (action_segment_of[static_cast<std::size_t>(i)] < 0) {
      throw std::invalid_argument("instance: action segment out of range for customer " +
                                  std::to_string(i));
    }
    Index m = max_actions[static_cast<std::size_t>(i)];
    if (m <= 0 || m > n_actions) {
      throw std::invalid_argument("instance: max_actions must lie in (0, n_actions] for customer " +
                                  std::to_string(i));
    }
  }
  for (Index k = 0; k < K; ++k) {
    if (counted[static_cast<std::size_t>(k)] != segment_sizes[static_cast<std::size_t>(k)]) {
      throw std::invalid_argument("instance: segment_sizes[" + std::to_string(k) +
                                  "] does not match membership count");
    }
  }
}

void ConstraintMenu::validate(const TargetingInstance& instance) const {
  const Index K = instance.n_segments();
  const Index J = instance.n_actions;
  const Index I = instance.n_customers;

  if (volume1) {
    for (const VolumeIEntry& e : *volume1) {
      if (e.segment < 0 || e.segment >= K || e.action < 0 || e.action >= J) {
        throw std::invalid_argument("menu: volume1 indices out of range");
      }
      double n_k = static_cast<double>(instance.segment_sizes[static_cast<std::size_t>(e.segment)]);
      if (!(e.lower <= e.upper) || e.lower < 0.0 || e.upper > n_k) {
        throw std::invalid_argument("menu: volume1 bounds must satisfy 0 <= lower <= upper <= n_k");
      }
    }
  }
  if (volume2) {
    const VolumeII& v = *volume2;
    if (static_cast<Index>(v.lower.size()) != K || static_cast<Index>(v.upper.size()) != K) {
      throw std::invalid_argument("menu: volume2 bounds must have one entry per segment");
    }
    if (static_cast<Index>(v.weights.size()) != I * J) {
      throw std::invalid_argument("menu: volume2 weights must be n_customers * n_actions");
    }
    require_finite(v.weights, "menu volume2 weights");
    for (Index k = 0; k < K; ++k) {
      double lo = v.lower[static_cast<std::size_t>(k)];
      double up = v.upper[static_cast<std::size_t>(k)];
      if (std::isfinite(up) && !(lo <= up)) {
        throw std::invalid_argument("menu: volume2 lower exceeds finite upper for segment " +
                                    std::to_string(k));
      }
    }
  }
  if (similarity1) {
    for (const SimilarityIEntry& e : *similarity1) {
      if (e.action < 0 || e.action >= J || e.seg_a < 0 || e.seg_a >= K || e.seg_b < 0 ||
          e.seg_b >= K) {
        throw std::invalid_argument("menu: similarity1 indices out of range");
      }
      if (e.seg_a == e.seg_b) {
        throw std::invalid_argument("menu: similarity1 pair must use two distinct segments");
      }
      if (!(e.ratio > 0.0) || !std::isfinite(e.ratio) || !std::isfinite(e.offset)) {
        throw std::invalid_argument("menu: similarity1 ratio must be positive and finite");
      }
    }
  }
  if (similarity2) {
    const SimilarityII& s = *similarity2;
    if (static_cast<Index>(s.weights.size()) != I * J) {
      throw std::invalid_argument("menu: similarity2 weights must be n_customers * n_actions");
    }
    require_finite(s.weights, "menu similarity2 weights");
    for (const SimilarityIIPair& e : s.pairs) {
      if (e.seg_a < 0 || e.seg_a >= K || e.seg_b < 0 || e.seg_b >= K) {
        throw std::invalid_argument("menu: similarity2 indices out of range");
      }
      if (e.seg_a == e.seg_b) {
        throw std::invalid_argument("menu: similarity2 pair must use two distinct segments");
      }
      if (!(e.ratio > 0.0) || !std::isfinite(e.ratio) || !std::isfinite(e.offset)) {
        throw std::invalid_argument("menu: similarity2 ratio must be positive and finite");
      }
    }
  }
}

void StandardLP::validate() const {
  if (static_cast<Index>(objective.size()) != constraints.n_cols) {
    throw std::invalid_argument("lp: objective length does not match column count");
  }
  if (static_cast<Index>(rhs.size()) != constraints.n_rows) {
    throw std::invalid_argument("lp: rhs length does not match row count");
  }
  if (!column_labels.empty() &&
      static_cast<Index>(column_labels.size()) != constraints.n_cols) {
    throw std::invalid_argument("lp: column_labels length does not match column count");
  }
  require_finite(objective, "lp objective");
  require_finite(rhs, "lp rhs");
}

ConstraintCounts constraint_count(Index n_segments, Index n_actions, Index n_customers,
                                  const MenuShape& shape) {
  const std::int64_t K = n_segments;
  const std::int64_t J = n_actions;
  ConstraintCounts c;
  if (shape.volume1) c.volume1 = 2 * K * J;
  c.volume2 = static_cast<std::int64_t>(shape.volume2_sides) * K;
  std::int64_t pairs = shape.ordered_pairs ? K * (K - 1) : K * (K - 1) / 2;
  if (shape.similarity1) c.similarity1 = pairs * J;
  if (shape.similarity2) c.similarity2 = pairs;
  if (shape.targeting) c.targeting = n_customers;
  c.total = c.volume1 + c.volume2 + c.similarity1 + c.similarity2 + c.targeting;
  return c;
}

StandardLP compile_ipwc(const TargetingInstance& instance, const ConstraintMenu& menu) {
  instance.validate();
  menu.validate(instance);

  const Index I = instance.n_customers;
  const Index J = instance.n_actions;
  const Index W = I * J;
  auto segment_members = members_by_segment(instance.constraint_segment_of, instance.n_segments());

  LpBuilder b(W);
  auto col_of = [J](Index i, Index j) { return i * J + j; };
  emit_menu_rows(b, instance, menu, segment_members, col_of);

  if (menu.targeting_enabled) {
    for (Index i = 0; i < I; ++i) {
      for (Index j = 0; j < J; ++j) b.add(col_of(i, j), 1.0);
      b.end_row(static_cast<double>(instance.max_actions[static_cast<std::size_t>(i)]));
    }
  }

  DenseVector objective(static_cast<std::size_t>(W));
  std::vector<ColumnLabel> labels(static_cast<std::size_t>(W));
  for (Index i = 0; i < I; ++i) {
    for (Index j = 0; j < J; ++j) {
      objective[static_cast<std::size_t>(i * J + j)] = -instance.profit(i, j);
      labels[static_cast<std::size_t>(i * J + j)] = {VarKind::customer_action, i, j, -1};
    }
  }
  return b.finish(std::move(objective), std::move(labels));
}

StandardLP compile_spwc(const TargetingInstance& instance, const ConstraintMenu& menu) {
  instance.validate();
  menu.validate(instance);

  const Index I = instance.n_customers;
  const Index J = instance.n_actions;
  const Index Ks = instance.n_action_segments();
  if (Ks <= 0) {
    throw std::invalid_argument("compile_spwc: action_segment_of is not populated");
  }
  const Index W = Ks * J;
  auto segment_members = members_by_segment(instance.constraint_segment_of, instance.n_segments());

  LpBuilder b(W);
  auto col_of = [&instance, J](Index i, Index j) {
    return instance.action_segment_of[static_cast<std::size_t>(i)] * J + j;
  };
  emit_menu_rows(b, instance, menu, segment_members, col_of);

  if (menu.targeting_enabled) {
    std::vector<Index> cap(static_cast<std::size_t>(Ks), instance.n_actions);
    for (Index i = 0; i < I; ++i) {
      Index ks = instance.action_segment_of[static_cast<std::size_t>(i)];
      cap[static_cast<std::size_t>(ks)] = std::min(cap[static_cast<std::size_t>(ks)],
                                                   instance.max_actions[static_cast<std::size_t>(i)]);
    }
    for (Index ks = 0; ks < Ks; ++ks) {
      for (Index j = 0; j < J; ++j) b.add(ks * J + j, 1.0);
      b.end_row(static_cast<double>(cap[static_cast<std::size_t>(ks)]));
    }
  }

  DenseVector objective(static_cast<std::size_t>(W), 0.0);
  std::vector<ColumnLabel> labels(static_cast<std::size_t>(W));
  for (Index i = 0; i < I; ++i) {
    Index ks = instance.action_segment_of[static_cast<std::size_t>(i)];
    for (Index j = 0; j < J; ++j) {
      objective[static_cast<std::size_t>(ks * J + j)] -= instance.profit(i, j);
    }
  }
  for (Index ks = 0; ks < Ks; ++ks) {
    for (Index j = 0; j < J; ++j) {
      labels[static_cast<std::size_t>(ks * J + j)] = {VarKind::segment_action, ks, j, -1};
    }
  }
  return b.finish(std::move(objective), std::move(labels));
}

StandardLP compile_interdependent(const TargetingInstance& instance, const ConstraintMenu& menu,
                                  const std::vector<double>& pair_profits) {
  instance.validate();
  menu.validate(instance);

  const Index I = instance.n_customers;
  const Index J = instance.n_actions;
  if (static_cast<Index>(pair_profits.size()) != I * J * J) {
    throw std::invalid_argument("compile_interdependent: pair_profits must be I * J * J");
  }
  require_finite(pair_profits, "pair profits");

  const Index n_pairs = J * (J - 1) / 2;
  const Index stride = 2 * J + n_pairs;
  const Index W = I * stride;
  auto segment_members = members_by_segment(instance.constraint_segment_of, instance.n_segments());

  auto col_z = [stride, J](Index i, Index j) { return i * stride + j; };
  auto pair_offset = [J](Index j1, Index j2) {
    return j1 * J - j1 * (j1 + 1) / 2 + (j2 - j1 - 1);
  };
  auto col_y = [stride, J, pair_offset](Index i, Index j1, Index j2) {
    return i * stride + J + pair_offset(j1, j2);
  };
  auto col_x = [stride, J, n_pairs](Index i, Index j) { return i * stride + J + n_pairs + j; };

  LpBuilder b(W);
  emit_menu_rows(b, instance, menu, segment_members, col_x);

  // One combined pick per customer: a single action or one action pair.
  if (menu.targeting_enabled) {
    for (Index i = 0; i < I; ++i) {
      for (Index j = 0; j < J; ++j) b.add(col_z(i, j), 1.0);
      for (Index j1 = 0; j1 < J; ++j1) {
        for (Index j2 = j1 + 1; j2 < J; ++j2) b.add(col_y(i, j1, j2), 1.0);
      }
      b.end_row(1.0);
    }
  }

  // Marginal tie x_i^j = z_i^j + sum of pairs containing j, as two rows.
  for (Index i = 0; i < I; ++i) {
    for (Index j = 0; j < J; ++j) {
      for (int sign = 0; sign < 2; ++sign) {
        double s = sign == 0 ? 1.0 : -1.0;
        b.add(col_x(i, j), s);
        b.add(col_z(i, j), -s);
        for (Index j2 = j + 1; j2 < J; ++j2) b.add(col_y(i, j, j2), -s);
        for (Index j1 = 0; j1 < j; ++j1) b.add(col_y(i, j1, j), -s);
        b.end_row(0.0);
      }
    }
  }

  DenseVector objective(static_cast<std::size_t>(W), 0.0);
  std::vector<ColumnLabel> labels(static_cast<std::size_t>(W));
  for (Index i = 0; i < I; ++i) {
    for (Index j = 0; j < J; ++j) {
      objective[static_cast<std::size_t>(col_z(i, j))] = -instance.profit(i, j);
      labels[static_cast<std::size_t>(col_z(i, j))] = {VarKind::single_action, i, j, -1};
      labels[static_cast<std::size_t>(col_x(i, j))] = {VarKind::aux_action, i, j, -1};
    }
    for (Index j1 = 0; j1 < J; ++j1) {
      for (Index j2 = j1 + 1; j2 < J; ++j2) {
        objective[static_cast<std::size_t>(col_y(i, j1, j2))] =
            -pair_profits[static_cast<std::size_t>((i * J + j1) * J + j2)];
        labels[static_cast<std::size_t>(col_y(i, j1, j2))] = {VarKind::pair_action, i, j1, j2};
      }
    }
  }
  return b.finish(std::move(objective), std::move(labels));
}

Policy extract_policy(const StandardLP& lp, const DenseVector& primal,
                      const TargetingInstance& instance) {
  if (primal.size() != lp.objective.size()) {
    throw std::invalid_argument("extract_policy: primal length does not match LP");
  }
  require_finite(primal, "primal");
  for (double v : primal) {
    if (v < -1e-6 || v > 1.0 + 1e-6) {
      throw std::invalid_argument("extract_policy: primal entry outside [0,1] tolerance");
    }
  }
  if (lp.column_labels.empty()) {
    throw std::invalid_argument("extract_policy: LP carries no column labels");
  }

  bool interdependent = false;
  bool segment_level = false;
  for (const ColumnLabel& l : lp.column_labels) {
    if (l.kind == VarKind::aux_action) interdependent = true;
    if (l.kind == VarKind::segment_action) segment_level = true;
  }

  Policy p;
  p.n_actions = instance.n_actions;
  Index rows = 0;
  for (const ColumnLabel& l : lp.column_labels) rows = std::max(rows, l.owner + 1);
  p.n_rows = rows;
  p.assignment.assign(static_cast<std::size_t>(rows * instance.n_actions), 0.0);

  for (std::size_t w = 0; w < lp.column_labels.size(); ++w) {
    const ColumnLabel& l = lp.column_labels[w];
    bool marginal = interdependent ? (l.kind == VarKind::aux_action)
                                   : (l.kind == (segment_level ? VarKind::segment_action
                                                               : VarKind::customer_action));
    if (!marginal) continue;
    double v = std::clamp(primal[w], 0.0, 1.0);
    p.assignment[static_cast<std::size_t>(l.owner * instance.n_actions + l.action)] = v;
  }
  p.objective_value = -dot(lp.objective, primal);
  return p;
}

std::string to_string(ConstraintFamily family) {
  switch (family) {
    case ConstraintFamily::volume1: return "volume1";
    case ConstraintFamily::volume2: return "volume2";
    case ConstraintFamily::similarity1: return "similarity1";
    case ConstraintFamily::similarity2: return "similarity2";
    case ConstraintFamily::targeting: return "targeting";
    case ConstraintFamily::box: return "box";
  }
  return "unknown";
}

std::vector<Violation> validate_policy(const Policy& policy, const TargetingInstance& instance,
                                       const ConstraintMenu& menu, double tolerance) {
  const Index I = instance.n_customers;
  const Index J = instance.n_actions;
  if (policy.n_actions != J) {
    throw std::invalid_argument("validate_policy: policy action count does not match instance");
  }

  // Expand a segment-level policy to customer level before evaluating.
  std::vector<double> x(static_cast<std::size_t>(I * J));
  if (policy.n_rows == I) {
    x = policy.assignment;
  } else if (policy.n_rows == instance.n_action_segments()) {
    for (Index i = 0; i < I; ++i) {
      Index ks = instance.action_segment_of[static_cast<std::size_t>(i)];
      for (Index j = 0; j < J; ++j) {
        x[static_cast<std::size_t>(i * J + j)] = policy.at(ks, j);
      }
    }
  } else {
    throw std::invalid_argument("validate_policy: policy row count matches neither customers "
                                "nor action segments");
  }

  std::vector<Violation> report;
  for (Index r = 0; r < policy.n_rows; ++r) {
    for (Index j = 0; j < J; ++j) {
      double v = policy.at(r, j);
      if (v < -tolerance) {
        report.push_back({ConstraintFamily::box, r, -1, j, -v});
      } else if (v > 1.0 + tolerance) {
        report.push_back({ConstraintFamily::box, r, -1, j, v - 1.0});
      }
    }
  }

  auto segment_members = members_by_segment(instance.constraint_segment_of, instance.n_segments());

  if (menu.volume1) {
    for (const VolumeIEntry& e : *menu.volume1) {
      double s = 0.0;
      for (Index i : segment_members[static_cast<std::size_t>(e.segment)]) {
        s += x[static_cast<std::size_t>(i * J + e.action)];
      }
      if (s > e.upper + tolerance) {
        report.push_back({ConstraintFamily::volume1, e.segment, -1, e.action, s - e.upper});
      }
      if (s < e.lower - tolerance) {
        report.push_back({ConstraintFamily::volume1, e.segment, -1, e.action, e.lower - s});
      }
    }
  }

  if (menu.volume2) {
    const VolumeII& v = *menu.volume2;
    for (Index k = 0; k < instance.n_segments(); ++k) {
      double s = 0.0;
      for (Index i : segment_members[static_cast<std::size_t>(k)]) {
        for (Index j = 0; j < J; ++j) {
          s += v.weights[static_cast<std::size_t>(i * J + j)] * x[static_cast<std::size_t>(i * J + j)];
        }
      }
      if (s > v.upper[static_cast<std::size_t>(k)] + tolerance) {
        report.push_back({ConstraintFamily::volume2, k, -1, -1, s - v.upper[static_cast<std::size_t>(k)]});
      }
      if (s < v.lower[static_cast<std::size_t>(k)] - tolerance) {
        report.push_back({ConstraintFamily::volume2, k, -1, -1, v.lower[static_cast<std::size_t>(k)] - s});
      }
    }
  }

  if (menu.similarity1) {
    for (const SimilarityIEntry& e : *menu.similarity1) {
      double n_a = static_cast<double>(instance.segment_sizes[static_cast<std::size_t>(e.seg_a)]);
      double n_b = static_cast<double>(instance.segment_sizes[static_cast<std::size_t>(e.seg_b)]);
      double lhs = 0.0, rhs = 0.0;
      for (Index i : segment_members[static_cast<std::size_t>(e.seg_a)]) {
        lhs += x[static_cast<std::size_t>(i * J + e.action)];
      }
      for (Index i : segment_members[static_cast<std::size_t>(e.seg_b)]) {
        rhs += x[static_cast<std::size_t>(i * J + e.action)];
      }
      double slack = lhs / n_a - e.ratio * rhs / n_b - e.offset;
      if (slack > tolerance) {
        report.push_back({ConstraintFamily::similarity1, e.seg_a, e.seg_b, e.action, slack});
      }
    }
  }

  if (menu.similarity2) {
    const SimilarityII& s2 = *menu.similarity2;
    for (const SimilarityIIPair& e : s2.pairs) {
      double n_a = static_cast<double>(instance.segment_sizes[static_cast<std::size_t>(e.seg_a)]);
      double n_b = static_cast<double>(instance.segment_sizes[static_cast<std::size_t>(e.seg_b)]);
      double lhs = 0.0, rhs = 0.0;
      for (Index i : segment_members[static_cast<std::size_t>(e.seg_a)]) {
        for (Index j = 0; j < J; ++j) {
          lhs += s2.weights[static_cast<std::size_t>(i * J + j)] * x[static_cast<std::size_t>(i * J + j)];
        }
      }
      for (Index i : segment_members[static_cast<std::size_t>(e.seg_b)]) {
        for (Index j = 0; j < J; ++j) {
          rhs += s2.weights[static_cast<std::size_t>(i * J + j)] * x[static_cast<std::size_t>(i * J + j)];
        }
      }
      double slack = lhs / n_a - e.ratio * rhs / n_b - e.offset;
      if (slack > tolerance) {
        report.push_back({ConstraintFamily::similarity2, e.seg_a, e.seg_b, -1, slack});
      }
    }
  }

  if (menu.targeting_enabled) {
    for (Index i = 0; i < I; ++i) {
      double s = 0.0;
      for (Index j = 0; j < J; ++j) s += x[static_cast<std::size_t>(i * J + j)];
      double cap = static_cast<double>(instance.max_actions[static_cast<std::size_t>(i)]);
      if (s > cap + tolerance) {
        report.push_back({ConstraintFamily::targeting, i, -1, -1, s - cap});
      }
    }
  }

  return report;
}

}  // namespace marchetype
