#include "marchetype/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace marchetype {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Hermetic generator so instances are bit-stable across library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ^ 0x5851f42d4c957f2dull) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  Index next_below(Index n) { return static_cast<Index>(next_u64() % static_cast<std::uint64_t>(n)); }

  double next_exponential() {
    double u = next_unit();
    return -std::log1p(-u);
  }

 private:
  std::uint64_t state_;
};

// Cycled per-action corridor fractions of the segment size, shrunk when more
// than five actions would otherwise collide with the one-action-per-customer
// cap (the cycled corridor uppers sum to 1 per block of five).
std::pair<double, double> volume1_fractions(Index action, Index n_actions) {
  static constexpr double lo[5] = {0.30, 0.05, 0.05, 0.30, 0.05};
  static constexpr double hi[5] = {0.35, 0.10, 0.10, 0.35, 0.10};
  std::size_t a = static_cast<std::size_t>(action % 5);
  double shrink = 1.0 / static_cast<double>((n_actions + 4) / 5);
  return {lo[a] * shrink, hi[a] * shrink};
}

double outcome_weight(Index action) {
  static constexpr double w[5] = {0.3, 0.3, 0.2, 0.1, 0.1};
  return w[static_cast<std::size_t>(action % 5)];
}

// Responder-mean multiplier per action; for five actions the expected profit
// is positive for the first four and negative for the last.
double action_multiplier(Index action, Index n_actions) {
  if (n_actions <= 1) return 1.0;
  double t = static_cast<double>(action) / static_cast<double>(n_actions - 1);
  return 1.3 - 0.95 * t;
}

}  // namespace

void GenConfig::validate() const {
  if (n_customers <= 0) throw std::invalid_argument("gen: n_customers must be positive");
  if (n_actions <= 0) throw std::invalid_argument("gen: n_actions must be positive");
  if (zip_depth < 3 || zip_depth > 5) throw std::invalid_argument("gen: zip_depth must be 3, 4 or 5");
  if (branching.empty()) throw std::invalid_argument("gen: branching must name at least one level");
  Index leaves = 1;
  for (Index b : branching) {
    if (b <= 0) throw std::invalid_argument("gen: branching factors must be positive");
    leaves *= b;
  }
  if (leaves < 1) throw std::invalid_argument("gen: branching must yield at least one leaf");
  if (!(response_rate >= 0.0 && response_rate < 1.0)) {
    throw std::invalid_argument("gen: response_rate must lie in [0, 1)");
  }
  if (!(profit_mean_hit > 0.0) || !(profit_mean_miss < 0.0)) {
    throw std::invalid_argument("gen: profit_mean_hit must be positive and profit_mean_miss negative");
  }
}

Index SegmentHierarchy::lca_rung(Index leaf_a, Index leaf_b) const {
  const auto& pa = leaf_paths[static_cast<std::size_t>(leaf_a)];
  const auto& pb = leaf_paths[static_cast<std::size_t>(leaf_b)];
  Index levels = static_cast<Index>(pa.size());
  Index shared = 0;
  while (shared < levels && pa[static_cast<std::size_t>(shared)] == pb[static_cast<std::size_t>(shared)]) {
    ++shared;
  }
  return levels - shared;
}

SegmentHierarchy make_hierarchy(const GenConfig& config) {
  config.validate();
  SegmentHierarchy h;
  h.zip_depth = config.zip_depth;
  h.branching = config.branching;
  Index leaves = 1;
  for (Index b : config.branching) leaves *= b;
  h.n_leaves = leaves;
  h.leaf_paths.resize(static_cast<std::size_t>(leaves));
  for (Index leaf = 0; leaf < leaves; ++leaf) {
    std::vector<Index> path(config.branching.size());
    Index rest = leaf;
    for (std::size_t level = config.branching.size(); level-- > 0;) {
      path[level] = rest % config.branching[level];
      rest /= config.branching[level];
    }
    h.leaf_paths[static_cast<std::size_t>(leaf)] = std::move(path);
  }
  return h;
}

TargetingInstance generate_instance(const GenConfig& config) {
  config.validate();
  SegmentHierarchy h = make_hierarchy(config);
  const Index I = config.n_customers;
  const Index J = config.n_actions;
  const Index K = h.n_leaves;
  if (I < K) {
    throw std::invalid_argument("gen: need at least one customer per leaf segment");
  }

  Rng rng(config.seed);

  TargetingInstance inst;
  inst.n_customers = I;
  inst.n_actions = J;
  inst.constraint_segment_of.resize(static_cast<std::size_t>(I));

  // Uniform assignment, redrawn while any leaf is empty; a deterministic
  // round-robin fallback guards pathological branching/customer ratios.
  bool all_nonempty = false;
  for (int attempt = 0; attempt < 1000 && !all_nonempty; ++attempt) {
    std::vector<Index> counts(static_cast<std::size_t>(K), 0);
    for (Index i = 0; i < I; ++i) {
      Index k = rng.next_below(K);
      inst.constraint_segment_of[static_cast<std::size_t>(i)] = k;
      ++counts[static_cast<std::size_t>(k)];
    }
    all_nonempty = std::all_of(counts.begin(), counts.end(), [](Index c) { return c > 0; });
  }
  if (!all_nonempty) {
    for (Index i = 0; i < I; ++i) {
      inst.constraint_segment_of[static_cast<std::size_t>(i)] = i % K;
    }
  }

  inst.action_segment_of = inst.constraint_segment_of;
  inst.max_actions.assign(static_cast<std::size_t>(I), 1);
  inst.recompute_segment_sizes();

  inst.profits.resize(static_cast<std::size_t>(I * J));
  for (Index i = 0; i < I; ++i) {
    for (Index j = 0; j < J; ++j) {
      bool hit = rng.next_unit() < config.response_rate;
      double value;
      if (hit) {
        value = config.profit_mean_hit * action_multiplier(j, J) * (0.05 + rng.next_exponential());
      } else {
        value = config.profit_mean_miss * (0.5 + rng.next_unit());
      }
      inst.profits[static_cast<std::size_t>(i * J + j)] = value;
    }
  }
  inst.validate();
  return inst;
}

double similarity_ratio(const SegmentHierarchy& hierarchy, Index leaf_a, Index leaf_b) {
  static constexpr double ladder[4] = {1.1, 1.2, 1.3, 1.4};
  Index rung = hierarchy.lca_rung(leaf_a, leaf_b);
  Index shift = 5 - hierarchy.zip_depth;
  Index idx = std::min<Index>(3, rung - 1 + shift);
  return ladder[static_cast<std::size_t>(idx)];
}

ConstraintMenu default_constraint_menu(const TargetingInstance& instance,
                                       const SegmentHierarchy& hierarchy) {
  const Index K = instance.n_segments();
  const Index J = instance.n_actions;
  const Index I = instance.n_customers;
  if (hierarchy.n_leaves != K) {
    throw std::invalid_argument("default_constraint_menu: hierarchy does not match instance segments");
  }

  ConstraintMenu menu;

  std::vector<VolumeIEntry> v1;
  v1.reserve(static_cast<std::size_t>(K * J));
  double budget = 0.0;
  for (Index j = 0; j < J; ++j) budget += volume1_fractions(j, J).second;
  for (Index k = 0; k < K; ++k) {
    double n_k = static_cast<double>(instance.segment_sizes[static_cast<std::size_t>(k)]);
    for (Index j = 0; j < J; ++j) {
      auto [lo, hi] = volume1_fractions(j, J);
      v1.push_back({k, j, lo * n_k, hi * n_k});
    }
  }
  menu.volume1 = std::move(v1);

  VolumeII v2;
  v2.lower.resize(static_cast<std::size_t>(K));
  v2.upper.assign(static_cast<std::size_t>(K), kInf);
  v2.weights.assign(static_cast<std::size_t>(I * J), 1.0);
  for (Index k = 0; k < K; ++k) {
    double n_k = static_cast<double>(instance.segment_sizes[static_cast<std::size_t>(k)]);
    // 70% of the attainable per-segment action budget; with five actions the
    // corridor uppers sum to 1 and this is 0.7 n_k.
    v2.lower[static_cast<std::size_t>(k)] = 0.7 * budget * n_k;
  }
  menu.volume2 = std::move(v2);

  if (K > 1) {
    std::vector<SimilarityIEntry> s1;
    SimilarityII s2;
    s2.weights.resize(static_cast<std::size_t>(I * J));
    for (Index i = 0; i < I; ++i) {
      for (Index j = 0; j < J; ++j) {
        s2.weights[static_cast<std::size_t>(i * J + j)] = outcome_weight(j);
      }
    }
    for (Index k1 = 0; k1 < K; ++k1) {
      for (Index k2 = k1 + 1; k2 < K; ++k2) {
        double ratio = similarity_ratio(hierarchy, k1, k2);
        for (Index j = 0; j < J; ++j) {
          s1.push_back({j, k1, k2, ratio, 0.0});
        }
        s2.pairs.push_back({k1, k2, ratio, 0.0});
      }
    }
    menu.similarity1 = std::move(s1);
    menu.similarity2 = std::move(s2);
  }

  menu.targeting_enabled = true;
  return menu;
}

}  // namespace marchetype
