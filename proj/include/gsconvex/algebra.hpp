#pragma once

// Closure constructions on (Q, G) pairs: sums, non-negative scaling, finite
// non-negative linear combinations, post-composition with a non-negative
// linear map, and pointwise suprema of finite families.

#include <optional>
#include <span>
#include <vector>

#include "gsconvex/core.hpp"

namespace gsconvex {

struct GsPair {
  FunctionSpec q;
  ModMap g;
};

/// (Q1 + Q2, G1 + G2). Domains must be identical.
GsPair combine_sum(const GsPair& p1, const GsPair& p2);

/// (beta Q, beta G), beta >= 0.
GsPair scale(const GsPair& p, double beta);

/// (sum beta_i Q_i, sum beta_i G_i); built as scale followed by repeated sums.
GsPair linear_combination(std::span<const GsPair> pairs, std::span<const double> betas);

/// S o Q with S(x) = c x, c >= 0, the only linear map on the reals that is
/// also non-negative on the relevant range. Same result as scale().
GsPair post_compose_linear(const GsPair& p, double c);

struct SupFamily {
  GsPair sup;
  std::vector<double> probes;
  std::vector<bool> finite;  // K indicator per probe
  bool contiguous = true;
  std::optional<Interval> hull;  // [first, last] probe in K
};

/// Pointwise max of a finite one-dimensional family, probed on `probe_points`
/// equispaced points of [lo, hi]. A probe belongs to K when every member
/// evaluates finitely there.
SupFamily sup_family(std::span<const GsPair> family, double lo, double hi, int probe_points);

}  // namespace gsconvex
