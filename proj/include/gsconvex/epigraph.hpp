#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gsconvex/cert.hpp"

namespace gsconvex {

/// A point (m, alpha) of R^n x R.
struct EpiPoint {
  Point m;
  double alpha = 0.0;
};

/// Q(p.m) <= p.alpha + tolerance.
bool epi_contains(const FunctionSpec& q, const EpiPoint& p, double tolerance = 0.0);

/// (a m1 + (1-a) m2, w1 alpha1 + w2 alpha2 + a G(m1, m2, s)).
EpiPoint gs_combine_point(const EpiPoint& p1, const EpiPoint& p2, MixParam a, SParam s, const ModMap& g);

struct EpiEscape {
  ResidualSample sample;  // residual holds Q(m) - alpha of the combined point
  double delta1 = 0.0;
  double delta2 = 0.0;
};

struct EpigraphReport {
  ConvexityReport gs_report;
  std::size_t combinations = 0;
  std::size_t escapes = 0;
  std::optional<EpiEscape> worst_escape;
  bool reverse_confirmed = true;  // check_gs_convex fails at the worst escape
  bool consistent = true;
  std::vector<std::string> inconsistencies;
};

/// Offsets alpha = Q(m) + delta used for epigraph sampling.
inline constexpr double kEpiDeltas[] = {0.0, 0.1, 1.0};

/// Sample-scale check that Q passes the defining inequality exactly when its
/// epigraph is closed under gs_combine_point. For every grid sample and every
/// pair of offsets the combined point is tested for membership; the sweep
/// verdict must agree with the absence of escapes, and the worst escape must
/// on its own make check_gs_convex fail.
EpigraphReport check_epigraph_theorem(const FunctionSpec& q, const ModMap& g, const SampleGrid& grid,
                                      double tolerance = kDefaultTolerance, SweepOptions options = {});

struct BoundednessScan {
  double sup_estimate = 0.0;
  double inf_estimate = 0.0;
  bool bounded = true;
  std::optional<double> witness;  // first point where evaluation failed
  std::string error;
  double g_bound = 0.0;  // echoed, not used
  std::size_t points = 0;
};

/// Grid extrema of a one-dimensional Q over [lo, hi]. Evaluation failures
/// count as evidence of unboundedness.
BoundednessScan boundedness_scan(const FunctionSpec& q, Interval interval, int points, double g_bound);

}  // namespace gsconvex
