#pragma once

// Brute-force reference for the worst residual of the defining inequality.
// Shares no weight or sweep code with cert; it is the trust anchor for the
// sweep engine and for the reference values frozen into the tests.

#include <cstddef>
#include <vector>

#include "gsconvex/cert.hpp"

namespace gsconvex::oracle {

inline constexpr std::size_t kMaxSamples = 10'000'000;

struct WorstResidual {
  double worst = 0.0;
  ResidualSample witness;
  std::size_t samples = 0;
};

/// Enumerates every (m1, m2, a, s) of `grid` (with `s_list` replacing the
/// grid's own) and returns the maximum residual, ties going to the
/// lexicographically smallest (s, a, m1, m2). Single threaded.
WorstResidual brute_force_worst_residual(const FunctionSpec& q, const ModMap& g,
                                         const std::vector<double>& s_list, const SampleGrid& grid);

/// Straight-line residual of one sample.
double reference_residual(const FunctionSpec& q, const ModMap& g, double s, const Point& m1,
                          const Point& m2, double a);

}  // namespace gsconvex::oracle
