#pragma once

// Sampling certification of the defining inequality
//
//   Q(a m1 + (1-a) m2) <= (e^a-1)^s Q(m1) + (e^(1-a)-1)^s Q(m2) + a G(m1, m2, s)
//
// and of the three comparison classes (s-convex, sub-b-s-convex,
// exponential kind). A pass is a sampling certificate over the grid; a fail
// carries a concrete counterexample.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gsconvex/core.hpp"

namespace gsconvex {

enum class ConvexityClass { GsExponential, SConvex, SubBSConvex, ExponentialKind };

std::string to_string(ConvexityClass c);
ConvexityClass parse_convexity_class(std::string_view name);

enum class Verdict { Pass, Fail };

std::string to_string(Verdict v);

struct ResidualSample {
  Point m1;
  Point m2;
  double a = 0.0;
  double s = 1.0;
  double residual = 0.0;
};

/// True when `x` should replace `y` as the worst witness: larger residual,
/// ties broken by the lexicographically smaller (s, a, m1, m2).
bool worse_than(const ResidualSample& x, const ResidualSample& y);

/// An evaluation failure at a specific sample.
class SampleError : public std::runtime_error {
public:
  SampleError(const std::string& what, ResidualSample sample);
  const ResidualSample& sample() const noexcept { return sample_; }

private:
  ResidualSample sample_;
};

struct ConvexityReport {
  ConvexityClass class_id = ConvexityClass::GsExponential;
  Verdict verdict = Verdict::Pass;
  ResidualSample worst;
  std::vector<ResidualSample> worst_per_s;  // parallel to the grid's s-list
  std::size_t samples = 0;
  double tolerance = 0.0;
};

struct SweepOptions {
  int threads = 1;
};

inline constexpr double kDefaultTolerance = 1e-9;

/// Left side minus right side of the defining inequality at one sample.
/// Non-positive means the inequality holds there.
double residual(const FunctionSpec& q, const ModMap& g, SParam s, const Point& m1, const Point& m2,
                MixParam a);

ConvexityReport check_gs_convex(const FunctionSpec& q, const ModMap& g, const SampleGrid& grid,
                                double tolerance = kDefaultTolerance, SweepOptions options = {});

/// Sweep with a comparison class's right-hand side:
///   s-convex:        a^s Q(m1) + (1-a)^s Q(m2)
///   sub-b-s-convex:  a^s Q(m1) + (1-a)^s Q(m2) + G(m1, m2, s)
///   exponential:     (e^a-1) Q(m1) + (e^(1-a)-1) Q(m2)        (s unused)
/// G is required for sub-b-s-convex and rejected for s-convex and
/// exponential kind; the latter also requires Q > 0 at every sampled point.
ConvexityReport check_class(ConvexityClass cls, const FunctionSpec& q, const ModMap* g, SParam s,
                            const SampleGrid& grid, double tolerance = kDefaultTolerance,
                            SweepOptions options = {});

struct MinimalG {
  double gstar = 0.0;
  double argmax_a = 0.0;
  bool endpoint_feasible = true;
  double endpoint_residual = 0.0;  // Q(m2) - (e-1)^s Q(m2), the a = 0 instance
};

/// Smallest constant G(m1, m2, s) that satisfies the inequality at every a of
/// `a_grid` (which must exclude 0). The a = 0 instance does not involve G and
/// is reported separately as `endpoint_feasible`.
MinimalG minimal_g(const FunctionSpec& q, SParam s, const Point& m1, const Point& m2,
                   const std::vector<double>& a_grid);

/// True iff the s = 1, G = 0 sweep and the exponential-kind sweep agree on
/// verdict and worst residual (within 1e-12). Requires Q >= 0 at sampled points.
bool reduction_equivalence(const FunctionSpec& q, const SampleGrid& grid,
                           double tolerance = kDefaultTolerance);

}  // namespace gsconvex
