#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gsconvex/expr.hpp"

namespace gsconvex {

/// A call whose hypotheses do not hold (e.g. a sign condition on Q).
/// Distinct from a negative verdict.
class PreconditionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Exponent s of the kernel weights, 0 < s <= 1.
class SParam {
public:
  explicit SParam(double s);
  double value() const noexcept { return s_; }

private:
  double s_;
};

/// Mixing parameter a in [0, 1].
class MixParam {
public:
  explicit MixParam(double a);
  double value() const noexcept { return a_; }

private:
  double a_;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Product of closed intervals; convex by construction.
class BoxDomain {
public:
  BoxDomain() = default;
  explicit BoxDomain(std::vector<Interval> axes);

  int dimension() const noexcept { return static_cast<int>(axes_.size()); }
  const std::vector<Interval>& axes() const noexcept { return axes_; }
  bool contains(const Point& p, double slack = 0.0) const;
  Point clamp(Point p) const;
  Point center() const;

  friend bool operator==(const BoxDomain&, const BoxDomain&);

private:
  std::vector<Interval> axes_;
};

bool operator==(const BoxDomain& a, const BoxDomain& b);

struct FunctionSpec {
  Expr body;
  BoxDomain domain;
  std::string name;

  FunctionSpec() = default;
  FunctionSpec(Expr body, BoxDomain domain, std::string name = "Q");
  /// Parses `text` as a function body over the dimension of `domain`.
  static FunctionSpec parse(std::string_view text, BoxDomain domain, std::string name = "Q");

  int dimension() const noexcept { return domain.dimension(); }
  double operator()(const Point& x) const { return body.eval(x); }
};

struct ModMap {
  Expr body;
  std::string name;

  ModMap() = default;
  explicit ModMap(Expr body, std::string name = "G");
  static ModMap parse(std::string_view text, int dimension, std::string name = "G");
  static ModMap constant(double c, int dimension, std::string name = "G");

  int dimension() const noexcept { return body.dimension(); }
  double operator()(const Point& u, const Point& v, double s) const { return body.eval(u, v, s); }
};

struct WeightPair {
  double w1 = 0.0;  // (e^a - 1)^s
  double w2 = 0.0;  // (e^(1-a) - 1)^s
};

/// (e^t - 1)^s, with the limit value 0 at t = 0.
double exp_kernel(double t, double s);

WeightPair weights(MixParam a, SParam s);

struct LemmaMargins {
  double d1 = 0.0;  // w1 - a
  double d2 = 0.0;  // w2 - (1 - a)
};

LemmaMargins lemma_margins(MixParam a, SParam s);

/// One explicit (m1, m2, a) triple.
struct SampleTriple {
  Point m1;
  Point m2;
  double a = 0.0;
};

enum class PairMode { All, Diagonal };

/// Deterministic sampling plan over (m1, m2, a) and fixed s values.
///
/// The m-grid is the Cartesian product of `points_per_axis` equispaced points
/// per coordinate (endpoints included; a single point means the midpoint).
/// Pairs are all ordered pairs of m-grid points, or only m1 == m2 in diagonal
/// mode. `refine` seeded random triples per s and any `explicit_samples` are
/// swept in addition.
struct SampleGrid {
  int points_per_axis = 11;
  std::vector<double> a_grid = linspace(0.0, 1.0, 11);
  std::vector<double> s_list = {1.0};
  PairMode pairs = PairMode::All;
  int refine = 0;
  std::uint64_t seed = 0;
  std::vector<SampleTriple> explicit_samples;

  /// k equispaced points from lo to hi, exact at both ends.
  static std::vector<double> linspace(double lo, double hi, int k);

  /// Throws std::invalid_argument when the plan breaks its invariants
  /// (a-grid inside [0,1] containing both endpoints, s-list inside (0,1]).
  void validate(bool require_a_endpoints = true) const;
};

/// Equispaced points along each axis of `domain`.
std::vector<std::vector<double>> axis_points(const BoxDomain& domain, int points_per_axis);

/// Cartesian product of the axis points, first coordinate slowest.
std::vector<Point> grid_points(const BoxDomain& domain, int points_per_axis);

/// The seeded random triples of `grid.refine` (uniform m1, m2 in the box, a in [0,1]).
std::vector<SampleTriple> refinement_samples(const SampleGrid& grid, const BoxDomain& domain);

/// Uniform double in [0, 1) from a 64-bit generator output, portable across
/// standard libraries.
double unit_uniform(std::uint64_t bits);

/// Lexicographic comparison of two points; -1, 0, 1.
int compare_points(const Point& a, const Point& b);

}  // namespace gsconvex
