#include "gsconvex/core.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace gsconvex {

SParam::SParam(double s) : s_(s) {
  if (!(s > 0.0 && s <= 1.0)) throw std::invalid_argument("s must lie in (0, 1], got " + std::to_string(s));
}

MixParam::MixParam(double a) : a_(a) {
  if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("a must lie in [0, 1], got " + std::to_string(a));
}

BoxDomain::BoxDomain(std::vector<Interval> axes) : axes_(std::move(axes)) {
  if (axes_.empty()) throw std::invalid_argument("box domain needs at least one axis");
  for (const auto& [lo, hi] : axes_) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi)
      throw std::invalid_argument("box axis must satisfy lo <= hi with finite bounds");
  }
}

bool BoxDomain::contains(const Point& p, double slack) const {
  if (p.size() != axes_.size()) return false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] >= axes_[i].lo - slack && p[i] <= axes_[i].hi + slack)) return false;
  }
  return true;
}

Point BoxDomain::clamp(Point p) const {
  for (std::size_t i = 0; i < p.size() && i < axes_.size(); ++i)
    p[i] = std::clamp(p[i], axes_[i].lo, axes_[i].hi);
  return p;
}

Point BoxDomain::center() const {
  Point c;
  c.reserve(axes_.size());
  for (const auto& [lo, hi] : axes_) c.push_back(0.5 * (lo + hi));
  return c;
}

bool operator==(const BoxDomain& a, const BoxDomain& b) {
  if (a.axes_.size() != b.axes_.size()) return false;
  for (std::size_t i = 0; i < a.axes_.size(); ++i) {
    if (a.axes_[i].lo != b.axes_[i].lo || a.axes_[i].hi != b.axes_[i].hi) return false;
  }
  return true;
}

FunctionSpec::FunctionSpec(Expr b, BoxDomain d, std::string n)
    : body(std::move(b)), domain(std::move(d)), name(std::move(n)) {
  if (body.variable_set() != VariableSet::Function)
    throw std::invalid_argument("function body must be over x variables");
  if (body.dimension() != domain.dimension())
    throw std::invalid_argument("function body dimension does not match its domain");
}

FunctionSpec FunctionSpec::parse(std::string_view text, BoxDomain domain, std::string name) {
  Expr body = Expr::parse(text, domain.dimension(), VariableSet::Function);
  return FunctionSpec(std::move(body), std::move(domain), std::move(name));
}

ModMap::ModMap(Expr b, std::string n) : body(std::move(b)), name(std::move(n)) {
  if (body.variable_set() != VariableSet::ModMap)
    throw std::invalid_argument("modulating map must be over u, v, s");
}

ModMap ModMap::parse(std::string_view text, int dimension, std::string name) {
  return ModMap(Expr::parse(text, dimension, VariableSet::ModMap), std::move(name));
}

ModMap ModMap::constant(double c, int dimension, std::string name) {
  return ModMap(Expr::constant(c, dimension, VariableSet::ModMap), std::move(name));
}

double exp_kernel(double t, double s) {
  if (t == 0.0) return 0.0;
  const double base = std::expm1(t);
  if (s == 1.0) return base;
  return std::exp(s * std::log(base));
}

WeightPair weights(MixParam a, SParam s) {
  return {exp_kernel(a.value(), s.value()), exp_kernel(1.0 - a.value(), s.value())};
}

LemmaMargins lemma_margins(MixParam a, SParam s) {
  const WeightPair w = weights(a, s);
  return {w.w1 - a.value(), w.w2 - (1.0 - a.value())};
}

std::vector<double> SampleGrid::linspace(double lo, double hi, int k) {
  if (k < 1) throw std::invalid_argument("linspace needs at least one point");
  if (k == 1) return {0.5 * (lo + hi)};
  std::vector<double> out(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i)
    out[static_cast<std::size_t>(i)] = lo + (hi - lo) * (static_cast<double>(i) / (k - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

void SampleGrid::validate(bool require_a_endpoints) const {
  if (points_per_axis < 0) throw std::invalid_argument("points_per_axis must be >= 0");
  if (refine < 0) throw std::invalid_argument("refine must be >= 0");
  if (s_list.empty()) throw std::invalid_argument("s-list is empty");
  for (double s : s_list) SParam{s};
  for (double a : a_grid) MixParam{a};
  if (require_a_endpoints && points_per_axis > 0) {
    const bool has0 = std::find(a_grid.begin(), a_grid.end(), 0.0) != a_grid.end();
    const bool has1 = std::find(a_grid.begin(), a_grid.end(), 1.0) != a_grid.end();
    if (!has0 || !has1) throw std::invalid_argument("a-grid must contain both 0 and 1");
  }
  for (const auto& t : explicit_samples) MixParam{t.a};
  const bool axis_part = points_per_axis > 0 && !a_grid.empty();
  if (!axis_part && refine == 0 && explicit_samples.empty())
    throw std::invalid_argument("sample grid is empty");
}

std::vector<std::vector<double>> axis_points(const BoxDomain& domain, int points_per_axis) {
  std::vector<std::vector<double>> out;
  for (const auto& [lo, hi] : domain.axes()) out.push_back(SampleGrid::linspace(lo, hi, points_per_axis));
  return out;
}

std::vector<Point> grid_points(const BoxDomain& domain, int points_per_axis) {
  if (points_per_axis <= 0) return {};
  const auto axes = axis_points(domain, points_per_axis);
  std::vector<Point> out{Point{}};
  for (const auto& axis : axes) {
    std::vector<Point> next;
    next.reserve(out.size() * axis.size());
    for (const Point& prefix : out) {
      for (double v : axis) {
        Point p = prefix;
        p.push_back(v);
        next.push_back(std::move(p));
      }
    }
    out = std::move(next);
  }
  return out;
}

double unit_uniform(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

std::vector<SampleTriple> refinement_samples(const SampleGrid& grid, const BoxDomain& domain) {
  std::vector<SampleTriple> out;
  if (grid.refine <= 0) return out;
  std::mt19937_64 rng(grid.seed);
  auto draw_point = [&] {
    Point p;
    for (const auto& [lo, hi] : domain.axes()) p.push_back(lo + (hi - lo) * unit_uniform(rng()));
    return p;
  };
  out.reserve(static_cast<std::size_t>(grid.refine));
  for (int i = 0; i < grid.refine; ++i) {
    SampleTriple t;
    t.m1 = draw_point();
    t.m2 = grid.pairs == PairMode::Diagonal ? t.m1 : draw_point();
    t.a = unit_uniform(rng());
    out.push_back(std::move(t));
  }
  return out;
}

int compare_points(const Point& a, const Point& b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] < b[i]) return -1;
    if (a[i] > b[i]) return 1;
  }
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

}  // namespace gsconvex
