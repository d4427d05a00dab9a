#include "gsconvex/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace gsconvex::oracle {

double reference_residual(const FunctionSpec& q, const ModMap& g, double s, const Point& m1,
                          const Point& m2, double a) {
  // (e^t - 1)^s, 0 at t = 0; written out here on purpose rather than reusing core
  auto kernel = [s](double t) {
    if (t == 0.0) return 0.0;
    if (s == 1.0) return std::expm1(t);
    return std::exp(s * std::log(std::expm1(t)));
  };
  Point x(m1.size());
  for (std::size_t j = 0; j < m1.size(); ++j) x[j] = a * m1[j] + (1.0 - a) * m2[j];
  const double lhs = q.body.eval(x);
  const double w1 = kernel(a);
  const double w2 = kernel(1.0 - a);
  return lhs - w1 * q.body.eval(m1) - w2 * q.body.eval(m2) - a * g.body.eval(m1, m2, s);
}

WorstResidual brute_force_worst_residual(const FunctionSpec& q, const ModMap& g,
                                         const std::vector<double>& s_list, const SampleGrid& grid) {
  if (s_list.empty()) throw std::invalid_argument("oracle: empty s-list");
  const int dim = q.dimension();
  const auto& axes = q.domain.axes();
  const int k = grid.points_per_axis;

  std::size_t n_points = 0;
  if (k > 0 && !grid.a_grid.empty()) {
    n_points = 1;
    for (int d = 0; d < dim; ++d) n_points *= static_cast<std::size_t>(k);
  }
  const std::size_t pairs = grid.pairs == PairMode::Diagonal ? n_points : n_points * n_points;
  const std::vector<SampleTriple> refined = refinement_samples(grid, q.domain);
  const std::size_t total =
      s_list.size() * (pairs * grid.a_grid.size() + grid.explicit_samples.size() + refined.size());
  if (total > kMaxSamples) throw std::invalid_argument("oracle: grid too large to enumerate");

  auto coordinate = [&](int d, std::size_t i) {
    const double lo = axes[static_cast<std::size_t>(d)].lo, hi = axes[static_cast<std::size_t>(d)].hi;
    if (k == 1) return 0.5 * (lo + hi);
    if (i == 0) return lo;
    if (i == static_cast<std::size_t>(k - 1)) return hi;
    return lo + (hi - lo) * (static_cast<double>(i) / (k - 1));
  };
  auto point = [&](std::size_t flat) {
    Point p(static_cast<std::size_t>(dim));
    for (int d = dim - 1; d >= 0; --d) {
      p[static_cast<std::size_t>(d)] = coordinate(d, flat % static_cast<std::size_t>(k));
      flat /= static_cast<std::size_t>(k);
    }
    return p;
  };
  auto lex_less = [](const Point& x, const Point& y) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] != y[i]) return x[i] < y[i];
    }
    return false;
  };

  WorstResidual out;
  bool have = false;
  auto consider = [&](double s, double a, const Point& m1, const Point& m2) {
    const double r = reference_residual(q, g, s, m1, m2, a);
    ++out.samples;
    bool take = !have || r > out.worst;
    if (have && r == out.worst) {
      const ResidualSample& w = out.witness;
      if (s != w.s) take = s < w.s;
      else if (a != w.a) take = a < w.a;
      else if (m1 != w.m1) take = lex_less(m1, w.m1);
      else take = lex_less(m2, w.m2);
    }
    if (take) {
      out.worst = r;
      out.witness = ResidualSample{m1, m2, a, s, r};
      have = true;
    }
  };

  for (double s : s_list) {
    for (double a : grid.a_grid) {
      for (std::size_t i = 0; i < n_points; ++i) {
        const Point m1 = point(i);
        if (grid.pairs == PairMode::Diagonal) {
          consider(s, a, m1, m1);
          continue;
        }
        for (std::size_t j = 0; j < n_points; ++j) consider(s, a, m1, point(j));
      }
    }
    for (const auto& t : grid.explicit_samples) consider(s, t.a, t.m1, t.m2);
    for (const auto& t : refined) consider(s, t.a, t.m1, t.m2);
  }
  if (!have) throw std::invalid_argument("oracle: grid produced no samples");
  return out;
}

}  // namespace gsconvex::oracle
