#include "gsconvex/epigraph.hpp"

#include <cmath>
#include <limits>

namespace gsconvex {

bool epi_contains(const FunctionSpec& q, const EpiPoint& p, double tolerance) {
  return q(p.m) <= p.alpha + tolerance;
}

EpiPoint gs_combine_point(const EpiPoint& p1, const EpiPoint& p2, MixParam a, SParam s, const ModMap& g) {
  if (p1.m.size() != p2.m.size()) throw std::invalid_argument("epigraph points differ in dimension");
  const WeightPair w = weights(a, s);
  EpiPoint out;
  out.m.resize(p1.m.size());
  for (std::size_t j = 0; j < p1.m.size(); ++j) out.m[j] = a.value() * p1.m[j] + (1.0 - a.value()) * p2.m[j];
  out.alpha = w.w1 * p1.alpha + w.w2 * p2.alpha + a.value() * g(p1.m, p2.m, s.value());
  return out;
}

EpigraphReport check_epigraph_theorem(const FunctionSpec& q, const ModMap& g, const SampleGrid& grid,
                                      double tolerance, SweepOptions options) {
  EpigraphReport report;
  report.gs_report = check_gs_convex(q, g, grid, tolerance, options);

  std::vector<SampleTriple> samples;
  const std::vector<Point> points = grid.a_grid.empty() ? std::vector<Point>{}
                                                        : grid_points(q.domain, grid.points_per_axis);
  for (double a : grid.a_grid) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (grid.pairs == PairMode::Diagonal) {
        samples.push_back({points[i], points[i], a});
        continue;
      }
      for (const Point& m2 : points) samples.push_back({points[i], m2, a});
    }
  }
  for (const auto& t : grid.explicit_samples) samples.push_back(t);
  for (auto& t : refinement_samples(grid, q.domain)) samples.push_back(std::move(t));

  for (double s : grid.s_list) {
    for (const auto& t : samples) {
      const double q1 = q(t.m1), q2 = q(t.m2);
      for (double d1 : kEpiDeltas) {
        for (double d2 : kEpiDeltas) {
          const EpiPoint c = gs_combine_point({t.m1, q1 + d1}, {t.m2, q2 + d2}, MixParam(t.a), SParam(s), g);
          ++report.combinations;
          if (epi_contains(q, c, tolerance)) continue;
          ++report.escapes;
          EpiEscape e{ResidualSample{t.m1, t.m2, t.a, s, q(c.m) - c.alpha}, d1, d2};
          if (!report.worst_escape || worse_than(e.sample, report.worst_escape->sample)) report.worst_escape = e;
        }
      }
    }
  }

  const bool passed = report.gs_report.verdict == Verdict::Pass;
  if (passed && report.escapes > 0)
    report.inconsistencies.push_back("sweep passes but " + std::to_string(report.escapes) +
                                     " combined points escape the epigraph");
  if (!passed && report.escapes == 0)
    report.inconsistencies.push_back("sweep fails but no combined point escapes the epigraph");

  if (report.worst_escape) {
    SampleGrid witness;
    witness.points_per_axis = 0;
    witness.a_grid.clear();
    witness.s_list = {report.worst_escape->sample.s};
    const auto& w = report.worst_escape->sample;
    witness.explicit_samples = {{w.m1, w.m2, w.a}};
    report.reverse_confirmed = check_gs_convex(q, g, witness, tolerance).verdict == Verdict::Fail;
    if (!report.reverse_confirmed)
      report.inconsistencies.push_back("escape witness does not violate the defining inequality");
  }
  report.consistent = report.inconsistencies.empty();
  return report;
}

BoundednessScan boundedness_scan(const FunctionSpec& q, Interval interval, int points, double g_bound) {
  if (q.dimension() != 1) throw std::invalid_argument("boundedness_scan: Q must be one-dimensional");
  if (interval.lo > interval.hi) throw std::invalid_argument("boundedness_scan: empty interval");
  BoundednessScan out;
  out.g_bound = g_bound;
  out.sup_estimate = -std::numeric_limits<double>::infinity();
  out.inf_estimate = std::numeric_limits<double>::infinity();
  for (double m : SampleGrid::linspace(interval.lo, interval.hi, points)) {
    ++out.points;
    try {
      const double v = q(Point{m});
      out.sup_estimate = std::max(out.sup_estimate, v);
      out.inf_estimate = std::min(out.inf_estimate, v);
    } catch (const DomainError& e) {
      if (out.bounded) {
        out.witness = m;
        out.error = e.what();
      }
      out.bounded = false;
    }
  }
  return out;
}

}  // namespace gsconvex
