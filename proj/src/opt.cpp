#include "gsconvex/opt.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "gsconvex/diff.hpp"

namespace gsconvex {

std::string to_string(StartStatus s) {
  switch (s) {
    case StartStatus::Converged: return "converged";
    case StartStatus::MaxIterations: return "max-iterations";
    case StartStatus::StepUnderflow: return "step-underflow";
  }
  return "?";
}

namespace {

double inf_norm_diff(const Point& x, const Point& y) {
  double m = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::fabs(x[i] - y[i]));
  return m;
}

Point step_from(const Point& x, const Point& grad, double t, const BoxDomain& box) {
  Point y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] - t * grad[i];
  return box.clamp(std::move(y));
}

StartTrace descend(const FunctionSpec& q, Point start, const MinimizeOptions& o) {
  StartTrace trace;
  trace.start = start;
  Point x = q.domain.clamp(std::move(start));
  double f = q(x);
  for (trace.iterations = 0; trace.iterations < o.max_iters; ++trace.iterations) {
    const Point grad = gradient(q, x).value;
    if (inf_norm_diff(step_from(x, grad, 1.0, q.domain), x) < o.tolerance) {
      trace.status = StartStatus::Converged;
      break;
    }
    double t = o.initial_step;
    bool accepted = false;
    while (t >= o.min_step) {
      const Point y = step_from(x, grad, t, q.domain);
      double decrease = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) decrease += grad[i] * (y[i] - x[i]);
      try {
        const double fy = q(y);
        if (fy <= f + o.armijo * decrease) {
          x = y;
          f = fy;
          accepted = true;
          break;
        }
      } catch (const DomainError&) {
        // outside the natural domain of Q: shorten the step
      }
      t *= 0.5;
    }
    if (!accepted) {
      trace.status = StartStatus::StepUnderflow;
      break;
    }
  }
  trace.end = x;
  trace.value = f;
  return trace;
}

}  // namespace

OptimizationResult minimize(const FunctionSpec& q, const MinimizeOptions& options) {
  if (options.starts < 1) throw std::invalid_argument("minimize needs at least one start");
  if (options.max_iters < 1) throw std::invalid_argument("minimize needs max_iters >= 1");
  std::mt19937_64 rng(options.seed);
  OptimizationResult result;
  for (int k = 0; k < options.starts; ++k) {
    Point start;
    if (k == 0) {
      start = q.domain.center();
    } else {
      for (const auto& [lo, hi] : q.domain.axes()) start.push_back(lo + (hi - lo) * unit_uniform(rng()));
    }
    result.starts.push_back(descend(q, std::move(start), options));
  }
  const bool all_underflow = std::all_of(result.starts.begin(), result.starts.end(), [](const StartTrace& t) {
    return t.status == StartStatus::StepUnderflow;
  });
  if (all_underflow) {
    std::string msg = "all " + std::to_string(result.starts.size()) + " starts ended in step underflow:";
    for (const auto& t : result.starts)
      msg += " [value " + std::to_string(t.value) + " after " + std::to_string(t.iterations) + " iterations]";
    throw OptimizationError(msg, result.starts);
  }
  const auto best = std::min_element(result.starts.begin(), result.starts.end(),
                                     [](const StartTrace& a, const StartTrace& b) { return a.value < b.value; });
  result.best_point = best->end;
  result.best_value = best->value;
  return result;
}

Certificate certify_unconstrained(const FunctionSpec& q, const ModMap& g, SParam s, double a,
                                  const Point& m, std::vector<Point> n_grid) {
  if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("certificate parameter a must lie in (0, 1)");
  if (!q.domain.contains(m)) throw PreconditionError("candidate point lies outside the domain");
  for (const Point& n : n_grid) {
    if (!q.domain.contains(n)) throw PreconditionError("n-grid point lies outside the domain");
  }
  if (std::find(n_grid.begin(), n_grid.end(), m) == n_grid.end()) n_grid.push_back(m);

  Certificate c;
  c.candidate = m;
  c.a = a;
  c.s = s.value();
  const Point grad = gradient(q, m).value;
  const double bias = 3.0 * q(m) / a;
  bool first = true;
  for (const Point& n : n_grid) {
    double slope = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) slope += grad[i] * (n[i] - m[i]);
    const double margin = slope - g(n, m, s.value()) - bias;
    ++c.samples;
    if (first || margin < c.worst_margin || (margin == c.worst_margin && compare_points(n, c.witness) < 0)) {
      c.worst_margin = margin;
      c.witness = n;
      first = false;
    }
  }
  c.holds = c.worst_margin > 0.0;
  return c;
}

RunReport build_report(std::vector<OptimizationResult> results, std::vector<Certificate> certificates) {
  if (results.empty() && certificates.empty()) throw std::invalid_argument("build_report: nothing to report");
  RunReport r;
  r.results = std::move(results);
  r.certificates = std::move(certificates);
  for (const auto& c : r.certificates) r.flags.emplace_back(c.holds ? kOptimalitySupported : kNoCertificate);
  return r;
}

}  // namespace gsconvex
