#include "gsconvex/cert.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

namespace gsconvex {

std::string to_string(ConvexityClass c) {
  switch (c) {
    case ConvexityClass::GsExponential: return "gs-exponential";
    case ConvexityClass::SConvex: return "s-convex";
    case ConvexityClass::SubBSConvex: return "sub-b-s-convex";
    case ConvexityClass::ExponentialKind: return "exponential-kind";
  }
  return "?";
}

ConvexityClass parse_convexity_class(std::string_view name) {
  for (auto c : {ConvexityClass::GsExponential, ConvexityClass::SConvex, ConvexityClass::SubBSConvex,
                 ConvexityClass::ExponentialKind}) {
    if (to_string(c) == name) return c;
  }
  throw std::invalid_argument("unknown convexity class '" + std::string(name) + "'");
}

std::string to_string(Verdict v) { return v == Verdict::Pass ? "pass" : "fail"; }

namespace {

int compare_keys(const ResidualSample& x, const ResidualSample& y) {
  if (x.s != y.s) return x.s < y.s ? -1 : 1;
  if (x.a != y.a) return x.a < y.a ? -1 : 1;
  if (int c = compare_points(x.m1, y.m1)) return c;
  return compare_points(x.m2, y.m2);
}

}  // namespace

bool worse_than(const ResidualSample& x, const ResidualSample& y) {
  if (x.residual != y.residual) return x.residual > y.residual;
  return compare_keys(x, y) < 0;
}

SampleError::SampleError(const std::string& what, ResidualSample sample)
    : std::runtime_error(what), sample_(std::move(sample)) {}

namespace {

void mix(double a, const Point& m1, const Point& m2, Point& out) {
  out.resize(m1.size());
  for (std::size_t j = 0; j < m1.size(); ++j) out[j] = a * m1[j] + (1.0 - a) * m2[j];
}

struct Coefficients {
  double c1 = 0.0;
  double c2 = 0.0;
  double g_factor = 0.0;
};

Coefficients coefficients(ConvexityClass cls, double a, double s) {
  switch (cls) {
    case ConvexityClass::GsExponential: return {exp_kernel(a, s), exp_kernel(1.0 - a, s), a};
    case ConvexityClass::SConvex: return {std::pow(a, s), std::pow(1.0 - a, s), 0.0};
    case ConvexityClass::SubBSConvex: return {std::pow(a, s), std::pow(1.0 - a, s), 1.0};
    case ConvexityClass::ExponentialKind: return {exp_kernel(a, 1.0), exp_kernel(1.0 - a, 1.0), 0.0};
  }
  return {};
}

[[noreturn]] void fail_at(const ResidualSample& where, const std::exception& e) {
  throw SampleError(std::string(e.what()) + " (at s=" + std::to_string(where.s) +
                        ", a=" + std::to_string(where.a) + ")",
                    where);
}

struct WorkerResult {
  std::vector<std::optional<ResidualSample>> worst;  // per s index
  std::size_t samples = 0;
  std::optional<ResidualSample> error_sample;
  std::string error_message;
};

class Sweep {
public:
  Sweep(ConvexityClass cls, const FunctionSpec& q, const ModMap* g, const SampleGrid& grid,
        bool require_positive, bool require_nonnegative)
      : cls_(cls), q_(q), g_(g), grid_(grid) {
    grid_.validate(true);
    if (g_ && g_->dimension() != q_.dimension())
      throw std::invalid_argument("modulating map dimension does not match the function");
    points_ = grid_points(q_.domain, grid_.points_per_axis);
    if (grid_.a_grid.empty()) points_.clear();
    a_sorted_ = grid_.a_grid;
    std::sort(a_sorted_.begin(), a_sorted_.end());
    s_order_.resize(grid_.s_list.size());
    std::iota(s_order_.begin(), s_order_.end(), std::size_t{0});
    std::stable_sort(s_order_.begin(), s_order_.end(),
                     [&](std::size_t x, std::size_t y) { return grid_.s_list[x] < grid_.s_list[y]; });

    extra_ = grid_.explicit_samples;
    for (auto& t : refinement_samples(grid_, q_.domain)) extra_.push_back(std::move(t));
    for (const auto& t : extra_) {
      if (!q_.domain.contains(t.m1) || !q_.domain.contains(t.m2))
        throw std::invalid_argument("explicit sample lies outside the domain");
    }

    qvals_.resize(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) {
      qvals_[i] = eval_point(points_[i]);
    }
    auto sign_check = [&](const Point& p, double v) {
      if (require_positive && !(v > 0.0))
        throw PreconditionError(to_string(cls_) + " requires Q > 0 at every sampled point");
      if (require_nonnegative && v < 0.0)
        throw PreconditionError("Q must be non-negative at every sampled point");
      (void)p;
    };
    for (std::size_t i = 0; i < points_.size(); ++i) sign_check(points_[i], qvals_[i]);
    for (const auto& t : extra_) {
      sign_check(t.m1, eval_point(t.m1));
      sign_check(t.m2, eval_point(t.m2));
    }
  }

  ConvexityReport run(double tolerance, int threads) {
    const std::size_t n = points_.size();
    const std::size_t workers = n == 0 ? 0 : std::clamp<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), 1, n);
    std::vector<WorkerResult> results(workers);
    if (workers == 1) {
      work(0, n, results[0]);
    } else if (workers > 1) {
      std::vector<std::thread> pool;
      for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = n * w / workers, end = n * (w + 1) / workers;
        pool.emplace_back([this, begin, end, &r = results[w]] { work(begin, end, r); });
      }
      for (auto& t : pool) t.join();
    }

    const WorkerResult* first_error = nullptr;
    for (const auto& r : results) {
      if (r.error_sample &&
          (!first_error || compare_keys(*r.error_sample, *first_error->error_sample) < 0))
        first_error = &r;
    }
    if (first_error) throw SampleError(first_error->error_message, *first_error->error_sample);

    ConvexityReport report;
    report.class_id = cls_;
    report.tolerance = tolerance;
    std::vector<std::optional<ResidualSample>> worst(grid_.s_list.size());
    for (const auto& r : results) {
      report.samples += r.samples;
      for (std::size_t si = 0; si < worst.size(); ++si) absorb(worst[si], r.worst[si]);
    }

    Point x;
    for (std::size_t si : s_order_) {
      const double s = grid_.s_list[si];
      for (const auto& t : extra_) {
        ResidualSample sample{t.m1, t.m2, t.a, s, 0.0};
        try {
          const Coefficients c = coefficients(cls_, t.a, s);
          const double gv = g_ ? (*g_)(t.m1, t.m2, s) : 0.0;
          mix(t.a, t.m1, t.m2, x);
          sample.residual = q_.body.eval(x) - c.c1 * q_(t.m1) - c.c2 * q_(t.m2) - c.g_factor * gv;
          if (!std::isfinite(sample.residual)) throw DomainError("non-finite residual", "residual");
        } catch (const std::exception& e) {
          fail_at(sample, e);
        }
        ++report.samples;
        absorb(worst[si], sample);
      }
    }

    for (std::size_t si = 0; si < worst.size(); ++si) {
      if (!worst[si]) throw std::invalid_argument("sample grid produced no samples");
      report.worst_per_s.push_back(*worst[si]);
      if (si == 0 || worse_than(*worst[si], report.worst)) report.worst = *worst[si];
    }
    report.verdict = report.worst.residual > tolerance ? Verdict::Fail : Verdict::Pass;
    return report;
  }

private:
  static void absorb(std::optional<ResidualSample>& into, const std::optional<ResidualSample>& cand) {
    if (cand && (!into || worse_than(*cand, *into))) into = cand;
  }

  double eval_point(const Point& p) const {
    try {
      return q_(p);
    } catch (const std::exception& e) {
      fail_at(ResidualSample{p, p, 0.0, grid_.s_list.front(), 0.0}, e);
    }
  }

  // Loop order matches the tie-break key order (s, a, m1, m2), so the first
  // error found in a chunk is the smallest-key error of that chunk.
  void work(std::size_t begin, std::size_t end, WorkerResult& out) const {
    const std::size_t n = points_.size();
    out.worst.assign(grid_.s_list.size(), std::nullopt);
    std::vector<double> gcache;
    Point x;
    for (std::size_t si : s_order_) {
      const double s = grid_.s_list[si];
      if (g_) gcache.assign((end - begin) * n, std::numeric_limits<double>::quiet_NaN());
      for (double a : a_sorted_) {
        const Coefficients c = coefficients(cls_, a, s);
        for (std::size_t i = begin; i < end; ++i) {
          const std::size_t j0 = grid_.pairs == PairMode::Diagonal ? i : 0;
          const std::size_t j1 = grid_.pairs == PairMode::Diagonal ? i + 1 : n;
          for (std::size_t j = j0; j < j1; ++j) {
            double r = 0.0;
            try {
              double gv = 0.0;
              if (g_) {
                double& slot = gcache[(i - begin) * n + j];
                if (std::isnan(slot)) slot = (*g_)(points_[i], points_[j], s);
                gv = slot;
              }
              mix(a, points_[i], points_[j], x);
              r = q_.body.eval(x) - c.c1 * qvals_[i] - c.c2 * qvals_[j] - c.g_factor * gv;
              if (!std::isfinite(r)) throw DomainError("non-finite residual", "residual");
            } catch (const std::exception& e) {
              out.error_sample = ResidualSample{points_[i], points_[j], a, s, 0.0};
              out.error_message = std::string(e.what()) + " (at s=" + std::to_string(s) +
                                  ", a=" + std::to_string(a) + ")";
              return;
            }
            ++out.samples;
            auto& w = out.worst[si];
            if (!w || r > w->residual ||
                (r == w->residual && worse_than(ResidualSample{points_[i], points_[j], a, s, r}, *w)))
              w = ResidualSample{points_[i], points_[j], a, s, r};
          }
        }
      }
    }
  }

  ConvexityClass cls_;
  const FunctionSpec& q_;
  const ModMap* g_;
  SampleGrid grid_;
  std::vector<Point> points_;
  std::vector<double> qvals_;
  std::vector<double> a_sorted_;
  std::vector<std::size_t> s_order_;
  std::vector<SampleTriple> extra_;
};

}  // namespace

double residual(const FunctionSpec& q, const ModMap& g, SParam s, const Point& m1, const Point& m2,
                MixParam a) {
  if (!q.domain.contains(m1) || !q.domain.contains(m2))
    throw PreconditionError("m1 and m2 must lie in the domain of Q");
  ResidualSample sample{m1, m2, a.value(), s.value(), 0.0};
  try {
    const WeightPair w = weights(a, s);
    Point x;
    mix(a.value(), m1, m2, x);
    return q.body.eval(x) - w.w1 * q(m1) - w.w2 * q(m2) - a.value() * g(m1, m2, s.value());
  } catch (const DomainError& e) {
    fail_at(sample, e);
  }
}

ConvexityReport check_gs_convex(const FunctionSpec& q, const ModMap& g, const SampleGrid& grid,
                                double tolerance, SweepOptions options) {
  return Sweep(ConvexityClass::GsExponential, q, &g, grid, false, false).run(tolerance, options.threads);
}

ConvexityReport check_class(ConvexityClass cls, const FunctionSpec& q, const ModMap* g, SParam s,
                            const SampleGrid& grid, double tolerance, SweepOptions options) {
  SampleGrid plan = grid;
  plan.s_list = {cls == ConvexityClass::ExponentialKind ? 1.0 : s.value()};
  switch (cls) {
    case ConvexityClass::GsExponential:
    case ConvexityClass::SubBSConvex:
      if (!g) throw PreconditionError(to_string(cls) + " requires a modulating map");
      break;
    case ConvexityClass::SConvex:
    case ConvexityClass::ExponentialKind:
      if (g) throw PreconditionError(to_string(cls) + " does not take a modulating map");
      break;
  }
  const bool positive = cls == ConvexityClass::ExponentialKind;
  return Sweep(cls, q, g, plan, positive, false).run(tolerance, options.threads);
}

MinimalG minimal_g(const FunctionSpec& q, SParam s, const Point& m1, const Point& m2,
                   const std::vector<double>& a_grid) {
  if (a_grid.empty()) throw std::invalid_argument("minimal_g needs a non-empty a-grid");
  if (!q.domain.contains(m1) || !q.domain.contains(m2))
    throw PreconditionError("m1 and m2 must lie in the domain of Q");
  std::vector<double> as = a_grid;
  std::sort(as.begin(), as.end());
  if (!(as.front() > 0.0)) throw std::invalid_argument("minimal_g a-grid must exclude 0");
  for (double a : as) MixParam{a};

  MinimalG out;
  bool first = true;
  Point x;
  const double q1 = q(m1), q2 = q(m2);
  for (double a : as) {
    mix(a, m1, m2, x);
    const double ratio =
        (q.body.eval(x) - exp_kernel(a, s.value()) * q1 - exp_kernel(1.0 - a, s.value()) * q2) / a;
    if (first || ratio > out.gstar) {
      out.gstar = ratio;
      out.argmax_a = a;
      first = false;
    }
  }
  mix(0.0, m1, m2, x);
  out.endpoint_residual = q.body.eval(x) - exp_kernel(1.0, s.value()) * q2;
  out.endpoint_feasible = out.endpoint_residual <= 0.0;
  return out;
}

bool reduction_equivalence(const FunctionSpec& q, const SampleGrid& grid, double tolerance) {
  SampleGrid plan = grid;
  plan.s_list = {1.0};
  const ModMap zero = ModMap::constant(0.0, q.dimension());
  const ConvexityReport gs =
      Sweep(ConvexityClass::GsExponential, q, &zero, plan, false, true).run(tolerance, 1);
  const ConvexityReport ek =
      Sweep(ConvexityClass::ExponentialKind, q, nullptr, plan, false, true).run(tolerance, 1);
  return gs.verdict == ek.verdict && std::fabs(gs.worst.residual - ek.worst.residual) <= 1e-12;
}

}  // namespace gsconvex
