#include "gsconvex/diff.hpp"

#include <cmath>
#include <string>

namespace gsconvex {

namespace {

Point minus(const Point& x, const Point& y) {
  Point d(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) d[i] = x[i] - y[i];
  return d;
}

double dot(const Point& x, const Point& y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
  return acc;
}

void require_in_domain(const FunctionSpec& q, const Point& m1, const Point& m2) {
  if (!q.domain.contains(m1) || !q.domain.contains(m2))
    throw PreconditionError("m1 and m2 must lie in the domain of Q");
}

void require_positive_a(MixParam a) {
  if (!(a.value() > 0.0)) throw std::invalid_argument("gradient bounds need a in (0, 1]");
}

}  // namespace

Gradient gradient(const FunctionSpec& q, const Point& m, GradientMethod method, double h) {
  const std::size_t n = static_cast<std::size_t>(q.dimension());
  if (m.size() != n) throw std::invalid_argument("gradient: point dimension mismatch");
  Gradient out;
  out.value.resize(n);
  if (method == GradientMethod::Dual) {
    Point e(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      e[i] = 1.0;
      const DualValue d = q.body.eval_dual(m, e);
      out.value[i] = d.derivative;
      out.nonsmooth = out.nonsmooth || d.nonsmooth;
      e[i] = 0.0;
    }
    return out;
  }
  if (!(h > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  const auto& axes = q.domain.axes();
  for (std::size_t i = 0; i < n; ++i) {
    if (m[i] - h < axes[i].lo || m[i] + h > axes[i].hi)
      throw PreconditionError("central difference needs m +- h inside the domain on axis " +
                              std::to_string(i + 1));
    Point up = m, down = m;
    up[i] += h;
    down[i] -= h;
    out.value[i] = (q(up) - q(down)) / (2.0 * h);
  }
  return out;
}

double directional_derivative(const FunctionSpec& q, const Point& at, const Point& direction) {
  return q.body.eval_dual(at, direction).derivative;
}

T6iiVariant parse_t6ii_variant(std::string_view name) {
  if (name == "text") return T6iiVariant::Text;
  if (name == "a-kernel") return T6iiVariant::AKernel;
  throw std::invalid_argument("unknown t6ii variant '" + std::string(name) + "' (text | a-kernel)");
}

std::string_view to_string(T6iiVariant v) { return v == T6iiVariant::Text ? "text" : "a-kernel"; }

T6Margins check_t6(const FunctionSpec& q, const ModMap& g, SParam s, const Point& m1, const Point& m2,
                   MixParam a, T6iiVariant variant) {
  require_in_domain(q, m1, m2);
  require_positive_a(a);
  const double q1 = q(m1), q2 = q(m2);
  if (q1 < 0.0 || q2 < 0.0) throw PreconditionError("gradient bound (non-negative case) requires Q >= 0");
  const double av = a.value(), sv = s.value();
  const double gv = g(m1, m2, sv);

  T6Margins out;
  out.lhs = directional_derivative(q, m2, minus(m1, m2));
  out.rhs_i = exp_kernel(av, sv) / av * q1 + std::exp((1.0 - av) * sv) / av * q2 + gv;
  const double k = variant == T6iiVariant::Text ? exp_kernel(sv, sv) : exp_kernel(av, sv);
  out.rhs_ii = (k * (q1 - q2) + 3.0 * q2) / av + gv;
  out.margin_i = out.rhs_i - out.lhs;
  out.margin_ii = out.rhs_ii - out.lhs;
  return out;
}

T7Margin check_t7(const FunctionSpec& q, const ModMap& g, SParam s, const Point& m1, const Point& m2,
                  MixParam a) {
  require_in_domain(q, m1, m2);
  require_positive_a(a);
  const double q1 = q(m1), q2 = q(m2);
  if (q1 > 0.0 || q2 > 0.0) throw PreconditionError("gradient bound (non-positive case) requires Q <= 0");
  T7Margin out;
  out.lhs = directional_derivative(q, m2, minus(m1, m2));
  out.rhs = exp_kernel(a.value(), s.value()) / a.value() * (q1 - q2) + g(m1, m2, s.value());
  out.margin = out.rhs - out.lhs;
  return out;
}

C2Margin check_c2(const FunctionSpec& q, const ModMap& g, SParam s, const Point& m1, const Point& m2,
                  MixParam a) {
  require_in_domain(q, m1, m2);
  require_positive_a(a);
  const double q1 = q(m1), q2 = q(m2);
  C2Margin out;
  if (q1 > 0.0 && q2 > 0.0) {
    out.branch = SignBranch::Positive;
  } else if (q1 < 0.0 && q2 < 0.0) {
    out.branch = SignBranch::Negative;
  } else {
    throw PreconditionError("two-sided gradient bound needs Q of one strict sign at m1 and m2");
  }
  const double av = a.value(), sv = s.value();
  const Point d = minus(m1, m2);
  const Gradient g1 = gradient(q, m1), g2 = gradient(q, m2);
  out.lhs = dot(minus(g2.value, g1.value), d);
  const double gsum = g(m1, m2, sv) + g(m2, m1, sv);
  if (out.branch == SignBranch::Positive) {
    out.rhs = (exp_kernel(av, sv) / av + std::exp((1.0 - av) * sv) / av) * (q1 + q2) + gsum;
  } else {
    out.rhs = gsum;
  }
  out.margin = out.rhs - out.lhs;
  out.holds = out.branch == SignBranch::Positive ? out.margin > 0.0 : out.margin >= 0.0;
  return out;
}

SecantForm secant_form(const FunctionSpec& q, const ModMap& g, SParam s, const Point& m1, const Point& m2,
                       MixParam a) {
  require_in_domain(q, m1, m2);
  require_positive_a(a);
  const WeightPair w = weights(a, s);
  const double av = a.value();
  Point x(m1.size());
  for (std::size_t j = 0; j < m1.size(); ++j) x[j] = av * m1[j] + (1.0 - av) * m2[j];
  const double q1 = q(m1), q2 = q(m2);
  return {(q(x) - q2) / av, (w.w1 * q1 + (w.w2 - 1.0) * q2) / av + g(m1, m2, s.value())};
}

double secant_slope(const FunctionSpec& q, const Point& m1, const Point& m2, double a) {
  if (!(a > 0.0)) throw std::invalid_argument("secant slope needs a > 0");
  Point x(m1.size());
  for (std::size_t j = 0; j < m1.size(); ++j) x[j] = m2[j] + a * (m1[j] - m2[j]);
  return (q(x) - q(m2)) / a;
}

}  // namespace gsconvex
