#pragma once

// Gradient-form inequalities for differentiable Q. The asymptotic remainder
// o(a) is taken as 0 in every margin; margins are reported per a and the
// small-a behaviour is exercised through the secant form instead.

#include <string_view>

#include "gsconvex/core.hpp"

namespace gsconvex {

enum class GradientMethod { Dual, CentralDifference };

struct Gradient {
  Point value;
  bool nonsmooth = false;
};

inline constexpr double kDefaultFdStep = 1e-5;

/// Dual: one forward-mode pass per basis direction. Central difference needs
/// m +- h e_i inside the domain on every axis.
Gradient gradient(const FunctionSpec& q, const Point& m, GradientMethod method = GradientMethod::Dual,
                  double h = kDefaultFdStep);

/// grad Q(at) . direction, by dual numbers.
double directional_derivative(const FunctionSpec& q, const Point& at, const Point& direction);

/// Which factor multiplies Q(m1) - Q(m2) in the second gradient bound.
/// `Text` uses the a-independent (e^s - 1)^s; `AKernel` uses (e^a - 1)^s.
enum class T6iiVariant { Text, AKernel };

T6iiVariant parse_t6ii_variant(std::string_view name);
std::string_view to_string(T6iiVariant v);

struct T6Margins {
  double lhs = 0.0;  // grad Q(m2) . (m1 - m2)
  double rhs_i = 0.0;
  double rhs_ii = 0.0;
  double margin_i = 0.0;   // rhs_i - lhs; > 0 means the strict bound holds
  double margin_ii = 0.0;  // rhs_ii - lhs
};

/// Bounds for non-negative Q:
///   (i)  (e^a-1)^s/a Q(m1) + e^((1-a)s)/a Q(m2) + G(m1,m2,s)
///   (ii) [k (Q(m1) - Q(m2)) + 3 Q(m2)]/a + G(m1,m2,s),  k per `variant`
T6Margins check_t6(const FunctionSpec& q, const ModMap& g, SParam s, const Point& m1, const Point& m2,
                   MixParam a, T6iiVariant variant = T6iiVariant::Text);

struct T7Margin {
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // >= 0 means the bound holds
};

/// Bound for non-positive Q: (e^a-1)^s/a [Q(m1) - Q(m2)] + G(m1,m2,s).
T7Margin check_t7(const FunctionSpec& q, const ModMap& g, SParam s, const Point& m1, const Point& m2,
                  MixParam a);

enum class SignBranch { Positive, Negative };

struct C2Margin {
  SignBranch branch = SignBranch::Positive;
  double lhs = 0.0;  // (grad Q(m2) - grad Q(m1)) . (m1 - m2)
  double rhs = 0.0;
  double margin = 0.0;
  bool holds = false;  // strict (> 0) on the positive branch, >= 0 on the negative one
};

/// Two-sided bound. Q > 0 at both points selects the positive branch,
///   [(e^a-1)^s/a + e^((1-a)s)/a] [Q(m1)+Q(m2)] + G(m1,m2,s) + G(m2,m1,s);
/// Q < 0 at both selects the negative branch, G(m1,m2,s) + G(m2,m1,s).
C2Margin check_c2(const FunctionSpec& q, const ModMap& g, SParam s, const Point& m1, const Point& m2,
                  MixParam a);

struct SecantForm {
  double lhs = 0.0;  // [Q(a m1 + (1-a) m2) - Q(m2)] / a
  double rhs = 0.0;  // [w1 Q(m1) + (w2 - 1) Q(m2)] / a + G(m1,m2,s)
};

/// The defining inequality divided by a (a > 0); lhs - rhs equals residual / a.
SecantForm secant_form(const FunctionSpec& q, const ModMap& g, SParam s, const Point& m1, const Point& m2,
                       MixParam a);

/// [Q(m2 + a (m1 - m2)) - Q(m2)] / a, whose a -> 0 limit is grad Q(m2).(m1 - m2).
double secant_slope(const FunctionSpec& q, const Point& m1, const Point& m2, double a);

}  // namespace gsconvex
