#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gsconvex/core.hpp"

namespace gsconvex {

struct MinimizeOptions {
  int starts = 8;
  int max_iters = 1000;
  double tolerance = 1e-10;  // on the projected-gradient step length (inf-norm)
  double initial_step = 1.0;
  double armijo = 1e-4;
  double min_step = 1e-20;
  std::uint64_t seed = 0;
};

enum class StartStatus { Converged, MaxIterations, StepUnderflow };

std::string to_string(StartStatus s);

struct StartTrace {
  Point start;
  Point end;
  double value = 0.0;
  int iterations = 0;
  StartStatus status = StartStatus::MaxIterations;
};

struct OptimizationResult {
  Point best_point;
  double best_value = 0.0;
  std::vector<StartTrace> starts;
};

class OptimizationError : public std::runtime_error {
public:
  OptimizationError(const std::string& what, std::vector<StartTrace> traces)
      : std::runtime_error(what), traces_(std::move(traces)) {}
  const std::vector<StartTrace>& traces() const noexcept { return traces_; }

private:
  std::vector<StartTrace> traces_;
};

/// Multi-start projected gradient descent on the box domain of Q with
/// backtracking (halving) Armijo line search. Start 0 is the box centre,
/// the rest are drawn uniformly from the box with `seed`.
OptimizationResult minimize(const FunctionSpec& q, const MinimizeOptions& options = {});

struct Certificate {
  Point candidate;
  double a = 0.0;
  double s = 1.0;
  bool holds = false;  // worst_margin > 0
  double worst_margin = 0.0;
  Point witness;
  std::size_t samples = 0;
};

/// margin(n) = grad Q(m).(n - m) - G(n, m, s) - 3 Q(m)/a over the n-grid
/// (m itself is added when absent). Holds iff every margin is strictly
/// positive. Requires a in (0, 1) and m in the domain.
Certificate certify_unconstrained(const FunctionSpec& q, const ModMap& g, SParam s, double a,
                                  const Point& m, std::vector<Point> n_grid);

struct RunReport {
  std::vector<OptimizationResult> results;
  std::vector<Certificate> certificates;
  std::vector<std::string> flags;
};

inline constexpr const char* kOptimalitySupported = "optimality supported by sufficient-condition check";
inline constexpr const char* kNoCertificate = "no certificate";

RunReport build_report(std::vector<OptimizationResult> results, std::vector<Certificate> certificates);

}  // namespace gsconvex
