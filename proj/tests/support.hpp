#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gsconvex/cert.hpp"

namespace gsconvex::test {

inline FunctionSpec fn(const std::string& text, double lo, double hi) {
  return FunctionSpec::parse(text, BoxDomain({{lo, hi}}));
}

inline FunctionSpec fn2(const std::string& text, double lo, double hi) {
  return FunctionSpec::parse(text, BoxDomain({{lo, hi}, {lo, hi}}));
}

inline ModMap zero_g(int dim = 1) { return ModMap::constant(0.0, dim); }

inline SampleGrid axes_grid(int points, std::vector<double> s_list = {1.0}) {
  SampleGrid g;
  g.points_per_axis = points;
  g.a_grid = SampleGrid::linspace(0.0, 1.0, points);
  g.s_list = std::move(s_list);
  return g;
}

/// Non-negative convex members: x1^2, |x1|, exp(x1), x1 on [0,2]; x1^2+x2^2 on [0,1]^2.
inline std::vector<FunctionSpec> convex_corpus() {
  return {fn("x1^2", 0, 2), fn("abs(x1)", 0, 2), fn("exp(x1)", 0, 2), fn("x1", 0, 2),
          fn2("x1^2 + x2^2", 0, 1)};
}

class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit_uniform(gen_()); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(gen_() % n); }

private:
  std::mt19937_64 gen_;
};

}  // namespace gsconvex::test
