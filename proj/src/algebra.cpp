#include "gsconvex/algebra.hpp"

#include <cmath>

namespace gsconvex {

namespace {

void require_nonnegative(double beta, const char* what) {
  if (!(beta >= 0.0) || !std::isfinite(beta))
    throw std::invalid_argument(std::string(what) + " must be a finite non-negative number");
}

}  // namespace

GsPair combine_sum(const GsPair& p1, const GsPair& p2) {
  if (!(p1.q.domain == p2.q.domain)) throw std::invalid_argument("combine_sum: domains differ");
  return {FunctionSpec(Expr::add(p1.q.body, p2.q.body), p1.q.domain, p1.q.name + "+" + p2.q.name),
          ModMap(Expr::add(p1.g.body, p2.g.body), p1.g.name + "+" + p2.g.name)};
}

GsPair scale(const GsPair& p, double beta) {
  require_nonnegative(beta, "scale factor");
  return {FunctionSpec(Expr::scale(beta, p.q.body), p.q.domain, p.q.name),
          ModMap(Expr::scale(beta, p.g.body), p.g.name)};
}

GsPair linear_combination(std::span<const GsPair> pairs, std::span<const double> betas) {
  if (pairs.empty()) throw std::invalid_argument("linear_combination: empty family");
  if (pairs.size() != betas.size())
    throw std::invalid_argument("linear_combination: pairs and betas differ in length");
  for (double b : betas) require_nonnegative(b, "coefficient");
  GsPair acc = scale(pairs[0], betas[0]);
  for (std::size_t i = 1; i < pairs.size(); ++i) acc = combine_sum(acc, scale(pairs[i], betas[i]));
  return acc;
}

GsPair post_compose_linear(const GsPair& p, double c) {
  require_nonnegative(c, "linear map coefficient");
  return scale(p, c);
}

SupFamily sup_family(std::span<const GsPair> family, double lo, double hi, int probe_points) {
  if (family.empty()) throw std::invalid_argument("sup_family: empty family");
  for (const auto& p : family) {
    if (p.q.dimension() != 1) throw std::invalid_argument("sup_family: members must be one-dimensional");
    if (!(p.q.domain == family.front().q.domain))
      throw std::invalid_argument("sup_family: members must share a domain");
  }
  std::vector<Expr> qs, gs;
  for (const auto& p : family) {
    qs.push_back(p.q.body);
    gs.push_back(p.g.body);
  }
  SupFamily out{
      {FunctionSpec(Expr::maximum(qs), family.front().q.domain, "sup"), ModMap(Expr::maximum(gs), "sup")},
      SampleGrid::linspace(lo, hi, probe_points),
      {},
      true,
      std::nullopt};

  for (double m : out.probes) {
    bool ok = true;
    for (const auto& p : family) {
      try {
        ok = ok && std::isfinite(p.q(Point{m}));
      } catch (const DomainError&) {
        ok = false;
      }
    }
    out.finite.push_back(ok);
  }
  std::size_t runs = 0;
  for (std::size_t i = 0; i < out.finite.size(); ++i) {
    if (out.finite[i] && (i == 0 || !out.finite[i - 1])) ++runs;
    if (out.finite[i]) {
      if (!out.hull) out.hull = Interval{out.probes[i], out.probes[i]};
      out.hull->hi = out.probes[i];
    }
  }
  out.contiguous = runs <= 1;
  return out;
}

}  // namespace gsconvex
