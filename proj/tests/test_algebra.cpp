#include <doctest.h>

#include <cmath>

#include "gsconvex/algebra.hpp"
#include "gsconvex/cert.hpp"
#include "support.hpp"

using namespace gsconvex;
using test::axes_grid;
using test::fn;
using test::zero_g;

namespace {

GsPair pair(const char* q, const char* g, double lo = 0, double hi = 1) {
  return {fn(q, lo, hi), ModMap::parse(g, 1)};
}

double res(const GsPair& p, double s, double m1, double m2, double a) {
  return residual(p.q, p.g, SParam(s), {m1}, {m2}, MixParam(a));
}

}  // namespace

TEST_SUITE("algebra") {
  TEST_CASE("combine_sum worked example") {
    const GsPair sq = pair("x1^2", "0"), lin = pair("x1", "0");
    CHECK(res(sq, 1, 0, 1, 0.5) == doctest::Approx(-0.398721270700128).epsilon(1e-13));
    CHECK(res(lin, 1, 0, 1, 0.5) == doctest::Approx(-0.148721270700128).epsilon(1e-13));
    CHECK(res(combine_sum(sq, lin), 1, 0, 1, 0.5) == doctest::Approx(-0.547442541400256).epsilon(1e-13));

    const GsPair zero = pair("0", "0");
    CHECK(res(combine_sum(sq, zero), 1, 0, 1, 0.5) == res(sq, 1, 0, 1, 0.5));
    CHECK_THROWS_AS(combine_sum(sq, pair("x1", "0", 0, 2)), std::invalid_argument);
  }

  TEST_CASE("scale and post-composition") {
    const GsPair sq = pair("x1^2", "0");
    CHECK(res(scale(sq, 0.0), 1, 0, 1, 0.5) == 0.0);
    CHECK(scale(sq, 0.0).q({0.7}) == 0.0);
    CHECK(res(scale(sq, 2.0), 1, 0, 1, 0.5) == doctest::Approx(-0.797442541400256).epsilon(1e-13));
    CHECK_THROWS_AS(scale(sq, -1.0), std::invalid_argument);

    CHECK(res(post_compose_linear(sq, 1.0), 1, 0, 1, 0.5) == res(sq, 1, 0, 1, 0.5));
    CHECK(res(post_compose_linear(sq, 0.5), 1, 0, 1, 0.5) == doctest::Approx(-0.199360635350064).epsilon(1e-13));
    CHECK_THROWS_AS(post_compose_linear(sq, -2.0), std::invalid_argument);
  }

  TEST_CASE("linear_combination") {
    const GsPair sq = pair("x1^2", "0"), lin = pair("x1", "0");
    const std::vector<GsPair> both{sq, lin};
    const double zeros[] = {0.0, 0.0}, ones[] = {1.0, 1.0};
    CHECK(res(linear_combination(both, zeros), 1, 0, 1, 0.5) == 0.0);
    CHECK(res(linear_combination(both, ones), 1, 0, 1, 0.5) == res(combine_sum(sq, lin), 1, 0, 1, 0.5));
    const std::vector<GsPair> single{sq};
    const double three[] = {3.0};
    CHECK(res(linear_combination(single, three), 1, 0, 1, 0.5) == res(scale(sq, 3.0), 1, 0, 1, 0.5));
    const double bad[] = {1.0, -0.5};
    CHECK_THROWS_AS(linear_combination(both, bad), std::invalid_argument);
    CHECK_THROWS_AS(linear_combination(both, three), std::invalid_argument);
  }

  TEST_CASE("residual additivity and homogeneity") {
    const GsPair p1 = pair("exp(x1) - x1", "u1 - v1 + s", -1, 1);
    const GsPair p2 = pair("x1^4 - 0.3*x1", "0.5*u1*v1", -1, 1);
    const GsPair sum = combine_sum(p1, p2);
    test::Rng rng(21);
    for (int k = 0; k < 2000; ++k) {
      const double s = rng.uniform(0.05, 1), a = rng.uniform(0, 1);
      const double m1 = rng.uniform(-1, 1), m2 = rng.uniform(-1, 1), beta = rng.uniform(0, 10);
      REQUIRE(std::fabs(res(sum, s, m1, m2, a) - (res(p1, s, m1, m2, a) + res(p2, s, m1, m2, a))) <= 1e-12);
      REQUIRE(std::fabs(res(scale(p1, beta), s, m1, m2, a) - beta * res(p1, s, m1, m2, a)) <= 1e-12);
    }
  }

  TEST_CASE("closure preserves passing verdicts") {
    const GsPair p1 = pair("x1^2", "0", 0, 2), p2 = pair("exp(x1)", "0.1", 0, 2), p3 = pair("abs(x1 - 1)", "0", 0, 2);
    const SampleGrid grid = axes_grid(11, {0.5, 1.0});
    for (const GsPair* p : {&p1, &p2, &p3}) REQUIRE(check_gs_convex(p->q, p->g, grid).verdict == Verdict::Pass);
    CHECK(check_gs_convex(combine_sum(p1, p2).q, combine_sum(p1, p2).g, grid).verdict == Verdict::Pass);
    const GsPair sc = scale(p3, 4.5);
    CHECK(check_gs_convex(sc.q, sc.g, grid).verdict == Verdict::Pass);
    const std::vector<GsPair> all{p1, p2, p3};
    const double betas[] = {0.5, 2.0, 3.0};
    const GsPair lc = linear_combination(all, betas);
    CHECK(check_gs_convex(lc.q, lc.g, grid).verdict == Verdict::Pass);
    const GsPair pc = post_compose_linear(p2, 0.25);
    CHECK(check_gs_convex(pc.q, pc.g, grid).verdict == Verdict::Pass);
  }

  TEST_CASE("sup_family worked examples") {
    const std::vector<GsPair> fam{pair("x1", "0", 0, 2), pair("x1^2", "0", 0, 2)};
    const SupFamily sup = sup_family(fam, 0, 2, 21);
    CHECK(sup.sup.q({0.5}) == 0.5);
    CHECK(sup.sup.q({1.5}) == 2.25);
    CHECK(std::all_of(sup.finite.begin(), sup.finite.end(), [](bool b) { return b; }));
    CHECK(sup.contiguous);

    const std::vector<GsPair> pole{pair("x1^2", "0"), pair("1/x1", "0")};
    const SupFamily withpole = sup_family(pole, 0, 1, 11);
    CHECK_FALSE(withpole.finite[0]);
    CHECK(withpole.finite[1]);
    CHECK(withpole.contiguous);
    REQUIRE(withpole.hull);
    CHECK(withpole.hull->lo == doctest::Approx(0.1));
    CHECK(withpole.hull->hi == 1.0);

    const std::vector<GsPair> gap{pair("x1", "0"), pair("log(abs(x1 - 0.5))", "0")};
    CHECK_FALSE(sup_family(gap, 0, 1, 11).contiguous);

    CHECK_THROWS_AS(sup_family(std::vector<GsPair>{}, 0, 1, 5), std::invalid_argument);
  }

  TEST_CASE("sup of passing members passes on K") {
    const std::vector<GsPair> fam{pair("x1^2", "0.05"), pair("1/x1", "0"), pair("x1 + 0.2", "0.1")};
    const SupFamily sup = sup_family(fam, 0, 1, 11);
    REQUIRE(sup.hull);
    const BoxDomain k({*sup.hull});
    for (const auto& member : fam) {
      const FunctionSpec restricted(member.q.body, k);
      REQUIRE(check_gs_convex(restricted, member.g, axes_grid(11)).verdict == Verdict::Pass);
    }
    const FunctionSpec on_k(sup.sup.q.body, k);
    CHECK(check_gs_convex(on_k, sup.sup.g, axes_grid(11, {0.5, 1.0})).verdict == Verdict::Pass);
  }
}
