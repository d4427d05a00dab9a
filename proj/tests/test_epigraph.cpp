#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gsconvex/epigraph.hpp"
#include "support.hpp"

using namespace gsconvex;
using test::axes_grid;
using test::fn;
using test::zero_g;

TEST_SUITE("epigraph") {
  TEST_CASE("epi_contains") {
    const FunctionSpec sq = fn("x1^2", 0, 1);
    CHECK(epi_contains(sq, {{0.5}, 0.3}));
    CHECK(epi_contains(sq, {{0.5}, 0.25}));
    CHECK_FALSE(epi_contains(sq, {{0.5}, 0.2}));
    CHECK(epi_contains(sq, {{0.5}, 0.25 - 1e-10}, 1e-9));
  }

  TEST_CASE("gs_combine_point") {
    const ModMap zero = zero_g();
    const EpiPoint mid = gs_combine_point({{0.0}, 0.0}, {{1.0}, 1.0}, MixParam(0.5), SParam(1), zero);
    CHECK(mid.m == Point{0.5});
    CHECK(mid.alpha == doctest::Approx(0.648721270700128).epsilon(1e-13));

    const EpiPoint right = gs_combine_point({{0.2}, 3.0}, {{0.9}, 5.0}, MixParam(1.0), SParam(0.4), zero);
    CHECK(right.m == Point{0.2});
    CHECK(right.alpha == weights(MixParam(1.0), SParam(0.4)).w1 * 3.0);

    const EpiPoint left = gs_combine_point({{0.2}, 3.0}, {{0.9}, 5.0}, MixParam(0.0), SParam(1), zero);
    CHECK(left.m == Point{0.9});
    CHECK(left.alpha == doctest::Approx((std::numbers::e - 1.0) * 5.0).epsilon(1e-14));

    const EpiPoint shifted =
        gs_combine_point({{0.0}, 0.0}, {{1.0}, 1.0}, MixParam(0.5), SParam(1), ModMap::constant(2.0, 1));
    CHECK(shifted.alpha - mid.alpha == doctest::Approx(1.0).epsilon(1e-14));
  }

  TEST_CASE("a = 1 with G = 0 reduces membership to Q(m1) <= w1 alpha1") {
    const FunctionSpec q = fn("exp(x1) - 0.5", 0, 1);
    test::Rng rng(4);
    for (int k = 0; k < 200; ++k) {
      const EpiPoint p1{{rng.uniform(0, 1)}, rng.uniform(0, 3)};
      const EpiPoint p2{{rng.uniform(0, 1)}, rng.uniform(0, 3)};
      const SParam s(rng.uniform(0.05, 1));
      const EpiPoint c = gs_combine_point(p1, p2, MixParam(1.0), s, zero_g());
      const double direct = weights(MixParam(1.0), s).w1 * p1.alpha;
      REQUIRE(std::fabs(c.alpha - direct) <= 1e-12);
      REQUIRE(epi_contains(q, c) == (q(p1.m) <= direct));
    }
  }

  TEST_CASE("epigraph theorem: passing function has no escapes") {
    const EpigraphReport r = check_epigraph_theorem(fn("x1^2", 0, 1), zero_g(), axes_grid(11));
    CHECK(r.gs_report.verdict == Verdict::Pass);
    CHECK(r.escapes == 0);
    CHECK(r.combinations == 11u * 11u * 11u * 9u);
    CHECK(r.consistent);
  }

  TEST_CASE("epigraph theorem: negative constant escapes at a = 0") {
    const EpigraphReport r = check_epigraph_theorem(fn("-1", 0, 1), zero_g(), axes_grid(11));
    CHECK(r.gs_report.verdict == Verdict::Fail);
    CHECK(r.escapes > 0);
    REQUIRE(r.worst_escape);
    CHECK(r.worst_escape->sample.a == 0.0);
    CHECK(r.reverse_confirmed);
    CHECK(r.consistent);
  }

  TEST_CASE("epigraph theorem: degenerate diagonal grid") {
    SampleGrid diag = axes_grid(11);
    diag.pairs = PairMode::Diagonal;
    const EpigraphReport r = check_epigraph_theorem(fn("x1^2 + 1", 0, 1), zero_g(), diag);
    CHECK(r.escapes == 0);
    CHECK(r.consistent);
  }

  TEST_CASE("epigraph theorem on a mixed-verdict corpus") {
    const char* bodies[] = {"x1", "exp(x1)", "x1 - 0.2", "abs(x1 - 0.5)", "0.3 - x1^2"};
    for (const char* body : bodies) {
      for (double s : {0.3, 1.0}) {
        const EpigraphReport r = check_epigraph_theorem(fn(body, 0, 1), zero_g(), axes_grid(9, {s}));
        CHECK_MESSAGE(r.consistent, body);
      }
    }
  }

  TEST_CASE("boundedness_scan") {
    const BoundednessScan sq = boundedness_scan(fn("x1^2", 0, 1), {0, 1}, 101, 1.0);
    CHECK(sq.sup_estimate == 1.0);
    CHECK(sq.inf_estimate == 0.0);
    CHECK(sq.bounded);
    CHECK(sq.g_bound == 1.0);

    const BoundednessScan ex = boundedness_scan(fn("exp(x1)", 0, 2), {0, 2}, 101, 0.0);
    CHECK(ex.sup_estimate == doctest::Approx(7.38905609893065).epsilon(1e-14));
    CHECK(ex.bounded);

    const BoundednessScan inv = boundedness_scan(fn("1/x1", 0, 1), {0, 1}, 101, 0.0);
    CHECK_FALSE(inv.bounded);
    REQUIRE(inv.witness);
    CHECK(*inv.witness == 0.0);

    CHECK_THROWS_AS(boundedness_scan(test::fn2("x1", 0, 1), {0, 1}, 11, 0.0), std::invalid_argument);
  }

  TEST_CASE("boundedness extrema are monotone under grid refinement") {
    const FunctionSpec q = fn("x1^3 - x1 + 0.2*exp(x1)", -1.5, 1.5);
    double sup_prev = -INFINITY, inf_prev = INFINITY;
    for (int k : {3, 5, 9, 17, 33, 65, 129}) {
      const BoundednessScan b = boundedness_scan(q, {-1.5, 1.5}, k, 0.0);
      CHECK(b.sup_estimate >= sup_prev);
      CHECK(b.inf_estimate <= inf_prev);
      sup_prev = b.sup_estimate;
      inf_prev = b.inf_estimate;
    }
  }
}
