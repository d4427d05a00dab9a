#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gsconvex/core.hpp"
#include "support.hpp"

using namespace gsconvex;

TEST_SUITE("core") {
  TEST_CASE("weights at the endpoints and the midpoint") {
    const WeightPair w0 = weights(MixParam(0.0), SParam(1.0));
    CHECK(w0.w1 == 0.0);
    CHECK(w0.w2 == doctest::Approx(std::numbers::e - 1.0).epsilon(1e-15));

    const WeightPair w1 = weights(MixParam(1.0), SParam(1.0));
    CHECK(w1.w1 == doctest::Approx(1.718281828).epsilon(1e-9));
    CHECK(w1.w2 == 0.0);

    const WeightPair half = weights(MixParam(0.5), SParam(0.5));
    CHECK(half.w1 == doctest::Approx(0.805432350169850).epsilon(1e-13));
    CHECK(half.w2 == half.w1);
  }

  TEST_CASE("weights at a = 0 is the limit value for every s") {
    for (double s : {0.05, 0.3, 1.0}) CHECK(weights(MixParam(0.0), SParam(s)).w1 == 0.0);
  }

  TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(SParam(0.0), std::invalid_argument);
    CHECK_THROWS_AS(SParam(1.5), std::invalid_argument);
    CHECK_THROWS_AS(SParam(std::nan("")), std::invalid_argument);
    CHECK_THROWS_AS(MixParam(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(MixParam(1.0000001), std::invalid_argument);
    CHECK_NOTHROW(SParam(1.0));
    CHECK_NOTHROW(MixParam(0.0));
  }

  TEST_CASE("lemma margins worked values") {
    const LemmaMargins m0 = lemma_margins(MixParam(0.0), SParam(1.0));
    CHECK(m0.d1 == 0.0);
    CHECK(m0.d2 == doctest::Approx(0.718281828459045).epsilon(1e-13));
    const LemmaMargins m1 = lemma_margins(MixParam(1.0), SParam(1.0));
    CHECK(m1.d1 == doctest::Approx(0.718281828459045).epsilon(1e-13));
    CHECK(m1.d2 == 0.0);
    const LemmaMargins mh = lemma_margins(MixParam(0.5), SParam(0.5));
    CHECK(mh.d1 == doctest::Approx(0.305432350169850).epsilon(1e-12));
    CHECK(mh.d2 == doctest::Approx(0.305432350169850).epsilon(1e-12));
  }

  TEST_CASE("lemma margins are non-negative on the 101 x 20 grid") {
    for (int i = 0; i <= 100; ++i) {
      for (int j = 1; j <= 20; ++j) {
        const LemmaMargins m = lemma_margins(MixParam(i / 100.0), SParam(j * 0.05 > 1.0 ? 1.0 : j * 0.05));
        REQUIRE(m.d1 >= -1e-12);
        REQUIRE(m.d2 >= -1e-12);
      }
    }
  }

  TEST_CASE("weights are symmetric under a <-> 1 - a") {
    // exact whenever 1 - (1 - a) == a, i.e. a in [0.5, 1] or dyadic a
    test::Rng rng(3);
    for (int k = 0; k < 500; ++k) {
      const double a = rng.uniform(0.5, 1.0);
      const double s = rng.uniform(0.01, 1.0);
      const WeightPair w = weights(MixParam(a), SParam(s));
      const WeightPair v = weights(MixParam(1.0 - a), SParam(s));
      REQUIRE(w.w1 == v.w2);
      REQUIRE(w.w2 == v.w1);
    }
    for (int k = 0; k <= 64; ++k) {
      const double a = k / 64.0;
      const WeightPair w = weights(MixParam(a), SParam(0.37));
      const WeightPair v = weights(MixParam(1.0 - a), SParam(0.37));
      REQUIRE(w.w1 == v.w2);
      REQUIRE(w.w2 == v.w1);
    }
  }

  TEST_CASE("box domain") {
    const BoxDomain box({{0.0, 1.0}, {-2.0, 2.0}});
    CHECK(box.contains({0.5, 0.0}));
    CHECK_FALSE(box.contains({1.5, 0.0}));
    CHECK_FALSE(box.contains({0.5}));
    CHECK(box.clamp({2.0, -3.0}) == Point{1.0, -2.0});
    CHECK(box.center() == Point{0.5, 0.0});
    CHECK_THROWS_AS(BoxDomain({{1.0, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(BoxDomain(std::vector<Interval>{}), std::invalid_argument);
  }

  TEST_CASE("function spec and modmap construction") {
    CHECK_THROWS_AS(FunctionSpec(Expr::parse("u1", 1, VariableSet::ModMap), BoxDomain({{0, 1}})),
                    std::invalid_argument);
    CHECK_THROWS_AS(FunctionSpec(Expr::parse("x1", 1, VariableSet::Function), BoxDomain({{0, 1}, {0, 1}})),
                    std::invalid_argument);
    const ModMap g = ModMap::parse("u1 * v1 + s", 1);
    CHECK(g({2.0}, {3.0}, 0.5) == 6.5);
    CHECK(ModMap::constant(-3.0, 2)({0, 0}, {1, 1}, 1.0) == -3.0);
  }

  TEST_CASE("linspace and grid points") {
    const auto a = SampleGrid::linspace(0.0, 1.0, 21);
    CHECK(a.size() == 21);
    CHECK(a.front() == 0.0);
    CHECK(a.back() == 1.0);
    CHECK(a[10] == 0.5);
    CHECK(SampleGrid::linspace(2.0, 4.0, 1) == std::vector<double>{3.0});

    const auto pts = grid_points(BoxDomain({{0, 1}, {0, 2}}), 3);
    REQUIRE(pts.size() == 9);
    CHECK(pts[0] == Point{0, 0});
    CHECK(pts[1] == Point{0, 1});
    CHECK(pts[8] == Point{1, 2});
    for (std::size_t i = 1; i < pts.size(); ++i) CHECK(compare_points(pts[i - 1], pts[i]) < 0);
  }

  TEST_CASE("sample grid validation") {
    SampleGrid g = test::axes_grid(5);
    CHECK_NOTHROW(g.validate());
    g.a_grid = {0.25, 0.5, 1.0};
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
    CHECK_NOTHROW(g.validate(false));
    g = test::axes_grid(5, {0.0});
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
    g = test::axes_grid(5, {});
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  }

  TEST_CASE("refinement samples are seeded and stay in the box") {
    SampleGrid g = test::axes_grid(3);
    g.refine = 50;
    g.seed = 42;
    const BoxDomain box({{-1, 1}, {2, 3}});
    const auto r1 = refinement_samples(g, box);
    const auto r2 = refinement_samples(g, box);
    REQUIRE(r1.size() == 50);
    for (std::size_t i = 0; i < r1.size(); ++i) {
      CHECK(r1[i].m1 == r2[i].m1);
      CHECK(r1[i].a == r2[i].a);
      CHECK(box.contains(r1[i].m1));
      CHECK(box.contains(r1[i].m2));
      CHECK(r1[i].a >= 0.0);
      CHECK(r1[i].a < 1.0);
    }
    g.seed = 43;
    CHECK(refinement_samples(g, box)[0].m1 != r1[0].m1);
  }
}
