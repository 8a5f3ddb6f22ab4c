#include <doctest.h>

#include <cmath>

#include "contrib/reward.hpp"
#include "contrib/rng.hpp"
#include "contrib/scalar_fn.hpp"

using namespace contrib;

TEST_CASE("scalar fn evaluation and one-sided derivatives") {
  ScalarFn lin = ScalarFn::linear(5);
  CHECK(lin(0) == 0);
  CHECK(lin(2) == 10);
  CHECK(lin.right_deriv(0.7) == 5);
  CHECK(lin.is_linear());

  ScalarFn sq = ScalarFn::power(2, 2);
  CHECK(sq(3) == doctest::Approx(18));
  CHECK(sq.right_deriv(3) == doctest::Approx(12));
  CHECK(sq.right_deriv(0) == 0);
  CHECK(sq.strictly_convex());

  ScalarFn rt = ScalarFn::power(1, 0.5);
  CHECK(rt(4) == doctest::Approx(2));
  CHECK(rt.right_deriv(0) == kInf);
  CHECK(rt.left_deriv(4) == doctest::Approx(0.25));
  CHECK(rt.strictly_concave());

  ScalarFn pwl = ScalarFn::piecewise_linear({{0, 0}, {0.5, 1.5}, {1, 2}});
  CHECK(pwl(0.25) == doctest::Approx(0.75));
  CHECK(pwl(0.75) == doctest::Approx(1.75));
  CHECK(pwl(2) == doctest::Approx(3.0));  // last slope extends
  CHECK(pwl.left_deriv(0.5) == doctest::Approx(3));
  CHECK(pwl.right_deriv(0.5) == doctest::Approx(1));
  CHECK(pwl.concave());
  CHECK(pwl.breakpoints() == std::vector<double>{0.5});
}

TEST_CASE("capped power is continuous at the cap") {
  double cap = 7;
  ScalarFn f = ScalarFn::power_capped(10 * std::pow(cap, 1.5), 0.5, cap);
  CHECK(f(cap) == doctest::Approx(10 * cap * cap));
  CHECK(f(cap + 3) == doctest::Approx(10 * cap * cap));
  CHECK(f.right_deriv(cap) == 0);
  CHECK(f.left_deriv(cap) > 0);
  CHECK(f.concave());
}

TEST_CASE("scalar fn rejects malformed input") {
  CHECK_THROWS_AS(ScalarFn::linear(0), ParseError);
  CHECK_THROWS_AS(ScalarFn::piecewise_linear({{0, 0}, {1, 2}, {0.5, 3}}), ParseError);
  CHECK_THROWS_AS(ScalarFn::piecewise_linear({{0.5, 0}, {1, 1}}), ParseError);
  CHECK_THROWS_AS(ScalarFn::piecewise_linear({{0, 0}, {0.5, 1}, {1, 1.2}, {2, 5}}), ParseError);
}

TEST_CASE("nondecreasing on sample grids") {
  Rng rng(11);
  std::vector<ScalarFn> fns{ScalarFn::linear(2), ScalarFn::power(3, 1.7), ScalarFn::power(2, 0.4),
                            ScalarFn::piecewise_linear({{0, 0}, {0.3, 2}, {1, 3}})};
  for (const auto& f : fns) {
    double prev = 0;
    for (int i = 1; i <= 64; ++i) {
      double x = i / 16.0;
      CHECK(f(x) >= prev - 1e-12);
      prev = f(x);
    }
    CHECK(f(0) == 0);
  }
}

TEST_CASE("reward symmetry and monotonicity") {
  Rng rng(42);
  std::vector<RewardSpec> rewards{
      RewardSpec::weighted_sum(3),
      RewardSpec::weighted_product(1.5),
      RewardSpec::poly_compose(SymPoly({{1, 1, 1}, {1, 2, 0.5}, {2, 1, 0.5}}),
                               ScalarFn::power(1, 2)),
      RewardSpec::min_effort(ScalarFn::piecewise_linear({{0, 0}, {0.5, 1.5}, {1, 2}})),
      RewardSpec::max_effort(ScalarFn::power(2, 2))};
  for (const auto& f : rewards) {
    for (int i = 0; i < 200; ++i) {
      double x = rng.uniform(0, 3), y = rng.uniform(0, 3), d = rng.uniform(0, 1);
      CHECK(f(x, y) == f(y, x));  // exact symmetry
      CHECK(f(x + d, y) >= f(x, y) - 1e-12);
    }
  }
}

TEST_CASE("class predicates") {
  auto sum = RewardSpec::weighted_sum(2);
  auto prod = RewardSpec::weighted_product(2);
  auto poly = RewardSpec::poly_compose(SymPoly({{1, 1, 1}}), ScalarFn::power(1, 2));
  auto sqrt_xy = RewardSpec::poly_compose(SymPoly({{1, 1, 1}}), ScalarFn::power(1, 0.5));
  auto min_lin = RewardSpec::min_effort(ScalarFn::linear(2));
  auto min_cvx = RewardSpec::min_effort(ScalarFn::power(2, 2));
  auto min_ccv = RewardSpec::min_effort(ScalarFn::power(2, 0.5));
  auto max_cvx = RewardSpec::max_effort(ScalarFn::power(1, 2));

  CHECK(sum.in_class_c());
  CHECK_FALSE(sum.in_class_c0());
  CHECK(sum.coordinate_concave());  // linear in each coordinate
  CHECK(prod.in_class_c0());
  CHECK_FALSE(prod.in_class_c_prime());
  CHECK(poly.in_class_c0());
  CHECK(poly.in_class_c_prime());
  CHECK_FALSE(sqrt_xy.in_class_c());
  CHECK(sqrt_xy.coordinate_concave());
  CHECK_FALSE(min_lin.in_class_c());
  CHECK(min_lin.coordinate_concave());
  CHECK_FALSE(min_cvx.coordinate_concave());
  CHECK(min_ccv.coordinate_concave());
  CHECK(min_ccv.strictly_coordinate_concave());
  CHECK(max_cvx.in_class_c());
  CHECK_FALSE(max_cvx.in_class_c0());

  // C0 soundness: f(x, 0) vanishes.
  Rng rng(7);
  for (const auto& f : {prod, poly}) {
    for (int i = 0; i < 100; ++i) CHECK(f(rng.uniform(0, 5), 0) <= 1e-12);
  }
}

TEST_CASE("coordinate convexity via sampled second differences") {
  Rng rng(3);
  std::vector<RewardSpec> in_c{RewardSpec::weighted_sum(1), RewardSpec::weighted_product(2),
                               RewardSpec::poly_compose(SymPoly({{1, 1, 2}}),
                                                        ScalarFn::power(1, 1.5)),
                               RewardSpec::max_effort(ScalarFn::power(1, 2))};
  for (const auto& f : in_c) {
    CHECK(f.in_class_c());
    for (int i = 0; i < 100; ++i) {
      double x = rng.uniform(0.05, 2), y = rng.uniform(0, 2), h = 0.05;
      CHECK(f(x + h, y) - 2 * f(x, y) + f(x - h, y) >= -1e-9);
    }
  }
}

TEST_CASE("polynomial symmetry is enforced") {
  CHECK_THROWS_AS(SymPoly({{1, 2, 1.0}}), ParseError);
  CHECK_NOTHROW(SymPoly({{1, 2, 1.0}, {2, 1, 1.0}}));
  CHECK_THROWS_AS(SymPoly({{0, 0, 1.0}}), ParseError);
  CHECK_THROWS_AS(SymPoly({{1, 1, -2.0}}), ParseError);
}

TEST_CASE("one-sided partials match finite differences") {
  Rng rng(5);
  std::vector<RewardSpec> rewards{
      RewardSpec::weighted_sum(2), RewardSpec::weighted_product(3),
      RewardSpec::poly_compose(SymPoly({{1, 1, 1}}), ScalarFn::power(1, 2)),
      RewardSpec::min_effort(ScalarFn::linear(4)),
      RewardSpec::max_effort(ScalarFn::power(1, 2))};
  for (const auto& f : rewards) {
    for (int i = 0; i < 50; ++i) {
      double x = rng.uniform(0.1, 2), y = rng.uniform(0.1, 2);
      if (std::fabs(x - y) < 0.02) continue;  // keep clear of the kink
      double h = 1e-6;
      double fd = (f(x + h, y) - f(x, y)) / h;
      CHECK(f.dx_right(x, y) == doctest::Approx(fd).epsilon(1e-3));
    }
  }
}
