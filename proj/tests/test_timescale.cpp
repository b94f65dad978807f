#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "lvts/error.hpp"
#include "lvts/timescale.hpp"
#include "support.hpp"

using namespace lvts;
using lvts::testing::Rng;

namespace {

TimeScale interval_and_point() { return TimeScale::hybrid({ClosedInterval{0.0, 1.0}, IsolatedPoint{2.0}}); }

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an lvts::Error");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("jump operators on the three kinds") {
  const auto z = TimeScale::integers();
  CHECK(z.sigma(3.0) == 4.0);
  CHECK(z.rho(3.0) == 2.0);
  CHECK(z.graininess(3.0) == 1.0);

  const auto r = TimeScale::reals();
  CHECK(r.sigma(7.25) == 7.25);
  CHECK(r.rho(7.25) == 7.25);
  CHECK(r.graininess(-3.0) == 0.0);

  const auto h = interval_and_point();
  CHECK(h.sigma(1.0) == 2.0);
  CHECK(h.rho(2.0) == 1.0);
  CHECK(h.graininess(1.0) == 1.0);
  CHECK(h.graininess(0.5) == 0.0);
  CHECK(h.sigma(0.5) == 0.5);
  CHECK(h.rho(0.0) == 0.0);   // inf T
  CHECK(h.sigma(2.0) == 2.0);  // sup T
  CHECK(h.graininess(2.0) == 0.0);
}

TEST_CASE("points outside T are rejected") {
  const auto z = TimeScale::integers();
  CHECK(kind_of([&] { (void)z.sigma(0.5); }) == ErrorKind::NotInTimeScale);
  CHECK(kind_of([&] { (void)z.graininess(0.5); }) == ErrorKind::NotInTimeScale);
  const auto h = interval_and_point();
  CHECK(kind_of([&] { (void)h.rho(1.5); }) == ErrorKind::NotInTimeScale);
  CHECK(kind_of([&] { (void)h.snap(3.0); }) == ErrorKind::NotInTimeScale);
}

TEST_CASE("membership tolerance") {
  const auto z = TimeScale::integers();
  CHECK(z.contains(3.0 + 1e-12));
  CHECK_FALSE(z.contains(3.0 + 1e-6));
  CHECK(z.snap(3.0 + 1e-12) == 3.0);
  CHECK(z.sigma(3.0 - 1e-12) == 4.0);
  CHECK(membership_tolerance(0.5) == doctest::Approx(1e-9));
  CHECK(membership_tolerance(-2000.0) == doctest::Approx(2e-6));
}

TEST_CASE("grid anchor and step") {
  const auto g = TimeScale::uniform_grid(0.25, 0.1);
  CHECK(g.contains(0.35));
  CHECK_FALSE(g.contains(0.3));
  CHECK(g.sigma(0.35) == doctest::Approx(0.6));
  CHECK(g.rho(0.1) == doctest::Approx(-0.15));
  CHECK(g.is_discrete());
  CHECK(kind_of([] { (void)TimeScale::uniform_grid(0.0); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { (void)TimeScale::uniform_grid(-1.0); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("hybrid construction is validated") {
  CHECK(kind_of([] { (void)TimeScale::hybrid({}); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { (void)TimeScale::hybrid({ClosedInterval{1.0, 1.0}}); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { (void)TimeScale::hybrid({ClosedInterval{0.0, 2.0}, IsolatedPoint{1.0}}); }) ==
        ErrorKind::InvalidArgument);
  CHECK(kind_of([] { (void)TimeScale::hybrid({IsolatedPoint{2.0}, IsolatedPoint{1.0}}); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { (void)TimeScale::hybrid({ClosedInterval{0.0, 1.0}}, 1.0); }) == ErrorKind::InvalidArgument);
  CHECK(TimeScale::hybrid({IsolatedPoint{0.0}, IsolatedPoint{1.0}}).is_discrete());
  CHECK_FALSE(interval_and_point().is_discrete());
}

TEST_CASE("periodic hybrid: union of [2k, 2k+1]") {
  const auto p = TimeScale::hybrid({ClosedInterval{0.0, 1.0}}, 2.0);
  CHECK(p.contains(-3.5));
  CHECK_FALSE(p.contains(-2.5));
  CHECK(p.sigma(1.0) == 2.0);
  CHECK(p.sigma(-1.0) == 0.0);
  CHECK(p.rho(4.0) == 3.0);
  CHECK(p.graininess(7.0) == 1.0);
  CHECK(p.graininess(6.5) == 0.0);
  CHECK(p.graininess_sup() == 1.0);
  const auto gap = p.gap_around(5.2);
  REQUIRE(gap);
  CHECK(gap->first == 5.0);
  CHECK(gap->second == 6.0);
}

TEST_CASE("graininess_sup") {
  CHECK(TimeScale::reals().graininess_sup(0.0, 10.0) == 0.0);
  CHECK(TimeScale::integers().graininess_sup(0.0, 10.0) == 1.0);
  const auto h = TimeScale::hybrid({ClosedInterval{0.0, 1.0}, IsolatedPoint{2.0}, ClosedInterval{5.0, 6.0}});
  CHECK(h.graininess_sup(0.0, 6.0) == 3.0);
  CHECK(h.graininess_sup() == 3.0);
  CHECK(h.graininess_sup(0.0, 1.5) == 1.0);
  CHECK(kind_of([&] { (void)h.graininess_sup(2.5, 4.5); }) == ErrorKind::EmptyWindow);
}

TEST_CASE("gap_around and nearest") {
  const auto z = TimeScale::integers();
  const auto g = z.gap_around(2.3);
  REQUIRE(g);
  CHECK(g->first == 2.0);
  CHECK(g->second == 3.0);
  CHECK_FALSE(z.gap_around(2.0));
  CHECK(*z.nearest(2.7) == 3.0);
  const auto h = interval_and_point();
  CHECK(*h.nearest(1.4) == 1.0);
  CHECK(*h.nearest(1.6) == 2.0);
  CHECK_FALSE(h.gap_around(2.5));  // beyond sup T
  CHECK_FALSE(TimeScale::reals().gap_around(0.3));
}

TEST_CASE("pieces are unclipped components in order") {
  const auto h = TimeScale::hybrid({ClosedInterval{0.0, 1.0}, IsolatedPoint{2.0}}, 3.0);
  const auto ps = h.pieces(0.5, 5.5);
  REQUIRE(ps.size() == 4);
  CHECK(ps[0].lo == 0.0);
  CHECK(ps[0].hi == 1.0);
  CHECK(ps[1].is_point());
  CHECK(ps[2].lo == 3.0);
  CHECK(ps[2].hi == 4.0);
  CHECK(ps[3].lo == 5.0);
}

TEST_CASE("cylinder") {
  CHECK(cylinder(0.0, -0.3) == -0.3);
  CHECK(cylinder(1.0, 1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(cylinder(0.5, 2.0) == doctest::Approx(std::log(2.0) / 0.5).epsilon(1e-15));
  CHECK(cylinder(1e-13, 5.0) == 5.0);
  CHECK(std::abs(cylinder(1e-8, 0.7) - 0.7) < 1e-8);
  CHECK(kind_of([] { (void)cylinder(1.0, -1.0); }) == ErrorKind::NonRegressive);
  CHECK(kind_of([] { (void)cylinder(2.0, -0.9); }) == ErrorKind::NonRegressive);
  CHECK(kind_of([] { (void)cylinder(-1.0, 0.0); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("circle operations") {
  CHECK(circle_minus(0.7, 0.0) == -0.7);
  CHECK(circle_plus(0.5, 0.5, 1.0) == 1.25);
  CHECK(circle_minus(0.5, 1.0) == doctest::Approx(-1.0 / 3.0));
  CHECK(circle_plus(0.3, circle_minus(0.3, 0.8), 0.8) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(kind_of([] { (void)circle_minus(-1.0, 1.0); }) == ErrorKind::NonRegressive);
  CHECK(kind_of([] { (void)circle_plus(-0.5, 0.1, 2.0); }) == ErrorKind::NonRegressive);
}

TEST_CASE("regressivity over a window") {
  const auto z = TimeScale::integers();
  const ScalarFn p = [](double t) { return t == 3.0 ? -1.0 : 0.2; };
  CHECK_FALSE(is_regressive(z, p, 0.0, 5.0));
  CHECK(is_regressive(z, p, 4.0, 8.0));
  const ScalarFn q = [](double t) { return t == 2.0 ? -1.5 : 0.2; };
  CHECK(is_regressive(z, q, 0.0, 5.0));
  CHECK_FALSE(is_positively_regressive(z, q, 0.0, 5.0));
  CHECK(is_positively_regressive(TimeScale::reals(), [](double) { return -50.0; }, 0.0, 5.0));
}

TEST_CASE("delta integral examples") {
  const ScalarFn one = [](double) { return 1.0; };
  CHECK(delta_integral(TimeScale::integers(), one, 0.0, 5.0) == 5.0);
  CHECK(delta_integral(TimeScale::reals(), [](double t) { return t; }, 0.0, 2.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(delta_integral(interval_and_point(), one, 0.0, 2.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(delta_integral(TimeScale::integers(), one, 5.0, 0.0) == -5.0);
  CHECK(delta_integral(TimeScale::reals(), one, 3.0, 3.0) == 0.0);
  CHECK(kind_of([] { (void)delta_integral(TimeScale::integers(), [](double) { return 1.0; }, 0.5, 3.0); }) ==
        ErrorKind::NotInTimeScale);
}

TEST_CASE("delta integral on a grid is h times the left sum") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const double h = lvts::testing::uniform(rng, 0.05, 1.0);
    const double anchor = lvts::testing::uniform(rng, -1.0, 1.0);
    const auto g = TimeScale::uniform_grid(h, anchor);
    const ScalarFn f = [](double t) { return std::cos(1.3 * t) + 0.1 * t * t; };
    const int k0 = std::uniform_int_distribution<int>(-20, 0)(rng);
    const int k1 = std::uniform_int_distribution<int>(1, 40)(rng);
    double sum = 0.0;
    for (int k = k0; k < k1; ++k) sum += f(anchor + k * h);
    CHECK(delta_integral(g, f, anchor + k0 * h, anchor + k1 * h) == doctest::Approx(h * sum).epsilon(1e-12));
  }
}

TEST_CASE("delta integral on the reals matches adaptive quadrature") {
  const auto r = TimeScale::reals();
  const ScalarFn f = [](double t) { return std::exp(-0.3 * t) * std::sin(2.0 * t) + 1.0; };
  for (double b : {0.5, 1.7, 4.0, 9.3}) {
    const double oracle = lvts::testing::adaptive_simpson(f, 0.0, b, 1e-13);
    CHECK(std::abs(delta_integral(r, f, 0.0, b) - oracle) < 1e-8);
  }
}

TEST_CASE("delta integral is additive over splits") {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto ts = lvts::testing::random_time_scale(rng);
    const ScalarFn f = [](double t) { return 1.0 + 0.5 * std::sin(0.7 * t); };
    double a = lvts::testing::random_point(ts, rng, -4.0, 4.0);
    double b = lvts::testing::random_point(ts, rng, -4.0, 4.0);
    double m = lvts::testing::random_point(ts, rng, -4.0, 4.0);
    const double whole = delta_integral(ts, f, a, b);
    const double split = delta_integral(ts, f, a, m) + delta_integral(ts, f, m, b);
    CHECK(std::abs(whole - split) < 1e-9);
  }
}

TEST_CASE("generalized exponential examples") {
  const auto z = TimeScale::integers();
  CHECK(gexp(z, [](double) { return -0.5; }, 2.0, 0.0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(gexp(TimeScale::reals(), [](double) { return 1.0; }, 1.0, 0.0) ==
        doctest::Approx(std::numbers::e).epsilon(1e-12));
  CHECK(gexp(z, [](double t) { return 0.1 * t; }, 3.0, 0.0) == doctest::Approx(1.32).epsilon(1e-14));
  CHECK(gexp(z, [](double) { return -0.5; }, 0.0, 2.0) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(kind_of([&] { (void)gexp(z, [](double) { return -1.5; }, 3.0, 0.0); }) == ErrorKind::NonRegressive);
  CHECK(kind_of([&] { (void)gexp(z, [](double) { return 0.0; }, 0.5, 0.0); }) == ErrorKind::NotInTimeScale);
}

TEST_CASE("gexp on the integers equals the brute-force product") {
  Rng rng(3);
  const auto z = TimeScale::integers();
  for (int trial = 0; trial < 100; ++trial) {
    const double c = lvts::testing::uniform(rng, -0.5, 0.5);
    const double w = lvts::testing::uniform(rng, 0.1, 2.0);
    const ScalarFn p = [=](double t) { return c + 0.3 * std::sin(w * t); };
    const int s = std::uniform_int_distribution<int>(-10, 10)(rng);
    const int t = s + std::uniform_int_distribution<int>(0, 30)(rng);
    double prod = 1.0;
    for (int k = s; k < t; ++k) prod *= 1.0 + p(k);
    CHECK(gexp(z, p, t, s) == doctest::Approx(prod).epsilon(1e-12));
  }
}

TEST_CASE("gexp on a hybrid scale: dense factor times jump factors") {
  // [0,1] ∪ {2}: e_p(2, 0) = exp(int_0^1 p) (1 + 1 * p(1)).
  const auto h = interval_and_point();
  const ScalarFn p = [](double t) { return 0.2 + 0.1 * t; };
  const double got = gexp(h, p, 2.0, 0.0);
  INFO("rel err " << (got / (std::exp(0.25) * 1.3) - 1.0));
  CHECK(got == doctest::Approx(std::exp(0.25) * 1.3).epsilon(1e-11));
}

TEST_CASE("jump invariants: sigma >= t, rho <= t, mu >= 0") {
  Rng rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const auto ts = lvts::testing::random_time_scale(rng);
    const double t = lvts::testing::random_point(ts, rng, -10.0, 10.0);
    CHECK(ts.sigma(t) >= t);
    CHECK(ts.rho(t) <= t);
    CHECK(ts.graininess(t) >= 0.0);
    CHECK(ts.graininess(t) <= ts.graininess_sup() + 1e-12);
  }
}

TEST_CASE("exponential identities on random scales") {
  Rng rng(23);
  const QuadratureOptions quad{256.0};
  for (int trial = 0; trial < 60; ++trial) {
    const auto ts = lvts::testing::random_time_scale(rng);
    const auto p = lvts::testing::random_regressive(rng);
    const auto q = lvts::testing::random_regressive(rng);
    const double r = lvts::testing::random_point(ts, rng, -5.0, 5.0);
    const double s = lvts::testing::random_point(ts, rng, -5.0, 5.0);
    const double t = lvts::testing::random_point(ts, rng, -5.0, 5.0);
    const auto ok = lvts::testing::exp_identities(ts, p, q, r, s, t, quad, 1e-9);
    for (std::size_t k = 0; k < ok.size(); ++k) {
      INFO("identity " << k << " trial " << trial);
      CHECK(ok[k]);
    }
  }
}

TEST_CASE("positively regressive exponentials stay positive") {
  Rng rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    const auto ts = lvts::testing::random_time_scale(rng);
    const auto p = lvts::testing::random_regressive(rng);
    const double t0 = lvts::testing::random_point(ts, rng, -5.0, 5.0);
    const double t = lvts::testing::random_point(ts, rng, -5.0, 5.0);
    CHECK(gexp(ts, p, t, t0) > 0.0);
  }
}

TEST_CASE("delta derivative") {
  const auto z = TimeScale::integers();
  const ScalarFn sq = [](double t) { return t * t; };
  CHECK(delta_derivative(z, sq, 3.0) == 7.0);  // t + sigma(t)
  CHECK(delta_derivative(TimeScale::reals(), sq, 3.0) == doctest::Approx(6.0).epsilon(1e-8));
  const auto h = interval_and_point();
  CHECK(delta_derivative(h, sq, 1.0) == 3.0);
  CHECK(delta_derivative(h, sq, 0.0) == doctest::Approx(0.0).epsilon(1e-5));
}
