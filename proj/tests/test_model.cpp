#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "lvts/config.hpp"
#include "lvts/error.hpp"
#include "lvts/model.hpp"
#include "support.hpp"

using namespace lvts;
using lvts::testing::Rng;
using lvts::testing::uniform;

namespace {

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

MutualismSystem ex(int which) { return example_config(which).system; }

bool has_witness(const HypothesisResult& r, const std::string& name) {
  for (const auto& w : r.witnesses) {
    if (w.name == name) return true;
  }
  return false;
}

// Cheaper audit window for the many-trial properties.
AuditOptions quick() {
  AuditOptions o;
  o.window = {0.0, 50.0, 1e-2};
  o.closure_samples = 500;
  return o;
}

}  // namespace

TEST_CASE("theta") {
  CHECK(theta(ex(1)) == doctest::Approx(0.006));
  CHECK(theta(ex(2)) == doctest::Approx(0.004));
  auto s = ex(1);
  for (auto& f : s.tau) f = QuasiTrigSum(0.01);
  for (auto& f : s.delta) f = QuasiTrigSum(0.01);
  CHECK(theta(s) == 0.01);
  s.tau[0] = QuasiTrigSum(0.01, {{0.02, 0.0, 1.0}});
  CHECK(kind_of([&] { (void)theta(s); }) == ErrorKind::SignIndefinite);
}

TEST_CASE("theta dominates sampled delays") {
  for (int which : {1, 2}) {
    const auto s = ex(which);
    const double th = theta(s);
    for (int k = 0; k < 20000; ++k) {
      const double t = 0.1 * k;
      for (std::size_t i = 0; i < s.size(); ++i) {
        REQUIRE(s.tau[i](t) <= th + 1e-15);
        REQUIRE(s.delta[i](t) <= th + 1e-15);
      }
    }
  }
}

TEST_CASE("system validation") {
  auto s = ex(1);
  s.d[0][1] = 0.0;
  CHECK(kind_of([&] { s.validate(); }) == ErrorKind::InvalidArgument);
  s = ex(1);
  s.b.pop_back();
  CHECK(kind_of([&] { s.validate(); }) == ErrorKind::InvalidArgument);
  s = ex(1);
  s.a.resize(1);
  CHECK(kind_of([&] { s.validate(); }) == ErrorKind::InvalidArgument);
  s = ex(1);
  s.d[1][0] = NAN;
  CHECK(kind_of([&] { s.validate(); }) == ErrorKind::InvalidArgument);
  s = ex(1);
  s.delta[1] = QuasiTrigSum(-0.001);
  CHECK(kind_of([&] { s.validate(); }) == ErrorKind::SignIndefinite);
  CHECK_NOTHROW(ex(2).validate());
}

TEST_CASE("H1 passes on both fixtures") {
  const auto r1 = check_h1(ex(1));
  CHECK(r1.pass);
  CHECK(r1.witnesses.empty());
  const auto r2 = check_h1(ex(2));
  CHECK(r2.pass);
  bool snapped_note = false;
  for (const auto& n : r2.notes) snapped_note = snapped_note || n.find("grid snap") != std::string::npos;
  CHECK(snapped_note);
}

TEST_CASE("H1 witnesses") {
  auto s = ex(1);
  s.d[0][1] = 1.0;
  auto r = check_h1(s);
  CHECK_FALSE(r.pass);
  REQUIRE(r.witnesses.size() == 1);
  CHECK(r.witnesses[0].name == "d_12");
  CHECK(r.witnesses[0].value == 1.0);

  s = ex(1);
  s.c[0][1] = QuasiTrigSum(0.0);
  r = check_h1(s);
  CHECK_FALSE(r.pass);
  CHECK(has_witness(r, "c_12^u"));

  s = ex(1);
  s.a[1] = QuasiTrigSum(0.01, {{0.02, 0.0, 1.0}});
  r = check_h1(s);
  CHECK_FALSE(r.pass);
  CHECK(has_witness(r, "a_2^l"));

  s = ex(2);
  s.b[0] = QuasiTrigSum(0.0);
  r = check_h1(s);
  CHECK(has_witness(r, "b_1^l"));
  CHECK(r.witnesses.size() == 1);

  s = ex(1);
  s.tau[0] = QuasiTrigSum(0.001, {{0.0, 0.001, 1.0}});
  r = check_h1(s);
  CHECK(has_witness(r, "tau^-"));
}

TEST_CASE("H1 closure on a coarse grid") {
  // Delays of half a step land midway between grid points and cannot snap
  // below tolerance 0.4.
  auto s = ex(2);
  for (auto& f : s.tau) f = QuasiTrigSum(0.5);
  AuditOptions o = quick();
  o.grid_snap_tol = 0.4;
  auto r = check_h1(s, o);
  CHECK_FALSE(r.pass);
  // Integer delays land exactly.
  for (auto& f : s.tau) f = QuasiTrigSum(1.0);
  for (auto& f : s.delta) f = QuasiTrigSum(2.0);
  r = check_h1(s, o);
  CHECK(r.pass);
  bool exact = false;
  for (const auto& n : r.notes) exact = exact || n.find("sampled-pass on") != std::string::npos;
  CHECK(exact);
}

TEST_CASE("H1 flips at each witnessed boundary") {
  const double eps = 1e-9;
  for (double shift : {-eps, eps}) {
    const bool expect = shift > 0.0;
    auto s = ex(1);
    s.d[1][0] = 1.0 + shift;
    CHECK(check_h1(s, quick()).pass == expect);

    s = ex(1);
    // a_1 = c0 - 0.02 sin(...): lower bound c0 - 0.02.
    s.a[0] = QuasiTrigSum(0.02 + shift, {{-0.02, 0.0, std::sqrt(2.0)}});
    if (shift > 0.0) {
      CHECK(check_h1(s, quick()).pass);
    } else {
      CHECK_FALSE(check_h1(s, quick()).pass);
    }

    s = ex(1);
    s.b[1] = QuasiTrigSum(0.01 + shift, {{-0.01, 0.0, std::sqrt(2.0)}});
    if (shift > 0.0) {
      CHECK(check_h1(s, quick()).pass);
    } else {
      CHECK_FALSE(check_h1(s, quick()).pass);
    }

    // A delay dipping below zero is malformed rather than a witness, so the
    // lower side of this boundary is the zero infimum itself.
    s = ex(1);
    s.delta[1] = QuasiTrigSum(0.002 + std::max(shift, 0.0), {{0.002, 0.0, 1.0}});
    CHECK(check_h1(s, quick()).pass == expect);
  }
}

TEST_CASE("H1 is deterministic") {
  const auto a = check_h1(ex(2));
  const auto b = check_h1(ex(2));
  CHECK(a.pass == b.pass);
  CHECK(a.notes == b.notes);
}

TEST_CASE("H2") {
  const auto k1 = compute_constants(ex(1));
  CHECK(k1.tau_delta == doctest::Approx(0.001).epsilon(1e-9));
  CHECK(k1.delta_delta == doctest::Approx(0.002).epsilon(1e-9));
  CHECK(check_h2(ex(1)).pass);
  CHECK(check_h2(k1).pass);
  const auto k2 = compute_constants(ex(2));
  CHECK(k2.tau_delta == doctest::Approx(0.002).epsilon(1e-9));
  CHECK(k2.delta_delta == doctest::Approx(0.002).epsilon(1e-9));
  CHECK(check_h2(ex(2)).pass);

  // Sup derivative 2: 1.5 + 0.5 sin(4t), |f'| <= 2.
  auto s = ex(1);
  s.tau[0] = QuasiTrigSum(1.5, {{0.5, 0.0, 4.0}});
  auto r = check_h2(s, quick());
  CHECK_FALSE(r.pass);
  REQUIRE(r.witnesses.size() == 1);
  CHECK(r.witnesses[0].name == "tau^Delta");
  CHECK(r.witnesses[0].value == doctest::Approx(2.0).epsilon(1e-6));

  // Exactly 1 is a failure: the inequality is strict.
  s = ex(1);
  s.delta[0] = QuasiTrigSum(1.0, {{0.5, 0.0, 2.0}});
  CHECK_FALSE(check_h2(s, quick()).pass);

  s = ex(1);
  for (auto& f : s.tau) f = QuasiTrigSum(0.003);
  for (auto& f : s.delta) f = QuasiTrigSum(0.004);
  const auto k = compute_constants(s);
  CHECK(k.tau_delta == 0.0);
  CHECK(k.delta_delta == 0.0);
  CHECK(check_h2(k).pass);
}

TEST_CASE("constants") {
  const auto k = compute_constants(ex(1));
  CHECK(k.n == 2);
  CHECK(k.mu_bar == 0.0);
  CHECK(k.tau_minus == doctest::Approx(0.001));
  CHECK(k.tau_plus == doctest::Approx(0.004));
  CHECK(k.delta_minus == doctest::Approx(0.002));
  CHECK(k.delta_plus == doctest::Approx(0.006));
  CHECK(k.a[0].upper == doctest::Approx(0.72));
  CHECK(k.c[0][1].upper == doctest::Approx(0.01));
  CHECK(k.growth_upper(0) == doctest::Approx(0.73));
  CHECK(k.theta() == doctest::Approx(0.006));
  const auto k2 = compute_constants(ex(2));
  CHECK(k2.mu_bar == 1.0);
  CHECK(k2.growth_upper(0) == doctest::Approx(0.34));
}

TEST_CASE("H3 regressivity") {
  const std::vector<double> xm1{0.250, 0.396};
  CHECK(check_h3_regressivity(ex(1), xm1).pass);
  const std::vector<double> xm2{0.232, 0.242};
  const auto k2 = compute_constants(ex(2));
  CHECK(1.0 - k2.mu_bar * k2.growth_upper(0) == doctest::Approx(0.66));
  CHECK(check_h3_regressivity(k2, xm2).pass);

  // Growth sum exactly 1 on a unit grid sits on the regressivity boundary.
  SystemConstants k = k2;
  k.a[0].upper = 1.0 - k.c[0][1].upper;
  auto r = check_h3_regressivity(k, xm2);
  CHECK_FALSE(r.pass);
  REQUIRE_FALSE(r.witnesses.empty());
  CHECK(r.witnesses[0].value == doctest::Approx(0.0).epsilon(1e-12));

  // b^u e^{xM} >= 1 on a unit grid.
  k = k2;
  r = check_h3_regressivity(k, {std::log(1.0 / 0.27), 0.242});
  CHECK_FALSE(r.pass);

  // a^l exp{...} <= b^u: a^l barely above b^u with a long delay.
  k = compute_constants(ex(1));
  k.a[0].lower = k.b[0].upper * 1.0001;
  k.tau_plus = 1.0;
  CHECK_FALSE(check_h3_regressivity(k, xm1).pass);

  CHECK(kind_of([&] { (void)check_h3_regressivity(k2, {0.1}); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("H3 third condition uses the zero-graininess limit on the reals") {
  const auto k = compute_constants(ex(1));
  for (std::size_t i = 0; i < 2; ++i) {
    const double xM = 0.3;
    const double lhs = k.a[i].lower * std::exp(-k.tau_plus * k.b[i].upper * std::exp(xM));
    // Independent evaluation; check_h3 must agree on the sign.
    SystemConstants kk = k;
    kk.a[i].lower = k.b[i].upper / (lhs / k.a[i].lower) * (1.0 - 1e-9);
    CHECK_FALSE(check_h3_regressivity(kk, {xM, xM}).pass);
    kk.a[i].lower = k.b[i].upper / (lhs / k.a[i].lower) * (1.0 + 1e-9);
    CHECK(check_h3_regressivity(kk, {xM, xM}).pass);
  }
}

TEST_CASE("initial history") {
  const auto h = InitialHistory::constant(2, 0.1);
  CHECK_NOTHROW(h.validate(2));
  CHECK(kind_of([&] { h.validate(3); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { InitialHistory::constant(2, -0.1).validate(2); }) == ErrorKind::InvalidArgument);
  CHECK_NOTHROW(InitialHistory::constant(2, -0.1, 0.0, true).validate(2));
  CHECK(kind_of([] { InitialHistory::constant(2, 0.0).validate(2); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { InitialHistory::constant(2, NAN, 0.0, true).validate(2); }) == ErrorKind::InvalidArgument);

  // phi >= 0 on the window but phi(t0) = 0.
  InitialHistory tab;
  tab.phi = {HistoryComponent({{-0.01, 0.2}, {0.0, 0.0}}), HistoryComponent(0.1)};
  CHECK(kind_of([&] { tab.validate(2); }) == ErrorKind::InvalidArgument);
  tab.phi[0] = HistoryComponent({{-0.01, 0.0}, {0.0, 0.2}});
  CHECK_NOTHROW(tab.validate(2));
}

TEST_CASE("history tables interpolate and clamp") {
  const HistoryComponent h({{0.0, 1.0}, {1.0, 3.0}, {2.0, 2.0}});
  CHECK(h(-5.0) == 1.0);
  CHECK(h(0.5) == doctest::Approx(2.0));
  CHECK(h(1.5) == doctest::Approx(2.5));
  CHECK(h(9.0) == 2.0);
  CHECK(h.min_value() == 1.0);
  CHECK_FALSE(h.is_constant());
  CHECK(kind_of([] { HistoryComponent(std::vector<HistoryKnot>{}); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { HistoryComponent({{1.0, 0.0}, {1.0, 1.0}}); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("translate") {
  const auto s = ex(1);
  CHECK(translate(s, 0.0) == s);
  const auto moved = translate(s, 3.5);
  Rng rng(59);
  for (int k = 0; k < 50; ++k) {
    const double t = uniform(rng, -100.0, 100.0);
    CHECK(moved.a[1](t) == doctest::Approx(s.a[1](t + 3.5)).epsilon(1e-13));
    CHECK(moved.c[1][0](t) == doctest::Approx(s.c[1][0](t + 3.5)).epsilon(1e-13));
    CHECK(moved.tau[0](t) == doctest::Approx(s.tau[0](t + 3.5)).epsilon(1e-12));
  }
  CHECK(moved.d == s.d);
  CHECK(check_h1(moved, quick()).pass);
}

TEST_CASE("labels") {
  CHECK(species_label("a", 0) == "a_1");
  CHECK(species_label("c", 1, 0) == "c_21");
}
