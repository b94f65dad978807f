#pragma once

// Shared generators and independent oracles for the test binaries.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "lvts/timescale.hpp"

namespace lvts::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

/// Reals, a uniform grid, or a periodic interval+point pattern.
inline TimeScale random_time_scale(Rng& rng) {
  switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
    case 0:
      return TimeScale::reals();
    case 1:
      return TimeScale::uniform_grid(uniform(rng, 0.1, 1.0), uniform(rng, -1.0, 1.0));
    default: {
      const double width = uniform(rng, 0.2, 1.0);
      const double gap1 = uniform(rng, 0.1, 1.0);
      const double gap2 = uniform(rng, 0.1, 1.0);
      const double origin = uniform(rng, -1.0, 0.0);
      return TimeScale::hybrid({ClosedInterval{origin, origin + width}, IsolatedPoint{origin + width + gap1}},
                               width + gap1 + gap2);
    }
  }
}

inline double random_point(const TimeScale& ts, Rng& rng, double lo, double hi) {
  return *ts.nearest(uniform(rng, lo, hi));
}

/// alpha + beta sin(omega t + phase) with |p| <= 0.4, so 1 + mu p > 0 for
/// mu <= 2.
inline ScalarFn random_regressive(Rng& rng) {
  const double alpha = uniform(rng, -0.2, 0.2);
  const double beta = uniform(rng, -0.2, 0.2);
  const double omega = uniform(rng, 0.2, 1.5);
  const double phase = uniform(rng, 0.0, 6.283185307179586);
  return [=](double t) { return alpha + beta * std::sin(omega * t + phase); };
}

/// Adaptive Simpson, independent of the library's fixed-panel rule.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double eps, int depth = 40) {
  auto simp = [&](double x0, double x1) { return (x1 - x0) / 6.0 * (f(x0) + 4.0 * f(0.5 * (x0 + x1)) + f(x1)); };
  std::function<double(double, double, double, double, int)> rec = [&](double x0, double x1, double whole, double tol,
                                                                        int d) {
    const double m = 0.5 * (x0 + x1);
    const double l = simp(x0, m);
    const double r = simp(m, x1);
    if (d <= 0 || std::abs(l + r - whole) <= 15.0 * tol) return l + r + (l + r - whole) / 15.0;
    return rec(x0, m, l, tol / 2.0, d - 1) + rec(m, x1, r, tol / 2.0, d - 1);
  };
  return rec(a, b, simp(a, b), eps, depth);
}

/// Bisection for a sign change of g on [lo, hi].
inline double bisect(const std::function<double(double)>& g, double lo, double hi) {
  double glo = g(lo);
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if ((gm < 0.0) == (glo < 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline bool rel_close(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)}); }

/// The six exponential identities at points r, s, t of ts:
///   e_p(t,t) = 1 and e_0 = 1;  e_p(sigma(t),s) = (1 + mu p(t)) e_p(t,s);
///   e_p(t,s) = 1/e_p(s,t) = e_{-p}(s,t);  e_p(t,s) e_p(s,r) = e_p(t,r);
///   e_p e_q = e_{p (+) q};  e_p / e_q = e_{p (-) q}.
inline std::array<bool, 6> exp_identities(const TimeScale& ts, const ScalarFn& p, const ScalarFn& q, double r, double s,
                                          double t, const QuadratureOptions& quad, double rel) {
  const ScalarFn zero = [](double) { return 0.0; };
  const ScalarFn p_minus_q = circle_plus_fn(ts, p, circle_minus_fn(ts, q));
  const double ets = gexp(ts, p, t, s, quad);
  std::array<bool, 6> ok{};
  ok[0] = gexp(ts, p, t, t, quad) == 1.0 && rel_close(gexp(ts, zero, t, s, quad), 1.0, rel);
  ok[1] = rel_close(gexp(ts, p, ts.sigma(t), s, quad), (1.0 + ts.graininess(t) * p(t)) * ets, rel);
  ok[2] = rel_close(ets, 1.0 / gexp(ts, p, s, t, quad), rel) && rel_close(ets, gexp(ts, circle_minus_fn(ts, p), s, t, quad), rel);
  ok[3] = rel_close(ets * gexp(ts, p, s, r, quad), gexp(ts, p, t, r, quad), rel);
  ok[4] = rel_close(ets * gexp(ts, q, t, s, quad), gexp(ts, circle_plus_fn(ts, p, q), t, s, quad), rel);
  ok[5] = rel_close(ets / gexp(ts, q, t, s, quad), gexp(ts, p_minus_q, t, s, quad), rel);
  return ok;
}

}  // namespace lvts::testing
