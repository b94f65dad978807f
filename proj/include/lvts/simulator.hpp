#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "lvts/model.hpp"

namespace lvts {

/// Beyond this log abundance e^x is treated as blow-up.
inline constexpr double kOverflowGuard = 700.0;

struct SimOptions {
  double horizon = 200.0;
  /// RK4 step on dense stretches.
  double dense_step = 1e-3;
  /// Fraction of the local gap within which a delayed time that misses a
  /// discrete part of T is snapped to the nearest point.
  double grid_snap_tol = 0.5;
  /// Keep every k-th sample (the last one is always kept).
  std::size_t record_stride = 1;

  void validate() const;
};

/// Samples of one solution, row-major: values[k * n + i] = x_i(times[k]).
struct Trajectory {
  TimeScale ts = TimeScale::reals();
  std::size_t n = 0;
  double t0 = 0.0;
  double horizon = 0.0;
  /// Length of the history window in front of t0.
  double theta = 0.0;
  std::vector<double> times;
  std::vector<double> values;
  /// Largest distance any delayed time was moved by grid snapping.
  double max_snap = 0.0;

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }
  std::span<const double> state(std::size_t k) const { return {values.data() + k * n, n}; }
  double value(std::size_t k, std::size_t i) const { return values[k * n + i]; }
  void push(double t, std::span<const double> x);
};

/// Right-hand side of the log-abundance system. x_own[i] = x_i(t - tau_i(t)),
/// x_cross[j] = x_j(t - delta_j(t)). Throws NonFinite past the overflow guard.
std::vector<double> rhs(const MutualismSystem& sys, double t, std::span<const double> x_own,
                        std::span<const double> x_cross);

/// Method of steps from hist.t0 over [t0, t0 + horizon].
Trajectory integrate(const MutualismSystem& sys, const InitialHistory& hist, const SimOptions& opt = {});

/// State at t_query: the history at or before t0, linear interpolation
/// between samples after it. On discrete parts of T a query that misses T
/// is snapped first.
std::vector<double> delayed_lookup(const Trajectory& traj, const InitialHistory& hist, double t_query,
                                   double grid_snap_tol = 0.5);

/// Per-species (min, max) over the last tail_fraction of the samples.
std::vector<std::pair<double, double>> tail_bounds(const Trajectory& traj, double tail_fraction);

/// sup over the tail samples of max_i |x_i - y_i|. Throws GridMismatch when
/// the sample times differ.
double pair_divergence(const Trajectory& a, const Trajectory& b, double tail_fraction);

/// pair_divergence restricted to each of `windows` consecutive, equal-count
/// slices of the samples.
std::vector<double> divergence_profile(const Trajectory& a, const Trajectory& b, std::size_t windows = 10);

/// sup over tail samples t with t + shift inside the run of
/// max_i |x_i(t + shift) - x_i(t)|.
double translation_residual(const Trajectory& traj, double shift, double tail_fraction);

/// Divergence changes smaller than this are treated as rounding noise.
inline constexpr double kDivergenceFloor = 1e-12;

/// v[k + 1] <= v[k] + floor for every k.
bool is_nonincreasing(std::span<const double> v, double floor = kDivergenceFloor);

/// Componentwise exp.
Trajectory to_abundance(const Trajectory& traj);

/// Header t,x1..xn[,y1..yn]; 17 significant digits.
void write_csv(std::ostream& os, const Trajectory& traj, bool with_abundance = false);

}  // namespace lvts
