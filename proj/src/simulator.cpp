#include "lvts/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "lvts/error.hpp"

namespace lvts {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

double guarded_exp(double x) {
  if (!(x <= kOverflowGuard) || !std::isfinite(x)) {
    throw Error(ErrorKind::NonFinite, "log abundance " + fmt(x) + " past the overflow guard");
  }
  return std::exp(x);
}

void rhs_into(const MutualismSystem& sys, double t, const double* x_own, const double* x_cross, double* out) {
  const std::size_t n = sys.size();
  for (std::size_t i = 0; i < n; ++i) {
    double v = sys.a[i].eval(t) - sys.b[i].eval(t) * guarded_exp(x_own[i]);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double e = guarded_exp(x_cross[j]);
      v += sys.c[i][j].eval(t) * e / (sys.d[i][j] + e);
    }
    if (!std::isfinite(v)) throw Error(ErrorKind::NonFinite, "right-hand side is not finite at t = " + fmt(t));
    out[i] = v;
  }
}

std::size_t tail_start(std::size_t count, double tail_fraction) {
  if (!(tail_fraction > 0.0) || tail_fraction > 1.0) {
    throw Error(ErrorKind::InvalidArgument, "tail fraction must lie in (0, 1]");
  }
  if (count == 0) throw Error(ErrorKind::InvalidArgument, "trajectory is empty");
  const auto keep = static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(count)));
  return count - std::clamp<std::size_t>(keep, 1, count);
}

/// In-step context for RK4 substages: lookups past the last stored sample
/// extrapolate along the first stage slope.
struct Stage {
  double t_n;
  const double* x_n;
  const double* k1;
  double s;
  const double* x_s;
};

/// Resolves delayed arguments against history + stored samples.
class Resolver {
 public:
  Resolver(const Trajectory& traj, const InitialHistory& hist, double snap_tol)
      : traj_(traj), hist_(hist), snap_tol_(snap_tol), snaps_(!traj.ts.is_reals()) {}

  double max_snap() const { return max_snap_; }

  /// Point of T that the delayed time q refers to.
  double resolve(double q) {
    if (snaps_ && !traj_.ts.contains(q)) {
      const auto gap = traj_.ts.gap_around(q);
      if (!gap) throw Error(ErrorKind::DelayLookupMiss, "delayed time " + fmt(q) + " lies outside the time scale");
      const double left = q - gap->first;
      const double right = gap->second - q;
      const double dist = std::min(left, right);
      if (dist > snap_tol_ * (gap->second - gap->first)) {
        throw Error(ErrorKind::DelayLookupMiss, "delayed time " + fmt(q) + " misses the time scale by " + fmt(dist) +
                                                    ", beyond the snap tolerance");
      }
      max_snap_ = std::max(max_snap_, dist);
      q = left <= right ? gap->first : gap->second;
    }
    const double floor = traj_.t0 - traj_.theta - membership_tolerance(traj_.t0 - traj_.theta);
    if (q < floor) {
      throw Error(ErrorKind::DelayLookupMiss,
                  "delayed time " + fmt(q) + " precedes the history window starting at " + fmt(traj_.t0 - traj_.theta));
    }
    return q;
  }

  double component(double q, std::size_t i, const Stage* st) {
    q = resolve(q);
    if (q <= traj_.t0) return hist_.phi[i](q);
    const auto& ts = traj_.times;
    const double last = ts.back();
    if (q > last + membership_tolerance(last)) {
      if (st == nullptr) {
        throw Error(ErrorKind::DelayLookupMiss, "delayed time " + fmt(q) + " lies past the computed range ending at " + fmt(last));
      }
      if (std::abs(q - st->s) <= membership_tolerance(st->s)) return st->x_s[i];
      return st->x_n[i] + (q - st->t_n) * st->k1[i];
    }
    if (q >= last) return traj_.value(ts.size() - 1, i);
    const auto it = std::upper_bound(ts.begin(), ts.end(), q);
    const auto hi = static_cast<std::size_t>(it - ts.begin());
    const std::size_t lo = hi - 1;
    const double w = (q - ts[lo]) / (ts[hi] - ts[lo]);
    return traj_.value(lo, i) + w * (traj_.value(hi, i) - traj_.value(lo, i));
  }

 private:
  const Trajectory& traj_;
  const InitialHistory& hist_;
  double snap_tol_;
  bool snaps_;
  double max_snap_ = 0.0;
};

double max_delay(const std::vector<QuasiTrigSum>& delays) {
  double out = 0.0;
  for (const auto& f : delays) out = std::max(out, bounds(f).upper);
  return out;
}

/// Linear interpolation of component i at q, inside the sample range.
double interpolate(const Trajectory& traj, double q, std::size_t i) {
  const auto& ts = traj.times;
  if (q <= ts.front()) return traj.value(0, i);
  if (q >= ts.back()) return traj.value(ts.size() - 1, i);
  const auto hi = static_cast<std::size_t>(std::upper_bound(ts.begin(), ts.end(), q) - ts.begin());
  const std::size_t lo = hi - 1;
  const double w = (q - ts[lo]) / (ts[hi] - ts[lo]);
  return traj.value(lo, i) + w * (traj.value(hi, i) - traj.value(lo, i));
}

}  // namespace

void SimOptions::validate() const {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw Error(ErrorKind::InvalidArgument, "horizon must be > 0");
  if (!(dense_step > 0.0) || !std::isfinite(dense_step)) throw Error(ErrorKind::InvalidArgument, "dense_step must be > 0");
  if (!(grid_snap_tol >= 0.0) || grid_snap_tol > 0.5) {
    throw Error(ErrorKind::InvalidArgument, "grid_snap_tol must lie in [0, 0.5]");
  }
  if (record_stride == 0) throw Error(ErrorKind::InvalidArgument, "record_stride must be >= 1");
}

void Trajectory::push(double t, std::span<const double> x) {
  times.push_back(t);
  values.insert(values.end(), x.begin(), x.end());
}

std::vector<double> rhs(const MutualismSystem& sys, double t, std::span<const double> x_own,
                        std::span<const double> x_cross) {
  const std::size_t n = sys.size();
  if (x_own.size() != n || x_cross.size() != n) throw Error(ErrorKind::InvalidArgument, "state size does not match the system");
  std::vector<double> out(n);
  rhs_into(sys, t, x_own.data(), x_cross.data(), out.data());
  return out;
}

Trajectory integrate(const MutualismSystem& sys, const InitialHistory& hist, const SimOptions& opt) {
  sys.validate();
  opt.validate();
  const std::size_t n = sys.size();
  hist.validate(n);

  Trajectory full;
  full.ts = sys.ts;
  full.n = n;
  full.t0 = sys.ts.snap(hist.t0);
  full.horizon = opt.horizon;
  full.theta = std::max(max_delay(sys.tau), max_delay(sys.delta));

  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = hist.phi[i](full.t0);
  full.push(full.t0, x);

  Resolver res(full, hist, opt.grid_snap_tol);
  std::vector<double> own(n), cross(n);
  auto field = [&](double s, const Stage* st, double* out) {
    for (std::size_t i = 0; i < n; ++i) {
      own[i] = res.component(s - sys.tau[i].eval(s), i, st);
      cross[i] = res.component(s - sys.delta[i].eval(s), i, st);
    }
    rhs_into(sys, s, own.data(), cross.data(), out);
  };

  const double t_end = full.t0 + opt.horizon;
  const double end_tol = membership_tolerance(t_end);
  std::vector<double> k1(n), k2(n), k3(n), k4(n), xs(n);
  double t = full.t0;

  while (t < t_end - end_tol) {
    const double mu = sys.ts.graininess(t);
    if (mu > 0.0) {
      const double next = sys.ts.sigma(t);
      if (next > t_end + end_tol) break;
      field(t, nullptr, k1.data());
      for (std::size_t i = 0; i < n; ++i) x[i] += mu * k1[i];
      t = next;
      full.push(t, x);
      continue;
    }

    std::optional<Piece> piece;
    for (const Piece& p : sys.ts.pieces(t, t)) {
      if (p.lo <= t + membership_tolerance(t) && p.hi > t) piece = p;
    }
    if (!piece) throw Error(ErrorKind::InvalidArgument, "horizon runs past the end of the time scale at t = " + fmt(t));

    const double limit = std::min(piece->hi, t_end);
    const double h = opt.dense_step;
    const double anchor = t;
    for (std::size_t k = 1; t < limit - end_tol; ++k) {
      double t_next = anchor + static_cast<double>(k) * h;
      if (t_next > limit - 1e-6 * h) t_next = limit;
      const double step = t_next - t;
      const double mid = t + 0.5 * step;

      field(t, nullptr, k1.data());
      for (std::size_t i = 0; i < n; ++i) xs[i] = x[i] + 0.5 * step * k1[i];
      Stage st{t, x.data(), k1.data(), mid, xs.data()};
      field(mid, &st, k2.data());
      for (std::size_t i = 0; i < n; ++i) xs[i] = x[i] + 0.5 * step * k2[i];
      field(mid, &st, k3.data());
      for (std::size_t i = 0; i < n; ++i) xs[i] = x[i] + step * k3[i];
      st.s = t_next;
      field(t_next, &st, k4.data());
      for (std::size_t i = 0; i < n; ++i) {
        x[i] += step / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        if (!std::isfinite(x[i])) throw Error(ErrorKind::NonFinite, "state is not finite at t = " + fmt(t_next));
      }
      t = t_next;
      full.push(t, x);
    }
  }
  full.max_snap = res.max_snap();

  if (opt.record_stride == 1) return full;
  Trajectory out;
  out.ts = full.ts;
  out.n = n;
  out.t0 = full.t0;
  out.horizon = full.horizon;
  out.theta = full.theta;
  out.max_snap = full.max_snap;
  for (std::size_t k = 0; k < full.size(); k += opt.record_stride) out.push(full.times[k], full.state(k));
  if ((full.size() - 1) % opt.record_stride != 0) out.push(full.times.back(), full.state(full.size() - 1));
  return out;
}

std::vector<double> delayed_lookup(const Trajectory& traj, const InitialHistory& hist, double t_query,
                                   double grid_snap_tol) {
  if (traj.empty()) throw Error(ErrorKind::InvalidArgument, "trajectory is empty");
  if (hist.phi.size() != traj.n) throw Error(ErrorKind::InvalidArgument, "history size does not match the trajectory");
  Resolver res(traj, hist, grid_snap_tol);
  std::vector<double> out(traj.n);
  for (std::size_t i = 0; i < traj.n; ++i) out[i] = res.component(t_query, i, nullptr);
  return out;
}

std::vector<std::pair<double, double>> tail_bounds(const Trajectory& traj, double tail_fraction) {
  const std::size_t start = tail_start(traj.size(), tail_fraction);
  std::vector<std::pair<double, double>> out(traj.n, {std::numeric_limits<double>::infinity(),
                                                      -std::numeric_limits<double>::infinity()});
  for (std::size_t k = start; k < traj.size(); ++k) {
    for (std::size_t i = 0; i < traj.n; ++i) {
      out[i].first = std::min(out[i].first, traj.value(k, i));
      out[i].second = std::max(out[i].second, traj.value(k, i));
    }
  }
  return out;
}

namespace {

void require_same_grid(const Trajectory& a, const Trajectory& b) {
  if (a.n != b.n) throw Error(ErrorKind::GridMismatch, "trajectories have different species counts");
  if (a.size() != b.size()) throw Error(ErrorKind::GridMismatch, "trajectories have different sample counts");
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (std::abs(a.times[k] - b.times[k]) > membership_tolerance(a.times[k])) {
      throw Error(ErrorKind::GridMismatch, "sample times differ at index " + std::to_string(k));
    }
  }
}

double sup_gap(const Trajectory& a, const Trajectory& b, std::size_t from, std::size_t to) {
  double sup = 0.0;
  for (std::size_t k = from; k < to; ++k) {
    for (std::size_t i = 0; i < a.n; ++i) sup = std::max(sup, std::abs(a.value(k, i) - b.value(k, i)));
  }
  return sup;
}

}  // namespace

double pair_divergence(const Trajectory& a, const Trajectory& b, double tail_fraction) {
  require_same_grid(a, b);
  return sup_gap(a, b, tail_start(a.size(), tail_fraction), a.size());
}

std::vector<double> divergence_profile(const Trajectory& a, const Trajectory& b, std::size_t windows) {
  require_same_grid(a, b);
  if (windows == 0 || a.size() < windows) throw Error(ErrorKind::InvalidArgument, "need at least one sample per window");
  std::vector<double> out;
  out.reserve(windows);
  for (std::size_t w = 0; w < windows; ++w) out.push_back(sup_gap(a, b, w * a.size() / windows, (w + 1) * a.size() / windows));
  return out;
}

double translation_residual(const Trajectory& traj, double shift, double tail_fraction) {
  if (!(shift >= 0.0) || !std::isfinite(shift)) throw Error(ErrorKind::InvalidArgument, "shift must be finite and >= 0");
  const std::size_t start = tail_start(traj.size(), tail_fraction);
  const bool discrete = traj.ts.is_discrete();
  const double last = traj.times.back();
  double sup = 0.0;
  bool any = false;
  for (std::size_t k = start; k < traj.size(); ++k) {
    const double target = traj.times[k] + shift;
    if (target > last + membership_tolerance(last)) break;
    if (discrete) {
      const auto it = std::lower_bound(traj.times.begin(), traj.times.end(), target - membership_tolerance(target));
      if (it == traj.times.end() || std::abs(*it - target) > membership_tolerance(target)) {
        throw Error(ErrorKind::GridMismatch, "shift " + fmt(shift) + " does not map samples onto samples");
      }
    }
    any = true;
    for (std::size_t i = 0; i < traj.n; ++i) sup = std::max(sup, std::abs(interpolate(traj, target, i) - traj.value(k, i)));
  }
  if (!any) throw Error(ErrorKind::GridMismatch, "shift " + fmt(shift) + " leaves no overlap with the tail");
  return sup;
}

bool is_nonincreasing(std::span<const double> v, double floor) {
  for (std::size_t k = 1; k < v.size(); ++k) {
    if (v[k] > v[k - 1] + floor) return false;
  }
  return true;
}

Trajectory to_abundance(const Trajectory& traj) {
  Trajectory out = traj;
  for (double& v : out.values) {
    v = std::exp(v);
    if (!std::isfinite(v)) throw Error(ErrorKind::NonFinite, "abundance overflows");
  }
  return out;
}

void write_csv(std::ostream& os, const Trajectory& traj, bool with_abundance) {
  os << "t";
  for (std::size_t i = 0; i < traj.n; ++i) os << ",x" << (i + 1);
  if (with_abundance) {
    for (std::size_t i = 0; i < traj.n; ++i) os << ",y" << (i + 1);
  }
  os << '\n';
  const auto old = os.precision(17);
  for (std::size_t k = 0; k < traj.size(); ++k) {
    os << traj.times[k];
    for (std::size_t i = 0; i < traj.n; ++i) os << ',' << traj.value(k, i);
    if (with_abundance) {
      for (std::size_t i = 0; i < traj.n; ++i) os << ',' << std::exp(traj.value(k, i));
    }
    os << '\n';
  }
  os.precision(old);
}

}  // namespace lvts
