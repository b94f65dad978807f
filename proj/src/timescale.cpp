#include "lvts/timescale.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "lvts/error.hpp"

namespace lvts {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCylinderZero = 1e-12;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Piece to_piece(const Segment& s) {
  return std::visit(overloaded{[](const ClosedInterval& iv) { return Piece{iv.lo, iv.hi}; },
                               [](const IsolatedPoint& p) { return Piece{p.t, p.t}; }},
                    s);
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::string fmt_time(double t) {
  std::ostringstream os;
  os.precision(17);
  os << t;
  return os.str();
}

[[noreturn]] void not_in_time_scale(double t) {
  throw Error(ErrorKind::NotInTimeScale, "t = " + fmt_time(t) + " is not a point of the time scale");
}

/// Composite Simpson on [a, b]. With `open_right` the last node is taken just
/// inside b: a right-scattered endpoint belongs to the scattered sum, and
/// integrands built from mu (circle sums) take a different value there.
double simpson(const ScalarFn& f, double a, double b, const QuadratureOptions& quad, bool open_right = false) {
  const double len = b - a;
  if (len <= 0.0) return 0.0;
  auto n = static_cast<std::int64_t>(std::ceil(len * quad.panels_per_unit / 2.0)) * 2;
  n = std::max<std::int64_t>(n, 2);
  const double h = len / static_cast<double>(n);
  const double right = open_right ? b - 4.0 * membership_tolerance(b) : b;
  double acc = f(a) + f(right);
  for (std::int64_t k = 1; k < n; ++k) {
    const double x = a + h * static_cast<double>(k);
    acc += (k % 2 == 1 ? 4.0 : 2.0) * f(x);
  }
  return acc * h / 3.0;
}

}  // namespace

double membership_tolerance(double t) { return 1e-9 * std::max(1.0, std::abs(t)); }

// --- construction ---------------------------------------------------------

TimeScale TimeScale::reals() { return TimeScale(Reals{}); }

TimeScale TimeScale::uniform_grid(double step, double anchor) {
  if (!(step > 0.0) || !std::isfinite(step) || !std::isfinite(anchor)) {
    throw Error(ErrorKind::InvalidArgument, "uniform grid needs a finite step > 0");
  }
  return TimeScale(UniformGrid{step, anchor});
}

TimeScale TimeScale::hybrid(std::vector<Segment> segments, std::optional<double> period) {
  if (segments.empty()) throw Error(ErrorKind::InvalidArgument, "hybrid time scale needs at least one segment");
  double prev_hi = -kInf;
  for (const auto& seg : segments) {
    const Piece p = to_piece(seg);
    if (!std::isfinite(p.lo) || !std::isfinite(p.hi)) {
      throw Error(ErrorKind::InvalidArgument, "hybrid segments must be finite");
    }
    if (std::holds_alternative<ClosedInterval>(seg) && !(p.lo < p.hi)) {
      throw Error(ErrorKind::InvalidArgument, "interval needs lo < hi");
    }
    if (!(p.lo > prev_hi + membership_tolerance(p.lo))) {
      throw Error(ErrorKind::InvalidArgument, "hybrid segments must be strictly ordered and disjoint");
    }
    prev_hi = p.hi;
  }
  if (period) {
    const double first_lo = to_piece(segments.front()).lo;
    if (!(*period > 0.0) || !(prev_hi + membership_tolerance(prev_hi) < first_lo + *period)) {
      throw Error(ErrorKind::InvalidArgument, "period must exceed the span of one pattern");
    }
  }
  return TimeScale(HybridUnion{std::move(segments), period});
}

bool TimeScale::is_reals() const { return std::holds_alternative<Reals>(kind_); }
bool TimeScale::is_uniform_grid() const { return std::holds_alternative<UniformGrid>(kind_); }

bool TimeScale::is_discrete() const {
  if (is_reals()) return false;
  if (is_uniform_grid()) return true;
  const auto& h = std::get<HybridUnion>(kind_);
  return std::all_of(h.segments.begin(), h.segments.end(),
                     [](const Segment& s) { return std::holds_alternative<IsolatedPoint>(s); });
}

// --- indexing of components ----------------------------------------------

bool TimeScale::index_valid(std::int64_t index) const {
  return std::visit(overloaded{[&](const Reals&) { return index == 0; },
                               [](const UniformGrid&) { return true; },
                               [&](const HybridUnion& h) {
                                 if (h.period) return true;
                                 return index >= 0 && index < static_cast<std::int64_t>(h.segments.size());
                               }},
                    kind_);
}

Piece TimeScale::piece_at(std::int64_t index) const {
  return std::visit(overloaded{[](const Reals&) { return Piece{-kInf, kInf}; },
                               [&](const UniformGrid& g) {
                                 const double t = g.anchor + static_cast<double>(index) * g.step;
                                 return Piece{t, t};
                               },
                               [&](const HybridUnion& h) {
                                 const auto count = static_cast<std::int64_t>(h.segments.size());
                                 if (!h.period) return to_piece(h.segments[static_cast<std::size_t>(index)]);
                                 const std::int64_t k = floor_div(index, count);
                                 const std::int64_t s = index - k * count;
                                 Piece p = to_piece(h.segments[static_cast<std::size_t>(s)]);
                                 const double off = static_cast<double>(k) * *h.period;
                                 return Piece{p.lo + off, p.hi + off};
                               }},
                    kind_);
}

std::optional<std::int64_t> TimeScale::locate(double t) const {
  if (!std::isfinite(t)) return std::nullopt;
  const double tol = membership_tolerance(t);
  auto inside = [&](const Piece& p) { return t >= p.lo - tol && t <= p.hi + tol; };
  return std::visit(
      overloaded{[](const Reals&) -> std::optional<std::int64_t> { return 0; },
                 [&](const UniformGrid& g) -> std::optional<std::int64_t> {
                   const auto k = static_cast<std::int64_t>(std::llround((t - g.anchor) / g.step));
                   if (std::abs(g.anchor + static_cast<double>(k) * g.step - t) <= tol) return k;
                   return std::nullopt;
                 },
                 [&](const HybridUnion& h) -> std::optional<std::int64_t> {
                   const auto count = static_cast<std::int64_t>(h.segments.size());
                   if (!h.period) {
                     for (std::int64_t s = 0; s < count; ++s) {
                       if (inside(piece_at(s))) return s;
                     }
                     return std::nullopt;
                   }
                   const double base = to_piece(h.segments.front()).lo;
                   const auto k = static_cast<std::int64_t>(std::floor((t - base) / *h.period));
                   for (std::int64_t kk = k - 1; kk <= k + 1; ++kk) {
                     for (std::int64_t s = 0; s < count; ++s) {
                       if (inside(piece_at(kk * count + s))) return kk * count + s;
                     }
                   }
                   return std::nullopt;
                 }},
      kind_);
}

std::optional<std::int64_t> TimeScale::index_of(const Piece& p) const {
  if (is_reals()) return 0;
  return locate(p.lo);
}

std::vector<Piece> TimeScale::pieces(double lo, double hi) const {
  std::vector<Piece> out;
  if (lo > hi) return out;
  const double tol_lo = membership_tolerance(lo);
  const double tol_hi = membership_tolerance(hi);
  std::visit(overloaded{[&](const Reals&) { out.push_back({-kInf, kInf}); },
                        [&](const UniformGrid& g) {
                          const auto k0 = static_cast<std::int64_t>(std::ceil((lo - tol_lo - g.anchor) / g.step));
                          const auto k1 = static_cast<std::int64_t>(std::floor((hi + tol_hi - g.anchor) / g.step));
                          for (std::int64_t k = k0; k <= k1; ++k) out.push_back(piece_at(k));
                        },
                        [&](const HybridUnion& h) {
                          const auto count = static_cast<std::int64_t>(h.segments.size());
                          std::int64_t first = 0;
                          std::int64_t last = count - 1;
                          if (h.period) {
                            const double base = to_piece(h.segments.front()).lo;
                            first = (static_cast<std::int64_t>(std::floor((lo - base) / *h.period)) - 1) * count;
                            last = (static_cast<std::int64_t>(std::floor((hi - base) / *h.period)) + 2) * count - 1;
                          }
                          for (std::int64_t i = first; i <= last; ++i) {
                            const Piece p = piece_at(i);
                            if (p.hi >= lo - tol_lo && p.lo <= hi + tol_hi) out.push_back(p);
                          }
                        }},
             kind_);
  return out;
}

std::optional<Piece> TimeScale::next_piece(const Piece& p) const {
  const auto idx = index_of(p);
  if (!idx || !index_valid(*idx + 1)) return std::nullopt;
  return piece_at(*idx + 1);
}

std::optional<Piece> TimeScale::prev_piece(const Piece& p) const {
  const auto idx = index_of(p);
  if (!idx || !index_valid(*idx - 1)) return std::nullopt;
  return piece_at(*idx - 1);
}

// --- membership and jumps ---------------------------------------------------

bool TimeScale::contains(double t) const { return locate(t).has_value(); }

double TimeScale::snap(double t) const {
  const auto idx = locate(t);
  if (!idx) not_in_time_scale(t);
  const Piece p = piece_at(*idx);
  return std::clamp(t, p.lo, p.hi);
}

std::optional<double> TimeScale::nearest(double t) const {
  if (!std::isfinite(t)) return std::nullopt;
  if (contains(t)) return snap(t);
  return std::visit(
      overloaded{[&](const Reals&) -> std::optional<double> { return t; },
                 [&](const UniformGrid& g) -> std::optional<double> {
                   const double k = std::round((t - g.anchor) / g.step);
                   return g.anchor + k * g.step;
                 },
                 [&](const HybridUnion& h) -> std::optional<double> {
                   // Search a window wide enough to reach a component on either side.
                   double reach = 0.0;
                   if (h.period) {
                     reach = 2.0 * *h.period;
                   } else {
                     reach = std::max(std::abs(t - to_piece(h.segments.front()).lo),
                                      std::abs(t - to_piece(h.segments.back()).hi));
                   }
                   std::optional<double> best;
                   for (const Piece& p : pieces(t - reach, t + reach)) {
                     const double cand = std::clamp(t, p.lo, p.hi);
                     if (!best || std::abs(cand - t) < std::abs(*best - t)) best = cand;
                   }
                   return best;
                 }},
      kind_);
}

std::optional<std::pair<double, double>> TimeScale::gap_around(double t) const {
  if (!std::isfinite(t) || contains(t)) return std::nullopt;
  if (const auto* g = std::get_if<UniformGrid>(&kind_)) {
    const double k = std::floor((t - g->anchor) / g->step);
    return std::pair{g->anchor + k * g->step, g->anchor + (k + 1.0) * g->step};
  }
  if (is_reals()) return std::nullopt;
  const auto near = nearest(t);
  if (!near) return std::nullopt;
  const auto idx = locate(*near);
  if (!idx) return std::nullopt;
  const Piece p = piece_at(*idx);
  if (*near < t) {
    if (!index_valid(*idx + 1)) return std::nullopt;
    return std::pair{p.hi, piece_at(*idx + 1).lo};
  }
  if (!index_valid(*idx - 1)) return std::nullopt;
  return std::pair{piece_at(*idx - 1).hi, p.lo};
}

double TimeScale::sigma(double t) const {
  const auto idx = locate(t);
  if (!idx) not_in_time_scale(t);
  const Piece p = piece_at(*idx);
  const double ts = std::clamp(t, p.lo, p.hi);
  if (!p.is_point() && ts < p.hi - membership_tolerance(ts)) return ts;
  if (const auto* g = std::get_if<UniformGrid>(&kind_)) return g->anchor + static_cast<double>(*idx + 1) * g->step;
  if (!index_valid(*idx + 1)) return ts;
  return piece_at(*idx + 1).lo;
}

double TimeScale::rho(double t) const {
  const auto idx = locate(t);
  if (!idx) not_in_time_scale(t);
  const Piece p = piece_at(*idx);
  const double ts = std::clamp(t, p.lo, p.hi);
  if (!p.is_point() && ts > p.lo + membership_tolerance(ts)) return ts;
  if (const auto* g = std::get_if<UniformGrid>(&kind_)) return g->anchor + static_cast<double>(*idx - 1) * g->step;
  if (!index_valid(*idx - 1)) return ts;
  return piece_at(*idx - 1).hi;
}

double TimeScale::graininess(double t) const {
  if (const auto* g = std::get_if<UniformGrid>(&kind_)) {
    if (!contains(t)) not_in_time_scale(t);
    return g->step;
  }
  return sigma(t) - snap(t);
}

double TimeScale::graininess_sup(double lo, double hi) const {
  const auto ps = pieces(lo, hi);
  if (ps.empty()) {
    throw Error(ErrorKind::EmptyWindow, "window [" + fmt_time(lo) + ", " + fmt_time(hi) + "] misses the time scale");
  }
  if (is_reals()) return 0.0;
  if (const auto* g = std::get_if<UniformGrid>(&kind_)) return g->step;
  double sup = 0.0;
  for (const Piece& p : ps) {
    if (p.hi > hi + membership_tolerance(hi)) continue;
    if (const auto nxt = next_piece(p)) sup = std::max(sup, nxt->lo - p.hi);
  }
  return sup;
}

double TimeScale::graininess_sup() const {
  return std::visit(overloaded{[](const Reals&) { return 0.0; },
                               [](const UniformGrid& g) { return g.step; },
                               [&](const HybridUnion& h) {
                                 const auto count = static_cast<std::int64_t>(h.segments.size());
                                 const std::int64_t span = h.period ? count : count - 1;
                                 double sup = 0.0;
                                 for (std::int64_t i = 0; i < span; ++i) {
                                   sup = std::max(sup, piece_at(i + 1).lo - piece_at(i).hi);
                                 }
                                 return sup;
                               }},
                    kind_);
}

// --- calculus ----------------------------------------------------------------

double cylinder(double h, double z) {
  if (h < 0.0 || !std::isfinite(h)) throw Error(ErrorKind::InvalidArgument, "graininess must be >= 0");
  if (h < kCylinderZero) return z;
  if (!(1.0 + h * z > 0.0)) {
    throw Error(ErrorKind::NonRegressive, "1 + h z = " + fmt_time(1.0 + h * z) + " <= 0");
  }
  return std::log1p(h * z) / h;
}

double circle_plus(double p, double q, double mu) {
  if (1.0 + mu * p == 0.0 || 1.0 + mu * q == 0.0) {
    throw Error(ErrorKind::NonRegressive, "circle_plus operand is not regressive");
  }
  return p + q + mu * p * q;
}

double circle_minus(double p, double mu) {
  const double den = 1.0 + mu * p;
  if (den == 0.0) throw Error(ErrorKind::NonRegressive, "circle_minus operand is not regressive");
  return -p / den;
}

ScalarFn circle_plus_fn(const TimeScale& ts, ScalarFn p, ScalarFn q) {
  return [ts, p = std::move(p), q = std::move(q)](double t) { return circle_plus(p(t), q(t), ts.graininess(t)); };
}

ScalarFn circle_minus_fn(const TimeScale& ts, ScalarFn p) {
  return [ts, p = std::move(p)](double t) { return circle_minus(p(t), ts.graininess(t)); };
}

namespace {

/// Visits every right-scattered point of [lo, hi) ∩ T with its graininess.
template <class Visit>
void for_each_scattered(const TimeScale& ts, double lo, double hi, Visit&& visit) {
  const double tol = membership_tolerance(hi);
  for (const Piece& p : ts.pieces(lo, hi)) {
    const double right = p.hi;
    if (!std::isfinite(right) || right < lo - membership_tolerance(lo) || right >= hi - tol) continue;
    if (const auto* g = std::get_if<UniformGrid>(&ts.kind())) {
      visit(right, g->step);
      continue;
    }
    if (const auto nxt = ts.next_piece(p)) visit(right, nxt->lo - right);
  }
}

/// Visits every maximal dense stretch of [lo, hi] ∩ T, flagging stretches
/// whose right end is a right-scattered point.
template <class Visit>
void for_each_dense(const TimeScale& ts, double lo, double hi, Visit&& visit) {
  for (const Piece& p : ts.pieces(lo, hi)) {
    if (p.is_point()) continue;
    const double a = std::max(p.lo, lo);
    const double b = std::min(p.hi, hi);
    if (b > a) visit(a, b, b == p.hi && ts.next_piece(p).has_value());
  }
}

}  // namespace

bool is_regressive(const TimeScale& ts, const ScalarFn& p, double lo, double hi) {
  bool ok = true;
  for_each_scattered(ts, lo, hi + membership_tolerance(hi) * 2.0,
                     [&](double t, double mu) { ok = ok && (1.0 + mu * p(t) != 0.0); });
  return ok;
}

bool is_positively_regressive(const TimeScale& ts, const ScalarFn& p, double lo, double hi) {
  bool ok = true;
  for_each_scattered(ts, lo, hi + membership_tolerance(hi) * 2.0,
                     [&](double t, double mu) { ok = ok && (1.0 + mu * p(t) > 0.0); });
  return ok;
}

double delta_integral(const TimeScale& ts, const ScalarFn& f, double a, double b, const QuadratureOptions& quad) {
  const double lo = ts.snap(a);
  const double hi = ts.snap(b);
  if (lo > hi) return -delta_integral(ts, f, hi, lo, quad);
  if (lo == hi) return 0.0;
  double acc = 0.0;
  for_each_dense(ts, lo, hi, [&](double x0, double x1, bool open) { acc += simpson(f, x0, x1, quad, open); });
  for_each_scattered(ts, lo, hi, [&](double t, double mu) { acc += mu * f(t); });
  return acc;
}

double gexp(const TimeScale& ts, const ScalarFn& p, double t, double s, const QuadratureOptions& quad) {
  const double tt = ts.snap(t);
  const double ss = ts.snap(s);
  if (tt == ss) return 1.0;
  if (tt < ss) return 1.0 / gexp(ts, p, ss, tt, quad);
  double log_acc = 0.0;
  for_each_dense(ts, ss, tt, [&](double x0, double x1, bool open) { log_acc += simpson(p, x0, x1, quad, open); });
  for_each_scattered(ts, ss, tt, [&](double x, double mu) {
    const double factor = 1.0 + mu * p(x);
    if (!(factor > 0.0)) {
      throw Error(ErrorKind::NonRegressive,
                  "1 + mu p = " + fmt_time(factor) + " at t = " + fmt_time(x) + " (p not positively regressive)");
    }
    log_acc += std::log(factor);
  });
  return std::exp(log_acc);
}

double delta_derivative(const TimeScale& ts, const ScalarFn& f, double t) {
  const double tt = ts.snap(t);
  const double mu = ts.graininess(tt);
  if (mu > 0.0) return (f(ts.sigma(tt)) - f(tt)) / mu;
  const double h = 1e-6 * std::max(1.0, std::abs(tt));
  if (ts.contains(tt - h)) return (f(tt + h) - f(tt - h)) / (2.0 * h);
  return (f(tt + h) - f(tt)) / h;
}

}  // namespace lvts
