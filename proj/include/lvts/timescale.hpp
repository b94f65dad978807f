#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace lvts {

/// Scalar function of time. Coefficients, integrands and the `p` of a
/// generalized exponential all go through this type.
using ScalarFn = std::function<double(double)>;

struct ClosedInterval {
  double lo;
  double hi;

  friend bool operator==(const ClosedInterval&, const ClosedInterval&) = default;
};

struct IsolatedPoint {
  double t;

  friend bool operator==(const IsolatedPoint&, const IsolatedPoint&) = default;
};

using Segment = std::variant<ClosedInterval, IsolatedPoint>;

struct Reals {
  friend bool operator==(const Reals&, const Reals&) = default;
};

/// {anchor + k*step : k integer}
struct UniformGrid {
  double step = 1.0;
  double anchor = 0.0;

  friend bool operator==(const UniformGrid&, const UniformGrid&) = default;
};

/// Finite union of closed intervals and isolated points. With `period` set the
/// pattern repeats: T = U_k (segments + k*period), which gives unbounded
/// hybrid time scales such as U_k [2k, 2k+1].
struct HybridUnion {
  std::vector<Segment> segments;
  std::optional<double> period;

  friend bool operator==(const HybridUnion&, const HybridUnion&) = default;
};

using TimeScaleKind = std::variant<Reals, UniformGrid, HybridUnion>;

/// One connected component of the time scale: an interval [lo, hi] or, when
/// lo == hi, an isolated point. The Reals piece is (-inf, inf).
struct Piece {
  double lo;
  double hi;

  bool is_point() const { return lo == hi; }
};

struct QuadratureOptions {
  /// Composite Simpson panels per unit length on dense stretches.
  double panels_per_unit = 64.0;
};

/// Relative membership tolerance: t is in T if it is within
/// membership_tolerance(t) of a point of T.
double membership_tolerance(double t);

/// A nonempty closed subset of the reals, restricted to the shapes this
/// library can represent. Immutable; all queries are pure.
class TimeScale {
 public:
  static TimeScale reals();
  static TimeScale uniform_grid(double step, double anchor = 0.0);
  static TimeScale integers() { return uniform_grid(1.0, 0.0); }
  static TimeScale hybrid(std::vector<Segment> segments,
                          std::optional<double> period = std::nullopt);

  const TimeScaleKind& kind() const { return kind_; }

  bool is_reals() const;
  bool is_uniform_grid() const;
  /// True when T has no dense stretch at all.
  bool is_discrete() const;

  bool contains(double t) const;
  /// Returns the point of T that t denotes (exact grid point / segment
  /// endpoint when within tolerance). Throws NotInTimeScale.
  double snap(double t) const;
  /// Nearest point of T to an arbitrary real t. nullopt only when the
  /// search is ambiguous (never for the supported kinds).
  std::optional<double> nearest(double t) const;
  /// For t outside T: the points of T on either side of the gap holding t.
  /// nullopt when t is in T or lies beyond inf T / sup T.
  std::optional<std::pair<double, double>> gap_around(double t) const;

  double sigma(double t) const;
  double rho(double t) const;
  double graininess(double t) const;
  bool is_right_scattered(double t) const { return graininess(t) > 0.0; }

  /// Exact sup of mu over window ∩ T. Throws EmptyWindow.
  double graininess_sup(double lo, double hi) const;
  /// sup of mu over all of T.
  double graininess_sup() const;

  /// Components of T meeting [lo, hi], in increasing order, unclipped.
  std::vector<Piece> pieces(double lo, double hi) const;

  friend bool operator==(const TimeScale&, const TimeScale&) = default;

  /// Successor component of the one that ends at `hi` (nullopt at sup T).
  std::optional<Piece> next_piece(const Piece& p) const;
  std::optional<Piece> prev_piece(const Piece& p) const;

 private:
  explicit TimeScale(TimeScaleKind kind) : kind_(std::move(kind)) {}

  std::optional<std::int64_t> locate(double t) const;
  Piece piece_at(std::int64_t index) const;
  std::optional<std::int64_t> index_of(const Piece& p) const;
  bool index_valid(std::int64_t index) const;

  TimeScaleKind kind_;
};

// --- delta calculus -------------------------------------------------------

/// Cylinder transformation xi_h(z) = log(1 + h z) / h, xi_0(z) = z.
double cylinder(double h, double z);

double circle_plus(double p, double q, double mu);
double circle_minus(double p, double mu);

/// Pointwise p (+) q and (-) p as functions on T.
ScalarFn circle_plus_fn(const TimeScale& ts, ScalarFn p, ScalarFn q);
ScalarFn circle_minus_fn(const TimeScale& ts, ScalarFn p);

/// 1 + mu(t) p(t) != 0 at every scattered point of [lo, hi] ∩ T.
bool is_regressive(const TimeScale& ts, const ScalarFn& p, double lo, double hi);
/// 1 + mu(t) p(t) > 0 at every point of [lo, hi] ∩ T.
bool is_positively_regressive(const TimeScale& ts, const ScalarFn& p, double lo, double hi);

/// Delta integral over [a, b]: exact sums mu*f on scattered points plus
/// composite Simpson on dense stretches. a > b gives the negated integral.
double delta_integral(const TimeScale& ts, const ScalarFn& f, double a, double b,
                      const QuadratureOptions& quad = {});

/// Generalized exponential e_p(t, s). Requires p positively regressive
/// between s and t; t < s is evaluated as 1 / e_p(s, t).
double gexp(const TimeScale& ts, const ScalarFn& p, double t, double s,
            const QuadratureOptions& quad = {});

/// f^Delta(t): forward difference quotient at right-scattered t, central
/// difference at right-dense t.
double delta_derivative(const TimeScale& ts, const ScalarFn& f, double t);

}  // namespace lvts
