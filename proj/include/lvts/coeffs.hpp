#pragma once

#include <span>
#include <vector>

#include "lvts/timescale.hpp"

namespace lvts {

struct TrigTerm {
  double amp_sin = 0.0;
  double amp_cos = 0.0;
  double freq = 1.0;

  /// sqrt(amp_sin^2 + amp_cos^2)
  double amplitude() const;

  friend bool operator==(const TrigTerm&, const TrigTerm&) = default;
};

/// Finite trigonometric sum c0 + sum_k (s_k sin(w_k t) + c_k cos(w_k t)).
///
/// Terms are kept sorted by frequency and terms sharing a frequency are
/// merged on construction, so two sums describing the same function compare
/// equal coefficient-wise.
class QuasiTrigSum {
 public:
  QuasiTrigSum() = default;
  explicit QuasiTrigSum(double c0, std::vector<TrigTerm> terms = {});

  static QuasiTrigSum constant(double c0) { return QuasiTrigSum(c0); }

  double c0() const { return c0_; }
  const std::vector<TrigTerm>& terms() const { return terms_; }
  bool is_constant() const { return terms_.empty(); }

  double operator()(double t) const { return eval(t); }
  double eval(double t) const;
  double derivative(double t) const;

  /// Sum of term amplitudes.
  double amplitude_sum() const;
  /// Sum of freq * amplitude: sup of |f'| on the reals.
  double derivative_amplitude_sum() const;

  ScalarFn as_fn() const;

  friend bool operator==(const QuasiTrigSum&, const QuasiTrigSum&) = default;

 private:
  double c0_ = 0.0;
  std::vector<TrigTerm> terms_;
};

/// f^l = inf |f|, f^u = sup |f|.
struct BoundPair {
  double lower = 0.0;
  double upper = 0.0;
};

/// Bounds from the amplitude-sum formula c0 -/+ sum amplitude. Requires
/// c0 >= amplitude_sum (so f >= 0 and |f| = f); throws SignIndefinite
/// otherwise.
BoundPair bounds(const QuasiTrigSum& f);

/// True when the amplitude-sum bounds are attained as sup/inf: at most one
/// term, or no pair of frequencies in a rational ratio (denominator <= 10^6).
bool bounds_are_exact(const QuasiTrigSum& f);

struct DelayExtrema {
  double minus = 0.0;  ///< min over delays of inf
  double plus = 0.0;   ///< max over delays of sup
};

/// tau^- and tau^+ of a family of delays; each must be strictly positive.
DelayExtrema delay_extrema(std::span<const QuasiTrigSum> delays);

/// Sampling window for empirical sup/inf checks.
struct SampleWindow {
  double lo = 0.0;
  double hi = 2000.0;
  /// Spacing on dense stretches; discrete stretches use every point.
  double step = 1e-3;
};

/// sup over the window of f^Delta. On dense stretches the analytic bound
/// sum w_k A_k is combined with sampled f'; on scattered points with
/// graininess mu the bound sum A_k |2 sin(w_k mu / 2)| / mu is combined with
/// the sampled forward quotients. Returns the larger of bound and samples.
double delta_derivative_sup(const QuasiTrigSum& f, const TimeScale& ts, const SampleWindow& window = {});

/// g(t) = f(t + s), with phases rotated into the term coefficients.
QuasiTrigSum shift(const QuasiTrigSum& f, double s);

/// sup over sampled t in the window of |f(t + tau) - f(t)| < eps.
bool epsilon_translation_check(const QuasiTrigSum& f, double eps, double tau, const SampleWindow& window = {});

}  // namespace lvts
