#include "lvts/coeffs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lvts/error.hpp"

namespace lvts {

namespace {

constexpr double kMaxDenominator = 1e6;
// Ratios closer than this (relative) to a small-denominator rational are
// treated as commensurate.
constexpr double kRatioTol = 1e-13;

bool near_rational(double r) {
  double x = r;
  double p0 = 0.0, q0 = 1.0, p1 = 1.0, q1 = 0.0;
  for (int iter = 0; iter < 64; ++iter) {
    const double a = std::floor(x);
    const double p2 = a * p1 + p0;
    const double q2 = a * q1 + q0;
    if (q2 > kMaxDenominator) return false;
    if (std::abs(r - p2 / q2) <= kRatioTol * std::abs(r)) return true;
    const double frac = x - a;
    if (frac <= 0.0) return true;
    x = 1.0 / frac;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
  }
  return false;
}

void require_window(const SampleWindow& w) {
  if (!(w.hi >= w.lo) || !(w.step > 0.0) || !std::isfinite(w.lo) || !std::isfinite(w.hi)) {
    std::ostringstream os;
    os << "sample window [" << w.lo << ", " << w.hi << "] step " << w.step << " is empty";
    throw Error(ErrorKind::EmptyWindow, os.str());
  }
}

/// sup_t (f(t + mu) - f(t)) / mu over all real t, bounded by amplitudes.
double difference_quotient_bound(const QuasiTrigSum& f, double mu) {
  double acc = 0.0;
  for (const auto& term : f.terms()) acc += term.amplitude() * std::abs(2.0 * std::sin(term.freq * mu / 2.0));
  return acc / mu;
}

}  // namespace

double TrigTerm::amplitude() const { return std::hypot(amp_sin, amp_cos); }

QuasiTrigSum::QuasiTrigSum(double c0, std::vector<TrigTerm> terms) : c0_(c0) {
  if (!std::isfinite(c0)) throw Error(ErrorKind::InvalidArgument, "trig sum constant must be finite");
  for (const auto& term : terms) {
    if (!(term.freq > 0.0) || !std::isfinite(term.freq) || !std::isfinite(term.amp_sin) ||
        !std::isfinite(term.amp_cos)) {
      throw Error(ErrorKind::InvalidArgument, "trig term needs finite amplitudes and freq > 0");
    }
  }
  std::sort(terms.begin(), terms.end(), [](const TrigTerm& a, const TrigTerm& b) { return a.freq < b.freq; });
  for (const auto& term : terms) {
    if (!terms_.empty() && terms_.back().freq == term.freq) {
      terms_.back().amp_sin += term.amp_sin;
      terms_.back().amp_cos += term.amp_cos;
    } else {
      terms_.push_back(term);
    }
  }
}

double QuasiTrigSum::eval(double t) const {
  double acc = c0_;
  for (const auto& term : terms_) {
    const double arg = term.freq * t;
    acc += term.amp_sin * std::sin(arg) + term.amp_cos * std::cos(arg);
  }
  return acc;
}

double QuasiTrigSum::derivative(double t) const {
  double acc = 0.0;
  for (const auto& term : terms_) {
    const double arg = term.freq * t;
    acc += term.freq * (term.amp_sin * std::cos(arg) - term.amp_cos * std::sin(arg));
  }
  return acc;
}

double QuasiTrigSum::amplitude_sum() const {
  double acc = 0.0;
  for (const auto& term : terms_) acc += term.amplitude();
  return acc;
}

double QuasiTrigSum::derivative_amplitude_sum() const {
  double acc = 0.0;
  for (const auto& term : terms_) acc += term.freq * term.amplitude();
  return acc;
}

ScalarFn QuasiTrigSum::as_fn() const {
  return [f = *this](double t) { return f.eval(t); };
}

BoundPair bounds(const QuasiTrigSum& f) {
  const double amp = f.amplitude_sum();
  if (f.c0() < amp) {
    std::ostringstream os;
    os << "c0 = " << f.c0() << " < amplitude sum " << amp << "; the function may change sign";
    throw Error(ErrorKind::SignIndefinite, os.str());
  }
  return {f.c0() - amp, f.c0() + amp};
}

bool bounds_are_exact(const QuasiTrigSum& f) {
  const auto& terms = f.terms();
  for (std::size_t i = 0; i < terms.size(); ++i) {
    for (std::size_t j = i + 1; j < terms.size(); ++j) {
      if (near_rational(terms[j].freq / terms[i].freq)) return false;
    }
  }
  return true;
}

DelayExtrema delay_extrema(std::span<const QuasiTrigSum> delays) {
  if (delays.empty()) throw Error(ErrorKind::InvalidArgument, "no delays given");
  DelayExtrema out{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& d : delays) {
    const BoundPair bp = bounds(d);
    if (!(bp.lower > 0.0)) {
      std::ostringstream os;
      os << "delay infimum " << bp.lower << " is not positive";
      throw Error(ErrorKind::SignIndefinite, os.str());
    }
    out.minus = std::min(out.minus, bp.lower);
    out.plus = std::max(out.plus, bp.upper);
  }
  return out;
}

double delta_derivative_sup(const QuasiTrigSum& f, const TimeScale& ts, const SampleWindow& window) {
  require_window(window);
  const auto pieces = ts.pieces(window.lo, window.hi);
  if (pieces.empty()) throw Error(ErrorKind::EmptyWindow, "sample window misses the time scale");

  double sup = -std::numeric_limits<double>::infinity();
  bool dense_seen = false;

  if (const auto* grid = std::get_if<UniformGrid>(&ts.kind())) {
    const double mu = grid->step;
    sup = difference_quotient_bound(f, mu);
    for (const Piece& p : pieces) {
      if (p.lo > window.hi) break;
      sup = std::max(sup, (f.eval(p.lo + mu) - f.eval(p.lo)) / mu);
    }
    return sup;
  }

  for (const Piece& p : pieces) {
    if (!p.is_point()) {
      const double a = std::max(p.lo, window.lo);
      const double b = std::min(p.hi, window.hi);
      if (b >= a) {
        dense_seen = true;
        const auto n = static_cast<long long>(std::floor((b - a) / window.step));
        for (long long k = 0; k <= n; ++k) sup = std::max(sup, f.derivative(a + static_cast<double>(k) * window.step));
      }
    }
    // The right endpoint of each component is right-scattered when a
    // successor exists.
    if (std::isfinite(p.hi) && p.hi <= window.hi && p.hi >= window.lo) {
      if (const auto nxt = ts.next_piece(p)) {
        const double mu = nxt->lo - p.hi;
        sup = std::max(sup, difference_quotient_bound(f, mu));
        sup = std::max(sup, (f.eval(nxt->lo) - f.eval(p.hi)) / mu);
      }
    }
  }
  if (dense_seen) sup = std::max(sup, f.derivative_amplitude_sum());
  if (!std::isfinite(sup)) sup = 0.0;
  return sup;
}

QuasiTrigSum shift(const QuasiTrigSum& f, double s) {
  std::vector<TrigTerm> terms;
  terms.reserve(f.terms().size());
  for (const auto& term : f.terms()) {
    const double c = std::cos(term.freq * s);
    const double sn = std::sin(term.freq * s);
    terms.push_back({term.amp_sin * c - term.amp_cos * sn, term.amp_sin * sn + term.amp_cos * c, term.freq});
  }
  return QuasiTrigSum(f.c0(), std::move(terms));
}

bool epsilon_translation_check(const QuasiTrigSum& f, double eps, double tau, const SampleWindow& window) {
  if (!(eps > 0.0)) throw Error(ErrorKind::InvalidArgument, "eps must be > 0");
  require_window(window);
  const auto n = static_cast<long long>(std::floor((window.hi - window.lo) / window.step));
  double sup = 0.0;
  for (long long k = 0; k <= n; ++k) {
    const double t = window.lo + static_cast<double>(k) * window.step;
    sup = std::max(sup, std::abs(f.eval(t + tau) - f.eval(t)));
  }
  return sup < eps;
}

}  // namespace lvts
