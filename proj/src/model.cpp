#include "lvts/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "lvts/error.hpp"

namespace lvts {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

void require(bool cond, const std::string& msg) {
  if (!cond) throw Error(ErrorKind::InvalidArgument, msg);
}

/// Lower bound of a coefficient, or nullopt when it is sign-indefinite.
std::optional<BoundPair> try_bounds(const QuasiTrigSum& f) {
  try {
    return bounds(f);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SignIndefinite) throw;
    return std::nullopt;
  }
}

/// Points of T spread across the window, at most `count` of them.
std::vector<double> sample_points(const TimeScale& ts, const SampleWindow& w, std::size_t count) {
  std::vector<double> out;
  if (count == 0) return out;
  if (const auto* g = std::get_if<UniformGrid>(&ts.kind())) {
    const double first = g->anchor + std::ceil((w.lo - g->anchor) / g->step) * g->step;
    for (std::size_t k = 0; k < count; ++k) {
      const double t = first + static_cast<double>(k) * g->step;
      if (t > w.hi + membership_tolerance(w.hi)) break;
      out.push_back(t);
    }
    return out;
  }
  std::set<double> seen;
  const double span = w.hi - w.lo;
  for (std::size_t k = 0; k < count; ++k) {
    const double raw = w.lo + span * static_cast<double>(k) / static_cast<double>(std::max<std::size_t>(count - 1, 1));
    const auto t = ts.nearest(raw);
    if (t && *t >= w.lo - membership_tolerance(w.lo) && *t <= w.hi + membership_tolerance(w.hi)) seen.insert(*t);
  }
  out.assign(seen.begin(), seen.end());
  return out;
}

}  // namespace

std::string species_label(const char* symbol, std::size_t i) { return std::string(symbol) + "_" + std::to_string(i + 1); }

std::string species_label(const char* symbol, std::size_t i, std::size_t j) {
  return std::string(symbol) + "_" + std::to_string(i + 1) + std::to_string(j + 1);
}

// --- MutualismSystem ----------------------------------------------------------

void MutualismSystem::validate() const {
  const std::size_t n = a.size();
  require(n >= 2, "a mutualism system needs at least two species");
  require(b.size() == n && tau.size() == n && delta.size() == n, "a, b, tau, delta must all have n entries");
  require(c.size() == n && d.size() == n, "c and d must be n x n");
  for (std::size_t i = 0; i < n; ++i) {
    require(c[i].size() == n && d[i].size() == n, "c and d must be n x n");
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      require(std::isfinite(d[i][j]) && d[i][j] > 0.0, species_label("d", i, j) + " must be finite and positive");
    }
  }
  // Delays must be nonnegative everywhere; bounds() raises SignIndefinite
  // when that cannot be guaranteed.
  for (const auto& f : tau) (void)bounds(f);
  for (const auto& f : delta) (void)bounds(f);
}

bool operator==(const MutualismSystem& x, const MutualismSystem& y) {
  return x.ts == y.ts && x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d && x.tau == y.tau && x.delta == y.delta;
}

MutualismSystem translate(const MutualismSystem& sys, double s) {
  MutualismSystem out = sys;
  auto shift_all = [s](std::vector<QuasiTrigSum>& v) {
    for (auto& f : v) f = shift(f, s);
  };
  shift_all(out.a);
  shift_all(out.b);
  shift_all(out.tau);
  shift_all(out.delta);
  for (auto& row : out.c) shift_all(row);
  return out;
}

// --- history -------------------------------------------------------------------

HistoryComponent::HistoryComponent(std::vector<HistoryKnot> knots) {
  require(!knots.empty(), "history table needs at least one knot");
  for (std::size_t k = 0; k < knots.size(); ++k) {
    require(std::isfinite(knots[k].t) && std::isfinite(knots[k].x), "history knots must be finite");
    if (k > 0) require(knots[k].t > knots[k - 1].t, "history knots must have strictly increasing times");
  }
  value_ = std::move(knots);
}

double HistoryComponent::operator()(double t) const {
  if (const auto* c = std::get_if<double>(&value_)) return *c;
  const auto& kn = std::get<std::vector<HistoryKnot>>(value_);
  if (t <= kn.front().t) return kn.front().x;
  if (t >= kn.back().t) return kn.back().x;
  const auto it = std::upper_bound(kn.begin(), kn.end(), t, [](double v, const HistoryKnot& k) { return v < k.t; });
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double w = (t - lo.t) / (hi.t - lo.t);
  return lo.x + w * (hi.x - lo.x);
}

double HistoryComponent::min_value() const {
  if (const auto* c = std::get_if<double>(&value_)) return *c;
  const auto& kn = std::get<std::vector<HistoryKnot>>(value_);
  return std::min_element(kn.begin(), kn.end(), [](const auto& p, const auto& q) { return p.x < q.x; })->x;
}

void InitialHistory::validate(std::size_t n) const {
  require(phi.size() == n, "history needs one component per species");
  require(std::isfinite(t0), "history t0 must be finite");
  for (std::size_t i = 0; i < n; ++i) {
    if (phi[i].is_constant()) require(std::isfinite(phi[i].constant()), "history values must be finite");
    if (allow_negative) continue;
    require(phi[i].min_value() >= 0.0, species_label("phi", i) + " must be >= 0 on the initial window");
    require(phi[i](t0) > 0.0, species_label("phi", i) + "(t0) must be > 0");
  }
}

InitialHistory InitialHistory::constant(std::size_t n, double value, double t0, bool allow_negative) {
  InitialHistory h;
  h.t0 = t0;
  h.phi.assign(n, HistoryComponent(value));
  h.allow_negative = allow_negative;
  return h;
}

double theta(const MutualismSystem& sys) {
  const DelayExtrema t = delay_extrema(sys.tau);
  const DelayExtrema d = delay_extrema(sys.delta);
  return std::max(t.plus, d.plus);
}

// --- constants -------------------------------------------------------------------

double SystemConstants::growth_upper(std::size_t i) const {
  double g = a[i].upper;
  for (std::size_t j = 0; j < n; ++j) {
    if (j != i) g += c[i][j].upper;
  }
  return g;
}

SystemConstants compute_constants(const MutualismSystem& sys, const AuditOptions& opt) {
  sys.validate();
  SystemConstants k;
  k.n = sys.size();
  k.d = sys.d;
  k.c.assign(k.n, std::vector<BoundPair>(k.n));
  auto note_exact = [&](const QuasiTrigSum& f) { k.bounds_exact = k.bounds_exact && bounds_are_exact(f); };
  for (std::size_t i = 0; i < k.n; ++i) {
    k.a.push_back(bounds(sys.a[i]));
    k.b.push_back(bounds(sys.b[i]));
    note_exact(sys.a[i]);
    note_exact(sys.b[i]);
    for (std::size_t j = 0; j < k.n; ++j) {
      if (i == j) continue;
      k.c[i][j] = bounds(sys.c[i][j]);
      note_exact(sys.c[i][j]);
    }
  }
  constexpr double inf = std::numeric_limits<double>::infinity();
  k.tau_minus = k.delta_minus = inf;
  k.tau_plus = k.delta_plus = -inf;
  k.tau_delta = k.delta_delta = -inf;
  for (std::size_t i = 0; i < k.n; ++i) {
    const BoundPair t = bounds(sys.tau[i]);
    const BoundPair d = bounds(sys.delta[i]);
    note_exact(sys.tau[i]);
    note_exact(sys.delta[i]);
    k.tau_minus = std::min(k.tau_minus, t.lower);
    k.tau_plus = std::max(k.tau_plus, t.upper);
    k.delta_minus = std::min(k.delta_minus, d.lower);
    k.delta_plus = std::max(k.delta_plus, d.upper);
    k.tau_delta = std::max(k.tau_delta, delta_derivative_sup(sys.tau[i], sys.ts, opt.window));
    k.delta_delta = std::max(k.delta_delta, delta_derivative_sup(sys.delta[i], sys.ts, opt.window));
  }
  k.mu_bar = sys.ts.graininess_sup();
  return k;
}

// --- (H1) ---------------------------------------------------------------------------

namespace {

void check_closure(const MutualismSystem& sys, const AuditOptions& opt, HypothesisResult& out) {
  if (sys.ts.is_reals()) {
    out.notes.push_back("closure t - tau(t) in T holds exactly on the reals");
    return;
  }
  const auto pts = sample_points(sys.ts, opt.window, opt.closure_samples);
  double max_snap = 0.0;
  std::size_t snapped = 0;
  bool failed = false;
  auto probe = [&](const QuasiTrigSum& delay, const std::string& label, double t) {
    const double q = t - delay.eval(t);
    if (sys.ts.contains(q)) return;
    const auto gap = sys.ts.gap_around(q);
    if (gap) {
      const double dist = std::min(q - gap->first, gap->second - q);
      if (dist <= opt.grid_snap_tol * (gap->second - gap->first)) {
        ++snapped;
        max_snap = std::max(max_snap, dist);
        return;
      }
    }
    if (!failed) out.fail({"t - " + label + "(t) at t=" + fmt(t), q, "t - " + label + "(t) in T"});
    failed = true;
  };
  for (double t : pts) {
    for (std::size_t i = 0; i < sys.size(); ++i) {
      probe(sys.tau[i], species_label("tau", i), t);
      probe(sys.delta[i], species_label("delta", i), t);
    }
  }
  if (failed) return;
  std::ostringstream os;
  if (snapped == 0) {
    os << "closure t - tau(t) in T: sampled-pass on " << pts.size() << " points";
  } else {
    os << "closure t - tau(t) in T: sampled-pass after grid snap on " << pts.size()
       << " points (" << snapped << " delayed times snapped, max snap distance " << fmt(max_snap) << ")";
  }
  out.notes.push_back(os.str());
}

}  // namespace

HypothesisResult check_h1(const MutualismSystem& sys, const AuditOptions& opt) {
  sys.validate();
  HypothesisResult out;
  out.id = "H1";
  const std::size_t n = sys.size();

  auto positive_lower = [&](const QuasiTrigSum& f, const std::string& label) {
    const auto bp = try_bounds(f);
    if (!bp) {
      out.fail({label, f.c0() - f.amplitude_sum(), label + " > 0 (coefficient may change sign)"});
    } else if (!(bp->lower > 0.0)) {
      out.fail({label, bp->lower, label + " > 0"});
    }
  };
  for (std::size_t i = 0; i < n; ++i) {
    positive_lower(sys.a[i], species_label("a", i) + "^l");
    positive_lower(sys.b[i], species_label("b", i) + "^l");
  }
  // Mutualism gains: nonnegative and not identically zero. An infimum of
  // exactly zero is accepted and noted.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const std::string label = species_label("c", i, j);
      const auto bp = try_bounds(sys.c[i][j]);
      if (!bp) {
        out.fail({label + "^l", sys.c[i][j].c0() - sys.c[i][j].amplitude_sum(), label + " >= 0 (may change sign)"});
      } else if (!(bp->upper > 0.0)) {
        out.fail({label + "^u", bp->upper, label + " not identically zero"});
      } else if (!(bp->lower > 0.0)) {
        out.notes.push_back(label + "^l = " + fmt(bp->lower) + ": infimum reaches zero; accepted as nonnegative");
      }
    }
  }
  double tau_minus = std::numeric_limits<double>::infinity();
  double delta_minus = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    tau_minus = std::min(tau_minus, bounds(sys.tau[i]).lower);
    delta_minus = std::min(delta_minus, bounds(sys.delta[i]).lower);
  }
  if (!(tau_minus > 0.0)) out.fail({"tau^-", tau_minus, "tau^- > 0"});
  if (!(delta_minus > 0.0)) out.fail({"delta^-", delta_minus, "delta^- > 0"});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && !(sys.d[i][j] > 1.0)) {
        const std::string label = species_label("d", i, j);
        out.fail({label, sys.d[i][j], label + " > 1"});
      }
    }
  }
  check_closure(sys, opt, out);
  return out;
}

// --- (H2) ---------------------------------------------------------------------------

HypothesisResult check_h2(const MutualismSystem& sys, const AuditOptions& opt) {
  sys.validate();
  HypothesisResult out;
  out.id = "H2";
  double tau_delta = -std::numeric_limits<double>::infinity();
  double delta_delta = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < sys.size(); ++i) {
    tau_delta = std::max(tau_delta, delta_derivative_sup(sys.tau[i], sys.ts, opt.window));
    delta_delta = std::max(delta_delta, delta_derivative_sup(sys.delta[i], sys.ts, opt.window));
  }
  if (!(1.0 - tau_delta > 0.0)) out.fail({"tau^Delta", tau_delta, "1 - tau^Delta > 0"});
  if (!(1.0 - delta_delta > 0.0)) out.fail({"delta^Delta", delta_delta, "1 - delta^Delta > 0"});
  return out;
}

HypothesisResult check_h2(const SystemConstants& k) {
  HypothesisResult out;
  out.id = "H2";
  if (!(1.0 - k.tau_delta > 0.0)) out.fail({"tau^Delta", k.tau_delta, "1 - tau^Delta > 0"});
  if (!(1.0 - k.delta_delta > 0.0)) out.fail({"delta^Delta", k.delta_delta, "1 - delta^Delta > 0"});
  return out;
}

// --- (H3) regressivity -------------------------------------------------------

HypothesisResult check_h3_regressivity(const SystemConstants& k, const std::vector<double>& xM) {
  if (xM.size() != k.n) throw Error(ErrorKind::InvalidArgument, "xM needs one entry per species");
  HypothesisResult out;
  out.id = "H3";
  for (std::size_t i = 0; i < k.n; ++i) {
    const double growth = k.growth_upper(i);
    const double r_growth = 1.0 - k.mu_bar * growth;
    if (!(r_growth > 0.0)) {
      out.fail({"1 - mu_bar (a_" + std::to_string(i + 1) + "^u + sum c^u)", r_growth, "-(a^u + sum c^u) positively regressive"});
    }
    const double crowd = k.b[i].upper * std::exp(xM[i]);
    const double r_crowd = 1.0 - k.mu_bar * crowd;
    if (!(r_crowd > 0.0)) {
      out.fail({"1 - mu_bar b_" + std::to_string(i + 1) + "^u e^{xM}", r_crowd, "-b^u e^{xM} positively regressive"});
      continue;
    }
    const double lhs = k.a[i].lower * std::exp(k.tau_plus * cylinder(k.mu_bar, -crowd));
    if (!(lhs > k.b[i].upper)) {
      out.fail({species_label("a", i) + "^l exp{tau^+ xi(-b^u e^{xM})} - " + species_label("b", i) + "^u",
                lhs - k.b[i].upper, "> 0"});
    }
  }
  return out;
}

HypothesisResult check_h3_regressivity(const MutualismSystem& sys, const std::vector<double>& xM,
                                       const AuditOptions& opt) {
  return check_h3_regressivity(compute_constants(sys, opt), xM);
}

}  // namespace lvts
