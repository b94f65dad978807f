#include "lvts/criteria.hpp"

#include <cmath>
#include <sstream>

#include "lvts/error.hpp"

namespace lvts {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, std::string(what) + " must be finite");
}

double finite_or_throw(double v, const char* what) {
  if (!std::isfinite(v)) throw Error(ErrorKind::NonFinite, std::string(what) + " is not finite");
  return v;
}

}  // namespace

double log_rate(double b, double mu_bar) {
  require_finite(b, "b");
  require_finite(mu_bar, "mu_bar");
  if (mu_bar < 0.0) throw Error(ErrorKind::InvalidArgument, "mu_bar must be >= 0");
  const double r = 1.0 - b * mu_bar;
  if (!(r > 0.0)) {
    std::ostringstream os;
    os << "1 - b mu_bar = " << r << " <= 0 (b = " << b << ", mu_bar = " << mu_bar << ")";
    throw Error(ErrorKind::NonRegressive, os.str());
  }
  if (mu_bar < kMuZero) return -b;
  return std::log1p(-b * mu_bar) / mu_bar;
}

double quad_root(double a, double b, double d) {
  require_finite(a, "a");
  require_finite(b, "b");
  require_finite(d, "d");
  if (!(a > 0.0) || b < 0.0 || d < 0.0) throw Error(ErrorKind::InvalidArgument, "quad_root needs a > 0, b >= 0, d >= 0");
  if (b == 0.0 && d == 0.0) throw Error(ErrorKind::DegenerateRoot, "x (a x - b) - d = 0 has no positive root when b = d = 0");
  const double disc = std::sqrt(b * b + 4.0 * a * d);
  return (b + disc) / (2.0 * a);
}

namespace {

void require_ab(double b, double a, double d) {
  require_finite(b, "b");
  require_finite(a, "a");
  require_finite(d, "d");
  if (!(a > 0.0)) throw Error(ErrorKind::InvalidArgument, "a must be > 0");
  if (d < 0.0) throw Error(ErrorKind::InvalidArgument, "d must be >= 0");
  if (b == 0.0 && d > 0.0) throw Error(ErrorKind::DivisionByZero, "d / b with b = 0");
  if (!(b > 0.0)) throw Error(ErrorKind::InvalidArgument, "b must be > 0");
}

}  // namespace

double lemma214_upper(double b, double a, double d, double tau_bar, double mu_bar) {
  require_ab(b, a, d);
  require_finite(tau_bar, "tau_bar");
  const double growth = std::exp(-tau_bar * log_rate(b, mu_bar));
  const double x_bar = quad_root(a, b, d);
  if (d == 0.0) return finite_or_throw(x_bar * growth, "M");
  return finite_or_throw(-d / b + (d / b + x_bar) * growth, "M");
}

double lemma214_lower(double b, double a, double N, double tau_bar) {
  require_finite(b, "b");
  require_finite(a, "a");
  require_finite(N, "N");
  require_finite(tau_bar, "tau_bar");
  if (!(a > 0.0) || !(b > 0.0) || !(N > 0.0)) throw Error(ErrorKind::InvalidArgument, "lemma214_lower needs a, b, N > 0");
  return (b / a) * std::exp(-a * N * tau_bar);
}

double lemma215_upper(double b, double a, double d, double tau_bar) {
  require_ab(b, a, d);
  require_finite(tau_bar, "tau_bar");
  const double x_bar = quad_root(a, b, d);
  if (d == 0.0) return finite_or_throw(x_bar * std::exp(b * tau_bar), "M~");
  return finite_or_throw(-d / b + (d / b + x_bar) * std::exp(b * tau_bar), "M~");
}

double lemma215_lower(double b, double a, double N_tilde, double tau_bar, double mu_bar) {
  require_finite(b, "b");
  require_finite(a, "a");
  require_finite(N_tilde, "N~");
  require_finite(tau_bar, "tau_bar");
  if (!(a > 0.0) || !(b > 0.0) || !(N_tilde > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "lemma215_lower needs a, b, N~ > 0");
  }
  return (b / a) * std::exp(tau_bar * log_rate(a * N_tilde, mu_bar));
}

LemmaBounds lemma_bounds(double b, double a, double d, double tau_bar, double mu_bar, double N, double N_tilde) {
  LemmaBounds out;
  out.x_bar = quad_root(a, b, d);
  out.M = lemma214_upper(b, a, d, tau_bar, mu_bar);
  out.m = lemma214_lower(b, a, N, tau_bar);
  out.M_tilde = lemma215_upper(b, a, d, tau_bar);
  out.m_tilde = lemma215_lower(b, a, N_tilde, tau_bar, mu_bar);
  return out;
}

PermanenceBounds permanence_bounds(const SystemConstants& k) {
  PermanenceBounds pb;
  pb.xM.resize(k.n);
  pb.xm.resize(k.n);
  for (std::size_t i = 0; i < k.n; ++i) {
    const double g = k.growth_upper(i);
    pb.xM[i] = std::log(lemma214_upper(g, k.b[i].lower, 0.0, k.tau_plus, k.mu_bar));
    pb.xm[i] = std::log(lemma215_lower(k.a[i].lower, k.b[i].upper, std::exp(pb.xM[i]), k.tau_plus, k.mu_bar));
  }
  return pb;
}

PermanenceBounds permanence_bounds(const MutualismSystem& sys, const AuditOptions& opt) {
  return permanence_bounds(compute_constants(sys, opt));
}

AttractivityMargins attractivity_margins(const SystemConstants& k, const PermanenceBounds& pb) {
  if (pb.xM.size() != k.n || pb.xm.size() != k.n) {
    throw Error(ErrorKind::InvalidArgument, "permanence bounds need one entry per species");
  }
  const double mu = k.mu_bar;
  const double self_delay = (2.0 * k.tau_plus - k.tau_minus) / (1.0 - k.tau_delta);
  const double cross_delay = (2.0 * k.delta_plus - k.delta_minus) / (1.0 - k.delta_delta);
  const double mixed_delta = (k.tau_plus + k.delta_plus - k.delta_minus) / (1.0 - k.delta_delta);
  const double mixed_tau = (k.tau_plus + k.delta_plus - k.tau_minus) / (1.0 - k.tau_delta);

  std::vector<double> crowd(k.n);
  for (std::size_t i = 0; i < k.n; ++i) crowd[i] = k.b[i].upper * std::exp(pb.xM[i]);

  AttractivityMargins out;
  out.gamma.resize(k.n);
  for (std::size_t i = 0; i < k.n; ++i) {
    const double B = crowd[i];
    const double amp_i = 2.0 * mu * B + 1.0;
    double g = k.b[i].lower * std::exp(pb.xm[i]) - 2.0 * mu * B * B - B * B * amp_i * self_delay;
    for (std::size_t j = 0; j < k.n; ++j) {
      if (j == i) continue;
      const double gain = k.c[i][j].upper * std::exp(pb.xM[j]);
      const double den = std::pow(k.d[i][j] + std::exp(pb.xm[j]), 4);
      g -= gain * gain * amp_i * cross_delay / den;
    }
    for (std::size_t j = 0; j < k.n; ++j) {
      if (j == i) continue;
      const double den = k.d[j][i] + std::exp(pb.xm[i]);
      const double lead = k.c[j][i].upper * std::exp(pb.xM[i]) * (2.0 * mu * crowd[j] + 1.0) / (den * den);
      g -= lead * (1.0 + crowd[j] * mixed_delta + std::exp(pb.xM[i]) * k.b[i].upper * mixed_tau);
    }
    out.gamma[i] = g;
  }
  return out;
}

AttractivityMargins attractivity_margins(const MutualismSystem& sys, const PermanenceBounds& pb,
                                         const AuditOptions& opt) {
  return attractivity_margins(compute_constants(sys, opt), pb);
}

HypothesisResult check_h4(const AttractivityMargins& g) {
  HypothesisResult out;
  out.id = "H4";
  for (std::size_t i = 0; i < g.gamma.size(); ++i) {
    if (!(g.gamma[i] > 0.0)) out.fail({species_label("gamma", i), g.gamma[i], species_label("gamma", i) + " > 0"});
  }
  return out;
}

namespace {

HypothesisResult blocked(const char* id, const std::string& why) {
  HypothesisResult r;
  r.id = id;
  r.fail({"prerequisite", 0.0, why});
  return r;
}

}  // namespace

HypothesisReport audit(const MutualismSystem& sys, const AuditOptions& opt) {
  HypothesisReport rep;
  rep.h1 = check_h1(sys, opt);
  try {
    rep.constants = compute_constants(sys, opt);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SignIndefinite) throw;
    rep.h2 = blocked("H2", e.what());
    rep.h3 = blocked("H3", e.what());
    rep.h4 = blocked("H4", e.what());
    return rep;
  }
  const SystemConstants& k = *rep.constants;
  rep.theta = k.theta();
  rep.h2 = check_h2(k);

  rep.h3.id = "H3";
  for (std::size_t i = 0; i < k.n; ++i) {
    const double r = 1.0 - k.mu_bar * k.growth_upper(i);
    if (!(r > 0.0)) {
      rep.h3.fail({"1 - mu_bar (a_" + std::to_string(i + 1) + "^u + sum c^u)", r, "-(a^u + sum c^u) positively regressive"});
    }
  }
  if (!rep.h3.pass) {
    rep.h4 = blocked("H4", "permanence bounds undefined");
    return rep;
  }
  rep.bounds = permanence_bounds(k);
  rep.h3 = check_h3_regressivity(k, rep.bounds->xM);
  if (!rep.h3.pass) {
    rep.h4 = blocked("H4", "H3 fails");
    return rep;
  }
  if (!rep.h2.pass) {
    rep.h4 = blocked("H4", "H2 fails; delay denominators are not positive");
    return rep;
  }
  rep.margins = attractivity_margins(k, *rep.bounds);
  rep.h4 = check_h4(*rep.margins);
  return rep;
}

}  // namespace lvts
