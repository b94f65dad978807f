#pragma once

#include <vector>

#include "lvts/model.hpp"

namespace lvts {

/// Below this graininess the log(1 - b mu)/mu factor takes its mu -> 0 limit.
inline constexpr double kMuZero = 1e-12;

/// log(1 - b mu) / mu, or -b when mu is (numerically) zero. Throws
/// NonRegressive when 1 - b mu <= 0.
double log_rate(double b, double mu_bar);

/// Positive root of x (a x - b) - d = 0.
double quad_root(double a, double b, double d);

/// Upper bound for solutions of x^Delta <= x^sigma(b - a x) + d with delay
/// tau_bar on a time scale of graininess at most mu_bar.
double lemma214_upper(double b, double a, double d, double tau_bar, double mu_bar);
/// (b/a) exp(-a N tau_bar)
double lemma214_lower(double b, double a, double N, double tau_bar);
double lemma215_upper(double b, double a, double d, double tau_bar);
/// (b/a) exp(tau_bar log(1 - a N~ mu_bar) / mu_bar)
double lemma215_lower(double b, double a, double N_tilde, double tau_bar, double mu_bar);

/// The four bound constants for one parameter set.
struct LemmaBounds {
  double M = 0.0;
  double m = 0.0;
  double M_tilde = 0.0;
  double m_tilde = 0.0;
  double x_bar = 0.0;
};

LemmaBounds lemma_bounds(double b, double a, double d, double tau_bar, double mu_bar, double N, double N_tilde);

struct PermanenceBounds {
  std::vector<double> xM;
  std::vector<double> xm;
};

/// xM_i = ln[g_i / b_i^l exp(-tau^+ L(g_i))], g_i = a_i^u + sum c_ij^u;
/// xm_i = ln[a_i^l / b_i^u exp(tau^+ L(b_i^u e^{xM_i}))].
PermanenceBounds permanence_bounds(const SystemConstants& k);
PermanenceBounds permanence_bounds(const MutualismSystem& sys, const AuditOptions& opt = {});

struct AttractivityMargins {
  std::vector<double> gamma;
};

AttractivityMargins attractivity_margins(const SystemConstants& k, const PermanenceBounds& pb);
AttractivityMargins attractivity_margins(const MutualismSystem& sys, const PermanenceBounds& pb,
                                         const AuditOptions& opt = {});

/// gamma_i > 0 for every species, with no slack.
HypothesisResult check_h4(const AttractivityMargins& g);

struct HypothesisReport {
  HypothesisResult h1, h2, h3, h4;
  /// Empty when a coefficient is sign-indefinite.
  std::optional<SystemConstants> constants;
  std::optional<PermanenceBounds> bounds;
  std::optional<AttractivityMargins> margins;
  double theta = 0.0;

  bool all_pass() const { return h1.pass && h2.pass && h3.pass && h4.pass; }
};

/// Full audit. Failures land in the report; only structural errors throw.
HypothesisReport audit(const MutualismSystem& sys, const AuditOptions& opt = {});

}  // namespace lvts
