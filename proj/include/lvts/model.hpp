#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lvts/coeffs.hpp"
#include "lvts/timescale.hpp"

namespace lvts {

/// Delayed multispecies mutualism system in log-abundance form:
///
///   x_i^Delta(t) = a_i(t) - b_i(t) exp(x_i(t - tau_i(t)))
///                + sum_{j != i} c_ij(t) exp(x_j(t - delta_j(t)))
///                                 / (d_ij + exp(x_j(t - delta_j(t))))
///
/// c and d are stored as full n x n matrices; diagonal entries are ignored.
/// Construction checks shapes, finiteness, d_ij > 0 and nonnegative delays.
/// The sign/size hypotheses on the coefficients are audited by check_h1,
/// which reports failures instead of throwing.
struct MutualismSystem {
  TimeScale ts = TimeScale::reals();
  std::vector<QuasiTrigSum> a;
  std::vector<QuasiTrigSum> b;
  std::vector<std::vector<QuasiTrigSum>> c;
  std::vector<std::vector<double>> d;
  std::vector<QuasiTrigSum> tau;
  std::vector<QuasiTrigSum> delta;

  std::size_t size() const { return a.size(); }

  /// Throws InvalidArgument / SignIndefinite on a malformed system.
  void validate() const;

  friend bool operator==(const MutualismSystem& x, const MutualismSystem& y);
};

/// Every coefficient and delay translated by s (a member of the hull when s
/// is a translation number).
MutualismSystem translate(const MutualismSystem& sys, double s);

struct HistoryKnot {
  double t;
  double x;

  friend bool operator==(const HistoryKnot&, const HistoryKnot&) = default;
};

/// One species' initial function: a constant or a piecewise-linear table.
/// Tables are held constant outside their knot range.
class HistoryComponent {
 public:
  HistoryComponent(double constant = 0.0) : value_(constant) {}  // NOLINT: implicit by intent
  explicit HistoryComponent(std::vector<HistoryKnot> knots);

  double operator()(double t) const;
  bool is_constant() const { return std::holds_alternative<double>(value_); }
  double constant() const { return std::get<double>(value_); }
  const std::vector<HistoryKnot>& knots() const { return std::get<std::vector<HistoryKnot>>(value_); }
  double min_value() const;

  friend bool operator==(const HistoryComponent&, const HistoryComponent&) = default;

 private:
  std::variant<double, std::vector<HistoryKnot>> value_;
};

/// x_i(s) = phi_i(s) on [t0 - theta, t0] ∩ T.
struct InitialHistory {
  double t0 = 0.0;
  std::vector<HistoryComponent> phi;
  /// The log-scale initial condition asks for phi >= 0 and phi(t0) > 0;
  /// set to accept any finite history instead.
  bool allow_negative = false;

  /// Checks phi against the sign condition and the system size.
  void validate(std::size_t n) const;

  static InitialHistory constant(std::size_t n, double value, double t0 = 0.0, bool allow_negative = false);

  friend bool operator==(const InitialHistory&, const InitialHistory&) = default;
};

/// theta = max(tau^+, delta^+).
double theta(const MutualismSystem& sys);

// --- hypothesis audit ----------------------------------------------------

struct Witness {
  std::string name;       ///< offending quantity, e.g. "d_12"
  double value = 0.0;
  std::string condition;  ///< what it should satisfy, e.g. "d_12 > 1"
};

struct HypothesisResult {
  std::string id;
  bool pass = true;
  std::vector<Witness> witnesses;
  /// Informational remarks that do not affect the verdict.
  std::vector<std::string> notes;

  void fail(Witness w) {
    pass = false;
    witnesses.push_back(std::move(w));
  }
};

struct AuditOptions {
  SampleWindow window{};
  /// Sampled points for the closure test t - tau(t) in T.
  std::size_t closure_samples = 10000;
  /// Relative (to local graininess) distance within which a delayed time
  /// that misses a discrete time scale is accepted after snapping.
  double grid_snap_tol = 0.5;
};

/// Constants derived from the coefficients; everything the bound formulas
/// consume.
struct SystemConstants {
  std::size_t n = 0;
  std::vector<BoundPair> a, b;
  std::vector<std::vector<BoundPair>> c;  ///< diagonal left at {0, 0}
  std::vector<std::vector<double>> d;
  double tau_minus = 0.0, tau_plus = 0.0;
  double delta_minus = 0.0, delta_plus = 0.0;
  double tau_delta = 0.0, delta_delta = 0.0;
  double mu_bar = 0.0;
  /// False when some coefficient's amplitude-sum bounds are only
  /// conservative (commensurate frequencies).
  bool bounds_exact = true;

  double theta() const { return std::max(tau_plus, delta_plus); }
  /// a_i^u + sum_{j != i} c_ij^u
  double growth_upper(std::size_t i) const;
};

/// Throws SignIndefinite when a coefficient or delay is sign-indefinite.
SystemConstants compute_constants(const MutualismSystem& sys, const AuditOptions& opt = {});

HypothesisResult check_h1(const MutualismSystem& sys, const AuditOptions& opt = {});
HypothesisResult check_h2(const MutualismSystem& sys, const AuditOptions& opt = {});
HypothesisResult check_h2(const SystemConstants& k);
/// Regressivity and lower-bound conditions given upper permanence bounds xM.
HypothesisResult check_h3_regressivity(const SystemConstants& k, const std::vector<double>& xM);
HypothesisResult check_h3_regressivity(const MutualismSystem& sys, const std::vector<double>& xM,
                                       const AuditOptions& opt = {});

std::string species_label(const char* symbol, std::size_t i);
std::string species_label(const char* symbol, std::size_t i, std::size_t j);

}  // namespace lvts
