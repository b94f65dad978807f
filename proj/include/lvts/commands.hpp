#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>

#include "lvts/config.hpp"

namespace lvts {

enum class Format { Text, Structured };

/// Process exit statuses.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitError = 2;

inline constexpr double kConvergeThreshold = 1e-3;
inline constexpr double kPermanenceSlack = 0.05;
inline constexpr double kExampleTolerance = 0.005;

/// Reference values for the built-in fixtures, in the order
/// x1^M, x1^m, x2^M, x2^m, gamma_1, gamma_2.
std::array<double, 6> example_reference(int which);

/// Hypothesis audit, constants, permanence bounds and margins.
int cmd_check(const RunConfig& cfg, Format fmt, std::ostream& out);
/// Integrates every configured history, writes CSV, compares tails with the
/// permanence window. `csv_path` overrides the configured output path.
int cmd_simulate(const RunConfig& cfg, Format fmt, std::ostream& out,
                 const std::optional<std::string>& csv_path = std::nullopt);
/// Integrates the first two histories concurrently and reports divergence.
int cmd_converge(const RunConfig& cfg, Format fmt, std::ostream& out, double threshold = kConvergeThreshold);
/// Throws InvalidArgument unless which is 1 or 2.
int cmd_verify_example(int which, Format fmt, std::ostream& out);

}  // namespace lvts
