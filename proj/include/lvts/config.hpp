#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "lvts/model.hpp"
#include "lvts/simulator.hpp"

namespace lvts {

inline constexpr int kSchemaVersion = 1;

struct OutputSpec {
  /// Trajectory CSV path; empty means none configured.
  std::string csv;
  bool abundance = false;

  friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

/// Everything one CLI invocation needs, loaded from a JSON document.
///
///   {
///     "schema_version": 1,
///     "time_scale": {"kind": "reals"}
///                 | {"kind": "uniform_grid", "step": 1, "anchor": 0}
///                 | {"kind": "hybrid", "segments": [{"interval": [0, 1]}, {"point": 2}], "period": 3},
///     "a": [coef, ...], "b": [...], "tau": [...], "delta": [...],
///     "c": [[coef, ...], ...], "d": [[number, ...], ...],
///     "histories": [{"t0": 0, "phi": [0.1, [[t, x], ...]], "allow_negative": false}],
///     "simulation": {"horizon": 200, "dense_step": 0.001, "grid_snap_tol": 0.5, "record_stride": 1},
///     "audit": {"window": {"lo": 0, "hi": 2000, "step": 0.001}, "closure_samples": 10000},
///     "output": {"csv": "run.csv", "abundance": false}
///   }
///
/// coef is a number or {"c0": x, "terms": [{"sin": s, "cos": c, "freq": w}]}.
/// Diagonal entries of c and d may be null; they are never read.
struct RunConfig {
  MutualismSystem system;
  std::vector<InitialHistory> histories;
  SimOptions sim;
  AuditOptions audit;
  OutputSpec output;
};

/// Throws ConfigParse on malformed input or a structurally invalid system.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& cfg);

/// Built-in two-species fixtures: 1 on the reals, 2 on the integers.
RunConfig example_config(int which);

}  // namespace lvts
