#include "lvts/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "json.hpp"
#include "lvts/error.hpp"

namespace lvts {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::ConfigParse, where + ": " + what);
}

void allow_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) parse_fail(where, "expected an object");
  const std::set<std::string> ok(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items()) {
    if (!ok.count(k)) parse_fail(where, "unknown key \"" + k + "\"");
  }
}

const json& need(const json& j, const char* key, const std::string& where) {
  const auto it = j.find(key);
  if (it == j.end()) parse_fail(where, std::string("missing \"") + key + "\"");
  return *it;
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) parse_fail(where, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) parse_fail(where, "number is not finite");
  return v;
}

double number_or(const json& j, const char* key, double fallback, const std::string& where) {
  const auto it = j.find(key);
  return it == j.end() ? fallback : number(*it, where + "." + key);
}

// --- coefficients -------------------------------------------------------------

QuasiTrigSum coef_from(const json& j, const std::string& where) {
  if (j.is_null()) return {};
  if (j.is_number()) return QuasiTrigSum(number(j, where));
  allow_keys(j, where, {"c0", "terms"});
  const double c0 = number(need(j, "c0", where), where + ".c0");
  std::vector<TrigTerm> terms;
  if (const auto it = j.find("terms"); it != j.end()) {
    if (!it->is_array()) parse_fail(where + ".terms", "expected an array");
    for (std::size_t k = 0; k < it->size(); ++k) {
      const json& t = (*it)[k];
      const std::string w = where + ".terms[" + std::to_string(k) + "]";
      allow_keys(t, w, {"sin", "cos", "freq"});
      terms.push_back({number_or(t, "sin", 0.0, w), number_or(t, "cos", 0.0, w), number(need(t, "freq", w), w + ".freq")});
    }
  }
  try {
    return QuasiTrigSum(c0, std::move(terms));
  } catch (const Error& e) {
    parse_fail(where, e.what());
  }
}

json coef_to(const QuasiTrigSum& f) {
  if (f.is_constant()) return f.c0();
  json terms = json::array();
  for (const auto& t : f.terms()) terms.push_back({{"sin", t.amp_sin}, {"cos", t.amp_cos}, {"freq", t.freq}});
  return {{"c0", f.c0()}, {"terms", terms}};
}

std::vector<QuasiTrigSum> coef_list(const json& j, const std::string& where) {
  if (!j.is_array()) parse_fail(where, "expected an array");
  std::vector<QuasiTrigSum> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(coef_from(j[k], where + "[" + std::to_string(k) + "]"));
  return out;
}

// --- time scale ---------------------------------------------------------------

TimeScale time_scale_from(const json& j) {
  const std::string where = "time_scale";
  if (!j.is_object()) parse_fail(where, "expected an object");
  const json& kind = need(j, "kind", where);
  if (!kind.is_string()) parse_fail(where + ".kind", "expected a string");
  const std::string k = kind.get<std::string>();
  try {
    if (k == "reals") {
      allow_keys(j, where, {"kind"});
      return TimeScale::reals();
    }
    if (k == "integers") {
      allow_keys(j, where, {"kind"});
      return TimeScale::integers();
    }
    if (k == "uniform_grid") {
      allow_keys(j, where, {"kind", "step", "anchor"});
      return TimeScale::uniform_grid(number(need(j, "step", where), where + ".step"), number_or(j, "anchor", 0.0, where));
    }
    if (k == "hybrid") {
      allow_keys(j, where, {"kind", "segments", "period"});
      const json& segs = need(j, "segments", where);
      if (!segs.is_array()) parse_fail(where + ".segments", "expected an array");
      std::vector<Segment> out;
      for (std::size_t s = 0; s < segs.size(); ++s) {
        const std::string w = where + ".segments[" + std::to_string(s) + "]";
        const json& seg = segs[s];
        if (seg.contains("interval")) {
          allow_keys(seg, w, {"interval"});
          const json& iv = seg["interval"];
          if (!iv.is_array() || iv.size() != 2) parse_fail(w, "interval needs [lo, hi]");
          out.emplace_back(ClosedInterval{number(iv[0], w), number(iv[1], w)});
        } else {
          allow_keys(seg, w, {"point"});
          out.emplace_back(IsolatedPoint{number(need(seg, "point", w), w + ".point")});
        }
      }
      std::optional<double> period;
      if (const auto it = j.find("period"); it != j.end() && !it->is_null()) period = number(*it, where + ".period");
      return TimeScale::hybrid(std::move(out), period);
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigParse) throw;
    parse_fail(where, e.what());
  }
  parse_fail(where + ".kind", "unknown kind \"" + k + "\"");
}

json time_scale_to(const TimeScale& ts) {
  return std::visit(
      [](const auto& k) -> json {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Reals>) {
          return {{"kind", "reals"}};
        } else if constexpr (std::is_same_v<K, UniformGrid>) {
          return {{"kind", "uniform_grid"}, {"step", k.step}, {"anchor", k.anchor}};
        } else {
          json segs = json::array();
          for (const auto& s : k.segments) {
            if (const auto* iv = std::get_if<ClosedInterval>(&s)) {
              segs.push_back({{"interval", {iv->lo, iv->hi}}});
            } else {
              segs.push_back({{"point", std::get<IsolatedPoint>(s).t}});
            }
          }
          json out = {{"kind", "hybrid"}, {"segments", segs}};
          out["period"] = k.period ? json(*k.period) : json(nullptr);
          return out;
        }
      },
      ts.kind());
}

// --- histories ---------------------------------------------------------------

InitialHistory history_from(const json& j, const std::string& where) {
  allow_keys(j, where, {"t0", "phi", "allow_negative"});
  InitialHistory h;
  h.t0 = number_or(j, "t0", 0.0, where);
  if (const auto it = j.find("allow_negative"); it != j.end()) {
    if (!it->is_boolean()) parse_fail(where + ".allow_negative", "expected a boolean");
    h.allow_negative = it->get<bool>();
  }
  const json& phi = need(j, "phi", where);
  if (!phi.is_array()) parse_fail(where + ".phi", "expected an array");
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const std::string w = where + ".phi[" + std::to_string(i) + "]";
    if (phi[i].is_number()) {
      h.phi.emplace_back(number(phi[i], w));
      continue;
    }
    if (!phi[i].is_array()) parse_fail(w, "expected a number or a list of [t, x] knots");
    std::vector<HistoryKnot> knots;
    for (const auto& kn : phi[i]) {
      if (!kn.is_array() || kn.size() != 2) parse_fail(w, "knot must be [t, x]");
      knots.push_back({number(kn[0], w), number(kn[1], w)});
    }
    try {
      h.phi.emplace_back(std::move(knots));
    } catch (const Error& e) {
      parse_fail(w, e.what());
    }
  }
  return h;
}

json history_to(const InitialHistory& h) {
  json phi = json::array();
  for (const auto& c : h.phi) {
    if (c.is_constant()) {
      phi.push_back(c.constant());
    } else {
      json knots = json::array();
      for (const auto& k : c.knots()) knots.push_back({k.t, k.x});
      phi.push_back(knots);
    }
  }
  return {{"t0", h.t0}, {"phi", phi}, {"allow_negative", h.allow_negative}};
}

RunConfig from_json(const json& j) {
  allow_keys(j, "config", {"schema_version", "time_scale", "a", "b", "c", "d", "tau", "delta", "histories", "simulation",
                           "audit", "output"});
  const json& ver = need(j, "schema_version", "config");
  if (!ver.is_number_integer() || ver.get<int>() != kSchemaVersion) {
    parse_fail("schema_version", "expected " + std::to_string(kSchemaVersion));
  }
  RunConfig cfg;
  MutualismSystem& sys = cfg.system;
  sys.ts = time_scale_from(need(j, "time_scale", "config"));
  sys.a = coef_list(need(j, "a", "config"), "a");
  sys.b = coef_list(need(j, "b", "config"), "b");
  sys.tau = coef_list(need(j, "tau", "config"), "tau");
  sys.delta = coef_list(need(j, "delta", "config"), "delta");
  const json& c = need(j, "c", "config");
  if (!c.is_array()) parse_fail("c", "expected an array of rows");
  for (std::size_t i = 0; i < c.size(); ++i) sys.c.push_back(coef_list(c[i], "c[" + std::to_string(i) + "]"));
  const json& d = need(j, "d", "config");
  if (!d.is_array()) parse_fail("d", "expected an array of rows");
  for (std::size_t i = 0; i < d.size(); ++i) {
    const std::string w = "d[" + std::to_string(i) + "]";
    if (!d[i].is_array()) parse_fail(w, "expected an array");
    std::vector<double> row;
    for (std::size_t k = 0; k < d[i].size(); ++k) {
      row.push_back(d[i][k].is_null() ? 0.0 : number(d[i][k], w + "[" + std::to_string(k) + "]"));
    }
    sys.d.push_back(std::move(row));
  }
  try {
    sys.validate();
  } catch (const Error& e) {
    parse_fail("system", e.what());
  }

  if (const auto it = j.find("histories"); it != j.end()) {
    if (!it->is_array()) parse_fail("histories", "expected an array");
    for (std::size_t k = 0; k < it->size(); ++k) {
      const std::string w = "histories[" + std::to_string(k) + "]";
      cfg.histories.push_back(history_from((*it)[k], w));
      try {
        cfg.histories.back().validate(sys.size());
      } catch (const Error& e) {
        parse_fail(w, e.what());
      }
    }
  }
  if (const auto it = j.find("simulation"); it != j.end()) {
    allow_keys(*it, "simulation", {"horizon", "dense_step", "grid_snap_tol", "record_stride"});
    cfg.sim.horizon = number_or(*it, "horizon", cfg.sim.horizon, "simulation");
    cfg.sim.dense_step = number_or(*it, "dense_step", cfg.sim.dense_step, "simulation");
    cfg.sim.grid_snap_tol = number_or(*it, "grid_snap_tol", cfg.sim.grid_snap_tol, "simulation");
    if (const auto rs = it->find("record_stride"); rs != it->end()) {
      if (!rs->is_number_unsigned() || rs->get<std::size_t>() == 0) parse_fail("simulation.record_stride", "expected a positive integer");
      cfg.sim.record_stride = rs->get<std::size_t>();
    }
    try {
      cfg.sim.validate();
    } catch (const Error& e) {
      parse_fail("simulation", e.what());
    }
  }
  cfg.audit.grid_snap_tol = cfg.sim.grid_snap_tol;
  if (const auto it = j.find("audit"); it != j.end()) {
    allow_keys(*it, "audit", {"window", "closure_samples"});
    if (const auto w = it->find("window"); w != it->end()) {
      allow_keys(*w, "audit.window", {"lo", "hi", "step"});
      cfg.audit.window.lo = number_or(*w, "lo", cfg.audit.window.lo, "audit.window");
      cfg.audit.window.hi = number_or(*w, "hi", cfg.audit.window.hi, "audit.window");
      cfg.audit.window.step = number_or(*w, "step", cfg.audit.window.step, "audit.window");
      if (!(cfg.audit.window.hi >= cfg.audit.window.lo) || !(cfg.audit.window.step > 0.0)) {
        parse_fail("audit.window", "needs lo <= hi and step > 0");
      }
    }
    if (const auto cs = it->find("closure_samples"); cs != it->end()) {
      if (!cs->is_number_unsigned()) parse_fail("audit.closure_samples", "expected a nonnegative integer");
      cfg.audit.closure_samples = cs->get<std::size_t>();
    }
  }
  if (const auto it = j.find("output"); it != j.end()) {
    allow_keys(*it, "output", {"csv", "abundance"});
    if (const auto p = it->find("csv"); p != it->end()) {
      if (!p->is_string()) parse_fail("output.csv", "expected a string");
      cfg.output.csv = p->get<std::string>();
    }
    if (const auto ab = it->find("abundance"); ab != it->end()) {
      if (!ab->is_boolean()) parse_fail("output.abundance", "expected a boolean");
      cfg.output.abundance = ab->get<bool>();
    }
  }
  return cfg;
}

// --- fixtures -----------------------------------------------------------------

QuasiTrigSum trig(double c0, double amp_sin, double amp_cos, double freq) {
  return QuasiTrigSum(c0, {{amp_sin, amp_cos, freq}});
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ConfigParse, e.what());
  }
  try {
    return from_json(j);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ConfigParse, e.what());
  }
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigParse, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& cfg) {
  const MutualismSystem& sys = cfg.system;
  auto list = [](const std::vector<QuasiTrigSum>& v) {
    json out = json::array();
    for (const auto& f : v) out.push_back(coef_to(f));
    return out;
  };
  json j;
  j["schema_version"] = kSchemaVersion;
  j["time_scale"] = time_scale_to(sys.ts);
  j["a"] = list(sys.a);
  j["b"] = list(sys.b);
  j["tau"] = list(sys.tau);
  j["delta"] = list(sys.delta);
  j["c"] = json::array();
  for (const auto& row : sys.c) j["c"].push_back(list(row));
  j["d"] = sys.d;
  j["histories"] = json::array();
  for (const auto& h : cfg.histories) j["histories"].push_back(history_to(h));
  j["simulation"] = {{"horizon", cfg.sim.horizon},
                     {"dense_step", cfg.sim.dense_step},
                     {"grid_snap_tol", cfg.sim.grid_snap_tol},
                     {"record_stride", cfg.sim.record_stride}};
  j["audit"] = {{"window", {{"lo", cfg.audit.window.lo}, {"hi", cfg.audit.window.hi}, {"step", cfg.audit.window.step}}},
                {"closure_samples", cfg.audit.closure_samples}};
  j["output"] = {{"csv", cfg.output.csv}, {"abundance", cfg.output.abundance}};
  return j.dump(2) + "\n";
}

RunConfig example_config(int which) {
  using std::numbers::sqrt2;
  using std::numbers::sqrt3;
  using std::numbers::pi;
  const double sqrt5 = std::sqrt(5.0);
  RunConfig cfg;
  MutualismSystem& s = cfg.system;
  if (which == 1) {
    s.ts = TimeScale::reals();
    s.a = {trig(0.7, -0.02, 0.0, sqrt2), trig(0.61, -0.02, 0.0, sqrt3)};
    s.b = {trig(0.58, 0.0, -0.01, sqrt2), trig(0.55, -0.01, 0.0, sqrt2)};
    s.tau = {trig(0.003, 0.0, -0.001, 1.0), trig(0.002, 0.001, 0.0, 1.0)};
    s.delta = {trig(0.004, 0.0, -0.002, 1.0), QuasiTrigSum(0.002)};
    s.c = {{trig(0.06, 0.05, 0.0, 2.0), trig(0.005, 0.0, 0.005, sqrt5)},
           {trig(0.15, 0.0, 0.02, sqrt3), trig(0.08, 0.02, 0.0, sqrt2)}};
    cfg.sim.horizon = 200.0;
  } else if (which == 2) {
    // (-1)^t on the integers is cos(pi t).
    s.ts = TimeScale::integers();
    s.a = {trig(0.3, -0.02, 0.0, sqrt2), trig(0.25, -0.02, 0.0, sqrt3)};
    s.b = {QuasiTrigSum(0.27), QuasiTrigSum(0.22)};
    s.tau = {trig(0.002, 0.0, 0.001, pi), QuasiTrigSum(0.001)};
    s.delta = {trig(0.003, 0.0, 0.001, pi), QuasiTrigSum(0.002)};
    s.c = {{trig(0.03, 0.02, 0.0, 2.0), trig(0.01, 0.0, 0.01, sqrt5)},
           {trig(0.006, 0.0, 0.004, sqrt3), trig(0.08, 0.02, 0.0, sqrt2)}};
    cfg.sim.horizon = 2000.0;
  } else {
    throw Error(ErrorKind::InvalidArgument, "example must be 1 or 2, got " + std::to_string(which));
  }
  s.d = {{0.0, 1.2}, {1.1, 0.0}};
  cfg.histories = {InitialHistory::constant(2, 0.1), InitialHistory::constant(2, 0.3)};
  cfg.audit.grid_snap_tol = cfg.sim.grid_snap_tol;
  return cfg;
}

}  // namespace lvts
