#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "circuit_models.hpp"
#include "threshold_search.hpp"

namespace excitability {

class config_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Spacing { Linear, Log };

struct GridSpec {
  Spacing spacing = Spacing::Linear;
  double lo = 0.0;
  double hi = 1.0;
  std::size_t count = 2;

  std::vector<double> nodes() const {
    return spacing == Spacing::Linear ? linear_grid(lo, hi, count) : log_grid(lo, hi, count);
  }
  bool operator==(const GridSpec&) const = default;
};

enum class AnsatzFamily { Exponential, Biexponential };

struct InhibitorySettings {
  std::vector<double> inhibition;        // B
  std::vector<double> inhibition_rates;  // beta
  GridSpec rates;                        // alpha of the excitatory component
  GridSpec terminals;                    // v(0)
  bool operator==(const InhibitorySettings&) const = default;
};

struct HoldProbeSettings {
  std::vector<double> holds{1.0, 2.0, 4.0, 8.0};
  double rise_rate = 0.0;
  bool operator==(const HoldProbeSettings&) const = default;
};

struct Tolerances {
  double rel_tol = 1e-6;
  double refine_tol = 1e-4;
  double steps_per_timescale = 50.0;
  std::size_t max_golden_iterations = 200;
  bool operator==(const Tolerances&) const = default;

  SearchTolerances search() const { return {{rel_tol, steps_per_timescale}, refine_tol, max_golden_iterations}; }
};

struct ExperimentConfig {
  std::string name;
  ModelSpec model;
  AnsatzFamily ansatz = AnsatzFamily::Exponential;
  GridSpec amplitudes;
  GridSpec rates{Spacing::Log, 0.1, 10.0, 20};
  std::optional<InhibitorySettings> inhibitory;
  std::optional<HoldProbeSettings> hold_probe;
  Tolerances tolerances;
  std::string output_dir = "out";
  std::size_t workers = 1;
  bool dump_trajectories = false;

  bool operator==(const ExperimentConfig&) const = default;
};

// ---------------------------------------------------------------------------
// JSON mapping
// ---------------------------------------------------------------------------

namespace detail {

using nlohmann::json;

template <class T>
T get_field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw config_error(where + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw config_error(where + "." + key + ": " + e.what());
  }
}

inline std::size_t get_count(const json& j, const char* key, const std::string& where) {
  if (j.is_object() && j.contains(key) && !j.at(key).is_number_unsigned())
    throw config_error(where + "." + key + ": must be a nonnegative integer");
  return get_field<std::size_t>(j, key, where);
}

template <class T>
T get_or(const json& j, const char* key, T fallback, const std::string& where) {
  return j.contains(key) ? get_field<T>(j, key, where) : fallback;
}

inline json spacing_json(Spacing s) { return s == Spacing::Linear ? "linear" : "log"; }

inline Spacing parse_spacing(const std::string& s, const std::string& where) {
  if (s == "linear") return Spacing::Linear;
  if (s == "log") return Spacing::Log;
  throw config_error(where + ": spacing must be 'linear' or 'log', got '" + s + "'");
}

inline json grid_json(const GridSpec& g) {
  return {{"spacing", spacing_json(g.spacing)}, {"lo", g.lo}, {"hi", g.hi}, {"count", g.count}};
}

inline GridSpec parse_grid(const json& j, const std::string& where) {
  GridSpec g;
  g.spacing = parse_spacing(get_field<std::string>(j, "spacing", where), where);
  g.lo = get_field<double>(j, "lo", where);
  g.hi = get_field<double>(j, "hi", where);
  g.count = get_count(j, "count", where);
  return g;
}

inline json model_json(const ModelSpec& spec) {
  return std::visit(
      [](const auto& p) -> json {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, LinearRCParams>) {
          return {{"type", "linear-rc"}, {"C", p.C}, {"R", p.R}};
        } else if constexpr (std::is_same_v<P, CubicRCParams>) {
          return {{"type", "cubic-rc"}, {"C", p.C},        {"v_a", p.resistor.v_a},
                  {"v_b", p.resistor.v_b}, {"v_c", p.resistor.v_c}, {"k", p.resistor.k}};
        } else if constexpr (std::is_same_v<P, FHNParams>) {
          return {{"type", "fitzhugh-nagumo"}, {"epsilon", p.epsilon}, {"gamma", p.gamma}, {"v_b", p.v_b}};
        } else {
          return {{"type", "hodgkin-huxley"}, {"C", p.C},       {"g_na", p.g_na}, {"g_k", p.g_k},
                  {"g_l", p.g_l},            {"v_na", p.v_na}, {"v_k", p.v_k},   {"v_l", p.v_l}};
        }
      },
      spec);
}

inline ModelSpec parse_model(const json& j) {
  const std::string w = "model";
  const auto type = get_field<std::string>(j, "type", w);
  if (type == "linear-rc") {
    LinearRCParams p;
    p.C = get_or(j, "C", p.C, w);
    p.R = get_or(j, "R", p.R, w);
    return p;
  }
  if (type == "cubic-rc") {
    CubicRCParams p;
    p.C = get_or(j, "C", p.C, w);
    p.resistor.v_a = get_or(j, "v_a", p.resistor.v_a, w);
    p.resistor.v_b = get_or(j, "v_b", p.resistor.v_b, w);
    p.resistor.v_c = get_or(j, "v_c", p.resistor.v_c, w);
    p.resistor.k = get_or(j, "k", p.resistor.k, w);
    return p;
  }
  if (type == "fitzhugh-nagumo") {
    FHNParams p;
    p.epsilon = get_or(j, "epsilon", p.epsilon, w);
    p.gamma = get_or(j, "gamma", p.gamma, w);
    p.v_b = get_or(j, "v_b", p.v_b, w);
    return p;
  }
  if (type == "hodgkin-huxley") {
    HHParams p = HHParams::standard();
    p.C = get_or(j, "C", p.C, w);
    p.g_na = get_or(j, "g_na", p.g_na, w);
    p.g_k = get_or(j, "g_k", p.g_k, w);
    p.g_l = get_or(j, "g_l", p.g_l, w);
    p.v_na = get_or(j, "v_na", p.v_na, w);
    p.v_k = get_or(j, "v_k", p.v_k, w);
    p.v_l = get_or(j, "v_l", p.v_l, w);
    return p;
  }
  throw config_error("model.type: unknown model '" + type + "'");
}

}  // namespace detail

inline nlohmann::json to_json(const ExperimentConfig& c) {
  using detail::grid_json;
  nlohmann::json j;
  j["name"] = c.name;
  j["model"] = detail::model_json(c.model);
  j["ansatz"] = c.ansatz == AnsatzFamily::Exponential ? "exponential" : "biexponential";
  j["amplitudes"] = grid_json(c.amplitudes);
  j["rates"] = grid_json(c.rates);
  if (c.inhibitory) {
    j["inhibitory"] = {{"B", c.inhibitory->inhibition},
                       {"beta", c.inhibitory->inhibition_rates},
                       {"rates", grid_json(c.inhibitory->rates)},
                       {"terminals", grid_json(c.inhibitory->terminals)}};
  }
  if (c.hold_probe) j["hold_probe"] = {{"holds", c.hold_probe->holds}, {"rise_rate", c.hold_probe->rise_rate}};
  j["tolerances"] = {{"rel_tol", c.tolerances.rel_tol},
                     {"refine_tol", c.tolerances.refine_tol},
                     {"steps_per_timescale", c.tolerances.steps_per_timescale},
                     {"max_golden_iterations", c.tolerances.max_golden_iterations}};
  j["output_dir"] = c.output_dir;
  j["workers"] = c.workers;
  j["dump_trajectories"] = c.dump_trajectories;
  return j;
}

inline void validate(const ExperimentConfig& c);

inline ExperimentConfig parse_config(const nlohmann::json& j) {
  using namespace detail;
  if (!j.is_object()) throw config_error("config: top level must be a JSON object");
  ExperimentConfig c;
  c.name = get_or<std::string>(j, "name", "", "config");
  c.model = parse_model(j.contains("model") ? j.at("model") : json{});
  const auto ansatz = get_or<std::string>(j, "ansatz", "exponential", "config");
  if (ansatz == "exponential") c.ansatz = AnsatzFamily::Exponential;
  else if (ansatz == "biexponential") c.ansatz = AnsatzFamily::Biexponential;
  else throw config_error("config.ansatz: expected 'exponential' or 'biexponential', got '" + ansatz + "'");
  c.amplitudes = parse_grid(j.contains("amplitudes") ? j.at("amplitudes") : json{}, "amplitudes");
  c.rates = parse_grid(j.contains("rates") ? j.at("rates") : json{}, "rates");
  if (j.contains("inhibitory") && !j.at("inhibitory").is_null()) {
    const auto& ij = j.at("inhibitory");
    InhibitorySettings s;
    s.inhibition = get_field<std::vector<double>>(ij, "B", "inhibitory");
    s.inhibition_rates = get_field<std::vector<double>>(ij, "beta", "inhibitory");
    s.rates = parse_grid(ij.contains("rates") ? ij.at("rates") : json{}, "inhibitory.rates");
    s.terminals = parse_grid(ij.contains("terminals") ? ij.at("terminals") : json{}, "inhibitory.terminals");
    c.inhibitory = std::move(s);
  }
  if (j.contains("hold_probe") && !j.at("hold_probe").is_null()) {
    const auto& hj = j.at("hold_probe");
    HoldProbeSettings h;
    h.holds = get_or(hj, "holds", h.holds, "hold_probe");
    h.rise_rate = get_or(hj, "rise_rate", h.rise_rate, "hold_probe");
    c.hold_probe = std::move(h);
  }
  if (j.contains("tolerances")) {
    const auto& tj = j.at("tolerances");
    Tolerances t;
    t.rel_tol = get_or(tj, "rel_tol", t.rel_tol, "tolerances");
    t.refine_tol = get_or(tj, "refine_tol", t.refine_tol, "tolerances");
    t.steps_per_timescale = get_or(tj, "steps_per_timescale", t.steps_per_timescale, "tolerances");
    if (tj.contains("max_golden_iterations"))
      t.max_golden_iterations = get_count(tj, "max_golden_iterations", "tolerances");
    c.tolerances = t;
  }
  c.output_dir = get_or<std::string>(j, "output_dir", c.output_dir, "config");
  if (j.contains("workers")) c.workers = get_count(j, "workers", "config");
  c.dump_trajectories = get_or(j, "dump_trajectories", c.dump_trajectories, "config");
  validate(c);
  return c;
}

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw config_error("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

inline ExperimentConfig load_config(const std::string& path) { return parse_config(read_json_file(path)); }

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

namespace detail {

inline void check_grid(const GridSpec& g, const std::string& where) {
  if (!std::isfinite(g.lo) || !std::isfinite(g.hi)) throw config_error(where + ": bounds must be finite");
  if (g.count < 2 || g.count > 100000) throw config_error(where + ": count must lie in [2, 100000]");
  if (!(g.hi > g.lo)) throw config_error(where + ": hi must exceed lo");
  if (g.spacing == Spacing::Log && !(g.lo > 0.0)) throw config_error(where + ": log grids need lo > 0");
}

inline void check_positive_list(const std::vector<double>& xs, const std::string& where) {
  if (xs.empty()) throw config_error(where + ": must not be empty");
  for (double x : xs)
    if (!(x > 0.0) || !std::isfinite(x)) throw config_error(where + ": values must be positive and finite");
}

}  // namespace detail

inline void validate(const ExperimentConfig& c) {
  try {
    validate(c.model);
  } catch (const std::invalid_argument& e) {
    throw config_error(std::string("model: ") + e.what());
  }
  detail::check_grid(c.amplitudes, "amplitudes");
  detail::check_grid(c.rates, "rates");
  if (c.rates.lo <= 0.0) throw config_error("rates: must be positive");
  if (c.amplitudes.lo < 0.0) throw config_error("amplitudes: must be nonnegative");
  if (const auto* cubic = std::get_if<CubicRCParams>(&c.model); cubic && c.amplitudes.hi > cubic->resistor.v_c)
    throw config_error("amplitudes: the cubic RC sweep is capped at v_c");
  if (c.ansatz == AnsatzFamily::Biexponential) {
    if (!c.inhibitory) throw config_error("inhibitory: required for the biexponential ansatz");
    if (!std::holds_alternative<HHParams>(c.model))
      throw config_error("inhibitory: the biexponential search is implemented for hodgkin-huxley only");
  }
  if (c.inhibitory) {
    detail::check_positive_list(c.inhibitory->inhibition, "inhibitory.B");
    detail::check_positive_list(c.inhibitory->inhibition_rates, "inhibitory.beta");
    detail::check_grid(c.inhibitory->rates, "inhibitory.rates");
    detail::check_grid(c.inhibitory->terminals, "inhibitory.terminals");
    if (c.inhibitory->rates.lo <= 0.0) throw config_error("inhibitory.rates: must be positive");
  }
  if (c.hold_probe) {
    if (c.hold_probe->holds.size() < 3) throw config_error("hold_probe.holds: need at least 3 hold times");
    detail::check_positive_list(c.hold_probe->holds, "hold_probe.holds");
    if (!std::is_sorted(c.hold_probe->holds.begin(), c.hold_probe->holds.end()))
      throw config_error("hold_probe.holds: must be increasing");
    if (c.hold_probe->rise_rate < 0.0) throw config_error("hold_probe.rise_rate: must be nonnegative");
  }
  const auto& t = c.tolerances;
  if (!(t.rel_tol > 0.0 && t.rel_tol < 1.0)) throw config_error("tolerances.rel_tol: must lie in (0, 1)");
  if (!(t.refine_tol > 0.0)) throw config_error("tolerances.refine_tol: must be positive");
  if (!(t.steps_per_timescale >= 1.0)) throw config_error("tolerances.steps_per_timescale: must be at least 1");
  if (t.max_golden_iterations == 0) throw config_error("tolerances.max_golden_iterations: must be positive");
  if (c.output_dir.empty()) throw config_error("output_dir: must not be empty");
}

/// 64-bit FNV-1a of the canonical JSON form.
inline std::uint64_t config_hash(const ExperimentConfig& c) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : to_json(c).dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t x) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

inline std::vector<std::string> list_presets() {
  return {"rc-linear", "rc-bistable", "fhn", "hh-excitatory", "hh-inhibitory"};
}

inline ExperimentConfig preset(const std::string& name) {
  ExperimentConfig c;
  c.name = name;
  c.output_dir = "out/" + name;
  if (name == "rc-linear") {
    c.model = LinearRCParams{1.0, 1.0};
    c.amplitudes = {Spacing::Linear, 0.0, 2.0, 21};
    c.rates = {Spacing::Log, 0.5, 1000.0, 20};
  } else if (name == "rc-bistable") {
    c.model = CubicRCParams{{0.0, 2.0, 4.0, 1.0}, 1.0};
    c.amplitudes = {Spacing::Linear, 0.1, 3.9, 39};
    c.rates = {Spacing::Log, 1.0, 1e4, 30};
    c.hold_probe = HoldProbeSettings{{1.0, 2.0, 4.0, 8.0}, 20.0};
  } else if (name == "fhn") {
    c.model = FHNParams{0.01, 0.5, 0.4};
    c.amplitudes = {Spacing::Linear, 0.1, 2.0, 60};
    c.rates = {Spacing::Log, 1.0, 500.0, 40};
  } else if (name == "hh-excitatory" || name == "hh-inhibitory") {
    c.model = HHParams::standard();
    c.amplitudes = {Spacing::Linear, 1.0, 30.0, 60};
    c.rates = {Spacing::Log, 0.05, 20.0, 40};
    if (name == "hh-inhibitory") {
      c.ansatz = AnsatzFamily::Biexponential;
      c.inhibitory = InhibitorySettings{{2.0, 4.0, 8.0},
                                        {0.1, 0.2},
                                        {Spacing::Log, 0.15, 4.8, 14},
                                        {Spacing::Linear, 2.0, 18.0, 33}};
    }
  } else {
    throw config_error("unknown preset '" + name + "'");
  }
  validate(c);
  return c;
}

}  // namespace excitability
