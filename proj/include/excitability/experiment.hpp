#pragma once

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "report_io.hpp"
#include "threshold_search.hpp"

namespace excitability {

inline constexpr const char* kToolName = "excitability";
inline constexpr const char* kToolVersion = "1.0.0";

enum ExitCode : int { kExitOk = 0, kExitValidation = 2, kExitNumerical = 3 };

struct ExperimentResult {
  ExperimentConfig config;
  Landscape landscape;
  ThresholdReport report;
  std::optional<EventDichotomy> dichotomy;
  std::optional<InhibitoryResult> inhibitory;
  double seconds = 0.0;
};

namespace detail {

inline void require_finite(const Landscape& l, const char* what) {
  for (const auto& n : l.nodes)
    if (!n.unbounded && !std::isfinite(n.supply))
      throw numerical_error(std::string(what) + ": non-finite supply at A = " + format_double(n.amplitude), 0);
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + p.string() + "'");
  out << text;
}

}  // namespace detail

/// Runs the sweeps described by `c`; throws numerical_error on non-finite results.
inline ExperimentResult compute_experiment(const ExperimentConfig& c) {
  validate(c);
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentResult r;
  r.config = c;
  const SearchTolerances tol = c.tolerances.search();
  const std::size_t workers = resolve_workers(c.workers);

  std::optional<HoldProbe> probe;
  if (c.hold_probe) probe = HoldProbe{c.hold_probe->holds, c.hold_probe->rise_rate};
  ExcitatoryProblem problem{c.model, c.rates.nodes(), tol, probe};
  r.landscape = sweep(problem, c.amplitudes.nodes(), workers);
  detail::require_finite(r.landscape, "landscape");
  r.report = find_local_maximum(r.landscape, problem, workers);
  r.landscape.refinement_passes = r.report.kind == ThresholdKind::NoneFound ? 0 : 1;
  if (r.report.kind != ThresholdKind::NoneFound) {
    r.report.event = verify_node(c.model, r.report.point, tol.grid);
    r.dichotomy = event_dichotomy(c.model, r.landscape, r.report, tol.grid);
  }

  if (c.ansatz == AnsatzFamily::Biexponential) {
    if (r.report.kind == ThresholdKind::NoneFound)
      throw numerical_error("inhibitory search: the excitatory sweep found no threshold to compare against", 0);
    const auto& s = *c.inhibitory;
    InhibitoryGrids grids{s.inhibition, s.inhibition_rates, s.rates.nodes(), s.terminals.nodes()};
    r.inhibitory = inhibitory_sweep(c.model, r.report, grids, tol, workers);
    detail::require_finite(r.inhibitory->landscape, "inhibitory landscape");
    if (r.inhibitory->report.kind != ThresholdKind::NoneFound)
      r.inhibitory->report.event = verify_node(c.model, r.inhibitory->report.point, tol.grid);
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline nlohmann::json result_json(const ExperimentResult& r) {
  nlohmann::json j;
  j["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  j["config_hash"] = hex64(config_hash(r.config));
  j["config"] = to_json(r.config);
  j["model"] = model_name(r.config.model);
  j["grids"] = {{"amplitudes", r.config.amplitudes.nodes()}, {"rates", r.config.rates.nodes()}};
  j["tolerances"] = to_json(r.config).at("tolerances");
  j["evaluations"] = r.landscape.evaluations;
  j["refinement_passes"] = r.landscape.refinement_passes;
  j["threshold"] = report_json(r.report);
  if (r.dichotomy) {
    j["event_dichotomy"] = {{"below", node_json(r.dichotomy->below)},
                            {"below_event", event_json(r.dichotomy->below_event)},
                            {"above", node_json(r.dichotomy->above)},
                            {"above_event", event_json(r.dichotomy->above_event)},
                            {"holds", r.dichotomy->holds()}};
  }
  if (r.inhibitory) {
    const auto& in = *r.inhibitory;
    nlohmann::json ij;
    ij["threshold"] = report_json(in.report);
    ij["lowers_threshold_voltage"] = in.lowers_threshold_voltage;
    ij["lowers_threshold_energy"] = in.lowers_threshold_energy;
    ij["grids"] = {{"B", r.config.inhibitory->inhibition},
                   {"beta", r.config.inhibitory->inhibition_rates},
                   {"rates", r.config.inhibitory->rates.nodes()},
                   {"terminals", r.config.inhibitory->terminals.nodes()}};
    ij["candidates"] = nlohmann::json::array();
    for (const auto& cand : in.candidates)
      ij["candidates"].push_back(
          {{"B", cand.inhibition}, {"beta", cand.inhibition_rate}, {"threshold", report_json(cand.report)}});
    j["inhibitory"] = std::move(ij);
  }
  return j;
}

inline std::string summary_text(const ExperimentResult& r) {
  std::ostringstream o;
  auto describe = [&](const char* label, const ThresholdReport& t) {
    o << label << ": " << to_string(t.kind);
    if (t.kind != ThresholdKind::NoneFound) {
      o << " at v(0) = " << format_double(t.point.terminal) << " (A = " << format_double(t.point.amplitude)
        << ", alpha* = " << format_double(t.point.rate);
      if (t.point.inhibition > 0.0)
        o << ", B = " << format_double(t.point.inhibition) << ", beta = " << format_double(t.point.inhibition_rate);
      o << "), S_r = " << format_double(t.point.supply) << ", resolution " << format_double(t.resolution);
      if (t.event) o << ", free run: " << to_string(t.event->kind);
    }
    o << '\n';
  };
  o << "experiment " << (r.config.name.empty() ? "(unnamed)" : r.config.name) << " [" << model_name(r.config.model)
    << "], " << r.landscape.nodes.size() << " amplitudes, " << r.landscape.evaluations << " clamp runs\n";
  describe("threshold", r.report);
  if (r.dichotomy)
    o << "free runs one cell below/above: " << to_string(r.dichotomy->below_event.kind) << " / "
      << to_string(r.dichotomy->above_event.kind) << '\n';
  if (r.inhibitory) {
    describe("inhibitory threshold", r.inhibitory->report);
    o << "lowers threshold voltage: " << (r.inhibitory->lowers_threshold_voltage ? "yes" : "no")
      << ", lowers threshold energy: " << (r.inhibitory->lowers_threshold_energy ? "yes" : "no") << '\n';
  }
  return o.str();
}

/// Writes CSV, JSON and SVG artifacts; returns the written paths.
inline std::vector<std::filesystem::path> write_artifacts(const ExperimentResult& r, const std::filesystem::path& dir,
                                                          bool dump_trajectories) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::vector<fs::path> written;
  auto put = [&](const fs::path& p, const std::string& text) {
    detail::write_file(p, text);
    written.push_back(p);
  };
  const std::string model(model_name(r.config.model));

  put(dir / "landscape.csv", landscape_csv(r.landscape));
  put(dir / "threshold.json", result_json(r).dump(2) + "\n");

  PlotSpec plot{"Required supply, " + model, "A", "S_r", {landscape_series(r.landscape, "", false)}, {}};
  if (r.report.kind != ThresholdKind::NoneFound) plot.vertical_markers.push_back(r.report.point.amplitude);
  put(dir / "landscape.svg", svg_line_plot(plot));

  if (r.inhibitory) {
    put(dir / "inhibitory_landscape.csv", landscape_csv(r.inhibitory->landscape));
    PlotSpec ip{"Excitatory and inhibitory thresholds, " + model, "terminal voltage v(0)", "S_r", {}, {}};
    ip.series.push_back(landscape_series(r.landscape, "excitatory", true));
    const auto& p = r.inhibitory->report.point;
    ip.series.push_back(landscape_series(r.inhibitory->landscape,
                                         "B = " + detail::tick_label(p.inhibition) +
                                             ", beta = " + detail::tick_label(p.inhibition_rate),
                                         true));
    if (r.report.kind != ThresholdKind::NoneFound) ip.vertical_markers.push_back(r.report.point.terminal);
    if (r.inhibitory->report.kind != ThresholdKind::NoneFound) ip.vertical_markers.push_back(p.terminal);
    put(dir / "inhibitory_landscape.svg", svg_line_plot(ip));
  }

  if (dump_trajectories) {
    const fs::path tdir = dir / "trajectories";
    fs::create_directories(tdir);
    const GridTolerances tol{r.config.tolerances.rel_tol, r.config.tolerances.steps_per_timescale};
    for (std::size_t i = 0; i < r.landscape.nodes.size(); ++i) {
      const auto run = clamp_node(r.config.model, r.landscape.nodes[i], tol, true);
      char name[32];
      std::snprintf(name, sizeof name, "node_%03zu.csv", i);
      put(tdir / name, trajectory_csv(*run.supply.samples));
    }
    if (r.report.kind != ThresholdKind::NoneFound) {
      const auto run = clamp_node(r.config.model, r.report.point, tol, true);
      const auto& s = *run.supply.samples;
      put(tdir / "threshold.csv", trajectory_csv(s));
      put(tdir / "threshold_voltage.svg",
          svg_line_plot({"Clamp trajectory at the threshold", "t", "v", {{"v", s.t, s.v}}, {}}));
      put(tdir / "threshold_supply.svg",
          svg_line_plot({"Cumulative supply at the threshold", "t", "supply", {{"", s.t, s.cumulative_supply}}, {}}));
    }
  }
  return written;
}

/// Computes, writes artifacts, prints the summary. Returns a process exit code.
inline int run_experiment(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
  } catch (const std::invalid_argument& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return kExitValidation;
  }
  try {
    const ExperimentResult r = compute_experiment(config);
    write_artifacts(r, config.output_dir, config.dump_trajectories);
    out << summary_text(r);
    out << "artifacts written to " << config.output_dir << " (" << format_double(r.seconds) << " s)\n";
    return kExitOk;
  } catch (const numerical_error& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return kExitValidation;
  }
}

inline int run_experiment(const std::string& config_path, std::ostream& out, std::ostream& err) {
  ExperimentConfig c;
  try {
    c = load_config(config_path);
  } catch (const std::invalid_argument& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return kExitValidation;
  }
  return run_experiment(c, out, err);
}

}  // namespace excitability
