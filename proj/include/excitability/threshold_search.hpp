#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "clamp_engine.hpp"
#include "circuit_models.hpp"
#include "parallel.hpp"
#include "trajectory.hpp"

namespace excitability {

inline std::vector<double> linear_grid(double lo, double hi, std::size_t count) {
  if (count < 2) throw std::invalid_argument("linear_grid: need at least 2 nodes");
  std::vector<double> g(count);
  for (std::size_t i = 0; i < count; ++i)
    g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  g.back() = hi;
  return g;
}

inline std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0 && hi > lo)) throw std::invalid_argument("log_grid: need 0 < lo < hi");
  std::vector<double> g = linear_grid(std::log(lo), std::log(hi), count);
  for (double& x : g) x = std::exp(x);
  g.front() = lo;
  g.back() = hi;
  return g;
}

struct SearchTolerances {
  GridTolerances grid;
  double refine_tol = 1e-4;  // relative width of the final golden-section bracket in rate
  std::size_t max_golden_iterations = 200;

  friend bool operator==(const SearchTolerances& a, const SearchTolerances& b) {
    return a.grid.rel_tol == b.grid.rel_tol && a.grid.steps_per_timescale == b.grid.steps_per_timescale &&
           a.refine_tol == b.refine_tol && a.max_golden_iterations == b.max_golden_iterations;
  }
};

// ---------------------------------------------------------------------------
// Minimization over the rate parameter
// ---------------------------------------------------------------------------

enum class MinimumKind { Interior, UpperBoundary, LowerBoundary };

struct RateMinimum {
  double rate = 0.0;
  double supply = 0.0;
  MinimumKind kind = MinimumKind::Interior;
  double coarse_supply = 0.0;  // best value on the grid alone
  std::size_t evaluations = 0;
};

/// Coarse scan over a sorted positive grid, then golden-section refinement in
/// log(rate) on the bracketing triple. A minimum on either grid edge is reported
/// as a boundary minimum with the edge value.
template <class Cost>
RateMinimum minimize_over_rate(Cost&& cost, std::span<const double> grid, double refine_tol,
                               std::size_t max_iterations = 200) {
  if (grid.empty()) throw std::invalid_argument("minimize_over_rate: empty rate grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0)) throw std::invalid_argument("minimize_over_rate: rates must be positive");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw std::invalid_argument("minimize_over_rate: rates must be strictly increasing");
  }

  RateMinimum best;
  best.supply = std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double j = cost(grid[i]);
    ++best.evaluations;
    if (j < best.supply) {
      best.supply = j;
      best.rate = grid[i];
      arg = i;
    }
  }
  best.coarse_supply = best.supply;
  if (arg == grid.size() - 1) {
    best.kind = grid.size() == 1 ? MinimumKind::Interior : MinimumKind::UpperBoundary;
    return best;
  }
  if (arg == 0) {
    best.kind = MinimumKind::LowerBoundary;
    return best;
  }
  best.kind = MinimumKind::Interior;

  constexpr double inv_phi = 0.6180339887498949;
  double lo = std::log(grid[arg - 1]);
  double hi = std::log(grid[arg + 1]);
  auto probe = [&](double u) {
    const double r = std::exp(u);
    const double j = cost(r);
    ++best.evaluations;
    if (j < best.supply) {
      best.supply = j;
      best.rate = r;
    }
    return j;
  };
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = probe(c);
  double fd = probe(d);
  for (std::size_t it = 0; it < max_iterations && std::expm1(hi - lo) > refine_tol; ++it) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = probe(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = probe(d);
    }
  }
  return best;
}

inline RateMinimum minimize_over_alpha(const ModelSpec& spec, double amplitude, std::span<const double> rates,
                                       const SearchTolerances& tol = {}) {
  return minimize_over_rate(
      [&](double rate) { return supplied_energy(spec, ExponentialAnsatz{amplitude, rate}, tol.grid).total; },
      rates, tol.refine_tol, tol.max_golden_iterations);
}

// ---------------------------------------------------------------------------
// Unbounded-below detection
// ---------------------------------------------------------------------------

struct HoldProbe {
  std::vector<double> holds{1.0, 2.0, 4.0, 8.0};
  double rise_rate = 0.0;  // 0 uses the fastest rate of the sweep grid
};

/// Rise quickly to `target`, then hold for increasing durations. The supply is
/// unbounded below when it keeps falling at a non-decaying pace.
inline std::vector<double> hold_supplies(const ModelSpec& spec, double target, double rise_rate,
                                         std::span<const double> holds, const GridTolerances& tol) {
  std::vector<double> out;
  out.reserve(holds.size());
  for (double hold : holds) out.push_back(supplied_energy(spec, RiseAndHold{target, rise_rate, hold}, tol).total);
  return out;
}

inline bool supply_unbounded_below(std::span<const double> supplies) {
  if (supplies.size() < 3) return false;
  std::vector<double> drops;
  for (std::size_t i = 1; i < supplies.size(); ++i) {
    const double d = supplies[i - 1] - supplies[i];
    if (!(d > 1e-12 * (1.0 + std::abs(supplies[i])))) return false;
    drops.push_back(d);
  }
  return drops.back() >= drops.front();
}

// ---------------------------------------------------------------------------
// Landscapes
// ---------------------------------------------------------------------------

struct LandscapeNode {
  double terminal = 0.0;  // v(0): the landscape coordinate
  double amplitude = 0.0;
  double supply = 0.0;
  double rate = 0.0;
  double inhibition = 0.0;
  double inhibition_rate = 0.0;
  MinimumKind kind = MinimumKind::Interior;
  bool unbounded = false;  // supply can be driven to -inf; `supply` is then not meaningful
  std::size_t evaluations = 0;
};

struct Landscape {
  std::vector<LandscapeNode> nodes;
  std::vector<double> rate_grid;
  std::size_t refinement_passes = 0;
  std::size_t evaluations = 0;
  bool inhibitory = false;
};

/// min over rate of J(A, rate) for the exponential family.
struct ExcitatoryProblem {
  ModelSpec model;
  std::vector<double> rates;
  SearchTolerances tol;
  std::optional<HoldProbe> probe;  // enables unbounded-below censoring

  LandscapeNode operator()(double amplitude) const {
    LandscapeNode node;
    node.terminal = node.amplitude = amplitude;
    const RateMinimum m = minimize_over_alpha(model, amplitude, rates, tol);
    node.supply = m.supply;
    node.rate = m.rate;
    node.kind = m.kind;
    node.evaluations = m.evaluations;
    if (probe && amplitude > 0.0) {
      const double rise = probe->rise_rate > 0.0 ? probe->rise_rate : rates.back();
      const auto s = hold_supplies(model, amplitude, rise, probe->holds, tol.grid);
      node.evaluations += s.size();
      node.unbounded = supply_unbounded_below(s);
    }
    return node;
  }
};

/// Fixed hyperpolarizing prefix B e^{beta t}; terminal voltage x is reached by
/// the excitatory component (x + B) e^{alpha t}, minimized over alpha > beta.
struct InhibitoryProblem {
  ModelSpec model;
  double inhibition = 0.0;
  double inhibition_rate = 1.0;
  std::vector<double> rates;  // all > inhibition_rate
  SearchTolerances tol;

  LandscapeNode operator()(double terminal) const {
    LandscapeNode node;
    node.terminal = terminal;
    node.amplitude = terminal + inhibition;
    node.inhibition = inhibition;
    node.inhibition_rate = inhibition_rate;
    const RateMinimum m = minimize_over_rate(
        [&](double rate) {
          return supplied_energy(model, BiexponentialAnsatz{node.amplitude, rate, inhibition, inhibition_rate},
                                 tol.grid)
              .total;
        },
        rates, tol.refine_tol, tol.max_golden_iterations);
    node.supply = m.supply;
    node.rate = m.rate;
    node.kind = m.kind;
    node.evaluations = m.evaluations;
    return node;
  }
};

template <class P>
concept LandscapeProblem = requires(const P& p, double x) {
  { p(x) } -> std::same_as<LandscapeNode>;
};

template <LandscapeProblem P>
std::vector<LandscapeNode> evaluate_nodes(const P& problem, std::span<const double> xs, std::size_t workers) {
  std::vector<LandscapeNode> nodes(xs.size());
  parallel_for(xs.size(), workers, [&](std::size_t i) { nodes[i] = problem(xs[i]); });
  return nodes;
}

template <LandscapeProblem P>
Landscape sweep(const P& problem, std::span<const double> xs, std::size_t workers = 1) {
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] > xs[i - 1])) throw std::invalid_argument("sweep: grid must be strictly increasing");
  Landscape l;
  l.nodes = evaluate_nodes(problem, xs, workers);
  l.rate_grid = problem.rates;
  for (const auto& n : l.nodes) l.evaluations += n.evaluations;
  return l;
}

inline Landscape sweep_landscape(const ModelSpec& spec, std::span<const double> amplitudes,
                                 std::span<const double> rates, const SearchTolerances& tol = {},
                                 std::size_t workers = 1, std::optional<HoldProbe> probe = std::nullopt) {
  if (!amplitudes.empty() && amplitudes.front() < 0.0)
    throw std::invalid_argument("sweep_landscape: amplitudes must be nonnegative");
  ExcitatoryProblem problem{spec, {rates.begin(), rates.end()}, tol, std::move(probe)};
  return sweep(problem, amplitudes, workers);
}

// ---------------------------------------------------------------------------
// Threshold location
// ---------------------------------------------------------------------------

enum class ThresholdKind { InteriorLocalMax, BoundarySaddle, NoneFound };

enum class EventKind { Spike, Decay };

struct EventOutcome {
  EventKind kind = EventKind::Decay;
  double peak = 0.0;
  double peak_time = 0.0;
  double final_voltage = 0.0;
};

struct ThresholdReport {
  ThresholdKind kind = ThresholdKind::NoneFound;
  LandscapeNode point;              // threshold node (terminal, amplitude, rates, supply)
  double resolution = 0.0;          // spacing of the grid the threshold was located on
  double coarse_spacing = 0.0;
  std::size_t coarse_index = 0;
  std::vector<LandscapeNode> refined;  // the finer re-sweep around the crest
  std::optional<EventOutcome> event;   // free run from the threshold clamp state
};

namespace detail {

inline double landscape_value(const LandscapeNode& n) {
  return n.unbounded ? -std::numeric_limits<double>::infinity() : n.supply;
}

inline bool nearly_equal(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b)) return a == b;
  return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b));
}

enum class Crest { No, Strict, Plateau };

inline Crest classify_crest(double left, double mid, double right) {
  if (!std::isfinite(mid)) return Crest::No;
  const bool tie = nearly_equal(mid, left) || nearly_equal(mid, right);
  if (tie) return (mid >= left && mid >= right) ? Crest::Plateau : Crest::No;
  return (mid > left && mid > right) ? Crest::Strict : Crest::No;
}

}  // namespace detail

inline constexpr std::size_t kRefineFactor = 10;

/// Scans for an interior node strictly above both neighbors (unbounded nodes
/// count as -inf), then re-sweeps the bracketing interval on a grid
/// kRefineFactor times finer. Plateaus are refined and kept only if the finer
/// grid shows a strict maximum.
template <LandscapeProblem P>
ThresholdReport find_local_maximum(const Landscape& l, const P& problem, std::size_t workers = 1) {
  ThresholdReport report;
  const auto& nodes = l.nodes;
  if (nodes.size() < 3) return report;

  for (std::size_t j = 1; j + 1 < nodes.size(); ++j) {
    const double left = detail::landscape_value(nodes[j - 1]);
    const double mid = detail::landscape_value(nodes[j]);
    const double right = detail::landscape_value(nodes[j + 1]);
    const detail::Crest crest = detail::classify_crest(left, mid, right);
    if (crest == detail::Crest::No) continue;

    const double lo = nodes[j - 1].terminal, hi = nodes[j + 1].terminal;
    const std::vector<double> fine_x = linear_grid(lo, hi, 2 * kRefineFactor + 1);
    std::vector<LandscapeNode> fine = evaluate_nodes(problem, fine_x, workers);

    // Highest finite fine node that is a strict local max on the fine grid.
    std::optional<std::size_t> best;
    bool saddle = false;
    for (std::size_t i = 1; i + 1 < fine.size(); ++i) {
      const double fl = detail::landscape_value(fine[i - 1]);
      const double fm = detail::landscape_value(fine[i]);
      const double fr = detail::landscape_value(fine[i + 1]);
      if (detail::classify_crest(fl, fm, fr) != detail::Crest::Strict) continue;
      if (!best || fm > fine[*best].supply) {
        best = i;
        saddle = fine[i + 1].unbounded;
      }
    }
    if (!best) {
      if (crest == detail::Crest::Plateau) continue;
      // The finer grid did not resolve a crest; keep the coarse node.
      report.point = nodes[j];
      report.resolution = hi - lo;
      saddle = nodes[j + 1].unbounded;
    } else {
      report.point = fine[*best];
      report.resolution = fine_x[1] - fine_x[0];
    }
    report.kind = saddle ? ThresholdKind::BoundarySaddle : ThresholdKind::InteriorLocalMax;
    report.coarse_index = j;
    report.coarse_spacing = nodes[j].terminal - nodes[j - 1].terminal;
    report.refined = std::move(fine);
    return report;
  }
  return report;
}

/// Scan-only variant: no re-sweep.
inline ThresholdReport locate_crest(const Landscape& l) {
  ThresholdReport report;
  for (std::size_t j = 1; j + 1 < l.nodes.size(); ++j) {
    const auto c = detail::classify_crest(detail::landscape_value(l.nodes[j - 1]),
                                          detail::landscape_value(l.nodes[j]),
                                          detail::landscape_value(l.nodes[j + 1]));
    if (c != detail::Crest::Strict) continue;
    report.kind = l.nodes[j + 1].unbounded ? ThresholdKind::BoundarySaddle : ThresholdKind::InteriorLocalMax;
    report.point = l.nodes[j];
    report.coarse_index = j;
    report.coarse_spacing = report.resolution = l.nodes[j].terminal - l.nodes[j - 1].terminal;
    return report;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Inhibitory threshold
// ---------------------------------------------------------------------------

struct InhibitoryGrids {
  std::vector<double> inhibition;        // B values, > 0
  std::vector<double> inhibition_rates;  // beta values, below the excitatory rates
  std::vector<double> rates;             // alpha values for the excitatory component
  std::vector<double> terminals;         // landscape coordinate v(0)
};

/// Default grids around an excitatory threshold (A*, alpha*).
inline InhibitoryGrids default_inhibitory_grids(double threshold_amplitude, double threshold_rate) {
  InhibitoryGrids g;
  g.inhibition = {2.0, 4.0, 8.0};
  g.inhibition_rates = {0.05, 0.1, 0.2};
  g.rates = log_grid(threshold_rate / 4.0, threshold_rate * 8.0, 14);
  g.terminals = linear_grid(2.0, std::ceil(threshold_amplitude) + 6.0, 2 * (static_cast<std::size_t>(std::ceil(threshold_amplitude)) + 4) + 1);
  return g;
}

struct InhibitoryCandidate {
  double inhibition = 0.0;
  double inhibition_rate = 0.0;
  ThresholdReport report;
};

struct InhibitoryResult {
  Landscape landscape;  // landscape of the selected (B, beta) prefix
  ThresholdReport report;
  std::vector<InhibitoryCandidate> candidates;
  bool lowers_threshold_voltage = false;
  bool lowers_threshold_energy = false;
};

/// For each hyperpolarizing prefix (B, beta) builds the landscape over terminal
/// voltage and locates its crest; reports the prefix with the cheapest crest.
inline InhibitoryResult inhibitory_sweep(const ModelSpec& spec, const ThresholdReport& excitatory,
                                         const InhibitoryGrids& grids, const SearchTolerances& tol = {},
                                         std::size_t workers = 1) {
  if (excitatory.kind == ThresholdKind::NoneFound)
    throw std::invalid_argument("inhibitory_sweep: needs an excitatory threshold");
  for (double b : grids.inhibition)
    if (!(b > 0.0)) throw std::invalid_argument("inhibitory_sweep: B values must be positive");

  InhibitoryResult out;
  std::optional<std::size_t> chosen;
  std::vector<Landscape> landscapes;
  for (double B : grids.inhibition) {
    for (double beta : grids.inhibition_rates) {
      if (!(beta > 0.0)) throw std::invalid_argument("inhibitory_sweep: beta values must be positive");
      InhibitoryProblem problem{spec, B, beta, {}, tol};
      for (double a : grids.rates)
        if (a > beta) problem.rates.push_back(a);
      if (problem.rates.size() < 3) continue;
      Landscape l = sweep(problem, grids.terminals, workers);
      l.inhibitory = true;
      InhibitoryCandidate cand{B, beta, find_local_maximum(l, problem, workers)};
      l.refinement_passes = cand.report.kind == ThresholdKind::NoneFound ? 0 : 1;
      if (cand.report.kind == ThresholdKind::InteriorLocalMax &&
          (!chosen || cand.report.point.supply < out.candidates[*chosen].report.point.supply))
        chosen = out.candidates.size();
      out.candidates.push_back(std::move(cand));
      landscapes.push_back(std::move(l));
    }
  }
  if (chosen) {
    out.report = out.candidates[*chosen].report;
    out.landscape = std::move(landscapes[*chosen]);
    out.lowers_threshold_voltage = out.report.point.terminal < excitatory.point.terminal;
    out.lowers_threshold_energy = out.report.point.supply <= excitatory.point.supply;
  } else if (!landscapes.empty()) {
    out.landscape = std::move(landscapes.front());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Event verification by free simulation
// ---------------------------------------------------------------------------

struct EventOptions {
  double horizon = 0.0;  // 0 selects a model default
  double step = 0.0;
};

namespace detail {

template <std::size_t N, class Rhs>
std::array<double, N> rk4_step(const Rhs& f, const std::array<double, N>& y, double h) {
  const auto k1 = f(y);
  const auto k2 = f(axpy(y, 0.5 * h, k1));
  const auto k3 = f(axpy(y, 0.5 * h, k2));
  const auto k4 = f(axpy(y, h, k3));
  std::array<double, N> r{};
  for (std::size_t i = 0; i < N; ++i) r[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return r;
}

// Stops early once |v| passes `stop_above`: the released FHN circuit escapes to infinity.
template <std::size_t N, class Rhs>
EventOutcome free_run(const Rhs& f, std::array<double, N> y, double horizon, double step,
                      double stop_above = std::numeric_limits<double>::infinity()) {
  EventOutcome e;
  e.peak = -std::numeric_limits<double>::infinity();  // only the released response counts
  const auto n = static_cast<std::size_t>(std::ceil(horizon / step));
  for (std::size_t k = 1; k <= n; ++k) {
    y = rk4_step(f, y, step);
    for (double x : y)
      if (!std::isfinite(x)) throw numerical_error("verify_event: non-finite state", k);
    if (y[0] > e.peak) {
      e.peak = y[0];
      e.peak_time = static_cast<double>(k) * step;
    }
    if (std::abs(y[0]) > stop_above) break;
  }
  e.final_voltage = y[0];
  return e;
}

}  // namespace detail

inline constexpr double kHHEventLevel = 80.0;
inline constexpr double kFHNEventLevel = 0.9;
inline constexpr double kFHNEscapeLevel = 10.0;

/// Releases the clamp (i = 0) at the terminal state and classifies the response.
inline EventOutcome verify_event(const ModelSpec& spec, double v0, const InternalState& state,
                                 const EventOptions& opt = {}) {
  return std::visit(
      [&](const auto& p) -> EventOutcome {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, HHParams>) {
          const auto& g = std::get<GatingState>(state);
          auto f = [&p](const std::array<double, 4>& y) -> std::array<double, 4> {
            const GatingState gs{y[1], y[2], y[3]};
            const double dv = -hh_currents(p, y[0], gs).total() / p.C;
            const GatingState d = gating_derivatives(y[0], gs);
            return {dv, d.m, d.h, d.n};
          };
          EventOutcome e = detail::free_run<4>(f, {v0, g.m, g.h, g.n}, opt.horizon > 0 ? opt.horizon : 50.0,
                                               opt.step > 0 ? opt.step : 0.01);
          e.kind = e.peak > std::max(kHHEventLevel, v0) ? EventKind::Spike : EventKind::Decay;
          return e;
        } else if constexpr (std::is_same_v<P, FHNParams>) {
          const double w0 = std::get<RecoveryState>(state).w;
          auto f = [&p](const std::array<double, 2>& y) -> std::array<double, 2> {
            return {(-fhn_cubic(p, y[0]) - y[1]) / p.epsilon, y[0] - p.gamma * y[1]};
          };
          EventOutcome e = detail::free_run<2>(f, {v0, w0}, opt.horizon > 0 ? opt.horizon : 20.0,
                                               opt.step > 0 ? opt.step : p.epsilon / 20.0, kFHNEscapeLevel);
          e.kind = e.peak > std::max(kFHNEventLevel, v0) ? EventKind::Spike : EventKind::Decay;
          return e;
        } else if constexpr (std::is_same_v<P, CubicRCParams>) {
          const auto& r = p.resistor;
          const double tau = fastest_time_constant(spec, r.v_a, r.v_c);
          auto f = [&p](const std::array<double, 1>& y) -> std::array<double, 1> {
            return {-cubic_current(p.resistor, y[0]) / p.C};
          };
          EventOutcome e = detail::free_run<1>(f, {v0}, opt.horizon > 0 ? opt.horizon : 40.0 * tau,
                                               opt.step > 0 ? opt.step : tau / 50.0);
          const bool high = std::abs(e.final_voltage - r.v_c) < std::abs(e.final_voltage - r.v_a);
          e.kind = high ? EventKind::Spike : EventKind::Decay;
          return e;
        } else {
          const double tau = p.R * p.C;
          auto f = [&p](const std::array<double, 1>& y) -> std::array<double, 1> {
            return {-y[0] / (p.R * p.C)};
          };
          EventOutcome e = detail::free_run<1>(f, {v0}, opt.horizon > 0 ? opt.horizon : 20.0 * tau,
                                               opt.step > 0 ? opt.step : tau / 50.0);
          e.kind = EventKind::Decay;
          return e;
        }
      },
      spec);
}

inline EventOutcome verify_event(const ModelSpec& spec, const ClampResult& clamp, const EventOptions& opt = {}) {
  return verify_event(spec, clamp.terminal_voltage, clamp.final_state, opt);
}

/// Clamp run reproducing a landscape node: biexponential when it carries a prefix.
inline ClampResult clamp_node(const ModelSpec& spec, const LandscapeNode& n, const GridTolerances& tol = {},
                              bool record = false) {
  if (n.inhibition > 0.0)
    return run_clamp(spec, BiexponentialAnsatz{n.amplitude, n.rate, n.inhibition, n.inhibition_rate}, tol, record);
  return run_clamp(spec, ExponentialAnsatz{n.amplitude, n.rate}, tol, record);
}

inline EventOutcome verify_node(const ModelSpec& spec, const LandscapeNode& n, const GridTolerances& tol = {},
                                const EventOptions& opt = {}) {
  return verify_event(spec, clamp_node(spec, n, tol), opt);
}

struct EventDichotomy {
  LandscapeNode below;
  LandscapeNode above;
  EventOutcome below_event;
  EventOutcome above_event;
  bool holds() const { return below_event.kind == EventKind::Decay && above_event.kind == EventKind::Spike; }
};

/// Free runs from the sweep nodes one grid cell below and above the located threshold.
inline std::optional<EventDichotomy> event_dichotomy(const ModelSpec& spec, const Landscape& l,
                                                     const ThresholdReport& r, const GridTolerances& tol = {},
                                                     const EventOptions& opt = {}) {
  if (r.kind == ThresholdKind::NoneFound || r.coarse_index == 0 || r.coarse_index + 1 >= l.nodes.size())
    return std::nullopt;
  EventDichotomy d;
  d.below = l.nodes[r.coarse_index - 1];
  d.above = l.nodes[r.coarse_index + 1];
  d.below_event = verify_node(spec, d.below, tol, opt);
  d.above_event = verify_node(spec, d.above, tol, opt);
  return d;
}

}  // namespace excitability
