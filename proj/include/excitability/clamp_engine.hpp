#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "circuit_models.hpp"
#include "trajectory.hpp"

namespace excitability {

/// Raised when a run produces a non-finite value.
class numerical_error : public std::runtime_error {
 public:
  numerical_error(const std::string& what, std::size_t step)
      : std::runtime_error(what + " (step " + std::to_string(step) + ")"), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

struct BranchEnergy {
  std::string name;
  double energy = 0.0;  // signed: negative means energy drawn from the branch's battery
};

struct TrajectorySamples {
  std::vector<std::string> state_names;
  std::vector<double> t, v, i, cumulative_supply;
  std::vector<std::vector<double>> state;  // one column per state_names entry
};

struct SupplyBreakdown {
  double total = 0.0;            // integral of i v over the truncated past
  double storage = 0.0;          // C v(0)^2 / 2
  double capacitive_work = 0.0;  // C (v(0)^2 - v(t0)^2) / 2, exact for an analytic v
  std::vector<BranchEnergy> branches;
  std::optional<TrajectorySamples> samples;

  double branch_sum() const {
    double s = 0.0;
    for (const auto& b : branches) s += b.energy;
    return s;
  }
  /// |J - sum of branch integrals - storage|; bounded by C v(t0)^2 / 2 plus rounding.
  double balance_residual() const { return std::abs(total - branch_sum() - storage); }
};

struct ClampResult {
  SupplyBreakdown supply;
  InternalState final_state;
  double terminal_voltage = 0.0;
  std::size_t steps = 0;
  std::size_t gating_corrections = 0;  // gate values pushed back into [0, 1] beyond 1e-9
};

namespace detail {

// Per-model kernels. `prepare` caches whatever depends only on the forced
// voltage, so each RK4 stage voltage is evaluated once.

template <class P>
struct ClampKernel;

template <>
struct ClampKernel<LinearRCParams> {
  using State = std::array<double, 0>;
  using Aux = double;
  static constexpr std::array<std::string_view, 1> branch_names{"resistor"};
  static constexpr std::array<std::string_view, 0> state_names{};
  static double capacitance(const LinearRCParams& p) { return p.C; }
  static State init(const LinearRCParams&, double) { return {}; }
  static Aux prepare(const LinearRCParams&, double v) { return v; }
  static State rhs(const LinearRCParams&, const Aux&, const State&) { return {}; }
  static std::array<double, 1> branches(const LinearRCParams& p, double v, const State&) { return {v / p.R}; }
  static std::size_t project(State&) { return 0; }
  static InternalState to_internal(const State&) { return std::monostate{}; }
};

template <>
struct ClampKernel<CubicRCParams> {
  using State = std::array<double, 0>;
  using Aux = double;
  static constexpr std::array<std::string_view, 1> branch_names{"resistor"};
  static constexpr std::array<std::string_view, 0> state_names{};
  static double capacitance(const CubicRCParams& p) { return p.C; }
  static State init(const CubicRCParams&, double) { return {}; }
  static Aux prepare(const CubicRCParams&, double v) { return v; }
  static State rhs(const CubicRCParams&, const Aux&, const State&) { return {}; }
  static std::array<double, 1> branches(const CubicRCParams& p, double v, const State&) {
    return {cubic_current(p.resistor, v)};
  }
  static std::size_t project(State&) { return 0; }
  static InternalState to_internal(const State&) { return std::monostate{}; }
};

template <>
struct ClampKernel<FHNParams> {
  using State = std::array<double, 1>;
  using Aux = double;
  static constexpr std::array<std::string_view, 2> branch_names{"cubic", "recovery"};
  static constexpr std::array<std::string_view, 1> state_names{"w"};
  static double capacitance(const FHNParams& p) { return p.epsilon; }
  static State init(const FHNParams& p, double v) {
    // Without recovery leak only the origin is an equilibrium; v(t0) is ~0 anyway.
    if (p.gamma == 0.0) return {0.0};
    return {std::get<RecoveryState>(steady_state(ModelSpec{p}, v)).w};
  }
  static Aux prepare(const FHNParams&, double v) { return v; }
  static State rhs(const FHNParams& p, const Aux& v, const State& s) { return {v - p.gamma * s[0]}; }
  static std::array<double, 2> branches(const FHNParams& p, double v, const State& s) {
    return {fhn_cubic(p, v), s[0]};
  }
  static std::size_t project(State&) { return 0; }
  static InternalState to_internal(const State& s) { return RecoveryState{s[0]}; }
};

template <>
struct ClampKernel<HHParams> {
  using State = std::array<double, 3>;
  using Aux = HHRates;
  static constexpr std::array<std::string_view, 3> branch_names{"sodium", "potassium", "leak"};
  static constexpr std::array<std::string_view, 3> state_names{"m", "h", "n"};
  static double capacitance(const HHParams& p) { return p.C; }
  static State init(const HHParams&, double v) {
    const GatingState g = hh_steady_state(v);
    return {g.m, g.h, g.n};
  }
  static Aux prepare(const HHParams&, double v) { return hh_rates(v); }
  static State rhs(const HHParams&, const Aux& r, const State& s) {
    const GatingState d = gating_derivatives(r, {s[0], s[1], s[2]});
    return {d.m, d.h, d.n};
  }
  static std::array<double, 3> branches(const HHParams& p, double v, const State& s) {
    const HHCurrents i = hh_currents(p, v, {s[0], s[1], s[2]});
    return {i.sodium, i.potassium, i.leak};
  }
  static std::size_t project(State& s) {
    constexpr double slack = 1e-9;
    std::size_t corrected = 0;
    for (double& x : s) {
      if (x < -slack || x > 1.0 + slack) ++corrected;
      x = std::clamp(x, 0.0, 1.0);
    }
    return corrected;
  }
  static InternalState to_internal(const State& s) { return GatingState{s[0], s[1], s[2]}; }
};

template <std::size_t N>
std::array<double, N> axpy(const std::array<double, N>& x, double a, const std::array<double, N>& y) {
  std::array<double, N> r{};
  for (std::size_t i = 0; i < N; ++i) r[i] = x[i] + a * y[i];
  return r;
}

template <class P, VoltageTrajectory A>
ClampResult clamp_with_kernel(const P& p, const A& a, const TimeGrid& grid, bool record) {
  using K = ClampKernel<P>;
  using State = typename K::State;
  constexpr std::size_t nb = K::branch_names.size();
  constexpr std::size_t ns = std::tuple_size_v<State>;

  const double C = K::capacitance(p);
  const double dt = grid.step;
  const std::size_t n = grid.steps;

  const double v_start = a.value(grid.node(0));
  State x = K::init(p, v_start);

  ClampResult out;
  out.steps = n;
  std::array<double, nb> acc{};

  TrajectorySamples samples;
  if (record) {
    for (auto name : K::state_names) samples.state_names.emplace_back(name);
    samples.state.resize(ns);
    for (auto* col : {&samples.t, &samples.v, &samples.i, &samples.cumulative_supply}) col->reserve(n + 1);
    for (auto& col : samples.state) col.reserve(n + 1);
  }
  double running = 0.0;  // trapezoid partial sum of ionic supply
  double prev_rate = 0.0;

  auto aux_next = K::prepare(p, v_start);
  for (std::size_t k = 0;; ++k) {
    const double t = grid.node(k);
    const double v = a.value(t);
    const auto ib = K::branches(p, v, x);
    const double weight = (k == 0 || k == n) ? 0.5 : 1.0;
    double ionic = 0.0;
    for (std::size_t b = 0; b < nb; ++b) {
      acc[b] += weight * ib[b] * v;
      ionic += ib[b];
    }
    if (!std::isfinite(ionic)) throw numerical_error("clamp: non-finite ionic current", k);

    if (record) {
      if (k > 0) running += 0.5 * dt * (prev_rate + ionic * v);
      prev_rate = ionic * v;
      samples.t.push_back(t);
      samples.v.push_back(v);
      samples.i.push_back(C * a.slope(t) + ionic);
      samples.cumulative_supply.push_back(running + 0.5 * C * (v * v - v_start * v_start));
      for (std::size_t s = 0; s < ns; ++s) samples.state[s].push_back(x[s]);
    }
    if (k == n) break;

    // Classical RK4 with the voltage forced at each stage time.
    const double t_next = grid.node(k + 1);
    const double h = t_next - t;
    const auto aux0 = aux_next;
    const auto aux_mid = K::prepare(p, a.value(t + 0.5 * h));
    aux_next = K::prepare(p, a.value(t_next));
    const State k1 = K::rhs(p, aux0, x);
    const State k2 = K::rhs(p, aux_mid, axpy(x, 0.5 * h, k1));
    const State k3 = K::rhs(p, aux_mid, axpy(x, 0.5 * h, k2));
    const State k4 = K::rhs(p, aux_next, axpy(x, h, k3));
    for (std::size_t s = 0; s < ns; ++s) {
      x[s] += h / 6.0 * (k1[s] + 2.0 * k2[s] + 2.0 * k3[s] + k4[s]);
      if (!std::isfinite(x[s])) throw numerical_error("clamp: non-finite internal state", k + 1);
    }
    out.gating_corrections += K::project(x);
  }

  const double v_end = a.value(0.0);
  auto& supply = out.supply;
  supply.storage = 0.5 * C * v_end * v_end;
  supply.capacitive_work = 0.5 * C * (v_end * v_end - v_start * v_start);
  supply.total = supply.capacitive_work;
  supply.branches.reserve(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    const double e = acc[b] * dt;
    supply.branches.push_back({std::string(K::branch_names[b]), e});
    supply.total += e;
  }
  if (!std::isfinite(supply.total)) throw numerical_error("clamp: non-finite supply", n);
  if (record) supply.samples = std::move(samples);
  out.final_state = K::to_internal(x);
  out.terminal_voltage = v_end;
  return out;
}

}  // namespace detail

/// Dynamic voltage clamp: force v(t) along `a`, integrate the internal state
/// from its equilibrium at v(t0), and integrate i v by the trapezoid rule.
template <VoltageTrajectory A>
ClampResult clamp_simulate(const ModelSpec& spec, const A& a, const TimeGrid& grid, bool record = false) {
  return std::visit([&](const auto& p) { return detail::clamp_with_kernel(p, a, grid, record); }, spec);
}

template <VoltageTrajectory A>
TimeGrid clamp_grid(const ModelSpec& spec, const A& a, const GridTolerances& tol) {
  const double tau = fastest_time_constant(spec, a.lowest(), a.highest());
  return truncation_grid(a, tol.rel_tol, tol.steps_per_timescale, tau);
}

template <VoltageTrajectory A>
ClampResult run_clamp(const ModelSpec& spec, const A& a, const GridTolerances& tol = {}, bool record = false) {
  return clamp_simulate(spec, a, clamp_grid(spec, a, tol), record);
}

template <VoltageTrajectory A>
SupplyBreakdown supplied_energy(const ModelSpec& spec, const A& a, const GridTolerances& tol = {}) {
  return run_clamp(spec, a, tol).supply;
}

struct ConvergenceReport {
  std::array<double, 3> supply{};  // J at dt, dt/2, dt/4
  std::array<double, 2> error{};   // vs reference if given, else successive differences
  double ratio = 0.0;              // error[0] / error[1]
  double observed_order = 0.0;
  bool monotone = false;
  bool ok = false;  // monotone and order >= 1.9
};

/// Step-halving study of J. Without a reference, uses |J(dt) - J(dt/2)| and
/// |J(dt/2) - J(dt/4)| as the error sequence.
template <VoltageTrajectory A>
ConvergenceReport convergence_check(const ModelSpec& spec, const A& a, const GridTolerances& tol = {},
                                    std::optional<double> reference = std::nullopt) {
  const TimeGrid base = clamp_grid(spec, a, tol);
  ConvergenceReport r;
  for (std::size_t i = 0; i < 3; ++i)
    r.supply[i] = clamp_simulate(spec, a, base.refined(std::size_t{1} << i)).supply.total;
  if (reference) {
    r.error = {std::abs(r.supply[0] - *reference), std::abs(r.supply[1] - *reference)};
    const double e2 = std::abs(r.supply[2] - *reference);
    r.monotone = r.error[0] > r.error[1] && r.error[1] > e2;
  } else {
    r.error = {std::abs(r.supply[0] - r.supply[1]), std::abs(r.supply[1] - r.supply[2])};
    r.monotone = r.error[0] > r.error[1];
  }
  r.ratio = r.error[1] > 0.0 ? r.error[0] / r.error[1] : std::numeric_limits<double>::infinity();
  r.observed_order = std::log2(r.ratio);
  r.ok = r.monotone && r.observed_order >= 1.9;
  return r;
}

}  // namespace excitability
