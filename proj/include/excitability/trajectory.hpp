#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <stdexcept>

namespace excitability {

/// v(t) = A exp(alpha t) on t <= 0.
struct ExponentialAnsatz {
  double amplitude = 0.0;
  double rate = 1.0;

  double value(double t) const { return amplitude * std::exp(rate * t); }
  double slope(double t) const { return rate * amplitude * std::exp(rate * t); }
  double terminal() const { return amplitude; }
  double slowest_rate() const { return rate; }
  double fastest_rate() const { return rate; }
  double scale() const { return std::abs(amplitude); }
  double lowest() const { return std::min(0.0, amplitude); }
  double highest() const { return std::max(0.0, amplitude); }
};

/// v(t) = A exp(alpha t) - B exp(beta t). B > 0 with beta < alpha is a
/// hyperpolarizing prefix followed by the excitatory rise.
struct BiexponentialAnsatz {
  double amplitude = 0.0;
  double rate = 1.0;
  double inhibition = 0.0;
  double inhibition_rate = 1.0;

  double value(double t) const {
    return amplitude * std::exp(rate * t) - inhibition * std::exp(inhibition_rate * t);
  }
  double slope(double t) const {
    return rate * amplitude * std::exp(rate * t) -
           inhibition_rate * inhibition * std::exp(inhibition_rate * t);
  }
  double terminal() const { return amplitude - inhibition; }
  double slowest_rate() const { return inhibition == 0.0 ? rate : std::min(rate, inhibition_rate); }
  double fastest_rate() const { return inhibition == 0.0 ? rate : std::max(rate, inhibition_rate); }
  double scale() const { return std::max(std::abs(amplitude), std::abs(inhibition)); }

  // Bounds of the voltage range swept on (-inf, 0], from a dense log-time scan.
  double lowest() const { return extreme(-1.0); }
  double highest() const { return extreme(+1.0); }

 private:
  double extreme(double sign) const {
    double best = std::max(0.0, sign * terminal());
    const double t_far = std::log(1e-12) / slowest_rate();
    constexpr int samples = 400;
    for (int i = 0; i < samples; ++i) {
      const double t = t_far * std::pow(1e-6, static_cast<double>(i) / samples);
      best = std::max(best, sign * value(t));
    }
    return sign * best;
  }
};

/// Exponential rise to `target` that completes at t = -hold, then a constant hold.
struct RiseAndHold {
  double target = 0.0;
  double rise_rate = 1.0;
  double hold = 0.0;

  double value(double t) const { return t <= -hold ? target * std::exp(rise_rate * (t + hold)) : target; }
  double slope(double t) const {
    return t < -hold ? rise_rate * target * std::exp(rise_rate * (t + hold)) : 0.0;
  }
  double terminal() const { return target; }
  double slowest_rate() const { return rise_rate; }
  double fastest_rate() const { return rise_rate; }
  double scale() const { return std::abs(target); }
  double lowest() const { return std::min(0.0, target); }
  double highest() const { return std::max(0.0, target); }
};

template <class T>
concept VoltageTrajectory = requires(const T& a, double t) {
  { a.value(t) } -> std::convertible_to<double>;
  { a.slope(t) } -> std::convertible_to<double>;
  { a.terminal() } -> std::convertible_to<double>;
  { a.slowest_rate() } -> std::convertible_to<double>;
  { a.fastest_rate() } -> std::convertible_to<double>;
  { a.scale() } -> std::convertible_to<double>;
  { a.lowest() } -> std::convertible_to<double>;
  { a.highest() } -> std::convertible_to<double>;
};

template <VoltageTrajectory A>
double evaluate(const A& a, double t) {
  if (t > 0.0) throw std::domain_error("evaluate: trajectories are defined for t <= 0");
  return a.value(t);
}

template <VoltageTrajectory A>
double derivative(const A& a, double t) {
  if (t > 0.0) throw std::domain_error("derivative: trajectories are defined for t <= 0");
  return a.slope(t);
}

inline void validate(const ExponentialAnsatz& a) {
  if (!(a.rate > 0.0)) throw std::invalid_argument("exponential ansatz: rate must be positive");
}

inline void validate(const BiexponentialAnsatz& a) {
  if (!(a.rate > 0.0) || !(a.inhibition_rate > 0.0))
    throw std::invalid_argument("biexponential ansatz: rates must be positive");
  if (a.inhibition < 0.0) throw std::invalid_argument("biexponential ansatz: B must be nonnegative");
}

/// Uniform grid t_k = start + k * step, with the last node pinned to exactly 0.
struct TimeGrid {
  double start = -1.0;
  double step = 1.0;
  std::size_t steps = 1;

  double node(std::size_t k) const { return k == steps ? 0.0 : start + static_cast<double>(k) * step; }

  /// Same span, `factor` times as many steps.
  TimeGrid refined(std::size_t factor) const {
    return {start, step / static_cast<double>(factor), steps * factor};
  }
};

struct GridTolerances {
  double rel_tol = 1e-6;
  double steps_per_timescale = 50.0;
};

/// Truncates (-inf, 0] where the slowest component has decayed to rel_tol and
/// resolves the fastest of the trajectory and circuit time scales.
template <VoltageTrajectory A>
TimeGrid truncation_grid(const A& a, double rel_tol, double steps_per_timescale,
                         double fastest_model_tau = std::numeric_limits<double>::infinity()) {
  if (!(rel_tol > 0.0 && rel_tol < 1.0))
    throw std::invalid_argument("truncation_grid: rel_tol must lie in (0, 1)");
  if (!(steps_per_timescale > 0.0))
    throw std::invalid_argument("truncation_grid: steps_per_timescale must be positive");
  const double start = std::log(rel_tol) / a.slowest_rate();
  const double timescale = std::min(1.0 / a.fastest_rate(), fastest_model_tau);
  const double target_step = timescale / steps_per_timescale;
  const auto steps = static_cast<std::size_t>(std::ceil(-start / target_step));
  return {start, -start / static_cast<double>(steps), std::max<std::size_t>(steps, 1)};
}

/// Grid for a rise-and-hold trajectory: the hold start -hold is a node.
inline TimeGrid truncation_grid(const RiseAndHold& a, double rel_tol, double steps_per_timescale,
                                double fastest_model_tau = std::numeric_limits<double>::infinity()) {
  if (!(rel_tol > 0.0 && rel_tol < 1.0))
    throw std::invalid_argument("truncation_grid: rel_tol must lie in (0, 1)");
  const double timescale = std::min(1.0 / a.rise_rate, fastest_model_tau);
  double step = timescale / steps_per_timescale;
  std::size_t hold_steps = 0;
  if (a.hold > 0.0) {
    hold_steps = static_cast<std::size_t>(std::ceil(a.hold / step));
    step = a.hold / static_cast<double>(hold_steps);
  }
  const double rise_span = -std::log(rel_tol) / a.rise_rate;
  const auto rise_steps = static_cast<std::size_t>(std::ceil(rise_span / step));
  const std::size_t steps = std::max<std::size_t>(rise_steps + hold_steps, 1);
  return {-static_cast<double>(steps) * step, step, steps};
}

}  // namespace excitability
