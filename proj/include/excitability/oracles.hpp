#pragma once

#include <cmath>
#include <stdexcept>

#include "circuit_models.hpp"

namespace excitability {

/// Closed-form cost of reaching `amplitude` along A e^{alpha t} in a linear RC circuit.
inline double closed_form_J_linear_rc(double C, double R, double amplitude, double rate) {
  if (!(rate > 0.0)) throw std::domain_error("closed_form_J_linear_rc: rate must be positive");
  return (C * rate + 1.0 / R) / (2.0 * rate) * amplitude * amplitude;
}

/// Analytic d/d(alpha) of the linear RC cost; always negative for A != 0.
inline double closed_form_dJ_dalpha_linear_rc(double R, double amplitude, double rate) {
  return -amplitude * amplitude / (2.0 * R * rate * rate);
}

/// Closed-form FitzHugh-Nagumo cost for v = A e^{alpha t}.
inline double closed_form_J_fhn(const FHNParams& p, double amplitude, double rate) {
  if (!(rate > 0.0)) throw std::domain_error("closed_form_J_fhn: rate must be positive");
  const double A = amplitude, a = rate;
  const double A2 = A * A;
  return 0.5 * p.epsilon * A2 - A2 * A2 / (4.0 * a) + (p.v_b + 1.0) * A2 * A / (3.0 * a) -
         p.v_b * A2 / (2.0 * a) + A2 / (2.0 * a * (a + p.gamma));
}

/// Recovery variable driven by v = A e^{alpha t} from w(-inf) = 0.
inline double fhn_recovery_solution(const FHNParams& p, double amplitude, double rate, double t) {
  if (!(rate + p.gamma > 0.0)) throw std::domain_error("fhn_recovery_solution: alpha + gamma must be positive");
  return amplitude / (rate + p.gamma) * std::exp(rate * t);
}

// ---------------------------------------------------------------------------
// Singular arcs
// ---------------------------------------------------------------------------

template <class G>
concept ConductanceFunction = requires(const G& g, double v) {
  { g(v) } -> std::convertible_to<double>;
  { g.derivative(v) } -> std::convertible_to<double>;
};

struct LinearConductance {
  double R = 1.0;
  double operator()(double) const { return 1.0 / R; }
  double derivative(double) const { return 0.0; }
};

/// g(v) = f(v) / v for the N-shaped resistor; requires v_a = 0 so the ratio is a polynomial.
struct CubicConductance {
  CubicResistorParams p;
  double operator()(double v) const { return p.k * (v - p.v_b) * (v - p.v_c); }
  double derivative(double v) const { return p.k * (2.0 * v - p.v_b - p.v_c); }
};

/// d/dv [g(v) v^2] = g'(v) v^2 + 2 g(v) v. Its zeros are the singular-arc candidates.
template <ConductanceFunction G>
double singular_arc_residual(const G& g, double v) {
  return g.derivative(v) * v * v + 2.0 * g(v) * v;
}

// ---------------------------------------------------------------------------
// Bistable RC required supply
// ---------------------------------------------------------------------------

enum class SupplyClass { Passive, UnboundedBelow };

struct BistableSupply {
  SupplyClass kind = SupplyClass::Passive;
  double value = 0.0;         // meaningful for Passive only
  bool is_threshold = false;  // target sits at the middle root
};

/// Passive targets cost C v*^2 / 2. Beyond the middle root a hold in the
/// negative-resistance region extracts unbounded energy.
inline BistableSupply bistable_required_supply(const CubicResistorParams& p, double C, double v_target) {
  if (v_target < 0.0) throw std::domain_error("bistable_required_supply: target must be nonnegative");
  if (v_target <= p.v_b)
    return {SupplyClass::Passive, 0.5 * C * v_target * v_target, v_target == p.v_b};
  return {SupplyClass::UnboundedBelow, 0.0, false};
}

}  // namespace excitability
