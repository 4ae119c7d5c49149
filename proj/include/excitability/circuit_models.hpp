#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace excitability {

// ---------------------------------------------------------------------------
// Parameter sets
// ---------------------------------------------------------------------------

struct LinearRCParams {
  double C = 1.0;
  double R = 1.0;

  friend bool operator==(const LinearRCParams&, const LinearRCParams&) = default;
};

/// N-shaped resistor characteristic i_d = k (v - v_a)(v - v_b)(v - v_c).
/// Positive on (v_a, v_b), negative on (v_b, v_c).
struct CubicResistorParams {
  double v_a = 0.0;
  double v_b = 2.0;
  double v_c = 4.0;
  double k = 1.0;

  friend bool operator==(const CubicResistorParams&, const CubicResistorParams&) = default;
};

struct CubicRCParams {
  CubicResistorParams resistor;
  double C = 1.0;

  friend bool operator==(const CubicRCParams&, const CubicRCParams&) = default;
};

struct FHNParams {
  double epsilon = 0.01;
  double gamma = 0.5;
  double v_b = 0.4;

  friend bool operator==(const FHNParams&, const FHNParams&) = default;
};

/// Hodgkin-Huxley membrane in the deviation-from-rest convention (rest at 0 mV).
struct HHParams {
  double C = 1.0;       // uF/cm^2
  double g_na = 120.0;  // mS/cm^2
  double g_k = 36.0;
  double g_l = 0.3;
  double v_na = 115.0;  // mV
  double v_k = -12.0;
  double v_l = 10.6;

  /// Standard squid-axon values with v_l calibrated so that v = 0 is an equilibrium.
  static HHParams standard();

  friend bool operator==(const HHParams&, const HHParams&) = default;
};

// ---------------------------------------------------------------------------
// Internal state
// ---------------------------------------------------------------------------

struct GatingState {
  double m = 0.0;
  double h = 0.0;
  double n = 0.0;

  friend bool operator==(const GatingState&, const GatingState&) = default;
};

struct RecoveryState {
  double w = 0.0;

  friend bool operator==(const RecoveryState&, const RecoveryState&) = default;
};

/// Empty for the RC circuits, recovery w for FHN, gates for HH.
using InternalState = std::variant<std::monostate, RecoveryState, GatingState>;

using ModelSpec = std::variant<LinearRCParams, CubicRCParams, FHNParams, HHParams>;

inline std::string_view model_name(const ModelSpec& spec) {
  constexpr std::array<std::string_view, 4> names{"linear-rc", "cubic-rc", "fitzhugh-nagumo",
                                                  "hodgkin-huxley"};
  return names[spec.index()];
}

// ---------------------------------------------------------------------------
// Current laws
// ---------------------------------------------------------------------------

inline double cubic_current(const CubicResistorParams& p, double v) {
  return p.k * (v - p.v_a) * (v - p.v_b) * (v - p.v_c);
}

inline double cubic_current_slope(const CubicResistorParams& p, double v) {
  const double a = v - p.v_a, b = v - p.v_b, c = v - p.v_c;
  return p.k * (b * c + a * c + a * b);
}

inline double fhn_cubic(const FHNParams& p, double v) { return (1.0 - v) * (v - p.v_b) * v; }

// ---------------------------------------------------------------------------
// Hodgkin-Huxley kinetics
// ---------------------------------------------------------------------------

namespace detail {

/// x / (exp(x) - 1), continuous through x = 0.
inline double exprel_inverse(double x) {
  if (std::abs(x) < 1e-7) return 1.0 - 0.5 * x + x * x / 12.0;
  return x / std::expm1(x);
}

}  // namespace detail

struct GateRates {
  double alpha = 0.0;
  double beta = 0.0;

  double tau() const { return 1.0 / (alpha + beta); }
  double steady() const { return alpha / (alpha + beta); }
};

struct HHRates {
  GateRates m, h, n;

  double fastest_tau() const { return std::min({m.tau(), h.tau(), n.tau()}); }
};

inline HHRates hh_rates(double v) {
  const double xm = (25.0 - v) / 10.0;
  const double xn = (10.0 - v) / 10.0;
  HHRates r;
  r.m.alpha = detail::exprel_inverse(xm);  // 0.1 (25 - v) / (exp((25 - v)/10) - 1)
  r.m.beta = 4.0 * std::exp(-v / 18.0);
  r.h.alpha = 0.07 * std::exp(-v / 20.0);
  r.h.beta = 1.0 / (std::exp((30.0 - v) / 10.0) + 1.0);
  r.n.alpha = 0.1 * detail::exprel_inverse(xn);  // 0.01 (10 - v) / (...)
  r.n.beta = 0.125 * std::exp(-v / 80.0);
  return r;
}

inline GatingState hh_steady_state(double v) {
  const HHRates r = hh_rates(v);
  return {r.m.steady(), r.h.steady(), r.n.steady()};
}

inline GatingState gating_derivatives(const HHRates& r, const GatingState& g) {
  // alpha (1 - x) - beta x  ==  (x_inf - x) / tau
  return {r.m.alpha * (1.0 - g.m) - r.m.beta * g.m, r.h.alpha * (1.0 - g.h) - r.h.beta * g.h,
          r.n.alpha * (1.0 - g.n) - r.n.beta * g.n};
}

inline GatingState gating_derivatives(double v, const GatingState& g) {
  return gating_derivatives(hh_rates(v), g);
}

struct HHCurrents {
  double sodium = 0.0;
  double potassium = 0.0;
  double leak = 0.0;

  double total() const { return sodium + potassium + leak; }
};

inline HHCurrents hh_currents(const HHParams& p, double v, const GatingState& g) {
  const double m3 = g.m * g.m * g.m;
  const double n2 = g.n * g.n;
  return {p.g_na * m3 * g.h * (v - p.v_na), p.g_k * n2 * n2 * (v - p.v_k), p.g_l * (v - p.v_l)};
}

inline HHParams HHParams::standard() {
  HHParams p;
  const GatingState g = hh_steady_state(0.0);
  p.v_l = 0.0;
  const HHCurrents i = hh_currents(p, 0.0, g);
  p.v_l = (i.sodium + i.potassium) / p.g_l;
  return p;
}

// ---------------------------------------------------------------------------
// Model-level helpers
// ---------------------------------------------------------------------------

/// Capacitance multiplying v' in the circuit equation (epsilon for FHN).
inline double storage_capacitance(const ModelSpec& spec) {
  return std::visit(
      [](const auto& p) -> double {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, FHNParams>) return p.epsilon;
        else return p.C;
      },
      spec);
}

inline InternalState steady_state(const ModelSpec& spec, double v) {
  return std::visit(
      [v](const auto& p) -> InternalState {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, HHParams>) {
          return hh_steady_state(v);
        } else if constexpr (std::is_same_v<P, FHNParams>) {
          if (v == 0.0) return RecoveryState{0.0};
          if (!(p.gamma > 0.0))
            throw std::invalid_argument("steady_state: FHN with gamma = 0 has no equilibrium off v = 0");
          return RecoveryState{v / p.gamma};
        } else {
          return std::monostate{};
        }
      },
      spec);
}

inline double ionic_current_total(const ModelSpec& spec, double v, const InternalState& state) {
  return std::visit(
      [&](const auto& p) -> double {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, HHParams>) {
          const auto* g = std::get_if<GatingState>(&state);
          if (!g) throw std::invalid_argument("ionic_current_total: HH model needs a gating state");
          return hh_currents(p, v, *g).total();
        } else if constexpr (std::is_same_v<P, FHNParams>) {
          const auto* w = std::get_if<RecoveryState>(&state);
          if (!w) throw std::invalid_argument("ionic_current_total: FHN model needs a recovery state");
          return fhn_cubic(p, v) + w->w;
        } else {
          if (!std::holds_alternative<std::monostate>(state))
            throw std::invalid_argument("ionic_current_total: RC circuits carry no internal state");
          if constexpr (std::is_same_v<P, LinearRCParams>) return v / p.R;
          else return cubic_current(p.resistor, v);
        }
      },
      spec);
}

/// Fastest time constant of the circuit's own dynamics over [v_lo, v_hi].
/// The clamp step size is bounded by it.
inline double fastest_time_constant(const ModelSpec& spec, double v_lo, double v_hi) {
  return std::visit(
      [&](const auto& p) -> double {
        using P = std::decay_t<decltype(p)>;
        constexpr double inf = std::numeric_limits<double>::infinity();
        if constexpr (std::is_same_v<P, LinearRCParams>) {
          return p.R * p.C;
        } else if constexpr (std::is_same_v<P, CubicRCParams>) {
          const double s = std::abs(cubic_current_slope(p.resistor, p.resistor.v_a));
          return s > 0.0 ? p.C / s : inf;
        } else if constexpr (std::is_same_v<P, FHNParams>) {
          return p.gamma > 0.0 ? std::min(p.epsilon, 1.0 / p.gamma) : p.epsilon;
        } else {
          double tau = inf;
          constexpr int samples = 128;
          for (int i = 0; i <= samples; ++i) {
            const double v = v_lo + (v_hi - v_lo) * i / samples;
            tau = std::min(tau, hh_rates(v).fastest_tau());
          }
          return tau;
        }
      },
      spec);
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

namespace detail {
inline void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}
}  // namespace detail

inline void validate(const LinearRCParams& p) {
  detail::require(p.C > 0.0, "linear RC: C must be positive");
  detail::require(p.R > 0.0, "linear RC: R must be positive");
}

inline void validate(const CubicResistorParams& p) {
  detail::require(p.v_a < p.v_b && p.v_b < p.v_c, "cubic resistor: roots must satisfy v_a < v_b < v_c");
  detail::require(p.k > 0.0, "cubic resistor: k must be positive");
}

inline void validate(const CubicRCParams& p) {
  validate(p.resistor);
  detail::require(p.C > 0.0, "cubic RC: C must be positive");
  // The sweep starts from the equilibrium at the origin.
  detail::require(p.resistor.v_a == 0.0, "cubic RC: rest root v_a must be 0");
}

inline void validate(const FHNParams& p) {
  detail::require(p.epsilon > 0.0, "FHN: epsilon must be positive");
  detail::require(p.gamma >= 0.0, "FHN: gamma must be nonnegative");
  detail::require(p.v_b > 0.0 && p.v_b < 1.0, "FHN: v_b must lie in (0, 1)");
}

inline void validate(const HHParams& p) {
  detail::require(p.C > 0.0, "HH: C must be positive");
  detail::require(p.g_na > 0.0 && p.g_k > 0.0 && p.g_l > 0.0, "HH: conductances must be positive");
  detail::require(p.v_k < 0.0 && 0.0 < p.v_l && p.v_l < p.v_na,
                  "HH: reversal potentials must satisfy v_K < 0 < v_L < v_Na");
}

inline void validate(const ModelSpec& spec) {
  std::visit([](const auto& p) { validate(p); }, spec);
}

}  // namespace excitability
