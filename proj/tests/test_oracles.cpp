#include <gtest/gtest.h>

#include <cmath>

#include "excitability/clamp_engine.hpp"
#include "excitability/oracles.hpp"
#include "excitability/threshold_search.hpp"

namespace ex = excitability;

TEST(ClosedFormLinearRC, Values) {
  EXPECT_DOUBLE_EQ(ex::closed_form_J_linear_rc(1, 1, 1, 10), 0.55);
  EXPECT_EQ(ex::closed_form_J_linear_rc(3, 0.2, 0, 7), 0.0);
  EXPECT_NEAR(ex::closed_form_J_linear_rc(1, 1, 1, 1e9), 0.5, 1e-9);
  EXPECT_THROW(ex::closed_form_J_linear_rc(1, 1, 1, 0), std::domain_error);
}

TEST(ClosedFormLinearRC, StrictlyDecreasingInRate) {
  for (double R : {0.5, 1.0, 4.0}) {
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 60; ++k) {
      const double rate = 0.01 * std::pow(1.3, k);
      const double j = ex::closed_form_J_linear_rc(2.0, R, 1.5, rate);
      ASSERT_LT(j, prev);
      ASSERT_LT(ex::closed_form_dJ_dalpha_linear_rc(R, 1.5, rate), 0.0);
      prev = j;
    }
  }
}

TEST(ClosedFormFHN, Values) {
  const ex::FHNParams p{0.01, 0.5, 0.4};
  EXPECT_EQ(ex::closed_form_J_fhn(p, 0.0, 3.0), 0.0);
  // Term-by-term: 0.005 - 0.025 + 0.046667 - 0.02 + 0.0047619 (tests/oracles/fhn_reference.py).
  EXPECT_NEAR(ex::closed_form_J_fhn(p, 1.0, 10.0), 0.011428571428571429, 1e-16);
  for (double A : {0.3, 1.0, 1.7}) EXPECT_NEAR(ex::closed_form_J_fhn(p, A, 1e9), 0.5 * p.epsilon * A * A, 1e-8);
  EXPECT_THROW(ex::closed_form_J_fhn(p, 1.0, -1.0), std::domain_error);
}

TEST(ClosedFormFHN, RecoverySolutionSatisfiesItsODE) {
  const ex::FHNParams p{0.01, 0.5, 0.4};
  const double A = 1.3, a = 4.0, t = -0.4, h = 1e-5;
  const double w = ex::fhn_recovery_solution(p, A, a, t);
  const double dw = (ex::fhn_recovery_solution(p, A, a, t + h) - ex::fhn_recovery_solution(p, A, a, t - h)) / (2 * h);
  EXPECT_NEAR(dw, A * std::exp(a * t) - p.gamma * w, 1e-8);
}

TEST(ClosedFormFHN, EnvelopeAtInteriorMinimizer) {
  // At an interior minimizer of J(A, .) the rate derivative vanishes.
  const ex::FHNParams p{};
  const std::vector<double> rates = ex::log_grid(1.0, 500.0, 40);
  for (double A : {0.3, 1.4, 1.6}) {
    const auto m = ex::minimize_over_rate([&](double r) { return ex::closed_form_J_fhn(p, A, r); }, rates, 1e-8);
    ASSERT_EQ(m.kind, ex::MinimumKind::Interior) << A;
    const double h = 1e-4 * m.rate;
    const double d = (ex::closed_form_J_fhn(p, A, m.rate + h) - ex::closed_form_J_fhn(p, A, m.rate - h)) / (2 * h);
    const double scale = std::abs(ex::closed_form_J_fhn(p, A, m.rate)) / m.rate;
    EXPECT_LT(std::abs(d), 1e-4 * scale) << A;
  }
}

TEST(SingularArcResidual, LinearConductance) {
  EXPECT_EQ(ex::singular_arc_residual(ex::LinearConductance{1.0}, 0.0), 0.0);
  EXPECT_EQ(ex::singular_arc_residual(ex::LinearConductance{1.0}, 1.0), 2.0);
  EXPECT_EQ(ex::singular_arc_residual(ex::LinearConductance{4.0}, 2.0), 1.0);
}

TEST(SingularArcResidual, CubicMatchesFiniteDifferenceOfGv2) {
  const ex::CubicConductance g{{0.0, 2.0, 4.0, 1.0}};
  auto gv2 = [&](double v) { return g(v) * v * v; };
  for (double v : {-1.0, 0.3, 1.0, 1.9, 2.7, 3.5, 5.0}) {
    const double h = 1e-5;
    const double fd = (gv2(v + h) - gv2(v - h)) / (2 * h);
    EXPECT_NEAR(ex::singular_arc_residual(g, v), fd, 1e-6 * (1 + std::abs(fd))) << v;
  }
  // g(v) v^2 = f(v) v = v^4 - 6 v^3 + 8 v^2; derivative 4v^3 - 18v^2 + 16v.
  EXPECT_NEAR(ex::singular_arc_residual(g, 1.0), 2.0, 1e-12);
}

TEST(BistableRequiredSupply, Classification) {
  const ex::CubicResistorParams p{0.0, 2.0, 4.0, 1.0};
  auto s = ex::bistable_required_supply(p, 1.0, 1.0);
  EXPECT_EQ(s.kind, ex::SupplyClass::Passive);
  EXPECT_DOUBLE_EQ(s.value, 0.5);
  EXPECT_FALSE(s.is_threshold);

  s = ex::bistable_required_supply(p, 1.0, 2.0);
  EXPECT_EQ(s.kind, ex::SupplyClass::Passive);
  EXPECT_DOUBLE_EQ(s.value, 2.0);
  EXPECT_TRUE(s.is_threshold);

  EXPECT_EQ(ex::bistable_required_supply(p, 1.0, 3.0).kind, ex::SupplyClass::UnboundedBelow);
  EXPECT_EQ(ex::bistable_required_supply(p, 1.0, 4.0).kind, ex::SupplyClass::UnboundedBelow);
  EXPECT_THROW(ex::bistable_required_supply(p, 1.0, -0.1), std::domain_error);
}

TEST(BistableRequiredSupply, HoldTrajectoryCorroboratesUnboundedness) {
  const ex::ModelSpec cubic = ex::CubicRCParams{{0.0, 2.0, 4.0, 1.0}, 1.0};
  const std::vector<double> holds{0.5, 1, 2, 4, 8, 16};
  const auto above = ex::hold_supplies(cubic, 3.0, 200.0, holds, {1e-8, 50});
  for (std::size_t i = 1; i < above.size(); ++i) EXPECT_LT(above[i], above[i - 1]);
  // Supply rate during the hold is f(3) * 3 = -9 per unit time.
  EXPECT_NEAR((above[5] - above[4]) / 8.0, -9.0, 1e-6);
  EXPECT_TRUE(ex::supply_unbounded_below(above));

  const auto below = ex::hold_supplies(cubic, 1.0, 200.0, holds, {1e-8, 50});
  for (std::size_t i = 1; i < below.size(); ++i) EXPECT_GT(below[i], below[i - 1]);
  EXPECT_FALSE(ex::supply_unbounded_below(below));
}
