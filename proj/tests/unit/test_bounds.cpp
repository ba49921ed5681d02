#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "wranking/bounds.hpp"
#include "wranking/instance.hpp"
#include "wranking/rng.hpp"

using namespace wranking;

namespace {

constexpr double kLn2 = std::numbers::ln2;
const double kSimpleTarget = 1.25 - std::exp(-0.5);
const double kImprovedTarget = 1.0 - kLn2 / 2.0;

// Hand-written h and its antiderivative for the two exponential choices;
// kept apart from the library on purpose.
struct ClosedForm {
  bool half;  // half-exp, else simple-exp

  double h(double x) const { return half ? std::min(1.0, 0.5 * std::exp(x)) : std::min(1.0, std::exp(x - 0.5)); }
  double H(double a) const {
    if (half) return a <= kLn2 ? 0.5 * (std::exp(a) - 1.0) : 0.5 + (a - kLn2);
    return a <= 0.5 ? std::exp(a - 0.5) - std::exp(-0.5) : (1.0 - std::exp(-0.5)) + (a - 0.5);
  }
  double g(double x, double y) const { return 0.5 * (1.0 + h(x) - h(y)); }
  // ∫_a^b g(y, c) dy
  double gint(double a, double b, double c) const { return 0.5 * ((b - a) * (1.0 - h(c)) + H(b) - H(a)); }

  double simple(double tau, double gamma) const {
    return (1 - tau) * (1 - gamma) + gint(0, gamma, tau) + gint(0, tau, gamma);
  }

  double inner(double tau, double gamma, double x, double theta) const {
    return g(x, theta) + gint(0, theta, x) + gint(theta, gamma, tau);
  }

  // Dense θ scan that always includes 0, γ and the kink; midpoint rule in x.
  double improved(double tau, double gamma, int nx = 400, int ntheta = 4000) const {
    const double kink = half ? kLn2 : 0.5;
    double acc = 0.0;
    for (int i = 0; i < nx; ++i) {
      const double x = (i + 0.5) * tau / nx;
      double best = std::min(inner(tau, gamma, x, 0.0), inner(tau, gamma, x, gamma));
      if (kink < gamma) best = std::min(best, inner(tau, gamma, x, kink));
      for (int k = 1; k < ntheta; ++k) best = std::min(best, inner(tau, gamma, x, gamma * k / ntheta));
      acc += best;
    }
    return (1 - tau) * (1 - gamma) + (1 - tau) * gint(0, gamma, tau) + acc * tau / nx;
  }
};

std::vector<GainSpec> all_specs() {
  return {GainSpec::simple_exp(), GainSpec::half_exp(), GainSpec::adversarial(),
          GainSpec::table({0.0, 0.4, 0.8, 1.0}, {0.5, 0.69, 0.96, 1.0})};
}

}  // namespace

TEST(SimpleBound, KnownMinimizers) {
  const auto se = GainSpec::simple_exp();
  EXPECT_NEAR(simple_bound(se, 1.0, 0.0), kSimpleTarget, 1e-12);
  EXPECT_NEAR(simple_bound(se, 0.5, 0.5), kSimpleTarget, 1e-12);
  EXPECT_NEAR(kSimpleTarget, 0.643469, 1e-6);
}

TEST(SimpleBound, OriginIsOne) {
  for (const auto& s : all_specs()) {
    EXPECT_NEAR(simple_bound(s, 0.0, 0.0), 1.0, 1e-15) << s.name();
    EXPECT_NEAR(improved_bound(s, 0.0, 0.0), 1.0, 1e-15) << s.name();
  }
}

TEST(SimpleBound, MatchesClosedForm) {
  Rng rng(1);
  for (bool half : {false, true}) {
    const ClosedForm cf{half};
    const auto spec = half ? GainSpec::half_exp() : GainSpec::simple_exp();
    for (int i = 0; i < 200; ++i) {
      const double t = rng.uniform(), g = rng.uniform();
      ASSERT_NEAR(simple_bound(spec, t, g), cf.simple(t, g), 1e-9);
    }
  }
}

TEST(SimpleBound, AdversarialQuotedForm) {
  // ∫_0^c e^{y-1} dy + 1 - e^{c-1} = 1 - 1/e for every c.
  for (double c : {0.0, 0.3, 0.7, 1.0})
    EXPECT_NEAR(simple_bound(GainSpec::adversarial(), 1.0, c), 1.0 - std::exp(-1.0), 1e-12);
}

TEST(SimpleBound, DomainErrors) {
  EXPECT_THROW(simple_bound(GainSpec::half_exp(), -0.1, 0.5), std::domain_error);
  EXPECT_THROW(improved_bound(GainSpec::half_exp(), 0.5, 1.5), std::domain_error);
}

TEST(ImprovedBound, CornerMinimum) {
  const auto he = GainSpec::half_exp();
  EXPECT_NEAR(improved_bound(he, 0.0, 1.0), kImprovedTarget, 1e-12);
  EXPECT_NEAR(kImprovedTarget, 0.653426, 1e-6);
}

TEST(ImprovedBound, EdgesReduceToSimple) {
  // τ = 0 or γ = 0 leaves nothing to minimize over.
  for (const auto& s : all_specs()) {
    for (double a : {0.1, 0.5, 0.9}) {
      EXPECT_NEAR(improved_bound(s, 0.0, a), simple_bound(s, 0.0, a), 1e-10) << s.name();
      EXPECT_NEAR(improved_bound(s, a, 0.0), simple_bound(s, a, 0.0), 1e-10) << s.name();
    }
  }
}

TEST(ImprovedBound, MatchesDenseScan) {
  Rng rng(2);
  for (bool half : {false, true}) {
    const ClosedForm cf{half};
    const auto spec = half ? GainSpec::half_exp() : GainSpec::simple_exp();
    for (int i = 0; i < 12; ++i) {
      const double t = rng.uniform(), g = rng.uniform();
      ASSERT_NEAR(improved_bound(spec, t, g), cf.improved(t, g), 1e-5) << t << ", " << g;
    }
    ASSERT_NEAR(improved_bound(spec, 0.6, kLn2), cf.improved(0.6, kLn2), 1e-5);
  }
}

TEST(ImprovedBound, InnerMinimumBeatsGrid) {
  Rng rng(3);
  for (const auto& s : all_specs()) {
    for (int i = 0; i < 50; ++i) {
      const double t = rng.uniform(), g = rng.uniform(), x = rng.uniform(0.0, t);
      const auto m = improved_inner_min(s, t, g, x);
      ASSERT_GE(m.theta, 0.0);
      ASSERT_LE(m.theta, g);
      ASSERT_NEAR(m.value, improved_inner(s, t, g, x, m.theta), 1e-14);
      for (int k = 0; k <= 500; ++k)
        ASSERT_LE(m.value, improved_inner(s, t, g, x, g * k / 500.0) + 1e-9) << s.name();
    }
  }
}

TEST(ImprovedBound, NeverBelowSimple) {
  Rng rng(4);
  for (const auto& s : all_specs()) {
    for (int i = 0; i < 100; ++i) {
      const double t = rng.uniform(), g = rng.uniform();
      ASSERT_GE(improved_bound(s, t, g), simple_bound(s, t, g) - 1e-10) << s.name() << " " << t << " " << g;
    }
  }
}

TEST(Bounds, Continuous) {
  Rng rng(5);
  double worst = 0.0;
  for (const auto& kind : {BoundKind::kSimple, BoundKind::kImproved}) {
    for (int i = 0; i < 1000; ++i) {
      const double t = rng.uniform(0.0, 1.0 - 1e-6), g = rng.uniform(0.0, 1.0 - 1e-6);
      const auto he = GainSpec::half_exp();
      worst = std::max(worst, std::abs(evaluate_bound(he, kind, t, g) - evaluate_bound(he, kind, t + 1e-6, g + 1e-6)));
    }
  }
  EXPECT_LE(worst, 1e-4);
}

TEST(Bounds, GridFloors) {
  for (const auto& p : bound_heatmap(GainSpec::half_exp(), BoundKind::kImproved, 256))
    ASSERT_GE(p.value, kImprovedTarget - 1e-6) << p.tau << ", " << p.gamma;
  for (const auto& p : bound_heatmap(GainSpec::simple_exp(), BoundKind::kSimple, 256))
    ASSERT_GE(p.value, kSimpleTarget - 1e-6) << p.tau << ", " << p.gamma;
}

TEST(Bounds, HeatmapLayoutAndCsv) {
  const auto pts = bound_heatmap(GainSpec::half_exp(), BoundKind::kSimple, 3);
  ASSERT_EQ(pts.size(), 9u);
  EXPECT_EQ(pts[1].tau, 0.0);
  EXPECT_EQ(pts[1].gamma, 0.5);
  EXPECT_EQ(pts[8].tau, 1.0);
  std::ostringstream s;
  write_heatmap_csv(s, pts);
  const std::string csv = s.str();
  EXPECT_EQ(csv.substr(0, 16), "tau,gamma,value\n");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 10);
  EXPECT_THROW(bound_heatmap(GainSpec::half_exp(), BoundKind::kSimple, 1), std::invalid_argument);
}

TEST(Bounds, ParseKind) {
  EXPECT_EQ(parse_bound_kind("simple"), BoundKind::kSimple);
  EXPECT_EQ(parse_bound_kind("improved"), BoundKind::kImproved);
  EXPECT_FALSE(parse_bound_kind("tight").has_value());
  EXPECT_STREQ(to_string(BoundKind::kImproved), "improved");
}

TEST(MinimizeBound, GlobalMinima) {
  const auto s = minimize_bound(GainSpec::simple_exp(), BoundKind::kSimple);
  EXPECT_NEAR(s.value, 0.643469, 1e-5);
  EXPECT_NEAR(s.value, simple_bound(GainSpec::simple_exp(), s.tau, s.gamma), 1e-15);
  const auto i = minimize_bound(GainSpec::half_exp(), BoundKind::kImproved);
  EXPECT_NEAR(i.value, 0.653426, 1e-5);
  EXPECT_NEAR(i.tau, 0.0, 1e-3);
  EXPECT_NEAR(i.gamma, 1.0, 1e-3);
}

TEST(MinimizeBound, Deterministic) {
  const auto a = minimize_bound(GainSpec::half_exp(), BoundKind::kSimple, 32);
  const auto b = minimize_bound(GainSpec::half_exp(), BoundKind::kSimple, 32);
  EXPECT_EQ(a.tau, b.tau);
  EXPECT_EQ(a.gamma, b.gamma);
  EXPECT_EQ(a.value, b.value);
}

TEST(Constants, TauStar) {
  const double t = tau_star(GainSpec::half_exp());
  EXPECT_NEAR(t, 0.3574, 1e-3);
  EXPECT_NEAR(0.5 * std::exp(t), 2.0 * t, 1e-10);
  EXPECT_THROW(tau_star(GainSpec::adversarial()), std::invalid_argument);
}

TEST(Constants, TauZeroMinimizesRelaxedBound) {
  const auto he = GainSpec::half_exp();
  const double t0 = tau_zero(he);
  EXPECT_NEAR(t0, 0.564375, 1e-3);
  // Independent check: golden-section on the relaxed bound itself.
  double a = tau_star(he), b = kLn2;
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  while (b - a > 1e-10) {
    const double c = b - r * (b - a), d = a + r * (b - a);
    if (relaxed_bound_at_saturation(he, c) < relaxed_bound_at_saturation(he, d)) {
      b = d;
    } else {
      a = c;
    }
  }
  EXPECT_NEAR(0.5 * (a + b), t0, 1e-5);
  EXPECT_NEAR(relaxed_bound_at_saturation(he, t0), 0.6557, 5e-4);
  EXPECT_NEAR(improved_bound(he, t0, kLn2), 0.6557, 5e-4);
  EXPECT_GT(improved_bound(he, t0, kLn2), kImprovedTarget);
}

TEST(Profiles, Construction) {
  EXPECT_THROW(PiecewiseProfile::step({0.0, 0.5}, {1.0}), ValidationError);
  EXPECT_THROW(PiecewiseProfile::step({0.0, 0.5, 0.5, 1.0}, {1.0, 1.0, 1.0}), ValidationError);
  EXPECT_THROW(PiecewiseProfile::step({0.0, 1.0}, {1.0, 1.0}), ValidationError);
  EXPECT_THROW(PiecewiseProfile::linear({0.0, 1.0}, {1.0}), ValidationError);
  const auto s = PiecewiseProfile::step({0.0, 0.5, 1.0}, {0.2, 0.6});
  EXPECT_EQ(s(0.49), 0.2);
  EXPECT_EQ(s(0.5), 0.6);
  EXPECT_EQ(s(1.0), 0.6);
  EXPECT_EQ(s.left_limit(0.5), 0.2);
  const auto l = PiecewiseProfile::linear({0.0, 1.0}, {0.0, 0.5});
  EXPECT_DOUBLE_EQ(l(0.5), 0.25);
}

TEST(Profiles, GeneralizedInverse) {
  const auto s = PiecewiseProfile::step({0.0, 0.5, 1.0}, {0.0, 0.3});
  EXPECT_EQ(s.generalized_inverse(0.1), 0.5);
  EXPECT_EQ(s.generalized_inverse(0.3), 1.0);
  const auto high = PiecewiseProfile::step({0.0, 1.0}, {0.2});
  EXPECT_EQ(high.generalized_inverse(0.1), 0.0);
  const auto l = PiecewiseProfile::linear({0.0, 1.0}, {0.0, 0.5});
  EXPECT_DOUBLE_EQ(l.generalized_inverse(0.25), 0.5);
}

TEST(Profiles, Validation) {
  StepProfiles p;
  p.beta = PiecewiseProfile::constant(0.5);
  p.theta = PiecewiseProfile::constant(0.4);
  EXPECT_THROW(validate_profiles(p), ValidationError);
  p.theta = PiecewiseProfile::constant(1.0);
  p.beta = PiecewiseProfile::step({0.0, 0.5, 1.0}, {0.5, 0.2});
  EXPECT_THROW(validate_profiles(p), ValidationError);
  p.beta = PiecewiseProfile::linear({0.0, 1.0}, {0.0, 1.0});
  EXPECT_NO_THROW(validate_profiles(p));
  p.theta = PiecewiseProfile::linear({0.0, 1.0}, {1.0, 0.5});  // crosses β at 2/3
  EXPECT_THROW(validate_profiles(p), ValidationError);
  EXPECT_THROW(conclusion_integral(GainSpec::half_exp(), p), ValidationError);
}

TEST(Conclusion, TrivialProfilesGiveOne) {
  for (const auto& s : all_specs()) EXPECT_NEAR(conclusion_integral(s, StepProfiles{}), 1.0, 1e-12) << s.name();
}

TEST(Conclusion, ConstantThetaClosedForm) {
  // β ≡ 0 empties both integrals: f = (1-c)·g(y_u, c) + c.
  const ClosedForm cf{true};
  for (double c : {0.2, 0.5, 0.9}) {
    StepProfiles p;
    p.theta = PiecewiseProfile::constant(c);
    EXPECT_NEAR(conclusion_integral(GainSpec::half_exp(), p), (1 - c) * cf.gint(0, 1, c) + c, 1e-9);
    // Adversarial: u's share is 1 - e^{c-1} regardless of y_u.
    EXPECT_NEAR(conclusion_integral(GainSpec::adversarial(), p), (1 - c) * (1 - std::exp(c - 1)) + c, 1e-9);
  }
}

TEST(Conclusion, StepBetaClosedForm) {
  // θ = .6, β = 0 on [0,.5); θ = 1, β = .3 after. β⁻¹ = .5 below .3.
  const ClosedForm cf{true};
  StepProfiles p;
  p.theta = PiecewiseProfile::step({0.0, 0.5, 1.0}, {0.6, 1.0});
  p.beta = PiecewiseProfile::step({0.0, 0.5, 1.0}, {0.0, 0.3});
  const double early = 0.4 * cf.gint(0, 0.5, 0.6) + 0.6 * 0.5;
  const double late = 0.5 * (0.7 + cf.gint(0, 0.3, 0.5));
  EXPECT_NEAR(conclusion_integral(GainSpec::half_exp(), p), early + late, 1e-9);
  EXPECT_NEAR(conclusion_integrand(GainSpec::half_exp(), p, 0.75), 0.7 + cf.gint(0, 0.3, 0.5), 1e-12);
}

TEST(Conclusion, StepProfilesAtMinimizer) {
  const auto he = GainSpec::half_exp();
  const auto m = minimize_bound(he, BoundKind::kImproved, 64);
  const auto p = step_profiles_at(m.tau, m.gamma);
  EXPECT_GE(conclusion_integral(he, p), improved_bound(he, m.tau, m.gamma) - 1e-6);
  EXPECT_NEAR(conclusion_integral(he, step_profiles_at(0.0, 1.0)), kImprovedTarget, 1e-9);
}
