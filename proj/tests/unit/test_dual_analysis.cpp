#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "support.hpp"
#include "wranking/dual_analysis.hpp"
#include "wranking/experiment.hpp"

using namespace wranking;
using wranking::testing::make_instance;
using wranking::testing::make_ranks;

namespace {

// v (w=1), z (w=1.2); u ~ {v, z}, a ~ {z}; y_z = .8, y_a = .5.
// Below y_u = .5, u prefers v iff h(y_v) < 1 - 0.2·h(y_u). Above it, a has
// already taken z and u always takes v.
struct Nonmonotone {
  Instance inst = make_instance({{"v", 1.0}, {"z", 1.2}}, {{"u", {"v", "z"}}, {"a", {"z"}}});
  RankAssignment ranks = make_ranks(inst, {{"v", 0.3}, {"z", 0.8}, {"u", 0.2}, {"a", 0.5}});
  std::size_t u = *inst.find_online("u");
  std::size_t v = *inst.find_offline("v");

  static double theta(double t) { return t < 0.5 ? std::log(2.0 * (1.0 - 0.1 * std::exp(t))) : 1.0; }
};

// z ~ {v, x}, u ~ {v}; y_z = .4, y_x = .3. When z arrives first it takes v
// iff y_v < .3, so β jumps from 0 to .3 at y_u = .4.
struct Competitor {
  Instance inst = make_instance({{"v", 1.0}, {"x", 1.0}}, {{"u", {"v"}}, {"z", {"v", "x"}}});
  RankAssignment ranks = make_ranks(inst, {{"v", 0.9}, {"x", 0.3}, {"u", 0.1}, {"z", 0.4}});
  std::size_t u = *inst.find_online("u");
  std::size_t v = *inst.find_offline("v");
};

}  // namespace

TEST(PairProbe, RejectsNonEdge) {
  const Nonmonotone f;
  const std::size_t a = *f.inst.find_online("a");
  EXPECT_THROW(PairProbe(f.inst, GainSpec::half_exp(), f.ranks, a, f.v), std::invalid_argument);
}

TEST(PairProbe, AgreesWithFreshRun) {
  Rng rng(17);
  for (int t = 0; t < 200; ++t) {
    const Instance inst = random_small_instance(rng, 5);
    if (inst.num_edges() == 0) continue;
    const auto base = sample_ranks(inst, static_cast<std::uint64_t>(t));
    std::size_t u = 0;
    while (inst.neighbors(u).empty()) ++u;
    const std::size_t v = inst.neighbors(u)[0];
    PairProbe probe(inst, GainSpec::half_exp(), base, u, v);
    for (int k = 0; k < 5; ++k) {
      const double yu = rng.uniform(), yv = rng.uniform();
      probe.evaluate(yu, yv);
      RankAssignment r = base;
      r.set_online(u, yu);
      r.set_offline(v, yv);
      const auto fresh = run_ranking(inst, GainSpec::half_exp(), r).matching;
      ASSERT_EQ(probe.simulator().matching().pairs, fresh.pairs);
    }
  }
}

TEST(Thresholds, SingleEdgeIsTrivial) {
  const Instance inst = make_instance({{"v", 1.0}}, {{"u", {"v"}}});
  const auto ranks = make_ranks(inst, {{"v", 0.5}, {"u", 0.5 + 1e-3}});
  const auto prof = compute_thresholds(inst, GainSpec::half_exp(), ranks, 0, 0, midpoint_grid(10));
  for (const auto& p : prof.points) {
    EXPECT_EQ(p.beta, 0.0);
    EXPECT_EQ(p.theta, 1.0);
  }
  EXPECT_EQ(prof.gamma, 0.0);
  EXPECT_EQ(prof.tau, 0.05);
  const auto est = pair_gain(inst, GainSpec::half_exp(), ranks, 0, 0, 50);
  EXPECT_NEAR(est.estimate, 1.0, 1e-14);
  EXPECT_EQ(est.tau, 0.0);
  EXPECT_EQ(est.gamma, 0.0);
}

TEST(Thresholds, CompetitorBetaJump) {
  const Competitor f;
  const GainSpec he = GainSpec::half_exp();
  const std::vector<double> grid{0.1, 0.2, 0.39, 0.41, 0.7, 0.95};
  const auto prof = compute_thresholds(f.inst, he, f.ranks, f.u, f.v, grid);
  for (const auto& p : prof.points) {
    EXPECT_NEAR(p.beta, p.y_u < 0.4 ? 0.0 : 0.3, 1e-8) << p.y_u;
    EXPECT_EQ(p.theta, 1.0);
  }
  EXPECT_NEAR(prof.gamma, 0.3, 1e-8);
  EXPECT_TRUE(check_profile(prof).ok());

  EXPECT_EQ(vary_two_ranks(f.inst, he, f.ranks, f.u, f.v, 0.5, 0.2).status, PairStatus::kMatchedBefore);
  EXPECT_EQ(vary_two_ranks(f.inst, he, f.ranks, f.u, f.v, 0.5, 0.35).status, PairStatus::kMatchedToU);
  EXPECT_EQ(vary_two_ranks(f.inst, he, f.ranks, f.u, f.v, 0.2, 0.2).status, PairStatus::kMatchedToU);
  EXPECT_NEAR(prof.beta_inverse(0.1), 0.41, 1e-15);
  EXPECT_EQ(prof.beta_inverse(0.35), 1.0);
}

TEST(Thresholds, NonmonotoneTheta) {
  const Nonmonotone f;
  const auto grid = midpoint_grid(20);
  const auto prof = compute_thresholds(f.inst, GainSpec::half_exp(), f.ranks, f.u, f.v, grid);
  for (const auto& p : prof.points) {
    EXPECT_EQ(p.beta, 0.0);
    EXPECT_NEAR(p.theta, Nonmonotone::theta(p.y_u), 1e-8) << p.y_u;
  }
  EXPECT_EQ(prof.tau, 0.525);
  // θ falls before it jumps to 1, yet the profile is legal.
  EXPECT_LT(prof.points[5].theta, prof.points[0].theta);
  EXPECT_TRUE(check_profile(prof).ok());
}

TEST(Thresholds, StatusIntervals) {
  const Nonmonotone f;
  const GainSpec he = GainSpec::half_exp();
  const double th = Nonmonotone::theta(0.2);
  EXPECT_EQ(vary_two_ranks(f.inst, he, f.ranks, f.u, f.v, 0.2, th - 0.01).status, PairStatus::kMatchedToU);
  const auto late = vary_two_ranks(f.inst, he, f.ranks, f.u, f.v, 0.2, th + 0.01);
  EXPECT_EQ(late.status, PairStatus::kUnmatchedAfter);
  EXPECT_FALSE(late.matching.offline_matched(f.v));
}

TEST(Thresholds, RejectsBadGrid) {
  const Nonmonotone f;
  const std::vector<double> unsorted{0.5, 0.2};
  const std::vector<double> edge{0.0, 0.5};
  EXPECT_THROW(compute_thresholds(f.inst, GainSpec::half_exp(), f.ranks, f.u, f.v, unsorted), std::invalid_argument);
  EXPECT_THROW(compute_thresholds(f.inst, GainSpec::half_exp(), f.ranks, f.u, f.v, edge), std::invalid_argument);
}

TEST(Thresholds, MutantBreaksStructure) {
  // With the smallest offer taken, u picks v only once y_v is high, so
  // unmatched-after shows up before matched-to-u.
  Rng rng(4);
  std::size_t raised = 0;
  for (int t = 0; t < 300 && raised == 0; ++t) {
    const Instance inst = random_small_instance(rng, 5);
    const auto base = sample_ranks(inst, static_cast<std::uint64_t>(t));
    for (std::size_t u = 0; u < inst.num_online() && raised == 0; ++u) {
      for (std::uint32_t v : inst.neighbors(u)) {
        PairProbe probe(inst, GainSpec::half_exp(), base, u, v, ChoiceRule::kReversed);
        PairStatus prev = PairStatus::kMatchedBefore;
        for (int k = 0; k <= 200; ++k) {
          const PairStatus s = probe.evaluate(0.5, k / 200.0);
          if (static_cast<int>(s) < static_cast<int>(prev)) ++raised;
          prev = s;
        }
      }
    }
  }
  EXPECT_GT(raised, 0u);
}

TEST(PairGain, NonmonotoneMatchesOracle) {
  const Nonmonotone f;
  // y_u > .5 gives 1. Below, u takes v (sum 1) or takes z with α_u = 0.3e^{y_u}.
  auto row = [](double t) {
    const double th = Nonmonotone::theta(t);
    return th + (1.0 - th) * 0.3 * std::exp(t);
  };
  double integral = 0.0;
  constexpr int kPanels = 20000;
  for (int i = 0; i < kPanels; ++i) integral += row((i + 0.5) * 0.5 / kPanels) * 0.5 / kPanels;
  const double oracle = 0.5 + integral;

  const auto est = pair_gain(f.inst, GainSpec::half_exp(), f.ranks, f.u, f.v, 400);
  EXPECT_NEAR(est.estimate, oracle, 2.0 / 400);
  EXPECT_NEAR(est.tau, 0.5, 1e-9);
  EXPECT_EQ(est.gamma, 0.0);
  EXPECT_NEAR(est.corner + est.v_side + est.u_side, est.estimate, 1e-12);
  EXPECT_GT(est.estimate, 0.6534);
}

TEST(PairGain, DecompositionSumsToEstimate) {
  Rng rng(23);
  for (int t = 0; t < 30; ++t) {
    const Instance inst = random_small_instance(rng, 4);
    const auto base = sample_ranks(inst, static_cast<std::uint64_t>(t));
    for (std::size_t u = 0; u < inst.num_online(); ++u) {
      for (std::uint32_t v : inst.neighbors(u)) {
        const auto est = pair_gain(inst, GainSpec::simple_exp(), base, u, v, 40);
        ASSERT_NEAR(est.corner + est.v_side + est.u_side, est.estimate, 1e-12);
      }
    }
  }
}

TEST(PairGain, ZeroWeightThrows) {
  const Instance inst = make_instance({{"v", 0.0}}, {{"u", {"v"}}});
  const auto ranks = make_ranks(inst, {{"v", 0.5}, {"u", 0.2}});
  EXPECT_THROW(pair_gain(inst, GainSpec::half_exp(), ranks, 0, 0, 10), std::invalid_argument);
}

TEST(FloorChecks, HoldOnFixtures) {
  const GainSpec he = GainSpec::half_exp();
  Rng rng(31);
  auto check = [&](const Instance& inst, const RankAssignment& ranks, std::size_t u, std::size_t v) {
    const auto prof = compute_thresholds(inst, he, ranks, u, v, midpoint_grid(16));
    EXPECT_TRUE(check_corner_gain(inst, he, ranks, prof, rng, 200).ok());
    EXPECT_TRUE(check_offline_gain_floor(inst, he, ranks, prof, rng, 200).ok());
    EXPECT_TRUE(check_online_gain_floor(inst, he, ranks, prof, rng, 200).ok());
  };
  const Nonmonotone a;
  check(a.inst, a.ranks, a.u, a.v);
  const Competitor b;
  check(b.inst, b.ranks, b.u, b.v);
}

TEST(FloorChecks, HoldOnRandomInstances) {
  Rng rng(77);
  for (int t = 0; t < 100; ++t) {
    const Instance inst = random_small_instance(rng, 5);
    const auto base = sample_ranks(inst, static_cast<std::uint64_t>(t));
    for (std::size_t u = 0; u < inst.num_online(); ++u) {
      for (std::uint32_t v : inst.neighbors(u)) {
        if (inst.weight(v) == 0.0) continue;
        for (const auto& spec : {GainSpec::simple_exp(), GainSpec::half_exp()}) {
          const auto prof = compute_thresholds(inst, spec, base, u, v, midpoint_grid(6), 1e-9, 200);
          ASSERT_TRUE(check_profile(prof).ok());
          ASSERT_TRUE(check_corner_gain(inst, spec, base, prof, rng, 20).ok());
          ASSERT_TRUE(check_offline_gain_floor(inst, spec, base, prof, rng, 20).ok());
          ASSERT_TRUE(check_online_gain_floor(inst, spec, base, prof, rng, 20).ok());
        }
      }
    }
  }
}

TEST(ProfileCheck, FlagsEachViolation) {
  ThresholdProfile p;
  p.points = {{0.1, 0.2, 0.5}, {0.2, 0.1, 1.0}, {0.3, 0.1, 0.7}, {0.4, 0.9, 0.8}};
  p.gamma = 0.9;
  const auto c = check_profile(p);
  EXPECT_EQ(c.monotone_violations, 2u);  // both points below the running max
  EXPECT_EQ(c.absorbing_violations, 2u);
  EXPECT_EQ(c.order_violations, 1u);
}

TEST(ProfileWriters, CsvAndJson) {
  const Competitor f;
  const std::vector<double> grid{0.2, 0.6};
  const auto prof = compute_thresholds(f.inst, GainSpec::half_exp(), f.ranks, f.u, f.v, grid);
  std::ostringstream csv, js;
  write_profile_csv(csv, prof);
  write_profile_json(js, f.inst, prof);
  EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')), "y_u,beta,theta");
  EXPECT_NE(js.str().find("\"gamma\""), std::string::npos);
}
