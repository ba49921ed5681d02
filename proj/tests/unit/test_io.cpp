#include <gtest/gtest.h>

#include <algorithm>
#include <cstring>
#include <filesystem>

#include "support.hpp"
#include "wranking/experiment.hpp"
#include "wranking/io.hpp"

using namespace wranking;
using wranking::testing::make_instance;

namespace {

const std::filesystem::path kFixtures = WRANKING_FIXTURES;

json reparse(const json& j) { return json::parse(j.dump()); }

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST(InstanceJson, RoundTripIsBitExact) {
  Rng rng(12);
  for (int t = 0; t < 100; ++t) {
    const Instance a = generate_instance(GeneratorKind::kWeightedRandom, {5, 4, 0.6}, rng.engine()());
    const Instance b = instance_from_json(reparse(instance_to_json(a)));
    ASSERT_EQ(a.num_offline(), b.num_offline());
    ASSERT_EQ(a.num_edges(), b.num_edges());
    for (std::size_t v = 0; v < a.num_offline(); ++v) {
      ASSERT_EQ(a.offline_id(v), b.offline_id(v));
      ASSERT_TRUE(same_bits(a.weight(v), b.weight(v)));
    }
    for (std::size_t u = 0; u < a.num_online(); ++u)
      ASSERT_TRUE(std::ranges::equal(a.neighbors(u), b.neighbors(u)));
  }
}

TEST(InstanceJson, Errors) {
  EXPECT_THROW(instance_from_json(json::parse(R"({"offline": []})")), ValidationError);
  EXPECT_THROW(instance_from_json(json::parse(R"({"offline": [{"id": 3, "weight": 1}], "online": []})")),
               ValidationError);
  try {
    instance_from_json(read_json_file(kFixtures / "negative_weight.json"));
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_STREQ(e.what(), "negative weight v1");
  }
}

TEST(RanksJson, RoundTripIsBitExact) {
  const Instance inst = make_instance({{"v1", 1.0}, {"v2", 1.0}}, {{"u1", {"v1", "v2"}}});
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto r = sample_ranks(inst, s);
    EXPECT_EQ(ranks_from_json(inst, reparse(ranks_to_json(inst, r))), r);
  }
}

TEST(RanksJson, FixtureLoads) {
  const Instance inst = instance_from_json(read_json_file(kFixtures / "one_by_two.json"));
  const auto r = ranks_from_json(inst, read_json_file(kFixtures / "one_by_two_ranks.json"));
  EXPECT_EQ(r.offline(*inst.find_offline("v2")), 0.9);
  EXPECT_THROW(ranks_from_json(inst, json::parse(R"({"ranks": {"v1": 0.5}})")), ValidationError);
  EXPECT_THROW(ranks_from_json(inst, json::parse(R"({"rank": {}})")), ValidationError);
}

TEST(GainJson, RoundTrip) {
  for (const auto& s : {GainSpec::simple_exp(), GainSpec::half_exp(), GainSpec::adversarial()})
    EXPECT_EQ(gain_from_json(reparse(gain_to_json(s))).kind(), s.kind());
  const GainSpec t = load_gain((kFixtures / "table_gain.json").string());
  EXPECT_EQ(t.kind(), GainKind::kTable);
  const GainSpec back = gain_from_json(reparse(gain_to_json(t)));
  for (int i = 0; i <= 100; ++i) ASSERT_TRUE(same_bits(t.h(i / 100.0), back.h(i / 100.0)));
}

TEST(GainJson, Errors) {
  EXPECT_THROW(gain_from_json(json::parse(R"({"kind": "cubic"})")), ValidationError);
  EXPECT_THROW(gain_from_json(json::parse(R"({"kind": "table", "breakpoints": [0, 1]})")), ValidationError);
  EXPECT_THROW(load_gain("/nonexistent/gain.json"), ValidationError);
  EXPECT_EQ(load_gain("half-exp").kind(), GainKind::kHalfExp);
}

TEST(ProfilesJson, RoundTripAndValidation) {
  const StepProfiles p = profiles_from_json(read_json_file(kFixtures / "step_profiles_0_1.json"));
  EXPECT_EQ(p.beta(0.3), 1.0);
  StepProfiles q;
  q.theta = PiecewiseProfile::linear({0.0, 0.3, 1.0}, {0.6, 0.7, 1.0});
  q.beta = PiecewiseProfile::step({0.0, 0.5, 1.0}, {0.1, 0.2});
  const StepProfiles r = profiles_from_json(reparse(profiles_to_json(q)));
  EXPECT_EQ(r.theta.knots(), q.theta.knots());
  EXPECT_EQ(r.theta.values(), q.theta.values());
  EXPECT_EQ(r.beta.shape(), PiecewiseProfile::Shape::kStep);
  EXPECT_THROW(profiles_from_json(json::parse(
                   R"({"theta": {"shape": "step", "knots": [0, 1], "values": [0.2]},
                       "beta": {"shape": "step", "knots": [0, 1], "values": [0.5]}})")),
               ValidationError);
  EXPECT_THROW(profiles_from_json(json::parse(
                   R"({"theta": {"shape": "spline", "knots": [0, 1], "values": [1]},
                       "beta": {"shape": "step", "knots": [0, 1], "values": [0]}})")),
               ValidationError);
}

TEST(ResultJson, MatchingAndDuals) {
  const Instance inst = make_instance({{"v1", 2.0}}, {{"u1", {"v1"}}});
  MatchingResult m;
  m.pairs = {{0, 0}};
  m.online_partner = {0};
  m.offline_partner = {0};
  m.total_weight = 2.0;
  const json jm = matching_to_json(inst, m);
  EXPECT_EQ(jm["pairs"][0][0], "u1");
  EXPECT_EQ(jm["pairs"][0][1], "v1");
  EXPECT_EQ(jm["total_weight"], 2.0);
  const json jd = duals_to_json(inst, DualShares{{1.5}, {0.5}});
  EXPECT_EQ(jd["alpha"]["v1"], 1.5);
  EXPECT_EQ(jd["total"], 2.0);
}

TEST(Files, ReadErrors) {
  EXPECT_THROW(read_json_file(kFixtures / "missing.json"), ValidationError);
  const auto tmp = std::filesystem::temp_directory_path() / "wranking_bad.json";
  write_text_file(tmp, "{not json");
  EXPECT_THROW(read_json_file(tmp), ValidationError);
  std::filesystem::remove(tmp);
}
