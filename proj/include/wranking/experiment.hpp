#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "wranking/gain.hpp"
#include "wranking/instance.hpp"
#include "wranking/ranking.hpp"
#include "wranking/rng.hpp"

namespace wranking {

/// Bad experiment parameters. The CLI maps this to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class GeneratorKind { kRandom, kUpperTriangular, kComplete, kWeightedRandom };

std::optional<GeneratorKind> parse_generator(std::string_view name);
const char* to_string(GeneratorKind kind);

struct GeneratorParams {
  std::size_t n = 0;    // online vertices
  std::size_t m = 0;    // offline vertices; 0 means n
  double p = 0.5;       // edge probability (random kinds)
};

/// Online ids u1..un, offline ids v1..vm. upper_triangular(n): u_i ~ v_j for
/// j ≥ i. weighted_random draws weights log-uniformly from [0.1, 10]; the
/// other kinds use unit weights. Throws ConfigError on bad params.
Instance generate_instance(GeneratorKind kind, const GeneratorParams& params, std::uint64_t seed);

/// 1..max_n vertices per side, edge probability in [0.2, 0.9], unit or
/// log-uniform weights with equal odds. Used by the property suites.
Instance random_small_instance(Rng& rng, std::size_t max_n);

/// Calls body(i) for i in [0, n) on `threads` workers (0 = hardware
/// concurrency). Work is split into contiguous blocks, so anything written by
/// index is independent of the thread count.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

struct RatioReport {
  std::string instance_label;
  std::string spec;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double opt = 0.0;
  std::vector<double> alg;  // per trial
  double mean_alg = 0.0;
  double mean_ratio = 0.0;  // E[ALG] / OPT
  double std_error = 0.0;   // of mean_ratio
  double min_ratio = 0.0;
  double max_ratio = 0.0;
};

/// Trial t runs Ranking on sample_ranks(instance, stream_seed(seed, t)).
/// Throws ConfigError for trials = 0 or OPT = 0.
RatioReport run_ratio_experiment(const Instance& instance, std::string label, const GainSpec& spec,
                                 std::size_t trials, std::uint64_t seed, unsigned threads = 1);

nlohmann::json ratio_report_to_json(const RatioReport& r, bool per_trial = false);
std::string ratio_report_to_text(const RatioReport& r);

struct SuiteConfig {
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  GainSpec spec = GainSpec::half_exp();
  ChoiceRule rule = ChoiceRule::kMaxOffer;
  std::size_t max_n = 6;
  std::size_t threshold_grid = 8;     // y_u points per threshold probe
  std::size_t sweep_points = 1000;    // y_v sweep before bisection
  std::vector<std::string> suites;    // empty: all
};

struct SuiteResult {
  std::string name;
  std::size_t trials = 0;
  std::size_t probes = 0;      // individual assertions checked
  std::size_t violations = 0;  // failing trials
  std::optional<std::uint64_t> repro_seed;  // failing trial with the smallest instance
  std::size_t repro_vertices = 0;
  std::string repro_detail;
  std::size_t informational = 0;  // non-gating count, suite specific
  bool ok() const { return violations == 0; }
};

struct PropertyReport {
  std::vector<SuiteResult> suites;
  bool ok() const;
};

/// Names accepted in SuiteConfig::suites, in execution order.
const std::vector<std::string>& property_suite_names();

/// Throws ConfigError for trials = 0 or an unknown suite name.
PropertyReport run_property_suite(const SuiteConfig& config);

struct TrialOutcome {
  std::size_t probes = 0;
  std::size_t informational = 0;
  std::size_t vertices = 0;
  std::string failure;  // empty when the trial passed
};

/// Re-runs one trial of `suite` from its reported seed.
TrialOutcome run_suite_trial(std::string_view suite, const SuiteConfig& config, std::uint64_t trial_seed);

/// Every trial seed of a suite, in order.
std::uint64_t suite_trial_seed(std::string_view suite, std::uint64_t master, std::size_t trial);

nlohmann::json property_report_to_json(const PropertyReport& r, const SuiteConfig& config);
std::string property_report_to_text(const PropertyReport& r);

}  // namespace wranking
