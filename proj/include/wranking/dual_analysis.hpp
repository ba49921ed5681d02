#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "wranking/gain.hpp"
#include "wranking/instance.hpp"
#include "wranking/ranking.hpp"
#include "wranking/rng.hpp"

namespace wranking {

/// Where v stands relative to u's arrival.
enum class PairStatus {
  kMatchedBefore,   // v already taken when u arrives
  kMatchedToU,      // u takes v
  kUnmatchedAfter,  // v still free right after u's arrival
};

const char* to_string(PairStatus s);

/// Re-runs Ranking with every rank fixed except y_u and y_v. Reuses buffers
/// and pre-computed keys across calls; one probe per thread.
class PairProbe {
 public:
  /// Throws std::invalid_argument if (u, v) is not an edge.
  PairProbe(const Instance& instance, const GainSpec& spec, const RankAssignment& base, std::size_t u,
            std::size_t v, ChoiceRule rule = ChoiceRule::kMaxOffer);
  PairProbe(Instance&&, const GainSpec&, const RankAssignment&, std::size_t, std::size_t,
            ChoiceRule = ChoiceRule::kMaxOffer) = delete;

  PairStatus evaluate(double y_u, double y_v);

  double alpha_u() const { return sim_.online_gain(u_); }
  double alpha_v() const { return sim_.offline_gain(v_); }
  const Simulator& simulator() const { return sim_; }
  std::size_t u() const { return u_; }
  std::size_t v() const { return v_; }
  double weight() const { return weight_; }
  /// Ranks used by the most recent evaluate().
  RankAssignment current_ranks() const;

 private:
  const Instance& instance_;
  GainSpec spec_;  // owned copy, so temporaries are safe
  std::size_t u_, v_;
  double weight_;
  Simulator sim_;
  std::vector<double> off_ranks_, off_keys_, on_ranks_, on_keys_;
  std::vector<std::uint32_t> others_;  // online indices except u, arrival order
  std::vector<std::uint32_t> order_;
};

struct TwoRankRun {
  MatchingResult matching;
  DualShares duals;
  PairStatus status;
};

/// Ranking with only y_u and y_v overridden. Throws if (u, v) is not an edge.
TwoRankRun vary_two_ranks(const Instance& instance, const GainSpec& spec, const RankAssignment& base,
                          std::size_t u, std::size_t v, double y_u, double y_v);

/// Raised when statuses along increasing y_v are not a prefix of
/// kMatchedBefore, then kMatchedToU, then kUnmatchedAfter.
class ThresholdStructureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ThresholdPoint {
  double y_u = 0.0;
  double beta = 0.0;
  double theta = 1.0;
};

/// β(y_u), θ(y_u) on a grid for one edge with all other ranks fixed.
/// Status intervals are half-open; exact boundaries are measure zero.
struct ThresholdProfile {
  std::size_t u = 0, v = 0;
  std::vector<ThresholdPoint> points;  // ascending y_u
  double tau = 1.0;                    // smallest grid y_u with θ = 1, else 1
  double gamma = 0.0;                  // β(1)

  /// Upper estimate of sup{y : β(y) ≤ x}: the first grid y_u (or 1) with
  /// β > x. Returns 1 for x ≥ γ.
  double beta_inverse(double x) const;
};

struct ThresholdOptions {
  std::size_t sweep_points = 1000;
  double refine_tol = 1e-9;
};

/// For each y_u in `y_u_grid`, sweeps y_v over [0,1] then bisects each status
/// boundary to `refine_tol`. Throws ThresholdStructureError if the statuses
/// do not form three contiguous intervals.
ThresholdProfile compute_thresholds(const Instance& instance, const GainSpec& spec, const RankAssignment& base,
                                    std::size_t u, std::size_t v, std::span<const double> y_u_grid,
                                    double refine_tol = 1e-9, std::size_t sweep_points = 1000);

/// {(k + 1/2) / n : k < n}
std::vector<double> midpoint_grid(std::size_t n);

struct ProfileCheck {
  std::size_t order_violations = 0;      // 0 ≤ β ≤ θ ≤ 1 broken
  std::size_t monotone_violations = 0;   // β decreased
  std::size_t absorbing_violations = 0;  // θ left 1
  bool ok() const { return order_violations + monotone_violations + absorbing_violations == 0; }
};

ProfileCheck check_profile(const ThresholdProfile& profile, double tol = 1e-8);

struct PairGainEstimate {
  std::size_t u = 0, v = 0;
  std::size_t grid_n = 0;
  double estimate = 0.0;  // E[α_u + α_v] / w_v
  double corner = 0.0;    // y_u > τ and y_v > γ
  double v_side = 0.0;    // α_v when y_v < γ, plus α_u when also y_u > τ
  double u_side = 0.0;    // α_u when y_u < τ, plus α_v when also y_v > γ
  double tau = 1.0;
  double gamma = 0.0;
};

/// Midpoint-rule estimate of E[α_u + α_v] / w_v over (y_u, y_v) uniform on
/// [0,1]², split into the corner / v-side / u-side regions. τ and γ are
/// located by bisection. Throws std::invalid_argument for w_v = 0.
PairGainEstimate pair_gain(const Instance& instance, const GainSpec& spec, const RankAssignment& base,
                           std::size_t u, std::size_t v, std::size_t grid_n);

/// Outcome of a pointwise lower-bound check.
struct FloorCheck {
  std::size_t probes = 0;
  std::size_t violations = 0;
  double worst_gap = 0.0;  // most negative (observed - floor), 0 if none below
  bool ok() const { return violations == 0; }
};

/// y_u > τ and y_v > γ must give α_u + α_v = w_v.
FloorCheck check_corner_gain(const Instance& instance, const GainSpec& spec, const RankAssignment& base,
                             const ThresholdProfile& profile, Rng& rng, std::size_t samples);

/// For y_v = x < γ and every profiled y_u: α_v ≥ w_v·g(x, β⁻¹(x)).
FloorCheck check_offline_gain_floor(const Instance& instance, const GainSpec& spec, const RankAssignment& base,
                                    const ThresholdProfile& profile, Rng& rng, std::size_t samples);

/// For profiled y_u = x < τ and sampled y_v: α_u ≥ w_v·(u's share at (x, θ(x))).
FloorCheck check_online_gain_floor(const Instance& instance, const GainSpec& spec, const RankAssignment& base,
                                   const ThresholdProfile& profile, Rng& rng, std::size_t samples);

void write_profile_csv(std::ostream& out, const ThresholdProfile& profile);
void write_profile_json(std::ostream& out, const Instance& instance, const ThresholdProfile& profile);

}  // namespace wranking
