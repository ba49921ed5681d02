#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "wranking/gain.hpp"
#include "wranking/instance.hpp"

namespace wranking {

/// Which offer an arriving vertex accepts. kReversed exists only so the
/// property suite can demonstrate that it catches a broken choice rule.
enum class ChoiceRule { kMaxOffer, kReversed };

struct Offer {
  std::size_t offline = kUnmatched;
  double value = 0.0;
};

struct ArrivalRecord {
  std::size_t online = kUnmatched;
  double time = 0.0;
  std::vector<Offer> offers;  // one per unmatched neighbor, ascending offline index
  std::optional<std::size_t> chosen;
};

struct SimulationTrace {
  std::vector<ArrivalRecord> arrivals;  // increasing arrival time
  /// Arrival time of each offline vertex's partner; +inf when unmatched.
  std::vector<double> match_time;
};

struct RankingOutcome {
  MatchingResult matching;
  SimulationTrace trace;
};

/// Weighted Ranking: online vertices arrive in increasing y_u; each takes the
/// unmatched neighbor with the largest offer w_v·(1 - g(y_v, y_u)). Offer
/// ties go to the smaller offline rank, then the smaller index.
RankingOutcome run_ranking(const Instance& instance, const GainSpec& spec, const RankAssignment& ranks,
                           ChoiceRule rule = ChoiceRule::kMaxOffer);

/// Gain sharing: for each matched (u, v), α_v = w_v·g(y_v, y_u) and
/// α_u = w_v - α_v. Unmatched vertices get 0.
DualShares assign_duals(const Instance& instance, const MatchingResult& result, const GainSpec& spec,
                        const RankAssignment& ranks);

/// One JSON object per arrival:
/// {"arrival":k,"online":id,"time":y,"offers":[{"offline":id,"offer":x}...],"chosen":id|null}
void write_trace_jsonl(std::ostream& out, const Instance& instance, const SimulationTrace& trace);

/// Allocation-free Ranking for hot loops. Holds references to the instance
/// and spec, which must outlive it. Not thread-safe; use one per worker.
class Simulator {
 public:
  Simulator(const Instance& instance, const GainSpec& spec, ChoiceRule rule = ChoiceRule::kMaxOffer);
  Simulator(Instance&&, const GainSpec&, ChoiceRule = ChoiceRule::kMaxOffer) = delete;

  void run(const RankAssignment& ranks);

  /// Runs with caller-supplied keys (see GainSpec::key) and arrival order.
  /// `arrival_order` must list every online index once, sorted by rank.
  void run_prepared(std::span<const double> offline_ranks, std::span<const double> offline_keys,
                    std::span<const double> online_ranks, std::span<const double> online_keys,
                    std::span<const std::uint32_t> arrival_order);

  std::size_t offline_partner(std::size_t v) const { return offline_partner_[v]; }
  std::size_t online_partner(std::size_t u) const { return online_partner_[u]; }
  /// Arrival time of v's partner, +inf if unmatched.
  double match_time(std::size_t v) const { return match_time_[v]; }
  std::span<const double> match_times() const noexcept { return match_time_; }
  std::span<const MatchedPair> pairs() const noexcept { return pairs_; }
  /// Offer accepted by u, i.e. α_u. Zero if u is unmatched.
  double online_gain(std::size_t u) const { return online_gain_[u]; }
  /// α_v under gain sharing. Zero if v is unmatched.
  double offline_gain(std::size_t v) const { return offline_gain_[v]; }
  double total_weight() const;

  MatchingResult matching() const;

 private:
  const Instance& instance_;
  GainSpec spec_;  // owned copy, so temporaries are safe
  ChoiceRule rule_;
  std::vector<double> off_keys_, on_keys_;
  std::vector<std::uint32_t> order_;
  std::vector<std::size_t> offline_partner_, online_partner_;
  std::vector<double> match_time_, online_gain_, offline_gain_;
  std::vector<MatchedPair> pairs_;
  SimulationTrace* trace_ = nullptr;

  friend RankingOutcome run_ranking(const Instance&, const GainSpec&, const RankAssignment&, ChoiceRule);
};

/// Online indices sorted by (rank, index).
std::vector<std::uint32_t> arrival_order(std::span<const double> online_ranks);

}  // namespace wranking
