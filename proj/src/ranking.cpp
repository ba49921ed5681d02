#include "wranking/ranking.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <ostream>

#include "json.hpp"

namespace wranking {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::vector<std::uint32_t> arrival_order(std::span<const double> online_ranks) {
  std::vector<std::uint32_t> order(online_ranks.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (online_ranks[a] != online_ranks[b]) return online_ranks[a] < online_ranks[b];
    return a < b;
  });
  return order;
}

Simulator::Simulator(const Instance& instance, const GainSpec& spec, ChoiceRule rule)
    : instance_(instance),
      spec_(spec),
      rule_(rule),
      off_keys_(instance.num_offline()),
      on_keys_(instance.num_online()),
      offline_partner_(instance.num_offline(), kUnmatched),
      online_partner_(instance.num_online(), kUnmatched),
      match_time_(instance.num_offline(), kInf),
      online_gain_(instance.num_online(), 0.0),
      offline_gain_(instance.num_offline(), 0.0) {
  pairs_.reserve(std::min(instance.num_offline(), instance.num_online()));
}

void Simulator::run(const RankAssignment& ranks) {
  const auto off = ranks.offline();
  const auto on = ranks.online();
  for (std::size_t v = 0; v < off.size(); ++v) off_keys_[v] = spec_.key(off[v]);
  for (std::size_t u = 0; u < on.size(); ++u) on_keys_[u] = spec_.key(on[u]);
  order_ = arrival_order(on);
  run_prepared(off, off_keys_, on, on_keys_, order_);
}

void Simulator::run_prepared(std::span<const double> offline_ranks, std::span<const double> offline_keys,
                             std::span<const double> online_ranks, std::span<const double> online_keys,
                             std::span<const std::uint32_t> order) {
  std::fill(offline_partner_.begin(), offline_partner_.end(), kUnmatched);
  std::fill(online_partner_.begin(), online_partner_.end(), kUnmatched);
  std::fill(match_time_.begin(), match_time_.end(), kInf);
  std::fill(online_gain_.begin(), online_gain_.end(), 0.0);
  std::fill(offline_gain_.begin(), offline_gain_.end(), 0.0);
  pairs_.clear();

  const auto weights = instance_.weights();
  const bool maximize = rule_ == ChoiceRule::kMaxOffer;
  for (std::uint32_t u : order) {
    const double key_u = online_keys[u];
    std::size_t best = kUnmatched;
    double best_offer = 0.0, best_rank = 0.0, best_share = 0.0;
    ArrivalRecord* record = nullptr;
    if (trace_ != nullptr) {
      trace_->arrivals.push_back({u, online_ranks[u], {}, std::nullopt});
      record = &trace_->arrivals.back();
    }
    for (std::uint32_t v : instance_.neighbors(u)) {
      if (offline_partner_[v] != kUnmatched) continue;
      const double w = weights[v];
      const double share_v = w * spec_.combine(offline_keys[v], key_u);
      const double offer = w - share_v;
      if (record != nullptr) record->offers.push_back({v, offer});
      bool take = best == kUnmatched;
      if (!take) {
        if (offer != best_offer) {
          take = maximize ? offer > best_offer : offer < best_offer;
        } else {
          take = offline_ranks[v] < best_rank;
        }
      }
      if (take) {
        best = v;
        best_offer = offer;
        best_rank = offline_ranks[v];
        best_share = share_v;
      }
    }
    if (best == kUnmatched) continue;
    offline_partner_[best] = u;
    online_partner_[u] = best;
    match_time_[best] = online_ranks[u];
    online_gain_[u] = best_offer;
    offline_gain_[best] = best_share;
    pairs_.push_back({u, best});
    if (record != nullptr) record->chosen = best;
  }
}

double Simulator::total_weight() const {
  double total = 0.0;
  const auto weights = instance_.weights();
  for (std::size_t v = 0; v < offline_partner_.size(); ++v)
    if (offline_partner_[v] != kUnmatched) total += weights[v];
  return total;
}

MatchingResult Simulator::matching() const {
  MatchingResult m;
  m.pairs = pairs_;
  m.online_partner = online_partner_;
  m.offline_partner = offline_partner_;
  m.total_weight = total_weight();
  return m;
}

RankingOutcome run_ranking(const Instance& instance, const GainSpec& spec, const RankAssignment& ranks,
                           ChoiceRule rule) {
  check_ranks(instance, ranks);
  RankingOutcome out;
  Simulator sim(instance, spec, rule);
  out.trace.arrivals.reserve(instance.num_online());
  sim.trace_ = &out.trace;
  sim.run(ranks);
  sim.trace_ = nullptr;
  out.matching = sim.matching();
  out.trace.match_time.assign(sim.match_times().begin(), sim.match_times().end());
  return out;
}

DualShares assign_duals(const Instance& instance, const MatchingResult& result, const GainSpec& spec,
                        const RankAssignment& ranks) {
  DualShares d;
  d.offline.assign(instance.num_offline(), 0.0);
  d.online.assign(instance.num_online(), 0.0);
  for (const auto& p : result.pairs) {
    const double w = instance.weight(p.offline);
    const double share_v = w * spec.g(ranks.offline(p.offline), ranks.online(p.online));
    d.offline[p.offline] = share_v;
    d.online[p.online] = w - share_v;
  }
  return d;
}

void write_trace_jsonl(std::ostream& out, const Instance& instance, const SimulationTrace& trace) {
  std::size_t k = 0;
  for (const auto& a : trace.arrivals) {
    nlohmann::json line;
    line["arrival"] = k++;
    line["online"] = instance.online_id(a.online);
    line["time"] = a.time;
    line["offers"] = nlohmann::json::array();
    for (const auto& o : a.offers)
      line["offers"].push_back({{"offline", instance.offline_id(o.offline)}, {"offer", o.value}});
    line["chosen"] = a.chosen ? nlohmann::json(instance.offline_id(*a.chosen)) : nlohmann::json(nullptr);
    out << line.dump() << '\n';
  }
}

}  // namespace wranking
