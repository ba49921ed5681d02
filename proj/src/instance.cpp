#include "wranking/instance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "wranking/rng.hpp"

namespace wranking {

bool Instance::has_edge(std::size_t u, std::size_t v) const {
  const auto& adj = adjacency_.at(u);
  return std::binary_search(adj.begin(), adj.end(), static_cast<std::uint32_t>(v));
}

std::optional<std::size_t> Instance::find_offline(std::string_view id) const {
  auto it = offline_index_.find(std::string(id));
  if (it == offline_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Instance::find_online(std::string_view id) const {
  auto it = online_index_.find(std::string(id));
  if (it == online_index_.end()) return std::nullopt;
  return it->second;
}

RawInstance Instance::to_raw() const {
  RawInstance raw;
  raw.offline.reserve(num_offline());
  for (std::size_t v = 0; v < num_offline(); ++v) raw.offline.push_back({offline_ids_[v], weights_[v]});
  raw.online.reserve(num_online());
  for (std::size_t u = 0; u < num_online(); ++u) {
    RawOnlineVertex r{online_ids_[u], {}};
    for (auto v : adjacency_[u]) r.neighbors.push_back(offline_ids_[v]);
    raw.online.push_back(std::move(r));
  }
  return raw;
}

Instance validate_instance(const RawInstance& raw) {
  Instance inst;

  std::set<std::string> seen;
  for (const auto& o : raw.offline) {
    if (!seen.insert(o.id).second) throw ValidationError("duplicate id " + o.id, o.id);
    if (std::isnan(o.weight) || std::isinf(o.weight))
      throw ValidationError("non-finite weight " + o.id, o.id);
    if (o.weight < 0.0) throw ValidationError("negative weight " + o.id, o.id);
  }
  // Rank maps key both sides by id, so ids must also differ across sides.
  std::set<std::string> online_seen;
  for (const auto& o : raw.online)
    if (seen.count(o.id) != 0 || !online_seen.insert(o.id).second)
      throw ValidationError("duplicate id " + o.id, o.id);

  std::vector<std::size_t> off_order(raw.offline.size());
  std::iota(off_order.begin(), off_order.end(), 0);
  std::sort(off_order.begin(), off_order.end(),
            [&](std::size_t a, std::size_t b) { return raw.offline[a].id < raw.offline[b].id; });
  for (std::size_t k = 0; k < off_order.size(); ++k) {
    const auto& o = raw.offline[off_order[k]];
    inst.offline_ids_.push_back(o.id);
    inst.weights_.push_back(o.weight);
    inst.offline_index_.emplace(o.id, k);
  }

  std::vector<std::size_t> on_order(raw.online.size());
  std::iota(on_order.begin(), on_order.end(), 0);
  std::sort(on_order.begin(), on_order.end(),
            [&](std::size_t a, std::size_t b) { return raw.online[a].id < raw.online[b].id; });
  inst.reverse_adjacency_.resize(inst.offline_ids_.size());
  for (std::size_t k = 0; k < on_order.size(); ++k) {
    const auto& o = raw.online[on_order[k]];
    inst.online_ids_.push_back(o.id);
    inst.online_index_.emplace(o.id, k);
    std::vector<std::uint32_t> adj;
    adj.reserve(o.neighbors.size());
    for (const auto& nid : o.neighbors) {
      auto it = inst.offline_index_.find(nid);
      if (it == inst.offline_index_.end()) throw ValidationError("unknown neighbor " + nid, nid);
      adj.push_back(static_cast<std::uint32_t>(it->second));
    }
    std::sort(adj.begin(), adj.end());
    if (std::adjacent_find(adj.begin(), adj.end()) != adj.end()) {
      throw ValidationError("duplicate neighbor of " + o.id, o.id);
    }
    for (auto v : adj) inst.reverse_adjacency_[v].push_back(static_cast<std::uint32_t>(k));
    inst.num_edges_ += adj.size();
    inst.adjacency_.push_back(std::move(adj));
  }
  return inst;
}

void check_ranks(const Instance& instance, const RankAssignment& ranks) {
  if (ranks.offline().size() != instance.num_offline() ||
      ranks.online().size() != instance.num_online()) {
    throw ValidationError("rank assignment does not match instance size");
  }
  std::vector<std::pair<double, std::string>> all;
  all.reserve(instance.num_vertices());
  for (std::size_t v = 0; v < instance.num_offline(); ++v)
    all.emplace_back(ranks.offline(v), instance.offline_id(v));
  for (std::size_t u = 0; u < instance.num_online(); ++u)
    all.emplace_back(ranks.online(u), instance.online_id(u));
  for (const auto& [y, id] : all) {
    if (!(y >= 0.0 && y <= 1.0)) throw ValidationError("rank out of [0,1] for " + id, id);
  }
  std::sort(all.begin(), all.end());
  for (std::size_t i = 1; i < all.size(); ++i) {
    if (all[i].first == all[i - 1].first) {
      throw ValidationError("tied rank for " + all[i - 1].second + " and " + all[i].second,
                            all[i].second);
    }
  }
}

RankAssignment ranks_from_map(const Instance& instance, const std::map<std::string, double>& ranks) {
  std::vector<double> off(instance.num_offline(), -1.0);
  std::vector<double> on(instance.num_online(), -1.0);
  std::vector<bool> off_set(off.size(), false), on_set(on.size(), false);
  for (const auto& [id, y] : ranks) {
    if (auto v = instance.find_offline(id)) {
      off[*v] = y;
      off_set[*v] = true;
    } else if (auto u = instance.find_online(id)) {
      on[*u] = y;
      on_set[*u] = true;
    } else {
      throw ValidationError("rank for unknown vertex " + id, id);
    }
  }
  for (std::size_t v = 0; v < off.size(); ++v)
    if (!off_set[v]) throw ValidationError("missing rank for " + instance.offline_id(v), instance.offline_id(v));
  for (std::size_t u = 0; u < on.size(); ++u)
    if (!on_set[u]) throw ValidationError("missing rank for " + instance.online_id(u), instance.online_id(u));
  RankAssignment out(std::move(off), std::move(on));
  check_ranks(instance, out);
  return out;
}

std::map<std::string, double> ranks_to_map(const Instance& instance, const RankAssignment& ranks) {
  std::map<std::string, double> out;
  for (std::size_t v = 0; v < instance.num_offline(); ++v) out[instance.offline_id(v)] = ranks.offline(v);
  for (std::size_t u = 0; u < instance.num_online(); ++u) out[instance.online_id(u)] = ranks.online(u);
  return out;
}

RankAssignment sample_ranks(const Instance& instance, std::uint64_t seed) {
  Rng rng(seed, 0);
  std::vector<double> off(instance.num_offline());
  std::vector<double> on(instance.num_online());
  for (auto& y : off) y = rng.uniform();
  for (auto& y : on) y = rng.uniform();
  return RankAssignment(std::move(off), std::move(on));
}

void check_matching(const Instance& instance, const MatchingResult& m) {
  if (m.online_partner.size() != instance.num_online() ||
      m.offline_partner.size() != instance.num_offline()) {
    throw std::logic_error("matching partner arrays do not match instance");
  }
  std::vector<bool> used_on(instance.num_online(), false), used_off(instance.num_offline(), false);
  for (const auto& p : m.pairs) {
    if (p.online >= instance.num_online() || p.offline >= instance.num_offline())
      throw std::logic_error("matching references a vertex outside the instance");
    if (used_on[p.online] || used_off[p.offline]) throw std::logic_error("vertex matched twice");
    if (!instance.has_edge(p.online, p.offline)) throw std::logic_error("matched pair is not an edge");
    if (m.online_partner[p.online] != p.offline || m.offline_partner[p.offline] != p.online)
      throw std::logic_error("partner arrays disagree with pair list");
    used_on[p.online] = used_off[p.offline] = true;
  }
  for (std::size_t u = 0; u < used_on.size(); ++u)
    if (!used_on[u] && m.online_partner[u] != kUnmatched) throw std::logic_error("stray online partner");
  for (std::size_t v = 0; v < used_off.size(); ++v)
    if (!used_off[v] && m.offline_partner[v] != kUnmatched) throw std::logic_error("stray offline partner");
  if (m.total_weight != matched_weight(instance, m.pairs)) throw std::logic_error("total weight mismatch");
}

double matched_weight(const Instance& instance, std::span<const MatchedPair> pairs) {
  std::vector<bool> matched(instance.num_offline(), false);
  for (const auto& p : pairs) matched.at(p.offline) = true;
  double total = 0.0;
  for (std::size_t v = 0; v < matched.size(); ++v)
    if (matched[v]) total += instance.weight(v);
  return total;
}

double DualShares::total() const {
  double s = 0.0;
  for (double a : offline) s += a;
  for (double a : online) s += a;
  return s;
}

}  // namespace wranking
