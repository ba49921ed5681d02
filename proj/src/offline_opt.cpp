#include "wranking/offline_opt.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace wranking {
namespace {

class Augmenter {
 public:
  explicit Augmenter(const Instance& inst)
      : inst_(inst), online_mate_(inst.num_online(), kUnmatched), offline_mate_(inst.num_offline(), kUnmatched) {}

  // Tries to cover offline vertex v while keeping every covered vertex covered.
  bool cover(std::size_t v) {
    visited_.assign(inst_.num_offline(), false);
    return augment_from(v);
  }

  OptResult result() const {
    OptResult r;
    for (std::size_t u = 0; u < online_mate_.size(); ++u)
      if (online_mate_[u] != kUnmatched) r.pairs.push_back({u, online_mate_[u]});
    r.value = matched_weight(inst_, r.pairs);
    return r;
  }

 private:
  bool augment_from(std::size_t v) {
    visited_[v] = true;
    for (std::uint32_t u : inst_.online_neighbors(v)) {
      const std::size_t other = online_mate_[u];
      if (other == kUnmatched || (!visited_[other] && augment_from(other))) {
        online_mate_[u] = v;
        offline_mate_[v] = u;
        return true;
      }
    }
    return false;
  }

  const Instance& inst_;
  std::vector<std::size_t> online_mate_, offline_mate_;
  std::vector<bool> visited_;
};

struct Enumerator {
  const Instance& inst;
  std::vector<bool> used;
  std::vector<MatchedPair> current, best;
  double current_value = 0.0, best_value = -1.0;

  void search(std::size_t u) {
    if (u == inst.num_online()) {
      if (current_value > best_value) {
        best_value = current_value;
        best = current;
      }
      return;
    }
    search(u + 1);
    for (std::uint32_t v : inst.neighbors(u)) {
      if (used[v]) continue;
      used[v] = true;
      current.push_back({u, v});
      current_value += inst.weight(v);
      search(u + 1);
      current_value -= inst.weight(v);
      current.pop_back();
      used[v] = false;
    }
  }
};

}  // namespace

OptResult solve_opt(const Instance& instance) {
  std::vector<std::size_t> order(instance.num_offline());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return instance.weight(a) > instance.weight(b); });
  Augmenter aug(instance);
  for (std::size_t v : order) {
    if (instance.weight(v) <= 0.0) break;
    aug.cover(v);
  }
  return aug.result();
}

OptResult brute_force_opt(const Instance& instance) {
  if (instance.num_online() > kBruteForceLimit || instance.num_offline() > kBruteForceLimit)
    throw std::invalid_argument("instance too large for brute force");
  Enumerator e{instance, std::vector<bool>(instance.num_offline(), false), {}, {}};
  e.search(0);
  OptResult r;
  r.pairs = e.best;
  r.value = matched_weight(instance, r.pairs);
  return r;
}

}  // namespace wranking
