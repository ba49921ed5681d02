#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "wranking/instance.hpp"

namespace wranking::testing {

struct OnlineSpec {
  std::string id;
  std::vector<std::string> neighbors;
};

inline Instance make_instance(std::vector<std::pair<std::string, double>> offline, std::vector<OnlineSpec> online) {
  RawInstance raw;
  for (auto& [id, w] : offline) raw.offline.push_back({id, w});
  for (auto& o : online) raw.online.push_back({o.id, o.neighbors});
  return validate_instance(raw);
}

inline RankAssignment make_ranks(const Instance& inst, const std::map<std::string, double>& ranks) {
  return ranks_from_map(inst, ranks);
}

}  // namespace wranking::testing
