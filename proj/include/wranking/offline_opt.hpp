#pragma once

#include <cstddef>
#include <vector>

#include "wranking/instance.hpp"

namespace wranking {

struct OptResult {
  std::vector<MatchedPair> pairs;  // ascending online index
  double value = 0.0;              // Σ w_v over matched offline vertices, index order
};

/// Maximum-weight matching (not necessarily perfect).
///
/// Weights sit on offline vertices only, so the sets of offline vertices that
/// can be covered by some matching form a transversal matroid and the greedy
/// rule is exact: visit offline vertices by decreasing weight and keep each
/// one for which an augmenting path exists. Decisions compare weights only,
/// never sums, so the result is exact in floating point. O(|V|·|E|).
OptResult solve_opt(const Instance& instance);

inline constexpr std::size_t kBruteForceLimit = 10;

/// Exhaustive enumeration over all matchings. Throws std::invalid_argument
/// when either side has more than kBruteForceLimit vertices.
OptResult brute_force_opt(const Instance& instance);

}  // namespace wranking
