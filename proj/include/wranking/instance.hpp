#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace wranking {

/// Thrown for malformed instances, rank assignments, profiles and configs.
/// `subject()` carries the offending vertex id when there is one.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& message, std::string subject = {})
      : std::invalid_argument(message), subject_(std::move(subject)) {}

  const std::string& subject() const noexcept { return subject_; }

 private:
  std::string subject_;
};

inline constexpr std::size_t kUnmatched = std::numeric_limits<std::size_t>::max();

struct RawOfflineVertex {
  std::string id;
  double weight = 0.0;
};

struct RawOnlineVertex {
  std::string id;
  std::vector<std::string> neighbors;
};

/// Unvalidated instance description, as read from JSON or built by hand.
struct RawInstance {
  std::vector<RawOfflineVertex> offline;
  std::vector<RawOnlineVertex> online;
};

/// Validated vertex-weighted bipartite graph. Offline and online vertices are
/// indexed in lexicographic id order; every downstream tie-break uses these
/// indices, so results are reproducible regardless of input order.
///
/// Immutable after construction. Build one with validate_instance().
class Instance {
 public:
  Instance() = default;

  std::size_t num_offline() const noexcept { return offline_ids_.size(); }
  std::size_t num_online() const noexcept { return online_ids_.size(); }
  std::size_t num_vertices() const noexcept { return num_offline() + num_online(); }
  std::size_t num_edges() const noexcept { return num_edges_; }

  const std::string& offline_id(std::size_t v) const { return offline_ids_.at(v); }
  const std::string& online_id(std::size_t u) const { return online_ids_.at(u); }
  double weight(std::size_t v) const { return weights_.at(v); }
  std::span<const double> weights() const noexcept { return weights_; }

  /// Offline neighbors of online vertex u, sorted ascending.
  std::span<const std::uint32_t> neighbors(std::size_t u) const { return adjacency_.at(u); }
  /// Online neighbors of offline vertex v, sorted ascending.
  std::span<const std::uint32_t> online_neighbors(std::size_t v) const {
    return reverse_adjacency_.at(v);
  }

  bool has_edge(std::size_t u, std::size_t v) const;

  std::optional<std::size_t> find_offline(std::string_view id) const;
  std::optional<std::size_t> find_online(std::string_view id) const;

  RawInstance to_raw() const;

 private:
  friend Instance validate_instance(const RawInstance& raw);

  std::vector<std::string> offline_ids_;
  std::vector<double> weights_;
  std::vector<std::string> online_ids_;
  std::vector<std::vector<std::uint32_t>> adjacency_;
  std::vector<std::vector<std::uint32_t>> reverse_adjacency_;
  std::unordered_map<std::string, std::size_t> offline_index_;
  std::unordered_map<std::string, std::size_t> online_index_;
  std::size_t num_edges_ = 0;
};

/// Checks ids, neighbor references and weights. Throws ValidationError naming
/// the offending id ("duplicate id v1", "unknown neighbor v9", "negative weight v1").
Instance validate_instance(const RawInstance& raw);

/// Ranks aligned with an instance's vertex indices: rank y_v for each offline
/// vertex and arrival time y_u for each online vertex.
class RankAssignment {
 public:
  RankAssignment() = default;
  RankAssignment(std::vector<double> offline, std::vector<double> online)
      : offline_(std::move(offline)), online_(std::move(online)) {}

  std::span<const double> offline() const noexcept { return offline_; }
  std::span<const double> online() const noexcept { return online_; }
  double offline(std::size_t v) const { return offline_.at(v); }
  double online(std::size_t u) const { return online_.at(u); }

  void set_offline(std::size_t v, double y) { offline_.at(v) = y; }
  void set_online(std::size_t u, double y) { online_.at(u) = y; }

  friend bool operator==(const RankAssignment&, const RankAssignment&) = default;

 private:
  std::vector<double> offline_;
  std::vector<double> online_;
};

/// Throws unless `ranks` covers exactly the instance's vertices with values in
/// [0,1] that are pairwise distinct.
void check_ranks(const Instance& instance, const RankAssignment& ranks);

/// Builds an index-aligned assignment from an id → rank map, then check_ranks().
RankAssignment ranks_from_map(const Instance& instance, const std::map<std::string, double>& ranks);
std::map<std::string, double> ranks_to_map(const Instance& instance, const RankAssignment& ranks);

/// Independent uniform ranks, a deterministic function of (instance shape, seed).
/// Offline vertices draw first, then online, both in index order.
RankAssignment sample_ranks(const Instance& instance, std::uint64_t seed);

struct MatchedPair {
  std::size_t online = kUnmatched;
  std::size_t offline = kUnmatched;

  friend bool operator==(const MatchedPair&, const MatchedPair&) = default;
};

/// A matching with pairs in arrival order. Partner arrays use kUnmatched.
struct MatchingResult {
  std::vector<MatchedPair> pairs;
  std::vector<std::size_t> online_partner;
  std::vector<std::size_t> offline_partner;
  double total_weight = 0.0;

  bool online_matched(std::size_t u) const { return online_partner.at(u) != kUnmatched; }
  bool offline_matched(std::size_t v) const { return offline_partner.at(v) != kUnmatched; }
};

/// Throws std::logic_error if `m` reuses a vertex, uses a non-edge, has
/// inconsistent partner arrays, or misreports its weight.
void check_matching(const Instance& instance, const MatchingResult& m);

/// Sum of weights over matched offline vertices, accumulated in index order.
double matched_weight(const Instance& instance, std::span<const MatchedPair> pairs);

/// Per-vertex gain shares (dual variables). Zero for unmatched vertices.
struct DualShares {
  std::vector<double> offline;
  std::vector<double> online;

  double total() const;
};

}  // namespace wranking
