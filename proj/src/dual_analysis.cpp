#include "wranking/dual_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace wranking {

const char* to_string(PairStatus s) {
  switch (s) {
    case PairStatus::kMatchedBefore: return "matched-before";
    case PairStatus::kMatchedToU: return "matched-to-u";
    case PairStatus::kUnmatchedAfter: return "unmatched-after";
  }
  return "?";
}

PairProbe::PairProbe(const Instance& instance, const GainSpec& spec, const RankAssignment& base, std::size_t u,
                     std::size_t v, ChoiceRule rule)
    : instance_(instance), spec_(spec), u_(u), v_(v), weight_(0.0), sim_(instance, spec, rule) {
  if (u >= instance.num_online() || v >= instance.num_offline() || !instance.has_edge(u, v))
    throw std::invalid_argument("(u, v) is not an edge");
  weight_ = instance.weight(v);
  off_ranks_.assign(base.offline().begin(), base.offline().end());
  on_ranks_.assign(base.online().begin(), base.online().end());
  off_keys_.resize(off_ranks_.size());
  on_keys_.resize(on_ranks_.size());
  for (std::size_t i = 0; i < off_ranks_.size(); ++i) off_keys_[i] = spec.key(off_ranks_[i]);
  for (std::size_t i = 0; i < on_ranks_.size(); ++i) on_keys_[i] = spec.key(on_ranks_[i]);
  for (std::uint32_t z : arrival_order(on_ranks_))
    if (z != u) others_.push_back(z);
  order_.resize(on_ranks_.size());
}

PairStatus PairProbe::evaluate(double y_u, double y_v) {
  if (off_ranks_[v_] != y_v || off_keys_[v_] != spec_.key(y_v)) {
    off_ranks_[v_] = y_v;
    off_keys_[v_] = spec_.key(y_v);
  }
  if (on_ranks_[u_] != y_u) {
    on_ranks_[u_] = y_u;
    on_keys_[u_] = spec_.key(y_u);
  }
  const auto uu = static_cast<std::uint32_t>(u_);
  auto arrives_before_u = [&](std::uint32_t z) {
    return on_ranks_[z] < y_u || (on_ranks_[z] == y_u && z < uu);
  };
  auto split = std::partition_point(others_.begin(), others_.end(), arrives_before_u);
  auto out = std::copy(others_.begin(), split, order_.begin());
  *out++ = uu;
  std::copy(split, others_.end(), out);

  sim_.run_prepared(off_ranks_, off_keys_, on_ranks_, on_keys_, order_);

  const std::size_t partner = sim_.offline_partner(v_);
  if (partner == u_) return PairStatus::kMatchedToU;
  if (partner != kUnmatched && arrives_before_u(static_cast<std::uint32_t>(partner)))
    return PairStatus::kMatchedBefore;
  return PairStatus::kUnmatchedAfter;
}

RankAssignment PairProbe::current_ranks() const { return RankAssignment(off_ranks_, on_ranks_); }

TwoRankRun vary_two_ranks(const Instance& instance, const GainSpec& spec, const RankAssignment& base,
                          std::size_t u, std::size_t v, double y_u, double y_v) {
  PairProbe probe(instance, spec, base, u, v);
  TwoRankRun run;
  run.status = probe.evaluate(y_u, y_v);
  run.matching = probe.simulator().matching();
  run.duals = assign_duals(instance, run.matching, spec, probe.current_ranks());
  return run;
}

namespace {

template <class Pred>
double bisect(double lo, double hi, double tol, Pred&& pred_at_hi) {
  // Invariant: !pred(lo), pred(hi).
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (pred_at_hi(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

ThresholdPoint locate(PairProbe& probe, double y_u, std::size_t sweep, double tol) {
  std::vector<PairStatus> st(sweep + 1);
  auto y_at = [&](std::size_t k) { return k == sweep ? 1.0 : static_cast<double>(k) / static_cast<double>(sweep); };
  for (std::size_t k = 0; k <= sweep; ++k) {
    st[k] = probe.evaluate(y_u, y_at(k));
    if (k > 0 && static_cast<int>(st[k]) < static_cast<int>(st[k - 1])) {
      std::ostringstream msg;
      msg << "status pattern broken at y_u=" << y_u << ": " << to_string(st[k - 1]) << " at y_v=" << y_at(k - 1)
          << " then " << to_string(st[k]) << " at y_v=" << y_at(k);
      throw ThresholdStructureError(msg.str());
    }
  }

  ThresholdPoint p{y_u, 0.0, 1.0};
  if (st[0] == PairStatus::kMatchedBefore) {
    std::size_t kb = 0;
    while (kb + 1 <= sweep && st[kb + 1] == PairStatus::kMatchedBefore) ++kb;
    if (kb == sweep) {
      p.beta = 1.0;
    } else {
      p.beta = bisect(y_at(kb), y_at(kb + 1), tol, [&](double y) {
        return probe.evaluate(y_u, y) != PairStatus::kMatchedBefore;
      });
    }
  }
  auto first_free = std::find(st.begin(), st.end(), PairStatus::kUnmatchedAfter);
  if (first_free != st.end()) {
    const auto kt = static_cast<std::size_t>(first_free - st.begin());
    if (kt == 0) {
      p.theta = 0.0;
    } else {
      p.theta = bisect(y_at(kt - 1), y_at(kt), tol, [&](double y) {
        return probe.evaluate(y_u, y) == PairStatus::kUnmatchedAfter;
      });
    }
  }
  if (p.beta == 1.0) p.theta = 1.0;
  return p;
}

}  // namespace

double ThresholdProfile::beta_inverse(double x) const {
  if (x >= gamma) return 1.0;
  for (const auto& p : points)
    if (p.beta > x) return p.y_u;
  return 1.0;
}

ThresholdProfile compute_thresholds(const Instance& instance, const GainSpec& spec, const RankAssignment& base,
                                    std::size_t u, std::size_t v, std::span<const double> y_u_grid,
                                    double refine_tol, std::size_t sweep_points) {
  if (!(refine_tol > 0.0)) throw std::invalid_argument("refine_tol must be positive");
  if (sweep_points < 2) throw std::invalid_argument("sweep_points must be at least 2");
  for (std::size_t i = 0; i < y_u_grid.size(); ++i) {
    if (!(y_u_grid[i] > 0.0 && y_u_grid[i] < 1.0)) throw std::invalid_argument("y_u grid must lie in (0,1)");
    if (i > 0 && !(y_u_grid[i] > y_u_grid[i - 1])) throw std::invalid_argument("y_u grid must be sorted");
  }
  PairProbe probe(instance, spec, base, u, v);
  ThresholdProfile prof;
  prof.u = u;
  prof.v = v;
  prof.points.reserve(y_u_grid.size());
  for (double y : y_u_grid) prof.points.push_back(locate(probe, y, sweep_points, refine_tol));
  prof.gamma = locate(probe, 1.0, sweep_points, refine_tol).beta;
  prof.tau = 1.0;
  for (const auto& p : prof.points) {
    if (p.theta == 1.0) {
      prof.tau = p.y_u;
      break;
    }
  }
  return prof;
}

std::vector<double> midpoint_grid(std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t k = 0; k < n; ++k) g[k] = (static_cast<double>(k) + 0.5) / static_cast<double>(n);
  return g;
}

ProfileCheck check_profile(const ThresholdProfile& profile, double tol) {
  ProfileCheck c;
  bool saturated = false;
  double prev_beta = -1.0;
  for (const auto& p : profile.points) {
    if (p.beta < -tol || p.beta > p.theta + tol || p.theta > 1.0 + tol) ++c.order_violations;
    if (p.beta < prev_beta - tol) ++c.monotone_violations;
    prev_beta = std::max(prev_beta, p.beta);
    if (saturated && p.theta < 1.0 - tol) ++c.absorbing_violations;
    if (p.theta == 1.0) saturated = true;
  }
  if (profile.gamma < prev_beta - tol) ++c.monotone_violations;
  return c;
}

PairGainEstimate pair_gain(const Instance& instance, const GainSpec& spec, const RankAssignment& base,
                           std::size_t u, std::size_t v, std::size_t grid_n) {
  if (grid_n < 2) throw std::invalid_argument("grid_n must be at least 2");
  PairProbe probe(instance, spec, base, u, v);
  const double w = probe.weight();
  if (!(w > 0.0)) throw std::invalid_argument("pair gain is undefined for a zero-weight offline vertex");
  constexpr double kTol = 1e-12;

  PairGainEstimate est;
  est.u = u;
  est.v = v;
  est.grid_n = grid_n;

  // θ(y) = 1 exactly when v, ranked last, is not left free by u; absorbing in y.
  auto saturated = [&](double y) { return probe.evaluate(y, 1.0) != PairStatus::kUnmatchedAfter; };
  if (!saturated(1.0)) {
    est.tau = 1.0;
  } else if (saturated(0.0)) {
    est.tau = 0.0;
  } else {
    est.tau = bisect(0.0, 1.0, kTol, saturated);
  }
  auto taken_early = [&](double y) { return probe.evaluate(1.0, y) == PairStatus::kMatchedBefore; };
  if (!taken_early(0.0)) {
    est.gamma = 0.0;
  } else if (taken_early(1.0)) {
    est.gamma = 1.0;
  } else {
    est.gamma = bisect(0.0, 1.0, kTol, [&](double y) { return !taken_early(y); });
  }

  const auto grid = midpoint_grid(grid_n);
  double total = 0.0, corner = 0.0, v_side = 0.0, u_side = 0.0;
  for (double y_u : grid) {
    const bool late_u = y_u > est.tau;
    for (double y_v : grid) {
      probe.evaluate(y_u, y_v);
      const double a_u = probe.alpha_u();
      const double a_v = probe.alpha_v();
      const bool high_v = y_v > est.gamma;
      total += a_u + a_v;
      if (late_u) {
        (high_v ? corner : v_side) += a_u;
      } else {
        u_side += a_u;
      }
      if (high_v) {
        (late_u ? corner : u_side) += a_v;
      } else {
        v_side += a_v;
      }
    }
  }
  const double norm = w * static_cast<double>(grid_n) * static_cast<double>(grid_n);
  est.estimate = total / norm;
  est.corner = corner / norm;
  est.v_side = v_side / norm;
  est.u_side = u_side / norm;
  return est;
}

FloorCheck check_corner_gain(const Instance& instance, const GainSpec& spec, const RankAssignment& base,
                             const ThresholdProfile& profile, Rng& rng, std::size_t samples) {
  FloorCheck c;
  constexpr double kMargin = 1e-7;
  const double lo_u = profile.tau + kMargin, lo_v = profile.gamma + kMargin;
  if (lo_u >= 1.0 || lo_v >= 1.0) return c;
  PairProbe probe(instance, spec, base, profile.u, profile.v);
  const double w = probe.weight();
  for (std::size_t s = 0; s < samples; ++s) {
    const double y_u = rng.uniform(lo_u, 1.0);
    const double y_v = rng.uniform(lo_v, 1.0);
    const PairStatus st = probe.evaluate(y_u, y_v);
    const double gap = (probe.alpha_u() + probe.alpha_v()) - w;
    ++c.probes;
    if (st != PairStatus::kMatchedToU || std::abs(gap) > 1e-12 * std::max(1.0, w)) {
      ++c.violations;
      c.worst_gap = std::min(c.worst_gap, st != PairStatus::kMatchedToU ? -w : gap);
    }
  }
  return c;
}

FloorCheck check_offline_gain_floor(const Instance& instance, const GainSpec& spec, const RankAssignment& base,
                                    const ThresholdProfile& profile, Rng& rng, std::size_t samples) {
  FloorCheck c;
  if (profile.gamma <= 0.0) return c;
  constexpr double kAvoid = 1e-7;
  PairProbe probe(instance, spec, base, profile.u, profile.v);
  const double w = probe.weight();
  for (std::size_t s = 0; s < samples; ++s) {
    const double x = rng.uniform(0.0, profile.gamma);
    const bool near_boundary =
        std::abs(x - profile.gamma) < kAvoid ||
        std::any_of(profile.points.begin(), profile.points.end(),
                    [&](const ThresholdPoint& p) { return std::abs(p.beta - x) < kAvoid; });
    if (near_boundary) continue;
    const double floor = w * spec.g(x, profile.beta_inverse(x));
    for (const auto& p : profile.points) {
      probe.evaluate(p.y_u, x);
      const double gap = probe.alpha_v() - floor;
      ++c.probes;
      if (gap < -1e-9 * std::max(1.0, w)) {
        ++c.violations;
        c.worst_gap = std::min(c.worst_gap, gap);
      }
    }
  }
  return c;
}

FloorCheck check_online_gain_floor(const Instance& instance, const GainSpec& spec, const RankAssignment& base,
                                   const ThresholdProfile& profile, Rng& rng, std::size_t samples) {
  FloorCheck c;
  PairProbe probe(instance, spec, base, profile.u, profile.v);
  const double w = probe.weight();
  for (const auto& p : profile.points) {
    if (p.y_u >= profile.tau || p.theta >= 1.0) continue;
    const double floor = w * spec.online_share(p.y_u, std::min(1.0, p.theta + 1e-9));
    for (std::size_t s = 0; s < samples; ++s) {
      probe.evaluate(p.y_u, rng.uniform());
      const double gap = probe.alpha_u() - floor;
      ++c.probes;
      if (gap < -1e-9 * std::max(1.0, w)) {
        ++c.violations;
        c.worst_gap = std::min(c.worst_gap, gap);
      }
    }
  }
  return c;
}

void write_profile_csv(std::ostream& out, const ThresholdProfile& profile) {
  out << "y_u,beta,theta\n" << std::setprecision(17);
  for (const auto& p : profile.points) out << p.y_u << ',' << p.beta << ',' << p.theta << '\n';
}

void write_profile_json(std::ostream& out, const Instance& instance, const ThresholdProfile& profile) {
  nlohmann::json j;
  j["u"] = instance.online_id(profile.u);
  j["v"] = instance.offline_id(profile.v);
  j["tau"] = profile.tau;
  j["gamma"] = profile.gamma;
  j["points"] = nlohmann::json::array();
  for (const auto& p : profile.points) j["points"].push_back({{"y_u", p.y_u}, {"beta", p.beta}, {"theta", p.theta}});
  out << j.dump(2) << '\n';
}

}  // namespace wranking
