#include "wranking/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include "wranking/dual_analysis.hpp"
#include "wranking/offline_opt.hpp"

namespace wranking {

std::optional<GeneratorKind> parse_generator(std::string_view name) {
  if (name == "random") return GeneratorKind::kRandom;
  if (name == "upper_triangular" || name == "upper-triangular") return GeneratorKind::kUpperTriangular;
  if (name == "complete") return GeneratorKind::kComplete;
  if (name == "weighted_random" || name == "weighted-random") return GeneratorKind::kWeightedRandom;
  return std::nullopt;
}

const char* to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::kRandom: return "random";
    case GeneratorKind::kUpperTriangular: return "upper_triangular";
    case GeneratorKind::kComplete: return "complete";
    case GeneratorKind::kWeightedRandom: return "weighted_random";
  }
  return "?";
}

namespace {

double log_uniform_weight(Rng& rng) { return 0.1 * std::pow(100.0, rng.uniform()); }

RawInstance named_vertices(std::size_t n_online, std::size_t n_offline) {
  RawInstance raw;
  for (std::size_t j = 1; j <= n_offline; ++j) raw.offline.push_back({"v" + std::to_string(j), 1.0});
  for (std::size_t i = 1; i <= n_online; ++i) raw.online.push_back({"u" + std::to_string(i), {}});
  return raw;
}

}  // namespace

Instance generate_instance(GeneratorKind kind, const GeneratorParams& params, std::uint64_t seed) {
  const std::size_t n = params.n;
  const std::size_t m = params.m == 0 ? n : params.m;
  if (n == 0) throw ConfigError("generator needs n >= 1");
  if (!(params.p >= 0.0 && params.p <= 1.0)) throw ConfigError("edge probability must lie in [0,1]");
  if (kind == GeneratorKind::kUpperTriangular && m != n) throw ConfigError("upper_triangular needs m = n");

  Rng rng(seed);
  RawInstance raw = named_vertices(n, m);
  if (kind == GeneratorKind::kWeightedRandom)
    for (auto& v : raw.offline) v.weight = log_uniform_weight(rng);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      bool edge = false;
      switch (kind) {
        case GeneratorKind::kUpperTriangular: edge = j >= i; break;
        case GeneratorKind::kComplete: edge = true; break;
        case GeneratorKind::kRandom:
        case GeneratorKind::kWeightedRandom: edge = rng.bernoulli(params.p); break;
      }
      if (edge) raw.online[i].neighbors.push_back(raw.offline[j].id);
    }
  }
  return validate_instance(raw);
}

Instance random_small_instance(Rng& rng, std::size_t max_n) {
  const std::size_t n = 1 + rng.below(max_n);
  const std::size_t m = 1 + rng.below(max_n);
  const double p = rng.uniform(0.2, 0.9);
  RawInstance raw = named_vertices(n, m);
  if (rng.bernoulli(0.5))
    for (auto& v : raw.offline) v.weight = log_uniform_weight(rng);
  for (auto& u : raw.online)
    for (const auto& v : raw.offline)
      if (rng.bernoulli(p)) u.neighbors.push_back(v.id);
  return validate_instance(raw);
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  const std::size_t block = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t lo = t * block, hi = std::min(n, lo + block);
    pool.emplace_back([&, lo, hi] {
      try {
        for (std::size_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

RatioReport run_ratio_experiment(const Instance& instance, std::string label, const GainSpec& spec,
                                 std::size_t trials, std::uint64_t seed, unsigned threads) {
  if (trials == 0) throw ConfigError("trials must be at least 1");
  RatioReport r;
  r.instance_label = std::move(label);
  r.spec = spec.name();
  r.trials = trials;
  r.seed = seed;
  r.opt = solve_opt(instance).value;
  if (!(r.opt > 0.0)) throw ConfigError("OPT is 0 for this instance; the ratio is undefined");

  r.alg.assign(trials, 0.0);
  parallel_for(trials, threads, [&](std::size_t t) {
    Simulator sim(instance, spec);
    sim.run(sample_ranks(instance, stream_seed(seed, t)));
    r.alg[t] = sim.total_weight();
  });

  double sum = 0.0, sum_sq = 0.0;
  r.min_ratio = 1.0;
  r.max_ratio = 0.0;
  for (double a : r.alg) {
    const double ratio = a / r.opt;
    sum += ratio;
    sum_sq += ratio * ratio;
    r.min_ratio = std::min(r.min_ratio, ratio);
    r.max_ratio = std::max(r.max_ratio, ratio);
  }
  const auto n = static_cast<double>(trials);
  r.mean_ratio = sum / n;
  r.mean_alg = r.mean_ratio * r.opt;
  const double var = trials > 1 ? std::max(0.0, (sum_sq - n * r.mean_ratio * r.mean_ratio) / (n - 1.0)) : 0.0;
  r.std_error = std::sqrt(var / n);
  return r;
}

nlohmann::json ratio_report_to_json(const RatioReport& r, bool per_trial) {
  nlohmann::json j{{"instance", r.instance_label}, {"spec", r.spec},        {"trials", r.trials},
                   {"seed", r.seed},               {"opt", r.opt},          {"mean_alg", r.mean_alg},
                   {"mean_ratio", r.mean_ratio},   {"std_error", r.std_error}, {"min_ratio", r.min_ratio},
                   {"max_ratio", r.max_ratio}};
  if (per_trial) j["alg"] = r.alg;
  return j;
}

std::string ratio_report_to_text(const RatioReport& r) {
  std::ostringstream out;
  out << std::left << std::setprecision(8);
  out << std::setw(12) << "instance" << r.instance_label << '\n'
      << std::setw(12) << "spec" << r.spec << '\n'
      << std::setw(12) << "trials" << r.trials << '\n'
      << std::setw(12) << "seed" << r.seed << '\n'
      << std::setw(12) << "opt" << r.opt << '\n'
      << std::setw(12) << "mean alg" << r.mean_alg << '\n'
      << std::setw(12) << "mean ratio" << r.mean_ratio << '\n'
      << std::setw(12) << "std error" << r.std_error << '\n'
      << std::setw(12) << "min ratio" << r.min_ratio << '\n'
      << std::setw(12) << "max ratio" << r.max_ratio << '\n';
  return out.str();
}

// Property suites -----------------------------------------------------------

namespace {

std::string describe(const Instance& inst) {
  std::ostringstream s;
  s << inst.num_online() << "x" << inst.num_offline() << " instance, " << inst.num_edges() << " edges";
  return s.str();
}

struct Edge {
  std::size_t u, v;
};

std::vector<Edge> edges_of(const Instance& inst) {
  std::vector<Edge> out;
  for (std::size_t u = 0; u < inst.num_online(); ++u)
    for (std::uint32_t v : inst.neighbors(u)) out.push_back({u, v});
  return out;
}

TrialOutcome dual_accounting_trial(const SuiteConfig& cfg, std::uint64_t seed) {
  Rng rng(seed);
  const Instance inst = random_small_instance(rng, cfg.max_n);
  const RankAssignment ranks = sample_ranks(inst, seed);
  TrialOutcome out{1, 0, inst.num_vertices(), {}};
  const auto run = run_ranking(inst, cfg.spec, ranks, cfg.rule);
  check_matching(inst, run.matching);
  const DualShares d = assign_duals(inst, run.matching, cfg.spec, ranks);
  const double gap = std::abs(d.total() - run.matching.total_weight);
  if (gap > 1e-12 * std::max(1.0, run.matching.total_weight)) {
    std::ostringstream s;
    s << describe(inst) << ": sum of shares off by " << gap;
    out.failure = s.str();
  }
  return out;
}

TrialOutcome monotonicity_trial(const SuiteConfig& cfg, std::uint64_t seed) {
  Rng rng(seed);
  const Instance inst = random_small_instance(rng, cfg.max_n);
  RankAssignment ranks = sample_ranks(inst, seed);
  TrialOutcome out{0, 0, inst.num_vertices(), {}};
  Simulator sim(inst, cfg.spec, cfg.rule);
  sim.run(ranks);
  const std::size_t u = rng.below(inst.num_online());
  const double y_u = ranks.online(u);
  std::vector<std::size_t> free_at_u;
  for (std::size_t v = 0; v < inst.num_offline(); ++v)
    if (sim.match_time(v) >= y_u) free_at_u.push_back(v);
  if (free_at_u.empty()) return out;
  const std::size_t v = free_at_u[rng.below(free_at_u.size())];
  const double old_rank = ranks.offline(v);
  ranks.set_offline(v, rng.uniform(old_rank, 1.0));
  sim.run(ranks);
  out.probes = 1;
  if (sim.match_time(v) < y_u) {
    std::ostringstream s;
    s << describe(inst) << ": raising y_" << inst.offline_id(v) << " from " << old_rank << " to "
      << ranks.offline(v) << " got it matched before " << inst.online_id(u) << " arrives";
    out.failure = s.str();
  }
  return out;
}

TrialOutcome benignity_trial(const SuiteConfig& cfg, std::uint64_t seed) {
  Rng rng(seed);
  const Instance inst = random_small_instance(rng, cfg.max_n);
  RankAssignment ranks = sample_ranks(inst, seed);
  TrialOutcome out{0, 0, inst.num_vertices(), {}};
  Simulator sim(inst, cfg.spec, cfg.rule);
  sim.run(ranks);
  const std::vector<double> before(sim.match_times().begin(), sim.match_times().end());
  const std::size_t u = rng.below(inst.num_online());
  const double y_old = ranks.online(u);
  ranks.set_online(u, rng.uniform(0.0, y_old));
  sim.run(ranks);
  for (std::size_t w = 0; w < inst.num_offline(); ++w) {
    const bool later = sim.match_time(w) > before[w];
    if (later) ++out.informational;
    // Vertices matched before u's original arrival are matched exactly as in
    // the process without u; those are the ones the guarantee covers.
    if (!(before[w] < y_old)) continue;
    ++out.probes;
    if (later && out.failure.empty()) {
      std::ostringstream s;
      s << describe(inst) << ": moving " << inst.online_id(u) << " from " << y_old << " to " << ranks.online(u)
        << " delays " << inst.offline_id(w) << " from " << before[w] << " to " << sim.match_time(w);
      out.failure = s.str();
    }
  }
  return out;
}

TrialOutcome three_interval_trial(const SuiteConfig& cfg, std::uint64_t seed) {
  Rng rng(seed);
  const Instance inst = random_small_instance(rng, cfg.max_n);
  const RankAssignment ranks = sample_ranks(inst, seed);
  TrialOutcome out{0, 0, inst.num_vertices(), {}};
  const auto edges = edges_of(inst);
  if (edges.empty()) return out;
  const Edge e = edges[rng.below(edges.size())];
  const auto grid = midpoint_grid(cfg.threshold_grid);
  out.probes = 1;
  try {
    const auto prof = compute_thresholds(inst, cfg.spec, ranks, e.u, e.v, grid, 1e-9, cfg.sweep_points);
    const auto check = check_profile(prof);
    if (!check.ok()) {
      std::ostringstream s;
      s << describe(inst) << ", edge " << inst.online_id(e.u) << "-" << inst.offline_id(e.v) << ": "
        << check.order_violations << " order, " << check.monotone_violations << " monotone, "
        << check.absorbing_violations << " absorbing violations";
      out.failure = s.str();
    }
  } catch (const ThresholdStructureError& err) {
    out.failure = describe(inst) + ": " + err.what();
  }
  return out;
}

TrialOutcome gain_floor_trial(const SuiteConfig& cfg, std::uint64_t seed) {
  Rng rng(seed);
  const Instance inst = random_small_instance(rng, cfg.max_n);
  const RankAssignment ranks = sample_ranks(inst, seed);
  TrialOutcome out{0, 0, inst.num_vertices(), {}};
  const auto edges = edges_of(inst);
  if (edges.empty()) return out;
  const Edge e = edges[rng.below(edges.size())];
  if (!(inst.weight(e.v) > 0.0)) return out;
  const auto grid = midpoint_grid(cfg.threshold_grid);
  ThresholdProfile prof;
  try {
    prof = compute_thresholds(inst, cfg.spec, ranks, e.u, e.v, grid, 1e-9, cfg.sweep_points);
  } catch (const ThresholdStructureError& err) {
    out.probes = 1;
    out.failure = describe(inst) + ": " + err.what();
    return out;
  }
  const FloorCheck checks[] = {
      check_corner_gain(inst, cfg.spec, ranks, prof, rng, 16),
      check_offline_gain_floor(inst, cfg.spec, ranks, prof, rng, 8),
      check_online_gain_floor(inst, cfg.spec, ranks, prof, rng, 8),
  };
  const char* names[] = {"corner", "offline floor", "online floor"};
  for (int k = 0; k < 3; ++k) {
    out.probes += checks[k].probes;
    if (!checks[k].ok() && out.failure.empty()) {
      std::ostringstream s;
      s << describe(inst) << ", edge " << inst.online_id(e.u) << "-" << inst.offline_id(e.v) << ": " << names[k]
        << " short by " << -checks[k].worst_gap;
      out.failure = s.str();
    }
  }
  return out;
}

TrialOutcome opt_dominance_trial(const SuiteConfig& cfg, std::uint64_t seed) {
  Rng rng(seed);
  const Instance inst = random_small_instance(rng, cfg.max_n);
  const RankAssignment ranks = sample_ranks(inst, seed);
  TrialOutcome out{1, 0, inst.num_vertices(), {}};
  const double alg = run_ranking(inst, cfg.spec, ranks, cfg.rule).matching.total_weight;
  const double opt = solve_opt(inst).value;
  if (alg > opt + 1e-12 * std::max(1.0, opt)) {
    std::ostringstream s;
    s << describe(inst) << ": ALG " << alg << " exceeds OPT " << opt;
    out.failure = s.str();
  }
  return out;
}

TrialOutcome oracle_trial(const SuiteConfig& cfg, std::uint64_t seed) {
  Rng rng(seed);
  const Instance inst = random_small_instance(rng, std::min<std::size_t>(cfg.max_n, 8));
  TrialOutcome out{1, 0, inst.num_vertices(), {}};
  const double fast = solve_opt(inst).value;
  const double slow = brute_force_opt(inst).value;
  if (fast != slow) {
    std::ostringstream s;
    s << std::setprecision(17) << describe(inst) << ": solve_opt " << fast << " vs brute force " << slow;
    out.failure = s.str();
  }
  return out;
}

TrialOutcome adversarial_trial(const SuiteConfig& cfg, std::uint64_t seed) {
  Rng rng(seed);
  const Instance inst = random_small_instance(rng, cfg.max_n);
  const RankAssignment ranks = sample_ranks(inst, seed);
  const GainSpec spec = GainSpec::adversarial();
  TrialOutcome out{0, 0, inst.num_vertices(), {}};
  const auto base = run_ranking(inst, spec, ranks, cfg.rule);
  // Same arrival order, different arrival times.
  std::vector<double> warped(ranks.online().begin(), ranks.online().end());
  for (double& y : warped) y = y * y;
  const RankAssignment moved(std::vector<double>(ranks.offline().begin(), ranks.offline().end()), warped);
  const auto other = run_ranking(inst, spec, moved, cfg.rule);
  ++out.probes;
  if (base.matching.pairs != other.matching.pairs) {
    out.failure = describe(inst) + ": choices depend on arrival times";
    return out;
  }
  for (const auto& a : base.trace.arrivals) {
    ++out.probes;
    std::optional<std::size_t> expect;
    double best = 0.0;
    for (const auto& o : a.offers) {
      const double value = inst.weight(o.offline) * (1.0 - std::exp(ranks.offline(o.offline) - 1.0));
      const bool better = cfg.rule == ChoiceRule::kMaxOffer ? value > best : value < best;
      if (!expect || better || (value == best && ranks.offline(o.offline) < ranks.offline(*expect))) {
        expect = o.offline;
        best = value;
      }
    }
    if (expect != a.chosen && out.failure.empty())
      out.failure = describe(inst) + ": " + inst.online_id(a.online) + " did not take the best static price";
  }
  return out;
}

using TrialFn = TrialOutcome (*)(const SuiteConfig&, std::uint64_t);

struct SuiteEntry {
  std::string name;
  TrialFn fn;
};

const std::vector<SuiteEntry>& registry() {
  static const std::vector<SuiteEntry> suites = {
      {"dual-accounting", dual_accounting_trial}, {"monotonicity", monotonicity_trial},
      {"benignity", benignity_trial},             {"three-interval", three_interval_trial},
      {"gain-floors", gain_floor_trial},          {"opt-dominance", opt_dominance_trial},
      {"oracle-equivalence", oracle_trial},       {"adversarial-invariance", adversarial_trial},
  };
  return suites;
}

const SuiteEntry& find_suite(std::string_view name) {
  for (const auto& s : registry())
    if (s.name == name) return s;
  throw ConfigError("unknown property suite " + std::string(name));
}

std::uint64_t name_hash(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) h = (h ^ c) * 0x100000001b3ULL;
  return h;
}

}  // namespace

bool PropertyReport::ok() const {
  return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.ok(); });
}

const std::vector<std::string>& property_suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& s : registry()) n.push_back(s.name);
    return n;
  }();
  return names;
}

std::uint64_t suite_trial_seed(std::string_view suite, std::uint64_t master, std::size_t trial) {
  return stream_seed(stream_seed(master, name_hash(suite)), trial);
}

TrialOutcome run_suite_trial(std::string_view suite, const SuiteConfig& config, std::uint64_t trial_seed) {
  return find_suite(suite).fn(config, trial_seed);
}

PropertyReport run_property_suite(const SuiteConfig& config) {
  if (config.trials == 0) throw ConfigError("trials must be at least 1");
  if (config.max_n == 0) throw ConfigError("max_n must be at least 1");
  if (config.threshold_grid < 2 || config.sweep_points < 2) throw ConfigError("grid resolutions must be at least 2");
  std::vector<const SuiteEntry*> chosen;
  if (config.suites.empty()) {
    for (const auto& s : registry()) chosen.push_back(&s);
  } else {
    for (const auto& name : config.suites) chosen.push_back(&find_suite(name));
  }

  PropertyReport report;
  for (const SuiteEntry* entry : chosen) {
    SuiteResult res;
    res.name = entry->name;
    res.trials = config.trials;
    for (std::size_t t = 0; t < config.trials; ++t) {
      const std::uint64_t seed = suite_trial_seed(entry->name, config.seed, t);
      const TrialOutcome o = entry->fn(config, seed);
      res.probes += o.probes;
      res.informational += o.informational;
      if (o.failure.empty()) continue;
      ++res.violations;
      if (!res.repro_seed || o.vertices < res.repro_vertices) {
        res.repro_seed = seed;
        res.repro_vertices = o.vertices;
        res.repro_detail = o.failure;
      }
    }
    report.suites.push_back(std::move(res));
  }
  return report;
}

nlohmann::json property_report_to_json(const PropertyReport& r, const SuiteConfig& config) {
  nlohmann::json suites = nlohmann::json::array();
  for (const auto& s : r.suites) {
    nlohmann::json j{{"name", s.name},
                     {"trials", s.trials},
                     {"probes", s.probes},
                     {"violations", s.violations},
                     {"informational", s.informational},
                     {"ok", s.ok()}};
    if (s.repro_seed) {
      j["repro_seed"] = *s.repro_seed;
      j["repro_vertices"] = s.repro_vertices;
      j["repro_detail"] = s.repro_detail;
    } else {
      j["repro_seed"] = nullptr;
    }
    suites.push_back(std::move(j));
  }
  return {{"config",
           {{"trials", config.trials},
            {"seed", config.seed},
            {"spec", config.spec.name()},
            {"rule", config.rule == ChoiceRule::kMaxOffer ? "max-offer" : "reversed"},
            {"max_n", config.max_n}}},
          {"suites", suites},
          {"ok", r.ok()}};
}

std::string property_report_to_text(const PropertyReport& r) {
  std::ostringstream out;
  out << std::left << std::setw(24) << "suite" << std::right << std::setw(8) << "trials" << std::setw(10) << "probes"
      << std::setw(12) << "violations" << "  result\n";
  for (const auto& s : r.suites) {
    out << std::left << std::setw(24) << s.name << std::right << std::setw(8) << s.trials << std::setw(10)
        << s.probes << std::setw(12) << s.violations << "  " << (s.ok() ? "pass" : "FAIL") << '\n';
    if (s.repro_seed) out << "    repro seed " << *s.repro_seed << ": " << s.repro_detail << '\n';
  }
  out << (r.ok() ? "all suites passed\n" : "some suites failed\n");
  return out.str();
}

}  // namespace wranking
