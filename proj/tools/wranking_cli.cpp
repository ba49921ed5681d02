// wranking: command-line front end for the library.
//
// Exit codes: 0 success, 1 property violation, 2 configuration error.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wranking/bounds.hpp"
#include "wranking/dual_analysis.hpp"
#include "wranking/experiment.hpp"
#include "wranking/io.hpp"
#include "wranking/offline_opt.hpp"
#include "wranking/ranking.hpp"

namespace {

using namespace wranking;

constexpr int kExitViolation = 1;
constexpr int kExitConfig = 2;

struct InstanceArgs {
  std::string file;
  std::string gen;
  std::size_t n = 0;
  std::size_t m = 0;
  double p = 0.5;
  std::optional<std::uint64_t> gen_seed;
};

struct CommonArgs {
  std::string spec = "half-exp";
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "text";
};

void add_instance_options(CLI::App* cmd, InstanceArgs& a) {
  auto* file = cmd->add_option("--instance", a.file, "Instance JSON file");
  auto* gen = cmd->add_option("--gen", a.gen, "Generator: random|upper_triangular|complete|weighted_random");
  file->excludes(gen);
  cmd->add_option("--n", a.n, "Online vertices for --gen");
  cmd->add_option("--m", a.m, "Offline vertices for --gen (default n)");
  cmd->add_option("--p", a.p, "Edge probability for random generators");
  cmd->add_option("--gen-seed", a.gen_seed, "Generator seed (default --seed)");
}

void add_common_options(CLI::App* cmd, CommonArgs& c, bool with_spec = true) {
  if (with_spec) cmd->add_option("--spec", c.spec, "simple-exp|half-exp|adversarial|FILE");
  cmd->add_option("--seed", c.seed, "Master seed");
  cmd->add_option("--out", c.out, "Output path (default stdout)");
  cmd->add_option("--format", c.format, "json|csv|text")->check(CLI::IsMember({"json", "csv", "text"}));
}

std::pair<Instance, std::string> load_instance(const InstanceArgs& a, std::uint64_t seed) {
  if (!a.file.empty()) return {instance_from_json(read_json_file(a.file)), a.file};
  if (a.gen.empty()) throw ConfigError("give --instance FILE or --gen KIND");
  const auto kind = parse_generator(a.gen);
  if (!kind) throw ConfigError("unknown generator " + a.gen);
  GeneratorParams params{a.n, a.m, a.p};
  std::ostringstream label;
  label << to_string(*kind) << "(n=" << a.n;
  if (a.m != 0) label << ",m=" << a.m;
  if (*kind == GeneratorKind::kRandom || *kind == GeneratorKind::kWeightedRandom) label << ",p=" << a.p;
  label << ")";
  return {generate_instance(*kind, params, a.gen_seed.value_or(seed)), label.str()};
}

void emit(const CommonArgs& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
  } else {
    write_text_file(c.out, text);
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::size_t locate_online(const Instance& inst, const std::string& id) {
  if (auto u = inst.find_online(id)) return *u;
  throw ConfigError("unknown online vertex " + id);
}

std::size_t locate_offline(const Instance& inst, const std::string& id) {
  if (auto v = inst.find_offline(id)) return *v;
  throw ConfigError("unknown offline vertex " + id);
}

RankAssignment load_ranks(const Instance& inst, const std::string& file, std::uint64_t seed) {
  if (!file.empty()) return ranks_from_json(inst, read_json_file(file));
  return sample_ranks(inst, seed);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted Ranking under random arrivals: simulation, dual analysis and bounds"};
  app.require_subcommand(1);

  // simulate -----------------------------------------------------------------
  InstanceArgs sim_inst;
  CommonArgs sim_common;
  std::size_t sim_trials = 1000;
  unsigned sim_threads = 1;
  bool sim_per_trial = false;
  std::string sim_trace;
  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo competitive-ratio experiment");
  add_instance_options(simulate, sim_inst);
  add_common_options(simulate, sim_common);
  simulate->add_option("--trials", sim_trials, "Rank draws");
  simulate->add_option("--threads", sim_threads, "Worker threads (0 = all cores)");
  simulate->add_flag("--per-trial", sim_per_trial, "Include per-trial ALG values in JSON");
  simulate->add_option("--trace", sim_trace, "Write the JSON-lines trace of trial 0 here");

  // pair-gain ----------------------------------------------------------------
  InstanceArgs pg_inst;
  CommonArgs pg_common;
  std::string pg_ranks, pg_u, pg_v;
  std::size_t pg_grid = 200;
  std::optional<double> pg_floor;
  auto* pair = app.add_subcommand("pair-gain", "E[α_u + α_v]/w_v per edge with other ranks fixed");
  add_instance_options(pair, pg_inst);
  add_common_options(pair, pg_common);
  pair->add_option("--ranks", pg_ranks, "Rank JSON (default: sampled from --seed)");
  pair->add_option("--u", pg_u, "Online endpoint (default: every edge)");
  pair->add_option("--v", pg_v, "Offline endpoint");
  pair->add_option("--grid", pg_grid, "Midpoint grid per axis");
  pair->add_option("--floor", pg_floor, "Exit 1 if any estimate falls below this");

  // thresholds ---------------------------------------------------------------
  InstanceArgs th_inst;
  CommonArgs th_common;
  std::string th_ranks, th_u, th_v;
  std::size_t th_grid = 100, th_sweep = 1000;
  double th_tol = 1e-9;
  auto* thresholds = app.add_subcommand("thresholds", "β(y_u), θ(y_u) profile for one edge");
  add_instance_options(thresholds, th_inst);
  add_common_options(thresholds, th_common);
  thresholds->add_option("--ranks", th_ranks, "Rank JSON (default: sampled from --seed)");
  thresholds->add_option("--u", th_u, "Online endpoint")->required();
  thresholds->add_option("--v", th_v, "Offline endpoint")->required();
  thresholds->add_option("--grid", th_grid, "Midpoint y_u grid size");
  thresholds->add_option("--sweep", th_sweep, "y_v sweep points before bisection");
  thresholds->add_option("--tol", th_tol, "Bisection tolerance");

  // bounds -------------------------------------------------------------------
  CommonArgs bd_common;
  std::string bd_which = "improved";
  std::size_t bd_grid = 256;
  double bd_tau = 0.0, bd_gamma = 0.0;
  auto* bounds = app.add_subcommand("bounds", "Analytic lower bounds f(τ, γ)");
  bounds->require_subcommand(1);
  auto add_which = [&](CLI::App* cmd) {
    add_common_options(cmd, bd_common);
    cmd->add_option("--which", bd_which, "simple|improved")->check(CLI::IsMember({"simple", "improved"}));
  };
  auto* evaluate = bounds->add_subcommand("evaluate", "f at one (τ, γ)");
  add_which(evaluate);
  evaluate->add_option("--tau", bd_tau)->required()->check(CLI::Range(0.0, 1.0));
  evaluate->add_option("--gamma", bd_gamma)->required()->check(CLI::Range(0.0, 1.0));
  auto* minimize = bounds->add_subcommand("minimize", "Global minimum over [0,1]²");
  add_which(minimize);
  minimize->add_option("--grid", bd_grid, "Lattice points per axis");
  auto* heatmap = bounds->add_subcommand("heatmap", "f over the lattice (CSV)");
  add_which(heatmap);
  heatmap->add_option("--grid", bd_grid, "Lattice points per axis");
  auto* constants = bounds->add_subcommand("constants", "τ*, τ₀ and f(τ₀, saturation)");
  add_common_options(constants, bd_common);

  // integral -----------------------------------------------------------------
  CommonArgs in_common;
  std::string in_profiles;
  std::optional<double> in_tau, in_gamma;
  auto* integral = app.add_subcommand("integral", "∫_0^1 f(y_u) dy_u for given θ, β profiles");
  add_common_options(integral, in_common);
  auto* prof_opt = integral->add_option("--profiles", in_profiles, "Profiles JSON");
  auto* tau_opt = integral->add_option("--tau-hat", in_tau, "Step profiles: switch point")->check(CLI::Range(0.0, 1.0));
  integral->add_option("--gamma-hat", in_gamma, "Step profiles: level")->check(CLI::Range(0.0, 1.0))->needs(tau_opt);
  tau_opt->excludes(prof_opt);

  // generate -----------------------------------------------------------------
  InstanceArgs gen_inst;
  CommonArgs gen_common;
  auto* generate = app.add_subcommand("generate", "Write a generated instance as JSON");
  add_instance_options(generate, gen_inst);
  add_common_options(generate, gen_common, false);

  // verify -------------------------------------------------------------------
  CommonArgs vf_common;
  SuiteConfig vf;
  bool vf_inject = false;
  std::optional<std::uint64_t> vf_repro;
  auto* verify = app.add_subcommand("verify", "Run the property suites");
  add_common_options(verify, vf_common);
  verify->add_option("--trials", vf.trials, "Trials per suite");
  verify->add_option("--suite", vf.suites, "Suite to run (repeatable; default all)");
  verify->add_option("--max-n", vf.max_n, "Largest side of random instances");
  verify->add_option("--grid", vf.threshold_grid, "y_u points per threshold probe");
  verify->add_option("--sweep", vf.sweep_points, "y_v sweep points per threshold probe");
  verify->add_flag("--inject-bug", vf_inject, "Use the reversed choice rule (mutation check)");
  verify->add_option("--repro", vf_repro, "Replay one trial seed of the given --suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*simulate) {
      const auto [inst, label] = load_instance(sim_inst, sim_common.seed);
      const GainSpec spec = load_gain(sim_common.spec);
      const auto report = run_ratio_experiment(inst, label, spec, sim_trials, sim_common.seed, sim_threads);
      if (!sim_trace.empty()) {
        std::ofstream trace(sim_trace);
        if (!trace) throw ConfigError("cannot write " + sim_trace);
        const auto run = run_ranking(inst, spec, sample_ranks(inst, stream_seed(sim_common.seed, 0)));
        write_trace_jsonl(trace, inst, run.trace);
      }
      if (sim_common.format == "json") {
        emit(sim_common, dump(ratio_report_to_json(report, sim_per_trial)));
      } else if (sim_common.format == "csv") {
        std::ostringstream out;
        out << "trial,alg,ratio\n" << std::setprecision(17);
        for (std::size_t t = 0; t < report.alg.size(); ++t)
          out << t << ',' << report.alg[t] << ',' << report.alg[t] / report.opt << '\n';
        emit(sim_common, out.str());
      } else {
        emit(sim_common, ratio_report_to_text(report));
      }
      return 0;
    }

    if (*pair) {
      const auto [inst, label] = load_instance(pg_inst, pg_common.seed);
      const GainSpec spec = load_gain(pg_common.spec);
      const RankAssignment ranks = load_ranks(inst, pg_ranks, pg_common.seed);
      if (pg_grid < 2) throw ConfigError("--grid must be at least 2");
      std::vector<PairGainEstimate> est;
      if (!pg_u.empty() || !pg_v.empty()) {
        est.push_back(pair_gain(inst, spec, ranks, locate_online(inst, pg_u), locate_offline(inst, pg_v), pg_grid));
      } else {
        for (std::size_t u = 0; u < inst.num_online(); ++u)
          for (std::uint32_t v : inst.neighbors(u))
            if (inst.weight(v) > 0.0) est.push_back(pair_gain(inst, spec, ranks, u, v, pg_grid));
      }
      double lowest = 1.0;
      for (const auto& e : est) lowest = std::min(lowest, e.estimate);
      if (pg_common.format == "json") {
        json rows = json::array();
        for (const auto& e : est)
          rows.push_back({{"u", inst.online_id(e.u)}, {"v", inst.offline_id(e.v)}, {"estimate", e.estimate},
                          {"corner", e.corner}, {"v_side", e.v_side}, {"u_side", e.u_side}, {"tau", e.tau},
                          {"gamma", e.gamma}});
        emit(pg_common, dump({{"instance", label}, {"spec", spec.name()}, {"grid", pg_grid}, {"edges", rows},
                              {"min_estimate", lowest}}));
      } else {
        std::ostringstream out;
        out << std::setprecision(10);
        const char sep = pg_common.format == "csv" ? ',' : ' ';
        out << "u" << sep << "v" << sep << "estimate" << sep << "corner" << sep << "v_side" << sep << "u_side" << sep
            << "tau" << sep << "gamma\n";
        for (const auto& e : est)
          out << inst.online_id(e.u) << sep << inst.offline_id(e.v) << sep << e.estimate << sep << e.corner << sep
              << e.v_side << sep << e.u_side << sep << e.tau << sep << e.gamma << '\n';
        emit(pg_common, out.str());
      }
      return pg_floor && lowest < *pg_floor ? kExitViolation : 0;
    }

    if (*thresholds) {
      const auto [inst, label] = load_instance(th_inst, th_common.seed);
      const GainSpec spec = load_gain(th_common.spec);
      const RankAssignment ranks = load_ranks(inst, th_ranks, th_common.seed);
      const std::size_t u = locate_online(inst, th_u), v = locate_offline(inst, th_v);
      if (!inst.has_edge(u, v)) throw ConfigError(th_u + " and " + th_v + " are not adjacent");
      if (th_grid < 2 || th_sweep < 2) throw ConfigError("--grid and --sweep must be at least 2");
      const auto grid = midpoint_grid(th_grid);
      ThresholdProfile prof;
      try {
        prof = compute_thresholds(inst, spec, ranks, u, v, grid, th_tol, th_sweep);
      } catch (const ThresholdStructureError& e) {
        std::cerr << "violation: " << e.what() << '\n';
        return kExitViolation;
      }
      std::ostringstream out;
      if (th_common.format == "json") {
        write_profile_json(out, inst, prof);
      } else {
        write_profile_csv(out, prof);
      }
      emit(th_common, out.str());
      return check_profile(prof).ok() ? 0 : kExitViolation;
    }

    if (*bounds) {
      const GainSpec spec = load_gain(bd_common.spec);
      const BoundKind which = *parse_bound_kind(bd_which);
      std::ostringstream out;
      out << std::setprecision(12);
      auto point_out = [&](const BoundPoint& p, const char* what) {
        if (bd_common.format == "json") {
          out << dump({{"spec", spec.name()}, {"which", bd_which}, {what, {{"tau", p.tau}, {"gamma", p.gamma},
                                                                           {"value", p.value}}}});
        } else if (bd_common.format == "csv") {
          out << "tau,gamma,value\n" << p.tau << ',' << p.gamma << ',' << p.value << '\n';
        } else {
          out << "spec " << spec.name() << ", " << bd_which << " bound\n"
              << "tau   " << p.tau << "\ngamma " << p.gamma << "\nvalue " << p.value << '\n';
        }
      };
      if (*evaluate) {
        point_out({bd_tau, bd_gamma, evaluate_bound(spec, which, bd_tau, bd_gamma)}, "point");
      } else if (*minimize) {
        if (bd_grid < 2) throw ConfigError("--grid must be at least 2");
        point_out(minimize_bound(spec, which, bd_grid), "minimum");
      } else if (*heatmap) {
        if (bd_grid < 2) throw ConfigError("--grid must be at least 2");
        write_heatmap_csv(out, bound_heatmap(spec, which, bd_grid));
      } else {
        const double ts = tau_star(spec), t0 = tau_zero(spec);
        const double s = *spec.saturation();
        const double at = improved_bound(spec, t0, s);
        if (bd_common.format == "json") {
          out << dump({{"spec", spec.name()}, {"tau_star", ts}, {"tau_zero", t0}, {"saturation", s},
                       {"improved_at_tau_zero", at}});
        } else {
          out << "tau_star             " << ts << "\ntau_zero             " << t0 << "\nsaturation           " << s
              << "\nimproved(tau_zero)   " << at << '\n';
        }
      }
      emit(bd_common, out.str());
      return 0;
    }

    if (*integral) {
      const GainSpec spec = load_gain(in_common.spec);
      StepProfiles profiles;
      if (!in_profiles.empty()) {
        profiles = profiles_from_json(read_json_file(in_profiles));
      } else if (in_tau) {
        profiles = step_profiles_at(*in_tau, in_gamma.value_or(1.0));
      } else {
        throw ConfigError("give --profiles FILE or --tau-hat/--gamma-hat");
      }
      const double value = conclusion_integral(spec, profiles);
      std::ostringstream out;
      out << std::setprecision(12);
      if (in_common.format == "json") {
        out << dump({{"spec", spec.name()}, {"profiles", profiles_to_json(profiles)}, {"value", value}});
      } else {
        out << value << '\n';
      }
      emit(in_common, out.str());
      return 0;
    }

    if (*generate) {
      const auto [inst, label] = load_instance(gen_inst, gen_common.seed);
      emit(gen_common, dump(instance_to_json(inst)));
      return 0;
    }

    if (*verify) {
      vf.seed = vf_common.seed;
      vf.spec = load_gain(vf_common.spec);
      if (vf_inject) vf.rule = ChoiceRule::kReversed;
      if (vf_repro) {
        if (vf.suites.size() != 1) throw ConfigError("--repro needs exactly one --suite");
        const TrialOutcome o = run_suite_trial(vf.suites.front(), vf, *vf_repro);
        emit(vf_common, o.failure.empty() ? "pass\n" : "FAIL: " + o.failure + "\n");
        return o.failure.empty() ? 0 : kExitViolation;
      }
      const PropertyReport report = run_property_suite(vf);
      emit(vf_common, vf_common.format == "json" ? dump(property_report_to_json(report, vf))
                                                 : property_report_to_text(report));
      return report.ok() ? 0 : kExitViolation;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kExitConfig;
  }
  return 0;
}
