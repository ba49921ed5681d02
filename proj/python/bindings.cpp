#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "wranking/bounds.hpp"
#include "wranking/dual_analysis.hpp"
#include "wranking/experiment.hpp"
#include "wranking/io.hpp"
#include "wranking/offline_opt.hpp"
#include "wranking/ranking.hpp"

namespace py = pybind11;
using namespace wranking;

namespace {

// Structured values cross the boundary as JSON text; the Python package
// wraps these with json.loads / json.dumps.
Instance parse_instance(const std::string& text) { return instance_from_json(json::parse(text)); }

RankAssignment parse_ranks(const Instance& inst, const std::string& text) {
  return ranks_from_json(inst, json::parse(text));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Weighted Ranking simulation, dual analysis and bound calculator";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ThresholdStructureError>(m, "ThresholdStructureError", PyExc_RuntimeError);

  py::class_<Instance>(m, "Instance")
      .def_static("from_json", &parse_instance)
      .def("to_json", [](const Instance& i) { return instance_to_json(i).dump(); })
      .def_property_readonly("num_offline", &Instance::num_offline)
      .def_property_readonly("num_online", &Instance::num_online)
      .def_property_readonly("num_edges", &Instance::num_edges);

  py::class_<GainSpec>(m, "GainSpec")
      .def_static("simple_exp", &GainSpec::simple_exp)
      .def_static("half_exp", &GainSpec::half_exp)
      .def_static("adversarial", &GainSpec::adversarial)
      .def_static("table", &GainSpec::table, py::arg("breakpoints"), py::arg("values"))
      .def_property_readonly("name", &GainSpec::name)
      .def("h", [](const GainSpec& s, double x) { return eval_h(s, x); })
      .def("g", [](const GainSpec& s, double x, double y) { return eval_g(s, x, y); });

  m.def("load_gain", &load_gain, py::arg("name_or_path"));

  m.def("generate_instance", [](const std::string& kind, std::size_t n, std::size_t m_, double p, std::uint64_t seed) {
    const auto k = parse_generator(kind);
    if (!k) throw ConfigError("unknown generator " + kind);
    return generate_instance(*k, {n, m_, p}, seed);
  }, py::arg("kind"), py::arg("n"), py::arg("m") = 0, py::arg("p") = 0.5, py::arg("seed") = 1);

  m.def("sample_ranks", [](const Instance& inst, std::uint64_t seed) {
    return ranks_to_json(inst, sample_ranks(inst, seed)).dump();
  });

  m.def("run_ranking", [](const Instance& inst, const GainSpec& spec, const std::string& ranks) {
    const RankAssignment r = parse_ranks(inst, ranks);
    const auto out = run_ranking(inst, spec, r);
    json j = matching_to_json(inst, out.matching);
    j["duals"] = duals_to_json(inst, assign_duals(inst, out.matching, spec, r));
    return j.dump();
  });

  m.def("solve_opt", [](const Instance& inst) { return solve_opt(inst).value; });
  m.def("brute_force_opt", [](const Instance& inst) { return brute_force_opt(inst).value; });

  m.def("simple_bound", &simple_bound, py::arg("spec"), py::arg("tau"), py::arg("gamma"));
  m.def("improved_bound", &improved_bound, py::arg("spec"), py::arg("tau"), py::arg("gamma"));
  m.def("minimize_bound", [](const GainSpec& spec, const std::string& which, std::size_t grid) {
    const auto kind = parse_bound_kind(which);
    if (!kind) throw ConfigError("which must be simple or improved");
    const BoundPoint p = minimize_bound(spec, *kind, grid);
    return py::make_tuple(p.tau, p.gamma, p.value);
  }, py::arg("spec"), py::arg("which") = "improved", py::arg("grid") = 256);
  m.def("tau_star", &tau_star);
  m.def("tau_zero", &tau_zero);
  m.def("conclusion_integral", [](const GainSpec& spec, const std::string& profiles) {
    return conclusion_integral(spec, profiles_from_json(json::parse(profiles)));
  });

  m.def("pair_gain", [](const Instance& inst, const GainSpec& spec, const std::string& ranks, const std::string& u,
                        const std::string& v, std::size_t grid) {
    const auto ui = inst.find_online(u);
    const auto vi = inst.find_offline(v);
    if (!ui || !vi) throw ConfigError("unknown vertex");
    const auto e = pair_gain(inst, spec, parse_ranks(inst, ranks), *ui, *vi, grid);
    return json{{"estimate", e.estimate}, {"corner", e.corner}, {"v_side", e.v_side},
                {"u_side", e.u_side},     {"tau", e.tau},       {"gamma", e.gamma}}.dump();
  });

  m.def("compute_thresholds", [](const Instance& inst, const GainSpec& spec, const std::string& ranks,
                                 const std::string& u, const std::string& v, std::size_t grid) {
    const auto ui = inst.find_online(u);
    const auto vi = inst.find_offline(v);
    if (!ui || !vi) throw ConfigError("unknown vertex");
    const auto g = midpoint_grid(grid);
    std::ostringstream out;
    write_profile_json(out, inst, compute_thresholds(inst, spec, parse_ranks(inst, ranks), *ui, *vi, g));
    return out.str();
  });

  m.def("ratio_experiment", [](const Instance& inst, const GainSpec& spec, std::size_t trials, std::uint64_t seed) {
    return ratio_report_to_json(run_ratio_experiment(inst, "python", spec, trials, seed)).dump();
  }, py::arg("instance"), py::arg("spec"), py::arg("trials"), py::arg("seed") = 1);

  m.def("property_suite", [](std::size_t trials, std::uint64_t seed, bool inject_bug) {
    SuiteConfig cfg;
    cfg.trials = trials;
    cfg.seed = seed;
    if (inject_bug) cfg.rule = ChoiceRule::kReversed;
    return property_report_to_json(run_property_suite(cfg), cfg).dump();
  }, py::arg("trials") = 100, py::arg("seed") = 1, py::arg("inject_bug") = false);
}
