#include "wranking/io.hpp"

#include <fstream>
#include <sstream>

namespace wranking {

namespace {

// Runs `body`, turning json type or key errors into ValidationError.
template <class F>
auto guarded(std::string_view what, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed ") + std::string(what) + ": " + e.what());
  }
}

PiecewiseProfile profile_from_json(const json& j) {
  const auto shape = j.at("shape").get<std::string>();
  auto knots = j.at("knots").get<std::vector<double>>();
  auto values = j.at("values").get<std::vector<double>>();
  if (shape == "step") return PiecewiseProfile::step(std::move(knots), std::move(values));
  if (shape == "linear") return PiecewiseProfile::linear(std::move(knots), std::move(values));
  throw ValidationError("unknown profile shape " + shape, shape);
}

json profile_to_json(const PiecewiseProfile& p) {
  return {{"shape", p.shape() == PiecewiseProfile::Shape::kStep ? "step" : "linear"},
          {"knots", p.knots()},
          {"values", p.values()}};
}

}  // namespace

Instance instance_from_json(const json& j) {
  const RawInstance raw = guarded("instance", [&] {
    RawInstance r;
    for (const auto& v : j.at("offline")) r.offline.push_back({v.at("id").get<std::string>(), v.at("weight").get<double>()});
    for (const auto& u : j.at("online"))
      r.online.push_back({u.at("id").get<std::string>(), u.at("neighbors").get<std::vector<std::string>>()});
    return r;
  });
  return validate_instance(raw);
}

json instance_to_json(const Instance& instance) {
  json j;
  j["offline"] = json::array();
  j["online"] = json::array();
  for (std::size_t v = 0; v < instance.num_offline(); ++v)
    j["offline"].push_back({{"id", instance.offline_id(v)}, {"weight", instance.weight(v)}});
  for (std::size_t u = 0; u < instance.num_online(); ++u) {
    json nb = json::array();
    for (std::uint32_t v : instance.neighbors(u)) nb.push_back(instance.offline_id(v));
    j["online"].push_back({{"id", instance.online_id(u)}, {"neighbors", nb}});
  }
  return j;
}

RankAssignment ranks_from_json(const Instance& instance, const json& j) {
  const auto map = guarded("ranks", [&] { return j.at("ranks").get<std::map<std::string, double>>(); });
  return ranks_from_map(instance, map);
}

json ranks_to_json(const Instance& instance, const RankAssignment& ranks) {
  return {{"ranks", ranks_to_map(instance, ranks)}};
}

GainSpec gain_from_json(const json& j) {
  return guarded("gain spec", [&] {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "table")
      return GainSpec::table(j.at("breakpoints").get<std::vector<double>>(), j.at("values").get<std::vector<double>>());
    if (auto g = builtin_gain(kind)) return *g;
    throw ValidationError("unknown gain kind " + kind, kind);
  });
}

json gain_to_json(const GainSpec& spec) {
  json j{{"kind", spec.name()}};
  if (spec.kind() == GainKind::kTable) {
    j["breakpoints"] = spec.table_breakpoints();
    j["values"] = spec.table_values();
  }
  return j;
}

GainSpec load_gain(std::string_view name_or_path) {
  if (auto g = builtin_gain(name_or_path)) return *g;
  return gain_from_json(read_json_file(std::filesystem::path(std::string(name_or_path))));
}

json matching_to_json(const Instance& instance, const MatchingResult& m) {
  json pairs = json::array();
  for (const auto& p : m.pairs) pairs.push_back({instance.online_id(p.online), instance.offline_id(p.offline)});
  return {{"pairs", pairs}, {"total_weight", m.total_weight}};
}

json duals_to_json(const Instance& instance, const DualShares& d) {
  json alpha = json::object();
  for (std::size_t v = 0; v < d.offline.size(); ++v) alpha[instance.offline_id(v)] = d.offline[v];
  for (std::size_t u = 0; u < d.online.size(); ++u) alpha[instance.online_id(u)] = d.online[u];
  return {{"alpha", alpha}, {"total", d.total()}};
}

StepProfiles profiles_from_json(const json& j) {
  StepProfiles p = guarded("profiles", [&] {
    return StepProfiles{profile_from_json(j.at("theta")), profile_from_json(j.at("beta"))};
  });
  validate_profiles(p);
  return p;
}

json profiles_to_json(const StepProfiles& p) {
  return {{"theta", profile_to_json(p.theta)}, {"beta", profile_to_json(p.beta)}};
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string(), path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("cannot parse " + path.string() + ": " + e.what(), path.string());
  }
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string(), path.string());
  out << text;
}

}  // namespace wranking
