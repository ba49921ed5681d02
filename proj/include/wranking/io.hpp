#pragma once

#include <filesystem>
#include <string_view>

#include "json.hpp"
#include "wranking/bounds.hpp"
#include "wranking/gain.hpp"
#include "wranking/instance.hpp"

namespace wranking {

using nlohmann::json;

// All readers throw ValidationError on malformed input.

/// {"offline":[{"id","weight"}...],"online":[{"id","neighbors":[...]}...]}
Instance instance_from_json(const json& j);
json instance_to_json(const Instance& instance);

/// {"ranks":{"id":y,...}}
RankAssignment ranks_from_json(const Instance& instance, const json& j);
json ranks_to_json(const Instance& instance, const RankAssignment& ranks);

/// {"kind":"simple-exp"|"half-exp"|"adversarial"|"table","breakpoints":[...],"values":[...]}
GainSpec gain_from_json(const json& j);
json gain_to_json(const GainSpec& spec);

/// A builtin name or the path of a GainSpec JSON file.
GainSpec load_gain(std::string_view name_or_path);

json matching_to_json(const Instance& instance, const MatchingResult& m);
json duals_to_json(const Instance& instance, const DualShares& d);

/// {"theta":{"shape":"step"|"linear","knots":[...],"values":[...]},"beta":{...}}
StepProfiles profiles_from_json(const json& j);
json profiles_to_json(const StepProfiles& p);

json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace wranking
