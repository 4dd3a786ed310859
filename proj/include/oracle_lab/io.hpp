#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "oracle_lab/channels.hpp"
#include "oracle_lab/experiments.hpp"
#include "oracle_lab/graphs.hpp"
#include "oracle_lab/symmetry.hpp"
#include "oracle_lab/verifiers.hpp"

namespace oracle_lab {

// Insertion-ordered so that parse + dump reproduces a file byte for byte.
using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "oracle-lab/1";

// The full set of flags a run was invoked with. Unset fields are omitted
// from the JSON header.
struct RunConfig {
  std::string subcommand;
  std::optional<int> n;
  std::optional<int> d;
  std::optional<double> alpha;
  std::optional<double> epsilon;
  std::uint64_t seed = 0;
  std::optional<std::string> model;
  std::optional<Json> family;
  std::optional<std::string> output;
  std::string format = "json";
  // Everything else the subcommand took (witness, trials, grid, ...).
  Json extra = Json::object();

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

Json to_json(const RunConfig& config);
RunConfig run_config_from_json(const Json& j);

// {"schema": "oracle-lab/1", "kind": ..., "config": {...}, "data": {...}}
struct Document {
  std::string kind;
  RunConfig config;
  Json data = Json::object();
};

// Two-space indented JSON with a trailing newline.
std::string dump_document(const Document& doc);
// Rejects a missing or different schema tag. Throws ValidationError.
Document parse_document(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// {"n": ..., "d": ..., "perms": [[...], ...]}; loading rebuilds and
// re-validates the code.
Json to_json(const GraphCode& code);
GraphCode graph_code_from_json(const Json& j);

// {"n": ..., "alpha": ..., "V": [...]}
Json to_json(const SubsetSpec& spec);
SubsetSpec subset_spec_from_json(const Json& j);

// {"variant": "all" | "stabilizing" | "graph_codes" | "xor", "n": ..., ...}
// Singleton families carry a concrete function and are not serializable.
Json to_json(const FunctionFamily& family);
FunctionFamily family_from_json(const Json& j);

Json to_json(const VerdictReport& report);
VerdictReport verdict_from_json(const Json& j);

// Entries keyed by label name, e.g. {"C3[+1,-1]": {"re", "im", ...}}.
Json to_json(const WeightVector& weights);
WeightVector weights_from_json(const Json& j);

Json to_json(const SweepResult& result);
SweepResult sweep_from_json(const Json& j);

Json to_json(const ChernoffCensus& census);
ChernoffCensus chernoff_from_json(const Json& j);
std::string to_csv(const ChernoffCensus& census);

Json to_json(const CensusResult& census);
CensusResult census_from_json(const Json& j);

// State vectors as [[re, im], ...].
Json to_json(const StateVector& psi);
StateVector state_from_json(const Json& j);

}  // namespace oracle_lab
