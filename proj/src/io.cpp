#include "oracle_lab/io.hpp"

#include <fstream>
#include <sstream>

#include "oracle_lab/error.hpp"

namespace oracle_lab {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) throw ValidationError(std::string("expected a JSON object holding '") + key + "'");
  const auto it = j.find(key);
  if (it == j.end()) throw ValidationError(std::string("missing field '") + key + "'");
  return *it;
}

template <typename T>
T get(const Json& j, const char* key) {
  try {
    return field(j, key).get<T>();
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("field '") + key + "': " + e.what());
  }
}

template <typename T>
std::optional<T> get_optional(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return get<T>(j, key);
}

template <typename T>
void put_optional(Json& j, const char* key, const std::optional<T>& value) {
  if (value) j[key] = *value;
}

Json complex_pair(Complex c) { return Json::array({c.real(), c.imag()}); }

Complex complex_from(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ValidationError("expected a [re, im] pair");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

// ---------------------------------------------------------------------------
// Config and documents

Json to_json(const RunConfig& config) {
  Json j = Json::object();
  j["subcommand"] = config.subcommand;
  put_optional(j, "n", config.n);
  put_optional(j, "d", config.d);
  put_optional(j, "alpha", config.alpha);
  put_optional(j, "epsilon", config.epsilon);
  j["seed"] = config.seed;
  put_optional(j, "model", config.model);
  put_optional(j, "family", config.family);
  put_optional(j, "output", config.output);
  j["format"] = config.format;
  j["extra"] = config.extra;
  return j;
}

RunConfig run_config_from_json(const Json& j) {
  RunConfig c;
  c.subcommand = get<std::string>(j, "subcommand");
  c.n = get_optional<int>(j, "n");
  c.d = get_optional<int>(j, "d");
  c.alpha = get_optional<double>(j, "alpha");
  c.epsilon = get_optional<double>(j, "epsilon");
  c.seed = get<std::uint64_t>(j, "seed");
  c.model = get_optional<std::string>(j, "model");
  if (j.contains("family")) c.family = j.at("family");
  c.output = get_optional<std::string>(j, "output");
  c.format = get<std::string>(j, "format");
  c.extra = field(j, "extra");
  if (!c.extra.is_object()) throw ValidationError("config 'extra' must be an object");
  return c;
}

std::string dump_document(const Document& doc) {
  Json j = Json::object();
  j["schema"] = kSchema;
  j["kind"] = doc.kind;
  j["config"] = to_json(doc.config);
  j["data"] = doc.data;
  return j.dump(2) + "\n";
}

Document parse_document(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
  const auto schema = get<std::string>(j, "schema");
  if (schema != kSchema) throw ValidationError("unsupported schema '" + schema + "'");
  Document doc;
  doc.kind = get<std::string>(j, "kind");
  doc.config = run_config_from_json(field(j, "config"));
  doc.data = field(j, "data");
  return doc;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << text;
  if (!out) throw ValidationError("write to '" + path + "' failed");
}

// ---------------------------------------------------------------------------
// Graph codes, subsets, families

Json to_json(const GraphCode& code) {
  Json perms = Json::array();
  for (const auto& p : code.factors()) perms.push_back(p);
  return Json{{"n", code.n()}, {"d", code.degree()}, {"perms", perms}};
}

GraphCode graph_code_from_json(const Json& j) {
  const int n = get<int>(j, "n");
  const int d = get<int>(j, "d");
  const auto perms = get<std::vector<Permutation>>(j, "perms");
  if (d < 2 || d % 2 != 0 || static_cast<std::size_t>(d / 2) != perms.size()) {
    throw ValidationError("graph code: d must be even and equal 2 * len(perms)");
  }
  return GraphCode::build(n, perms);
}

Json to_json(const SubsetSpec& spec) {
  return Json{{"n", spec.n()}, {"alpha", spec.alpha()}, {"V", spec.vertices()}};
}

SubsetSpec subset_spec_from_json(const Json& j) {
  return SubsetSpec::from_vertices(get<int>(j, "n"), get<double>(j, "alpha"),
                                   get<std::vector<std::uint32_t>>(j, "V"));
}

Json to_json(const FunctionFamily& family) {
  Json j = Json::object();
  switch (family.kind()) {
    case FamilyKind::singleton: throw ContractError("singleton families are not serializable");
    case FamilyKind::all_permutations:
      j["variant"] = "all";
      j["n"] = family.n();
      return j;
    case FamilyKind::stabilizing:
      j["variant"] = "stabilizing";
      j["n"] = family.n();
      j["alpha"] = family.spec()->alpha();
      j["V"] = family.spec()->vertices();
      return j;
    case FamilyKind::graph_codes:
      j["variant"] = "graph_codes";
      j["n"] = family.n();
      j["d"] = family.degree();
      if (family.spec()) {
        j["alpha"] = family.spec()->alpha();
        j["V"] = family.spec()->vertices();
      }
      return j;
    case FamilyKind::xor_subgroup:
      j["variant"] = "xor";
      j["n"] = family.n();
      j["bit_budget"] = family.bit_budget();
      return j;
  }
  throw ContractError("unknown family kind");
}

FunctionFamily family_from_json(const Json& j) {
  const auto variant = get<std::string>(j, "variant");
  const int n = get<int>(j, "n");
  if (variant == "all") return FunctionFamily::all_permutations(n);
  if (variant == "stabilizing") return FunctionFamily::stabilizing(subset_spec_from_json(j));
  if (variant == "graph_codes") {
    std::optional<SubsetSpec> spec;
    if (j.contains("V")) spec = subset_spec_from_json(j);
    return FunctionFamily::graph_codes(n, get<int>(j, "d"), spec);
  }
  if (variant == "xor") return FunctionFamily::xor_subgroup(n, get<std::vector<int>>(j, "bit_budget"));
  throw ValidationError("unknown family variant '" + variant + "'");
}

// ---------------------------------------------------------------------------
// Reports

Json to_json(const VerdictReport& report) {
  Json j = Json::object();
  j["fail_probability"] = report.fail_probability;
  j["overlap_term"] = report.overlap_term;
  j["spectral_term"] = report.spectral_term;
  put_optional(j, "predicted", report.predicted);
  put_optional(j, "standard_error", report.standard_error);
  j["samples"] = report.samples;
  j["method"] = report.method;
  return j;
}

VerdictReport verdict_from_json(const Json& j) {
  VerdictReport r;
  r.fail_probability = get<double>(j, "fail_probability");
  r.overlap_term = get<double>(j, "overlap_term");
  r.spectral_term = get<double>(j, "spectral_term");
  r.predicted = get_optional<double>(j, "predicted");
  r.standard_error = get_optional<double>(j, "standard_error");
  r.samples = get<std::size_t>(j, "samples");
  r.method = get<std::string>(j, "method");
  return r;
}

Json to_json(const WeightVector& weights) {
  Json entries = Json::object();
  for (const auto& e : weights.entries) {
    entries[e.label.name()] = Json{{"re", e.weight.real()},
                                   {"im", e.weight.imag()},
                                   {"magnitude", e.magnitude},
                                   {"trace_norm_mass", e.trace_norm_mass}};
  }
  Json j = Json::object();
  j["entries"] = entries;
  j["total_magnitude"] = weights.total_magnitude;
  j["total_trace_norm_mass"] = weights.total_trace_norm_mass;
  j["residual"] = weights.residual;
  return j;
}

WeightVector weights_from_json(const Json& j) {
  WeightVector w;
  const Json& entries = field(j, "entries");
  if (!entries.is_object()) throw ValidationError("'entries' must be an object keyed by label");
  for (const auto& [name, value] : entries.items()) {
    WeightEntry e{parse_basis_label(name), {get<double>(value, "re"), get<double>(value, "im")},
                  get<double>(value, "magnitude"), get<double>(value, "trace_norm_mass")};
    w.entries.push_back(e);
  }
  w.total_magnitude = get<double>(j, "total_magnitude");
  w.total_trace_norm_mass = get<double>(j, "total_trace_norm_mass");
  w.residual = get<double>(j, "residual");
  return w;
}

Json to_json(const SweepResult& result) {
  Json rows = Json::array();
  for (const auto& r : result.rows) {
    Json row = Json::object();
    row["n"] = r.n;
    row["N"] = r.vertex_count;
    row["V"] = r.subset_size;
    row["draws"] = r.draws;
    row["trace_distance"] = r.trace_distance;
    row["standard_error"] = r.standard_error;
    row["min"] = r.min_distance;
    row["max"] = r.max_distance;
    put_optional(row, "off_block_constant", r.off_block_constant);
    put_optional(row, "in_block_max", r.in_block_max);
    rows.push_back(row);
  }
  Json j = Json::object();
  j["model"] = to_string(result.model);
  j["strategy"] = to_string(result.strategy);
  j["alpha"] = result.alpha;
  j["seed"] = result.seed;
  j["rows"] = rows;
  if (result.fit) {
    j["fit"] = Json{{"slope", result.fit->slope},
                    {"intercept", result.fit->intercept},
                    {"candidate_alpha_quarter", result.fit->candidate_alpha_quarter},
                    {"candidate_half_minus_alpha", result.fit->candidate_half_minus_alpha}};
  }
  j["monotonically_decreasing"] = result.monotonically_decreasing();
  return j;
}

SweepResult sweep_from_json(const Json& j) {
  SweepResult s;
  s.model = parse_model(get<std::string>(j, "model"));
  s.strategy = parse_strategy(get<std::string>(j, "strategy"));
  s.alpha = get<double>(j, "alpha");
  s.seed = get<std::uint64_t>(j, "seed");
  const Json& rows = field(j, "rows");
  if (!rows.is_array()) throw ValidationError("'rows' must be an array");
  for (const auto& row : rows) {
    SweepRow r;
    r.n = get<int>(row, "n");
    r.vertex_count = get<std::size_t>(row, "N");
    r.subset_size = get<std::size_t>(row, "V");
    r.draws = get<std::size_t>(row, "draws");
    r.trace_distance = get<double>(row, "trace_distance");
    r.standard_error = get<double>(row, "standard_error");
    r.min_distance = get<double>(row, "min");
    r.max_distance = get<double>(row, "max");
    r.off_block_constant = get_optional<double>(row, "off_block_constant");
    r.in_block_max = get_optional<double>(row, "in_block_max");
    s.rows.push_back(r);
  }
  if (j.contains("fit")) {
    const Json& f = j.at("fit");
    s.fit = SweepFit{get<double>(f, "slope"), get<double>(f, "intercept"), get<double>(f, "candidate_alpha_quarter"),
                     get<double>(f, "candidate_half_minus_alpha")};
  }
  if (get<bool>(j, "monotonically_decreasing") != s.monotonically_decreasing()) {
    throw ValidationError("sweep: 'monotonically_decreasing' disagrees with the rows");
  }
  return s;
}

Json to_json(const ChernoffCensus& c) {
  Json j = Json::object();
  j["n"] = c.n;
  j["alpha"] = c.alpha;
  j["subset_size"] = c.subset_size;
  j["trials"] = c.trials;
  j["threshold"] = c.threshold;
  j["tail_fraction"] = c.tail_fraction;
  j["target"] = c.target;
  j["mean_y2"] = c.mean_y2;
  j["median_y2"] = c.median_y2;
  j["q90_y2"] = c.q90_y2;
  j["q99_y2"] = c.q99_y2;
  j["max_y2"] = c.max_y2;
  j["fraction_y2_above_target"] = c.fraction_y2_above_target;
  return j;
}

ChernoffCensus chernoff_from_json(const Json& j) {
  ChernoffCensus c;
  c.n = get<int>(j, "n");
  c.alpha = get<double>(j, "alpha");
  c.subset_size = get<std::size_t>(j, "subset_size");
  c.trials = get<std::size_t>(j, "trials");
  c.threshold = get<double>(j, "threshold");
  c.tail_fraction = get<double>(j, "tail_fraction");
  c.target = get<double>(j, "target");
  c.mean_y2 = get<double>(j, "mean_y2");
  c.median_y2 = get<double>(j, "median_y2");
  c.q90_y2 = get<double>(j, "q90_y2");
  c.q99_y2 = get<double>(j, "q99_y2");
  c.max_y2 = get<double>(j, "max_y2");
  c.fraction_y2_above_target = get<double>(j, "fraction_y2_above_target");
  return c;
}

std::string to_csv(const ChernoffCensus& c) {
  std::ostringstream out;
  out.precision(17);
  out << "n,alpha,subset_size,trials,threshold,tail_fraction,target,mean_y2,median_y2,q90_y2,q99_y2,max_y2,"
         "fraction_y2_above_target\n";
  out << c.n << ',' << c.alpha << ',' << c.subset_size << ',' << c.trials << ',' << c.threshold << ','
      << c.tail_fraction << ',' << c.target << ',' << c.mean_y2 << ',' << c.median_y2 << ',' << c.q90_y2 << ','
      << c.q99_y2 << ',' << c.max_y2 << ',' << c.fraction_y2_above_target << '\n';
  return out.str();
}

Json to_json(const CensusResult& c) {
  return Json{{"trials", c.trials}, {"threshold", c.threshold}, {"fraction", c.fraction}, {"mean", c.mean},
              {"max", c.max}};
}

CensusResult census_from_json(const Json& j) {
  CensusResult c;
  c.trials = get<std::size_t>(j, "trials");
  c.threshold = get<double>(j, "threshold");
  c.fraction = get<double>(j, "fraction");
  c.mean = get<double>(j, "mean");
  c.max = get<double>(j, "max");
  return c;
}

Json to_json(const StateVector& psi) {
  Json j = Json::array();
  for (std::size_t i = 0; i < psi.dim(); ++i) j.push_back(complex_pair(psi[i]));
  return j;
}

StateVector state_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw ValidationError("state: expected a non-empty array of [re, im] pairs");
  ComplexVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = complex_from(j[i]);
  return StateVector(std::move(v));
}

}  // namespace oracle_lab
