#include "oracle_lab/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "oracle_lab/error.hpp"
#include "oracle_lab/io.hpp"

namespace oracle_lab::cli {

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const GenerationError*>(&e)) return kGeneration;
  if (dynamic_cast<const CapError*>(&e)) return kCap;
  if (dynamic_cast<const ConsistencyError*>(&e) || dynamic_cast<const NumericError*>(&e)) return kInvariant;
  return kInput;
}

namespace {

std::vector<std::uint32_t> parse_index_list(const std::string& text) {
  std::vector<std::uint32_t> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    unsigned long value = 0;
    try {
      value = std::stoul(item, &used);
    } catch (const std::exception&) {
      throw ValidationError("bad vertex '" + item + "' in list '" + text + "'");
    }
    if (used != item.size() || item.empty() || item[0] == '-') {
      throw ValidationError("bad vertex '" + item + "' in list '" + text + "'");
    }
    out.push_back(static_cast<std::uint32_t>(value));
  }
  if (out.empty()) throw ValidationError("empty vertex list");
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (auto v : parse_index_list(text)) out.push_back(static_cast<int>(v));
  return out;
}

// An explicit V from --V, otherwise a sampled one.
SubsetSpec make_subset(int n, double alpha, const std::string& explicit_vertices, std::uint64_t seed) {
  if (!explicit_vertices.empty()) return SubsetSpec::from_vertices(n, alpha, parse_index_list(explicit_vertices));
  Rng rng(derive_seed(seed, 0));
  return SubsetSpec::sample(n, alpha, rng);
}

std::string fmt(double v, int precision = 6) {
  std::ostringstream s;
  s << std::setprecision(precision) << v;
  return s.str();
}

// Eigenvalue noise around an exact zero prints as 0.
double display_gap(double lambda2) { return std::abs(lambda2) < 1e-12 ? 0.0 : lambda2; }

std::string vertex_list(const std::vector<std::uint32_t>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + std::to_string(v[k]);
  return s;
}

struct Context {
  std::ostream& out;
  std::ostream& err;
  RunConfig config;
  std::string out_path;

  void emit(const std::string& kind, Json data) const {
    if (out_path.empty()) return;
    write_text_file(out_path, dump_document(Document{kind, config, std::move(data)}));
  }

  void emit_csv(const std::string& body) const {
    if (out_path.empty()) return;
    write_text_file(out_path, "# " + to_json(config).dump() + "\n" + body);
  }
};

// ---------------------------------------------------------------------------
// gen

struct GenArgs {
  int n = 0;
  int d = 4;
  bool yes = false;
  bool no = false;
  double epsilon = 0.3;
  double alpha = 1.0 / 3.0;
  std::string vertices;
};

int cmd_gen(const GenArgs& a, Context& ctx) {
  if (a.yes == a.no) throw ValidationError("gen: pass exactly one of --yes or --no");
  ctx.config.n = a.n;
  ctx.config.d = a.d;
  Json instance = Json::object();
  std::optional<GraphCode> code;
  double lambda2 = 0.0;
  if (a.no) {
    ctx.config.epsilon = a.epsilon;
    const NoInstance no = sample_no_instance(a.n, a.d, a.epsilon, ctx.config.seed);
    code = no.code;
    lambda2 = no.lambda2;
    instance["class"] = "no";
    instance["epsilon"] = a.epsilon;
    instance["rejections"] = no.rejections;
  } else {
    ctx.config.alpha = a.alpha;
    const SubsetSpec spec = make_subset(a.n, a.alpha, a.vertices, ctx.config.seed);
    code = sample_yes_instance(spec, a.d, derive_seed(ctx.config.seed, 1));
    lambda2 = spectral_gap(*code);
    instance["class"] = "yes";
    instance["subset"] = to_json(spec);
    ctx.out << "V = {" << vertex_list(spec.vertices()) << "} (|V| = " << spec.size() << ")\n";
  }
  instance["lambda2"] = lambda2;
  ctx.out << "instance: " << (a.no ? "NO" : "YES") << ", n = " << a.n << ", N = " << code->vertex_count()
          << ", d = " << a.d << "\n";
  ctx.out << "lambda2 = " << fmt(display_gap(lambda2), 10);
  if (a.no) ctx.out << " (epsilon = " << a.epsilon << ")";
  ctx.out << "\n";
  Json data = to_json(*code);
  data["instance"] = instance;
  ctx.emit("graph_code", std::move(data));
  return kOk;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyArgs {
  std::string code_path;
  std::string witness = "subset";
  std::string model = "standard";
  double alpha = 1.0 / 3.0;
};

struct LoadedCode {
  GraphCode code;
  std::optional<SubsetSpec> subset;
  std::optional<double> epsilon;
};

LoadedCode load_code(const std::string& path) {
  const std::string text = read_text_file(path);
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw ValidationError("'" + path + "': malformed JSON: " + e.what());
  }
  const Json data = j.contains("schema") ? parse_document(text).data : j;
  LoadedCode loaded{graph_code_from_json(data), std::nullopt, std::nullopt};
  if (data.contains("instance")) {
    const Json& inst = data.at("instance");
    if (inst.contains("subset")) loaded.subset = subset_spec_from_json(inst.at("subset"));
    if (inst.contains("epsilon")) loaded.epsilon = inst.at("epsilon").get<double>();
  }
  if (loaded.subset && loaded.subset->n() != loaded.code.n()) {
    throw ValidationError("code file: recorded subset has a different n");
  }
  return loaded;
}

int cmd_verify(const VerifyArgs& a, Context& ctx) {
  const LoadedCode loaded = load_code(a.code_path);
  const GraphCode& code = loaded.code;
  const OracleModel model = parse_model(a.model);
  ctx.config.n = code.n();
  ctx.config.d = code.degree();
  ctx.config.model = to_string(model);
  ctx.config.alpha = a.alpha;
  ctx.config.extra["code"] = a.code_path;
  ctx.config.extra["witness"] = a.witness;
  const StateVector witness = parse_witness(a.witness, code.n(), loaded.subset, a.alpha, ctx.config.seed);
  const VerdictReport report = qma_verify(code, witness, model);
  const double lambda2 = spectral_gap(code);
  const double no_bound = 0.5 * std::min(1.0, std::max(0.0, lambda2) / (2.0 * code.degree()));

  ctx.out << "FAIL = " << fmt(report.fail_probability, 12) << "\n";
  ctx.out << "  overlap term  |<+|psi>|^2 = " << fmt(report.overlap_term, 12) << "\n";
  ctx.out << "  spectral term             = " << fmt(report.spectral_term, 12) << "\n";
  if (report.predicted) ctx.out << "  predicted FAIL            = " << fmt(*report.predicted, 12) << "\n";
  ctx.out << "  lambda2 = " << fmt(display_gap(lambda2), 10) << ", NO-side floor 1/2 min(1, lambda2/(2d)) = " << fmt(no_bound, 10)
          << "\n";
  Json data = Json::object();
  data["verdict"] = to_json(report);
  data["lambda2"] = lambda2;
  data["no_floor"] = no_bound;
  if (loaded.subset) {
    const double yes_value = static_cast<double>(loaded.subset->size()) / (2.0 * static_cast<double>(code.vertex_count()));
    ctx.out << "  YES reference |V|/(2N)    = " << fmt(yes_value, 12) << "\n";
    data["yes_reference"] = yes_value;
  }
  ctx.emit("verdict", std::move(data));
  return kOk;
}

// ---------------------------------------------------------------------------
// experiments

struct ExperimentArgs {
  int n = 3;
  double alpha = 1.0 / 3.0;
  std::string vertices;
  bool no = false;
  bool yes = false;
  std::size_t conjugations = 50;
  double tolerance = 1e-10;
  std::size_t trials = 100000;
  double threshold = 0.25;
  std::size_t queries = 3;
  std::string model = "inplace";
  int workspace = 0;
  std::string ns = "4,5,6,7,8";
  std::string rho = "random";
  std::size_t draws = 16;
  bool exhaustive = false;
  double cap = 1e6;
};

void record_subset(Context& ctx, const SubsetSpec& spec) { ctx.config.family = to_json(FunctionFamily::stabilizing(spec)); }

int finish(Context& ctx, bool ok, const std::string& what) {
  ctx.out << (ok ? "all checks passed" : "CHECK FAILED: " + what) << "\n";
  return ok ? kOk : kInvariant;
}

int exp_basis_verify(const ExperimentArgs& a, Context& ctx) {
  ctx.config.n = a.n;
  ctx.config.extra["conjugations"] = a.conjugations;
  ctx.config.extra["tolerance"] = a.tolerance;
  std::optional<SubsetSpec> spec;
  if (!a.no) {
    spec = make_subset(a.n, a.alpha, a.vertices, ctx.config.seed);
    ctx.config.alpha = a.alpha;
    record_subset(ctx, *spec);
  }
  const auto basis = spec ? build_yes_basis(*spec) : build_no_basis(a.n);
  const BasisCheck check = check_basis(*basis, a.n, spec, a.conjugations, derive_seed(ctx.config.seed, 1));
  const std::size_t expected = spec ? (spec->size() >= 2 ? 20 : 18) : 6;

  ctx.out << (spec ? "YES basis, V = {" + vertex_list(spec->vertices()) + "}" : std::string("NO basis")) << ": "
          << check.elements << " elements (expected " << expected << ")\n";
  Json elements = Json::array();
  for (const auto& e : *basis) {
    const double nuc = nuclear_norm(e.matrix);
    ctx.out << "  " << std::left << std::setw(12) << e.label.name() << " ||M||_F = " << std::setw(10)
            << fmt(e.frobenius_norm) << " ||M||_1 = " << fmt(nuc) << "\n";
    elements.push_back(Json{{"label", e.label.name()}, {"frobenius", e.frobenius_norm}, {"nuclear", nuc}});
  }
  ctx.out << "max pairwise overlap   = " << fmt(check.max_orthogonality_defect, 3) << "\n";
  ctx.out << "max invariance defect  = " << fmt(check.max_invariance_defect, 3) << " over " << a.conjugations
          << " conjugations\n";

  Json data = Json::object();
  data["elements"] = elements;
  data["max_orthogonality_defect"] = check.max_orthogonality_defect;
  data["max_invariance_defect"] = check.max_invariance_defect;
  if (spec) {
    const std::size_t dim = 2 * spec->vertex_count();
    const ComplexMatrix rho = DensityOperator::pure(StateVector::subset(dim, [&] {
                                std::vector<std::uint32_t> members;
                                for (auto v : spec->vertices()) members.push_back(2 * v);
                                return members;
                              }())).matrix();
    const WeightVector weights = decompose_difference(rho, *spec);
    ctx.out << "weights of d_{V,rho} for rho = |V,+1><V,+1|: total |c| = " << fmt(weights.total_magnitude)
            << ", residual = " << fmt(weights.residual, 3) << "\n";
    data["subset_state_weights"] = to_json(weights);
  }
  ctx.emit("basis_check", std::move(data));
  const bool ok = check.elements == expected && check.max_orthogonality_defect <= a.tolerance &&
                  check.max_invariance_defect <= a.tolerance;
  return finish(ctx, ok, "basis orthogonality/invariance/size");
}

int exp_phase_coeffs(const ExperimentArgs& a, Context& ctx) {
  ctx.config.n = a.n;
  ctx.config.extra["tolerance"] = a.tolerance;
  if (a.exhaustive) {
    ctx.config.extra["exhaustive"] = true;
    ctx.config.extra["cap"] = a.cap;
  }
  std::optional<SubsetSpec> spec;
  if (a.yes) {
    spec = make_subset(a.n, a.alpha, a.vertices, ctx.config.seed);
    ctx.config.alpha = a.alpha;
    record_subset(ctx, *spec);
  }
  const auto rows = phase_coefficient_table(a.n, spec);
  const double big_n = std::ldexp(1.0, a.n);
  ctx.out << (spec ? "YES (T_V), V = {" + vertex_list(spec->vertices()) + "}" : std::string("NO (T_empty)"))
          << ", N = " << big_n << "\n";
  bool ok = true;
  Json table = Json::array();
  for (const auto& r : rows) {
    const double shown = std::abs(r.value.real()) < 1e-15 ? 0.0 : r.value.real();
    ctx.out << "  " << std::left << std::setw(22) << r.name << std::setw(24) << fmt(shown, 12);
    if (std::abs(r.value.imag()) > 1e-15) ctx.out << " + " << fmt(r.value.imag(), 6) << "i";
    ctx.out << " (" << r.members << " entries)\n";
    ok = ok && std::abs(r.value) <= 1.0 + a.tolerance;
    table.push_back(Json{{"class", r.name}, {"re", r.value.real()}, {"im", r.value.imag()}, {"members", r.members}});
  }
  if (!spec) {
    for (const auto& r : rows) {
      const double want = r.name == "diagonal" ? 1.0 : r.name == "opposite_z" ? 0.0 : -1.0 / (big_n - 1.0);
      ok = ok && std::abs(r.value - Complex(want, 0.0)) <= a.tolerance;
    }
    ctx.out << "expected classes {1, 0, -1/(N-1) = " << fmt(-1.0 / (big_n - 1.0), 12) << "}\n";
  }
  Json data = Json{{"classes", table}};
  if (a.exhaustive) {
    // Cross-check against the average over every group element: the phase
    // channel applied to the all-ones matrix is the coefficient matrix.
    ChannelOptions options;
    options.cap = a.cap;
    const FunctionFamily family = spec ? FunctionFamily::stabilizing(*spec) : FunctionFamily::all_permutations(a.n);
    const auto inner = static_cast<Eigen::Index>(2 * family.vertex_count());
    const ComplexMatrix ones = ComplexMatrix::Ones(inner, inner);
    const ComplexMatrix enumerated = exhaustive_channel(OracleModel::phase, family, ones, options).output;
    const double gap = (enumerated - phase_coefficient_matrix(a.n, spec)).cwiseAbs().maxCoeff();
    ctx.out << "max |closed form - exhaustive| = " << fmt(gap, 3) << " (group order " << family.group_order() << ")\n";
    data["exhaustive_gap"] = gap;
    ok = ok && gap <= a.tolerance;
  }
  ctx.emit("phase_coefficients", std::move(data));
  return finish(ctx, ok, "phase coefficient classes");
}

int exp_chernoff(const ExperimentArgs& a, Context& ctx) {
  ctx.config.n = a.n;
  ctx.config.alpha = a.alpha;
  ctx.config.extra["trials"] = a.trials;
  const ChernoffCensus c = chernoff_census(a.n, a.alpha, a.trials, ctx.config.seed);
  ctx.out << "N = 2^" << a.n << ", |V| = " << c.subset_size << ", trials = " << c.trials << "\n";
  ctx.out << "threshold 0.5 N^(-3 alpha/8) = " << fmt(c.threshold) << "\n";
  ctx.out << "tail fraction |Y| >= threshold = " << fmt(c.tail_fraction) << " (claimed <= 1e-3: "
          << (c.tail_fraction <= 1e-3 ? "yes" : "no") << ")\n";
  ctx.out << "|Y|^2: mean " << fmt(c.mean_y2) << " (1/|V| = " << fmt(1.0 / static_cast<double>(c.subset_size))
          << "), median " << fmt(c.median_y2) << ", q99 " << fmt(c.q99_y2) << ", max " << fmt(c.max_y2) << "\n";
  ctx.out << "fraction with |Y|^2 > N^(-3 alpha/4) = " << fmt(c.fraction_y2_above_target) << "\n";
  if (ctx.config.format == "csv") {
    ctx.emit_csv(to_csv(c));
  } else {
    ctx.emit("chernoff_census", to_json(c));
  }
  return kOk;
}

int exp_hybrid(const ExperimentArgs& a, Context& ctx) {
  ctx.config.n = a.n;
  ctx.config.alpha = a.alpha;
  ctx.config.model = a.model;
  ctx.config.extra["queries"] = a.queries;
  ctx.config.extra["workspace"] = a.workspace;
  const OracleModel model = parse_model(a.model);
  const SubsetSpec spec = make_subset(a.n, a.alpha, a.vertices, ctx.config.seed);
  record_subset(ctx, spec);
  HybridSpec hybrid = HybridSpec::haar(a.n, a.queries, 0, derive_seed(ctx.config.seed, 1), model, a.workspace);
  Json rows = Json::array();
  ctx.out << "V = {" << vertex_list(spec.vertices()) << "}, k = " << a.queries << ", model " << to_string(model) << "\n";
  std::vector<double> p;
  for (std::size_t ell = 0; ell <= a.queries; ++ell) {
    hybrid.switch_index = ell;
    p.push_back(hybrid_run(hybrid, spec));
    ctx.out << "  l = " << ell << "  Tr[E A_{V,l}(rho0)] = " << fmt(p.back(), 12);
    if (ell > 0) ctx.out << "  step " << fmt(std::abs(p[ell] - p[ell - 1]), 4);
    ctx.out << "\n";
    rows.push_back(Json{{"l", ell}, {"accept", p.back()}});
  }
  // At l = k every query is a NO query, so V must not matter.
  Rng other_rng(derive_seed(ctx.config.seed, 2));
  const SubsetSpec other = SubsetSpec::sample(a.n, a.alpha, other_rng);
  hybrid.switch_index = a.queries;
  const double endpoint_other = hybrid_run(hybrid, other);
  const bool ok = endpoint_other == p.back();
  ctx.out << "|p(0) - p(k)| = " << fmt(std::abs(p.front() - p.back())) << "\n";
  ctx.emit("hybrid", Json{{"rows", rows}, {"endpoint_other_subset", endpoint_other}, {"endpoint_identical", ok}});
  return finish(ctx, ok, "l = k endpoint depends on V");
}

int exp_sweep(const ExperimentArgs& a, Context& ctx) {
  ctx.config.alpha = a.alpha;
  ctx.config.model = a.model;
  ctx.config.extra["ns"] = a.ns;
  ctx.config.extra["rho"] = a.rho;
  ctx.config.extra["draws"] = a.draws;
  ctx.config.extra["workspace"] = a.workspace;
  const OracleModel model = parse_model(a.model);
  SweepOptions options;
  options.draws = a.draws;
  options.workspace_qubits = a.workspace;
  const SweepResult r = distinguishability_sweep(model, parse_int_list(a.ns), a.alpha, parse_strategy(a.rho),
                                                 ctx.config.seed, options);
  ctx.out << "model " << to_string(model) << ", rho " << to_string(r.strategy) << ", alpha " << a.alpha << "\n";
  for (const auto& row : r.rows) {
    ctx.out << "  n = " << row.n << "  |V| = " << std::setw(3) << row.subset_size << "  ||d||_1 = " << std::setw(12)
            << fmt(row.trace_distance) << " +- " << fmt(row.standard_error, 3);
    if (row.off_block_constant) ctx.out << "  off-block c = " << fmt(*row.off_block_constant, 4);
    ctx.out << "\n";
  }
  ctx.out << "monotonically decreasing: " << (r.monotonically_decreasing() ? "yes" : "no") << "\n";
  if (r.fit) {
    ctx.out << "fitted slope " << fmt(r.fit->slope, 4) << " vs -alpha/4 = " << fmt(r.fit->candidate_alpha_quarter, 4)
            << " and -(1/2 - alpha) = " << fmt(r.fit->candidate_half_minus_alpha, 4) << "\n";
  }
  if (ctx.config.format == "csv") {
    ctx.emit_csv(r.to_csv());
  } else {
    ctx.emit("sweep", to_json(r));
  }
  return kOk;
}

int exp_censuses(const ExperimentArgs& a, Context& ctx) {
  ctx.config.n = a.n;
  ctx.config.alpha = a.alpha;
  ctx.config.extra["trials"] = a.trials;
  ctx.config.extra["threshold"] = a.threshold;
  ctx.config.extra["rho"] = a.rho;
  const std::size_t size = std::size_t{1} << a.n;
  Rng rng(derive_seed(ctx.config.seed, 0));
  ComplexMatrix rho;
  const RhoStrategy strategy = parse_strategy(a.rho);
  if (strategy == RhoStrategy::maximally_mixed) {
    rho = DensityOperator::maximally_mixed(size).matrix();
  } else if (strategy == RhoStrategy::random_pure) {
    rho = DensityOperator::pure(StateVector::random(size, rng)).matrix();
  } else {
    throw ValidationError("censuses: --rho must be random or mixed");
  }
  // E = indicator of the lower half of [N].
  ComplexMatrix povm = ComplexMatrix::Zero(static_cast<Eigen::Index>(size), static_cast<Eigen::Index>(size));
  for (std::size_t x = 0; x < size / 2; ++x) povm(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(x)) = 1.0;

  const CensusResult overlap =
      subset_overlap_census(rho, a.alpha, a.trials, a.threshold, derive_seed(ctx.config.seed, 1));
  const CensusResult mean = povm_mean_census(povm, a.alpha, a.trials, a.threshold, derive_seed(ctx.config.seed, 2));
  ctx.out << "N = " << size << ", |V| = " << subset_size(a.n, a.alpha) << ", trials = " << a.trials << "\n";
  ctx.out << "  <V|rho|V> >= " << a.threshold << ": fraction " << fmt(overlap.fraction) << ", mean "
          << fmt(overlap.mean) << ", max " << fmt(overlap.max) << "\n";
  ctx.out << "  |Tr[I_V E]/|V| - Tr[E]/N| >= " << a.threshold << " (E = lower half): fraction "
          << fmt(mean.fraction) << ", mean " << fmt(mean.mean) << ", max " << fmt(mean.max) << "\n";
  if (ctx.config.format == "csv") {
    std::ostringstream csv;
    csv.precision(17);
    csv << "census,trials,threshold,fraction,mean,max\n";
    csv << "subset_overlap," << overlap.trials << ',' << overlap.threshold << ',' << overlap.fraction << ','
        << overlap.mean << ',' << overlap.max << '\n';
    csv << "povm_mean," << mean.trials << ',' << mean.threshold << ',' << mean.fraction << ',' << mean.mean << ','
        << mean.max << '\n';
    ctx.emit_csv(csv.str());
  } else {
    ctx.emit("censuses", Json{{"subset_overlap", to_json(overlap)}, {"povm_mean", to_json(mean)}});
  }
  return kOk;
}

int exp_qcma(const ExperimentArgs& a, Context& ctx) {
  ctx.config.n = a.n;
  const std::size_t size = std::size_t{1} << a.n;
  Rng rng(derive_seed(ctx.config.seed, 0));
  const auto x_star = static_cast<std::uint32_t>(rng.below(size));
  const auto z_star = static_cast<ZBit>(rng.below(2));
  std::vector<int> budget(2 * size, a.n);
  budget[2 * x_star + static_cast<std::size_t>(z_star)] = a.n - 1;
  const FunctionFamily yes = FunctionFamily::xor_subgroup(a.n, budget);
  const FunctionFamily no = FunctionFamily::xor_subgroup(a.n, std::vector<int>(2 * size, a.n));
  ctx.config.family = to_json(yes);

  const double yes_correct = qcma_xor_verify(yes, x_star, z_star);
  double no_min = 1.0;
  double no_max = 0.0;
  double yes_wrong_max = 0.0;
  for (std::uint32_t x = 0; x < size; ++x) {
    for (auto z : {ZBit::plus, ZBit::minus}) {
      const double p_no = qcma_xor_verify(no, x, z);
      no_min = std::min(no_min, p_no);
      no_max = std::max(no_max, p_no);
      if (x != x_star || z != z_star) yes_wrong_max = std::max(yes_wrong_max, qcma_xor_verify(yes, x, z));
    }
  }
  ctx.out << "YES coordinate (x, z) = (" << x_star << ", " << (z_star == ZBit::plus ? "+1" : "-1") << ")\n";
  ctx.out << "  YES, correct witness: accept = " << fmt(yes_correct, 17) << "\n";
  ctx.out << "  YES, other witnesses: max accept = " << fmt(yes_wrong_max, 17) << "\n";
  ctx.out << "  NO, all " << 2 * size << " witnesses: accept in [" << fmt(no_min, 17) << ", " << fmt(no_max, 17)
          << "]\n";
  ctx.emit("qcma", Json{{"x", x_star},
                        {"z", z_star == ZBit::plus ? 1 : -1},
                        {"yes_correct", yes_correct},
                        {"yes_other_max", yes_wrong_max},
                        {"no_min", no_min},
                        {"no_max", no_max}});
  const bool ok = yes_correct == 1.0 && no_min == 0.5 && no_max == 0.5;
  return finish(ctx, ok, "accept probabilities differ from 1 and 1/2");
}

}  // namespace

StateVector parse_witness(const std::string& text, int n, const std::optional<SubsetSpec>& instance_subset,
                          double alpha, std::uint64_t seed) {
  const std::size_t size = std::size_t{1} << n;
  if (text == "uniform") return StateVector::uniform(size);
  if (text == "subset") {
    if (instance_subset) return StateVector::subset(size, instance_subset->vertices());
    Rng rng(derive_seed(seed, 0));
    return StateVector::subset(size, SubsetSpec::sample(n, alpha, rng).vertices());
  }
  if (text.rfind("subset:", 0) == 0) {
    auto members = parse_index_list(text.substr(7));
    std::sort(members.begin(), members.end());
    if (std::adjacent_find(members.begin(), members.end()) != members.end()) {
      throw ValidationError("witness: repeated vertex in '" + text + "'");
    }
    if (members.back() >= size) throw ValidationError("witness: vertex out of range in '" + text + "'");
    return StateVector::subset(size, members);
  }
  if (text.rfind("file:", 0) == 0) {
    const std::string path = text.substr(5);
    const std::string body = read_text_file(path);
    Json j;
    try {
      j = Json::parse(body);
    } catch (const Json::exception& e) {
      throw ValidationError("witness file '" + path + "': malformed JSON: " + e.what());
    }
    const Json amplitudes = j.contains("schema") ? parse_document(body).data.at("amplitudes") : j;
    StateVector psi = state_from_json(amplitudes);
    if (psi.dim() != size) throw ValidationError("witness file '" + path + "': dimension does not match N");
    return psi;
  }
  throw ValidationError("malformed witness '" + text + "' (expected uniform, subset, subset:i,j,... or file:path)");
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"oracle_lab: randomized-oracle experiments on graph-coded functions"};
  app.require_subcommand(1);
  std::uint64_t seed = 0;
  std::string out_path;
  std::string format = "json";
  std::size_t threads = 0;
  app.add_option("--seed", seed, "Master seed; every random draw derives from it")->capture_default_str();
  app.add_option("--out", out_path, "Write machine-readable output here");
  app.add_option("--format", format, "Output format for --out")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--threads", threads, "Worker threads (overrides ORACLE_LAB_THREADS)");

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a YES or NO graph-code instance");
  gen_cmd->add_option("--n", gen.n, "log2 of the vertex count")->required();
  gen_cmd->add_option("--d", gen.d, "Even degree")->capture_default_str();
  auto* yes_flag = gen_cmd->add_flag("--yes", gen.yes, "Disconnected instance hiding V");
  gen_cmd->add_flag("--no", gen.no, "Expander instance with lambda2 >= epsilon")->excludes(yes_flag);
  gen_cmd->add_option("--epsilon", gen.epsilon, "NO-side spectral gap")->capture_default_str();
  gen_cmd->add_option("--alpha", gen.alpha, "|V| = floor(N^alpha)")->capture_default_str();
  gen_cmd->add_option("--V", gen.vertices, "Explicit V as a comma list (YES only)");

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Run the QMA verifier on a code file");
  verify_cmd->add_option("code", verify.code_path, "Graph-code JSON file")->required();
  verify_cmd->add_option("--witness", verify.witness, "uniform | subset | subset:i,j,... | file:path")
      ->capture_default_str();
  verify_cmd->add_option("--model", verify.model, "standard | inplace")->capture_default_str();
  verify_cmd->add_option("--alpha", verify.alpha, "|V| for a sampled subset witness")->capture_default_str();

  ExperimentArgs ex;
  auto* exp_cmd = app.add_subcommand("experiment", "Numerical experiments");
  exp_cmd->require_subcommand(1);
  const auto common = [&](CLI::App* sub, bool subset) {
    sub->add_option("--n", ex.n, "log2 of the vertex count")->capture_default_str();
    if (subset) {
      sub->add_option("--alpha", ex.alpha, "|V| = floor(N^alpha)")->capture_default_str();
      sub->add_option("--V", ex.vertices, "Explicit V as a comma list");
    }
  };
  auto* basis_cmd = exp_cmd->add_subcommand("basis-verify", "Orthogonality and invariance of the symmetric bases");
  common(basis_cmd, true);
  basis_cmd->add_flag("--no", ex.no, "Check the T_empty basis only");
  basis_cmd->add_option("--conjugations", ex.conjugations, "Sampled invariance checks")->capture_default_str();
  basis_cmd->add_option("--tol", ex.tolerance, "Tolerance override")->capture_default_str();

  auto* phase_cmd = exp_cmd->add_subcommand("phase-coeffs", "Averaged phase-oracle coefficient classes");
  common(phase_cmd, true);
  auto* phase_yes = phase_cmd->add_flag("--yes", ex.yes, "Use T_V");
  phase_cmd->add_flag("--no", ex.no, "Use T_empty (default)")->excludes(phase_yes);
  phase_cmd->add_option("--tol", ex.tolerance, "Tolerance override")->capture_default_str();
  phase_cmd->add_flag("--exhaustive", ex.exhaustive, "Cross-check by enumerating the group");
  phase_cmd->add_option("--cap", ex.cap, "Largest group order to enumerate")->capture_default_str();

  auto* chernoff_cmd = exp_cmd->add_subcommand("chernoff", "Tail of |Y| for random subsets");
  chernoff_cmd->add_option("--n", ex.n)->required();
  chernoff_cmd->add_option("--alpha", ex.alpha)->capture_default_str();
  chernoff_cmd->add_option("--trials", ex.trials)->capture_default_str();

  auto* hybrid_cmd = exp_cmd->add_subcommand("hybrid", "Hybrid algorithms A_{V,l} for l = 0..k");
  common(hybrid_cmd, true);
  hybrid_cmd->add_option("--k", ex.queries, "Query count")->capture_default_str();
  hybrid_cmd->add_option("--model", ex.model, "inplace | phase")->capture_default_str();
  hybrid_cmd->add_option("--workspace", ex.workspace, "Workspace qubits")->capture_default_str();

  auto* sweep_cmd = exp_cmd->add_subcommand("sweep", "||d_{V,rho}||_1 over a grid of n");
  sweep_cmd->add_option("--ns", ex.ns, "Comma list of n")->capture_default_str();
  sweep_cmd->add_option("--alpha", ex.alpha)->capture_default_str();
  sweep_cmd->add_option("--model", ex.model, "inplace | phase")->capture_default_str();
  sweep_cmd->add_option("--rho", ex.rho, "subset | random | mixed")->capture_default_str();
  sweep_cmd->add_option("--draws", ex.draws, "Draws of (V, rho) per n")->capture_default_str();
  sweep_cmd->add_option("--workspace", ex.workspace, "Workspace qubits")->capture_default_str();

  auto* census_cmd = exp_cmd->add_subcommand("censuses", "Subset-overlap and POVM-mean censuses");
  common(census_cmd, false);
  census_cmd->add_option("--alpha", ex.alpha)->capture_default_str();
  census_cmd->add_option("--trials", ex.trials)->capture_default_str();
  census_cmd->add_option("--threshold", ex.threshold)->capture_default_str();
  census_cmd->add_option("--rho", ex.rho, "random | mixed")->capture_default_str();

  auto* qcma_cmd = exp_cmd->add_subcommand("qcma", "One-query XOR protocol, exact");
  common(qcma_cmd, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "error: " << e.what() << "\n";
    return kInput;
  }

  if (threads > 0) setenv("ORACLE_LAB_THREADS", std::to_string(threads).c_str(), 1);
  Context ctx{out, err, RunConfig{}, out_path};
  ctx.config.seed = seed;
  ctx.config.format = format;
  if (!out_path.empty()) ctx.config.output = out_path;

  try {
    if (format == "csv" && !(*chernoff_cmd || *sweep_cmd || *census_cmd)) {
      throw ValidationError("--format csv is available for chernoff, sweep and censuses only");
    }
    if (*gen_cmd) {
      ctx.config.subcommand = "gen";
      if (gen.vertices.size()) ctx.config.extra["V"] = gen.vertices;
      return cmd_gen(gen, ctx);
    }
    if (*verify_cmd) {
      ctx.config.subcommand = "verify";
      return cmd_verify(verify, ctx);
    }
    for (auto* sub : exp_cmd->get_subcommands()) ctx.config.subcommand = "experiment " + sub->get_name();
    if (!ex.vertices.empty()) ctx.config.extra["V"] = ex.vertices;
    if (*basis_cmd) return exp_basis_verify(ex, ctx);
    if (*phase_cmd) return exp_phase_coeffs(ex, ctx);
    if (*chernoff_cmd) return exp_chernoff(ex, ctx);
    if (*hybrid_cmd) return exp_hybrid(ex, ctx);
    if (*sweep_cmd) return exp_sweep(ex, ctx);
    if (*census_cmd) return exp_censuses(ex, ctx);
    if (*qcma_cmd) return exp_qcma(ex, ctx);
  } catch (const CapError& e) {
    err << "error: " << e.what() << "\n"
        << "hint: the exhaustive average enumerates the whole group; lower n or use the closed form or sampling\n";
    return kCap;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return kInput;
}

}  // namespace oracle_lab::cli
