#include "oracle_lab/channels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "oracle_lab/error.hpp"
#include "oracle_lab/parallel.hpp"
#include "oracle_lab/symmetry.hpp"

namespace oracle_lab {

std::string to_string(OracleModel model) {
  switch (model) {
    case OracleModel::standard: return "standard";
    case OracleModel::in_place: return "inplace";
    case OracleModel::phase: return "phase";
  }
  return "unknown";
}

OracleModel parse_model(const std::string& text) {
  if (text == "standard") return OracleModel::standard;
  if (text == "inplace" || text == "in-place" || text == "in_place") return OracleModel::in_place;
  if (text == "phase") return OracleModel::phase;
  throw ValidationError("unknown oracle model '" + text + "' (expected standard, inplace or phase)");
}

std::string to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::singleton: return "singleton";
    case FamilyKind::all_permutations: return "all";
    case FamilyKind::stabilizing: return "stabilizing";
    case FamilyKind::xor_subgroup: return "xor";
    case FamilyKind::graph_codes: return "graph_codes";
  }
  return "unknown";
}

std::string to_string(ChannelMethod method) {
  switch (method) {
    case ChannelMethod::monte_carlo: return "monte_carlo";
    case ChannelMethod::exhaustive: return "exhaustive";
    case ChannelMethod::closed_form: return "closed_form";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// FunctionFamily

namespace {

void check_n(int n) {
  if (n < 1 || n > 20) throw ValidationError("family: n must lie in [1, 20]");
}

double log_factorial(std::size_t k) { return std::lgamma(static_cast<double>(k) + 1.0); }

}  // namespace

FunctionFamily FunctionFamily::singleton(OracleFunction fn) {
  std::size_t size = fn.domain_size();
  int n = 0;
  while ((std::size_t{1} << n) < size) ++n;
  if ((std::size_t{1} << n) != size) throw ValidationError("family: domain size must be a power of two");
  FunctionFamily f;
  f.kind_ = FamilyKind::singleton;
  f.n_ = n;
  f.degree_ = static_cast<int>(2 * fn.factor_count());
  f.fixed_ = std::move(fn);
  return f;
}

FunctionFamily FunctionFamily::all_permutations(int n) {
  check_n(n);
  FunctionFamily f;
  f.kind_ = FamilyKind::all_permutations;
  f.n_ = n;
  return f;
}

FunctionFamily FunctionFamily::stabilizing(SubsetSpec spec) {
  FunctionFamily f;
  f.kind_ = FamilyKind::stabilizing;
  f.n_ = spec.n();
  f.spec_ = std::move(spec);
  return f;
}

FunctionFamily FunctionFamily::xor_subgroup(int n, std::vector<int> bit_budget) {
  check_n(n);
  if (bit_budget.size() != (std::size_t{2} << n)) {
    throw ValidationError("xor family: bit budget needs one entry per (x, z), i.e. 2N entries");
  }
  for (int k : bit_budget) {
    if (k < 0 || k > n) throw ValidationError("xor family: bit budgets must lie in [0, n]");
  }
  FunctionFamily f;
  f.kind_ = FamilyKind::xor_subgroup;
  f.n_ = n;
  f.bit_budget_ = std::move(bit_budget);
  return f;
}

FunctionFamily FunctionFamily::graph_codes(int n, int d, std::optional<SubsetSpec> spec) {
  check_n(n);
  if (d < 2 || d % 2 != 0) throw ValidationError("graph-code family: d must be even and >= 2");
  if (spec && spec->n() != n) throw ValidationError("graph-code family: subset spec has a different n");
  FunctionFamily f;
  f.kind_ = FamilyKind::graph_codes;
  f.n_ = n;
  f.degree_ = d;
  f.spec_ = std::move(spec);
  return f;
}

bool FunctionFamily::is_single_factor_group() const {
  switch (kind_) {
    case FamilyKind::all_permutations:
    case FamilyKind::stabilizing: return true;
    case FamilyKind::graph_codes: return degree_ == 2;
    default: return false;
  }
}

namespace {

Permutation sample_factor(const FunctionFamily& family, Rng& rng) {
  if (family.spec()) return random_stabilizing_permutation(*family.spec(), rng);
  return random_permutation(family.vertex_count(), rng);
}

}  // namespace

OracleFunction FunctionFamily::sample(Rng& rng, InverseCoupling coupling) const {
  switch (kind_) {
    case FamilyKind::singleton: return *fixed_;
    case FamilyKind::xor_subgroup: {
      const std::size_t size = vertex_count();
      std::vector<std::uint32_t> forward(size);
      std::vector<std::uint32_t> backward(size);
      for (std::size_t x = 0; x < size; ++x) {
        for (int zbit = 0; zbit < 2; ++zbit) {
          const int k = bit_budget_[2 * x + static_cast<std::size_t>(zbit)];
          const auto value = static_cast<std::uint32_t>(rng.below(std::uint64_t{1} << k) << (n_ - k));
          (zbit == 0 ? forward : backward)[x] = value;
        }
      }
      return OracleFunction::from_branches(size, {forward}, {backward});
    }
    default: break;
  }
  std::vector<std::vector<std::uint32_t>> forward;
  std::vector<std::vector<std::uint32_t>> backward;
  for (std::size_t i = 0; i < factor_count(); ++i) {
    Permutation p = sample_factor(*this, rng);
    Permutation q = coupling == InverseCoupling::paired ? invert(p) : sample_factor(*this, rng);
    forward.push_back(std::move(p));
    backward.push_back(std::move(q));
  }
  return OracleFunction::from_branches(vertex_count(), std::move(forward), std::move(backward));
}

double FunctionFamily::group_order() const {
  switch (kind_) {
    case FamilyKind::singleton: return 1.0;
    case FamilyKind::xor_subgroup: {
      const int k = *std::max_element(bit_budget_.begin(), bit_budget_.end());
      return std::ldexp(1.0, k);
    }
    default: break;
  }
  const std::size_t total = vertex_count();
  if (!spec_) return std::exp(log_factorial(total));
  return std::exp(log_factorial(spec_->size()) + log_factorial(total - spec_->size()));
}

void FunctionFamily::for_each_permutation(const std::function<void(const Permutation&)>& visit) const {
  if (kind_ == FamilyKind::singleton || kind_ == FamilyKind::xor_subgroup) {
    throw ContractError("for_each_permutation: family is not a permutation group");
  }
  const std::size_t total = vertex_count();
  if (!spec_) {
    Permutation p = identity_permutation(total);
    do {
      visit(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return;
  }
  const auto inside = spec_->vertices();
  const auto outside = spec_->complement();
  auto inside_image = inside;
  Permutation p(total);
  do {
    for (std::size_t k = 0; k < inside.size(); ++k) p[inside[k]] = inside_image[k];
    auto outside_image = outside;
    do {
      for (std::size_t k = 0; k < outside.size(); ++k) p[outside[k]] = outside_image[k];
      visit(p);
    } while (std::next_permutation(outside_image.begin(), outside_image.end()));
  } while (std::next_permutation(inside_image.begin(), inside_image.end()));
}

bool operator==(const FunctionFamily& a, const FunctionFamily& b) {
  if (a.kind_ != b.kind_ || a.n_ != b.n_ || a.degree_ != b.degree_ || a.spec_ != b.spec_ ||
      a.bit_budget_ != b.bit_budget_) {
    return false;
  }
  return a.kind_ != FamilyKind::singleton || a.fixed_.has_value() == b.fixed_.has_value();
}

// ---------------------------------------------------------------------------
// Layouts and actions

RegisterLayout channel_layout(OracleModel model, const FunctionFamily& family, const ChannelOptions& options) {
  const std::size_t size = family.vertex_count();
  const bool indexed = family.factor_count() > 1;
  if (options.controlled && model != OracleModel::in_place) {
    throw ContractError("a control qubit is only supported for the in-place model");
  }
  std::vector<Register> regs;
  switch (model) {
    case OracleModel::standard: regs.push_back({"c", size}); break;
    case OracleModel::in_place:
      if (options.controlled) regs.push_back({"a", 2});
      break;
    case OracleModel::phase: break;
  }
  regs.push_back({"x", size});
  if (indexed) regs.push_back({"i", index_register_size(family.degree())});
  regs.push_back({"z", 2});
  return RegisterLayout(std::move(regs)).with_workspace(options.workspace_qubits);
}

BasisAction oracle_action(OracleModel model, const OracleFunction& fn, const RegisterLayout& layout) {
  switch (model) {
    case OracleModel::standard: return standard_action(fn, layout);
    case OracleModel::in_place: return inplace_action(fn, layout);
    case OracleModel::phase: return phase_action(fn, layout);
  }
  throw ContractError("unknown oracle model");
}

namespace {

void check_model_family(OracleModel model, const FunctionFamily& family) {
  if (model == OracleModel::in_place && !family.is_permutation_family()) {
    throw ContractError("the in-place model needs a family of permutations; '" + to_string(family.kind()) +
                        "' is not one");
  }
  if (family.kind() == FamilyKind::singleton && model == OracleModel::in_place &&
      !family.fixed()->is_permutation()) {
    throw ContractError("the in-place model needs a permutation");
  }
}

void check_input(const ComplexMatrix& rho, const RegisterLayout& layout) {
  const auto dim = static_cast<Eigen::Index>(layout.dim());
  if (rho.rows() != dim || rho.cols() != dim) {
    std::ostringstream msg;
    msg << "channel input is " << rho.rows() << "x" << rho.cols() << ", layout needs " << dim << "x" << dim;
    throw DimensionError(msg.str());
  }
}

void check_valid_support(const BasisAction& action, const ComplexMatrix& rho) {
  for (std::size_t k = 0; k < action.dim(); ++k) {
    if (!action.invalid[k]) continue;
    const auto kk = static_cast<Eigen::Index>(k);
    if (rho.row(kk).cwiseAbs().maxCoeff() > 0.0 || rho.col(kk).cwiseAbs().maxCoeff() > 0.0) {
      throw ValidationError("channel input has support on index-register values >= d/2");
    }
  }
}

// Entries whose row and column share a key see the same table; other
// entries see independent draws.
std::vector<std::size_t> block_keys(const FunctionFamily& family, const RegisterLayout& layout,
                                    InverseCoupling coupling) {
  constexpr std::size_t kUntouched = std::numeric_limits<std::size_t>::max();
  const auto x_pos = layout.position("x");
  const auto z_pos = layout.position("z");
  const bool has_i = layout.has("i");
  const bool has_a = layout.has("a");
  const std::size_t i_pos = has_i ? layout.position("i") : 0;
  const std::size_t a_pos = has_a ? layout.position("a") : 0;
  std::vector<std::size_t> keys(layout.dim());
  for (std::size_t k = 0; k < layout.dim(); ++k) {
    const auto v = layout.unpack(k);
    if (has_a && v[a_pos] == 0) {
      keys[k] = kUntouched;
    } else if (family.kind() == FamilyKind::xor_subgroup) {
      keys[k] = 2 * v[x_pos] + v[z_pos];
    } else {
      const std::size_t i = has_i ? v[i_pos] : 0;
      keys[k] = coupling == InverseCoupling::paired ? i : 2 * i + v[z_pos];
    }
  }
  return keys;
}

// Representative elements whose per-key marginals are uniform over the
// family: (g, g) or (g, g^-1) for each g in the factor group, or the 2^n
// levels t of an XOR family with coordinate value (t mod 2^k) << (n - k).
void for_each_representative(const FunctionFamily& family, InverseCoupling coupling,
                             const std::function<void(const OracleFunction&)>& visit) {
  const std::size_t size = family.vertex_count();
  if (family.kind() == FamilyKind::xor_subgroup) {
    const int n = family.n();
    for (std::uint64_t t = 0; t < (std::uint64_t{1} << n); ++t) {
      std::vector<std::uint32_t> forward(size);
      std::vector<std::uint32_t> backward(size);
      for (std::size_t x = 0; x < size; ++x) {
        for (int zbit = 0; zbit < 2; ++zbit) {
          const int k = family.bit_budget()[2 * x + static_cast<std::size_t>(zbit)];
          const auto value = static_cast<std::uint32_t>((t & ((std::uint64_t{1} << k) - 1)) << (n - k));
          (zbit == 0 ? forward : backward)[x] = value;
        }
      }
      visit(OracleFunction::from_branches(size, {forward}, {backward}));
    }
    return;
  }
  family.for_each_permutation([&](const Permutation& g) {
    const Permutation second = coupling == InverseCoupling::paired ? invert(g) : g;
    std::vector<std::vector<std::uint32_t>> forward(family.factor_count(), g);
    std::vector<std::vector<std::uint32_t>> backward(family.factor_count(), second);
    visit(OracleFunction::from_branches(size, std::move(forward), std::move(backward)));
  });
}

std::size_t resolve_threads(const ChannelOptions& options) {
  return options.threads == 0 ? default_thread_count() : options.threads;
}

}  // namespace

// ---------------------------------------------------------------------------
// Sampled and enumerated channels

ChannelResult monte_carlo_channel(OracleModel model, const FunctionFamily& family, const ComplexMatrix& rho,
                                  std::size_t samples, std::uint64_t seed, const ChannelOptions& options) {
  if (samples < 1) throw ValidationError("monte_carlo_channel: need at least one sample");
  if (options.chunk_size < 1) throw ValidationError("monte_carlo_channel: chunk size must be positive");
  check_model_family(model, family);
  const RegisterLayout layout = channel_layout(model, family, options);
  check_input(rho, layout);
  const auto dim = static_cast<Eigen::Index>(layout.dim());

  {
    Rng probe(derive_seed(seed, 0));
    check_valid_support(oracle_action(model, family.sample(probe, options.coupling), layout), rho);
  }

  const std::size_t chunks = (samples + options.chunk_size - 1) / options.chunk_size;
  const std::size_t threads = resolve_threads(options);
  ComplexMatrix total = ComplexMatrix::Zero(dim, dim);
  Eigen::MatrixXd total_sq = Eigen::MatrixXd::Zero(dim, dim);

  struct Partial {
    ComplexMatrix sum;
    Eigen::MatrixXd sum_sq;
  };
  // Chunks run in waves of `threads` so only that many partial sums are alive;
  // each wave is then folded into the total in chunk order.
  for (std::size_t wave = 0; wave < chunks; wave += threads) {
    const std::size_t count = std::min(threads, chunks - wave);
    std::vector<Partial> partial(count);
    parallel_for(
        count,
        [&](std::size_t slot) {
          const std::size_t chunk = wave + slot;
          const std::size_t begin = chunk * options.chunk_size;
          const std::size_t end = std::min(samples, begin + options.chunk_size);
          ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
          Eigen::MatrixXd sum_sq = Eigen::MatrixXd::Zero(dim, dim);
          for (std::size_t j = begin; j < end; ++j) {
            Rng rng(derive_seed(seed, j));
            const OracleFunction fn = family.sample(rng, options.coupling);
            const ComplexMatrix out = conjugate(oracle_action(model, fn, layout), rho);
            sum += out;
            sum_sq += out.cwiseAbs2();
          }
          partial[slot] = {std::move(sum), std::move(sum_sq)};
        },
        threads);
    for (auto& p : partial) {
      total += p.sum;
      total_sq += p.sum_sq;
    }
  }

  const auto m = static_cast<double>(samples);
  ChannelResult result;
  result.output = total / m;
  result.method = ChannelMethod::monte_carlo;
  result.samples = samples;
  if (samples > 1) {
    const Eigen::MatrixXd variance =
        ((total_sq - m * result.output.cwiseAbs2()) / (m - 1.0)).cwiseMax(0.0);
    result.standard_error = (variance / m).cwiseSqrt();
  } else {
    result.standard_error = Eigen::MatrixXd::Zero(dim, dim);
  }
  result.max_standard_error = result.standard_error.maxCoeff();
  return result;
}

ChannelResult exhaustive_channel(OracleModel model, const FunctionFamily& family, const ComplexMatrix& rho,
                                 const ChannelOptions& options) {
  check_model_family(model, family);
  const RegisterLayout layout = channel_layout(model, family, options);
  check_input(rho, layout);
  const auto dim = static_cast<Eigen::Index>(layout.dim());

  ChannelResult result;
  result.method = ChannelMethod::exhaustive;

  if (family.kind() == FamilyKind::singleton) {
    const BasisAction action = oracle_action(model, *family.fixed(), layout);
    check_valid_support(action, rho);
    result.output = conjugate(action, rho);
    result.samples = 1;
    return result;
  }

  const double enumerated =
      family.kind() == FamilyKind::xor_subgroup ? std::ldexp(1.0, family.n()) : family.group_order();
  if (enumerated > options.cap) {
    std::ostringstream msg;
    msg << "exhaustive_channel: the family needs " << enumerated << " enumerated elements, above the cap of "
        << options.cap << "; use monte_carlo_channel or a smaller n";
    throw CapError(msg.str());
  }

  const auto keys = block_keys(family, layout, options.coupling);
  ComplexMatrix same = ComplexMatrix::Zero(dim, dim);
  ComplexMatrix mean_u = ComplexMatrix::Zero(dim, dim);
  std::size_t count = 0;
  bool checked = false;
  for_each_representative(family, options.coupling, [&](const OracleFunction& fn) {
    const BasisAction action = oracle_action(model, fn, layout);
    if (!checked) {
      check_valid_support(action, rho);
      checked = true;
    }
    same += conjugate(action, rho);
    for (std::size_t k = 0; k < action.dim(); ++k) {
      mean_u(static_cast<Eigen::Index>(action.target[k]), static_cast<Eigen::Index>(k)) +=
          action.phase.empty() ? Complex(1.0) : action.phase[k];
    }
    ++count;
  });
  const auto c = static_cast<double>(count);
  same /= c;
  mean_u /= c;
  const ComplexMatrix cross = mean_u * rho * mean_u.adjoint();

  result.output.resize(dim, dim);
  for (Eigen::Index s = 0; s < dim; ++s) {
    for (Eigen::Index r = 0; r < dim; ++r) {
      result.output(r, s) =
          keys[static_cast<std::size_t>(r)] == keys[static_cast<std::size_t>(s)] ? same(r, s) : cross(r, s);
    }
  }
  result.samples = count;
  return result;
}

// ---------------------------------------------------------------------------
// Closed forms

namespace {

void require_closed_form(const FunctionFamily& family, const ChannelOptions& options) {
  if (!family.is_single_factor_group()) {
    throw ContractError("closed forms exist only for T_empty and T_V (single-factor permutation groups)");
  }
  if (options.coupling != InverseCoupling::independent) {
    throw ContractError("closed forms assume independently drawn inverse branches");
  }
}

std::shared_ptr<const Basis> family_basis(const FunctionFamily& family) {
  return family.spec() ? build_yes_basis(*family.spec()) : build_no_basis(family.n());
}

// Applies `map` to each (w1, w2) block of a matrix on (..., w) where the
// leading part has dimension `inner`.
template <typename Map>
ComplexMatrix blockwise(const ComplexMatrix& rho, Eigen::Index inner, Eigen::Index outer, Map&& map) {
  ComplexMatrix out(rho.rows(), rho.cols());
  if (outer == 1) {
    out = map(rho);
    return out;
  }
  for (Eigen::Index w1 = 0; w1 < outer; ++w1) {
    for (Eigen::Index w2 = 0; w2 < outer; ++w2) {
      const ComplexMatrix block = rho(Eigen::seqN(w1, inner, outer), Eigen::seqN(w2, inner, outer));
      out(Eigen::seqN(w1, inner, outer), Eigen::seqN(w2, inner, outer)) = map(block);
    }
  }
  return out;
}

ComplexMatrix inplace_projection(const FunctionFamily& family, const ComplexMatrix& rho, int workspace_qubits) {
  const auto basis = family_basis(family);
  const auto inner = static_cast<Eigen::Index>(2 * family.vertex_count());
  const auto outer = Eigen::Index{1} << workspace_qubits;
  return blockwise(rho, inner, outer, [&](const ComplexMatrix& block) { return project_onto(*basis, block); });
}

}  // namespace

ChannelResult inplace_channel_exact(const FunctionFamily& family, const ComplexMatrix& rho,
                                    const ChannelOptions& options) {
  if (options.controlled) return controlled_inplace_channel_exact(family, rho, options);
  require_closed_form(family, options);
  check_input(rho, RegisterLayout::in_place_plain(family.vertex_count()).with_workspace(options.workspace_qubits));
  ChannelResult result;
  result.output = inplace_projection(family, rho, options.workspace_qubits);
  return result;
}

ComplexMatrix mean_inplace_unitary(const FunctionFamily& family) {
  if (!family.is_single_factor_group()) throw ContractError("mean_inplace_unitary: needs T_empty or T_V");
  const auto size = static_cast<Eigen::Index>(family.vertex_count());
  ComplexMatrix on_x;
  if (family.spec()) {
    const ComplexVector v = StateVector::subset(family.vertex_count(), family.spec()->vertices()).amplitudes();
    const ComplexVector w = StateVector::subset(family.vertex_count(), family.spec()->complement()).amplitudes();
    on_x = v * v.adjoint() + w * w.adjoint();
  } else {
    on_x = ComplexMatrix::Constant(size, size, 1.0 / static_cast<double>(size));
  }
  ComplexMatrix out = ComplexMatrix::Zero(2 * size, 2 * size);
  out(Eigen::seqN(0, size, 2), Eigen::seqN(0, size, 2)) = on_x;
  out(Eigen::seqN(1, size, 2), Eigen::seqN(1, size, 2)) = on_x;
  return out;
}

ChannelResult controlled_inplace_channel_exact(const FunctionFamily& family, const ComplexMatrix& rho,
                                               const ChannelOptions& options) {
  require_closed_form(family, options);
  const auto layout = RegisterLayout({{"a", 2}, {"x", family.vertex_count()}, {"z", 2}})
                          .with_workspace(options.workspace_qubits);
  check_input(rho, layout);
  const auto half = static_cast<Eigen::Index>(layout.dim() / 2);
  const auto outer = Eigen::Index{1} << options.workspace_qubits;
  const auto inner = half / outer;
  const ComplexMatrix mean = mean_inplace_unitary(family);
  ComplexMatrix mean_w = ComplexMatrix::Zero(half, half);
  for (Eigen::Index w = 0; w < outer; ++w) mean_w(Eigen::seqN(w, inner, outer), Eigen::seqN(w, inner, outer)) = mean;

  ChannelResult result;
  result.output.resize(rho.rows(), rho.cols());
  result.output.topLeftCorner(half, half) = rho.topLeftCorner(half, half);
  result.output.bottomRightCorner(half, half) =
      inplace_projection(family, rho.bottomRightCorner(half, half), options.workspace_qubits);
  result.output.bottomLeftCorner(half, half) = mean_w * rho.bottomLeftCorner(half, half);
  result.output.topRightCorner(half, half) = rho.topRightCorner(half, half) * mean_w.adjoint();
  return result;
}

namespace {

// S(W) = sum_{a in W} omega_N^a.
Complex exponential_sum(const std::vector<std::uint32_t>& members, std::size_t size) {
  Complex s(0.0, 0.0);
  for (auto a : members) s += std::polar(1.0, 2.0 * std::numbers::pi * a / static_cast<double>(size));
  return s;
}

struct PhaseTable {
  std::size_t size;
  const SubsetSpec* spec;
  Complex sum_inside;
  Complex sum_outside;
  double inside;
  double outside;

  Complex coefficient(std::uint32_t x1, ZBit z1, std::uint32_t x2, ZBit z2) const {
    if (x1 == x2 && z1 == z2) return 1.0;
    const auto n = static_cast<double>(size);
    if (!spec) return z1 == z2 ? Complex(-1.0 / (n - 1.0)) : Complex(0.0);
    const bool in1 = spec->contains(x1);
    const bool in2 = spec->contains(x2);
    const Complex s1 = in1 ? sum_inside : sum_outside;
    const Complex s2 = in2 ? sum_inside : sum_outside;
    const double m1 = in1 ? inside : outside;
    const double m2 = in2 ? inside : outside;
    if (z1 != z2) return s1 * std::conj(s2) / (m1 * m2);
    const double delta = in1 == in2 ? 1.0 : 0.0;
    return (s1 * std::conj(s2) - delta * m1) / (m1 * (m2 - delta));
  }
};

PhaseTable make_phase_table(int n, const std::optional<SubsetSpec>& spec) {
  PhaseTable t{std::size_t{1} << n, spec ? &*spec : nullptr, 0.0, 0.0, 0.0, 0.0};
  if (spec) {
    t.sum_inside = exponential_sum(spec->vertices(), t.size);
    t.sum_outside = exponential_sum(spec->complement(), t.size);
    t.inside = static_cast<double>(spec->size());
    t.outside = static_cast<double>(t.size - spec->size());
  }
  return t;
}

}  // namespace

Complex phase_coefficient(int n, const std::optional<SubsetSpec>& spec, std::uint32_t x1, ZBit z1,
                          std::uint32_t x2, ZBit z2) {
  check_n(n);
  if (spec && spec->n() != n) throw ValidationError("phase_coefficient: spec has a different n");
  const std::size_t size = std::size_t{1} << n;
  if (x1 >= size || x2 >= size) throw ValidationError("phase_coefficient: vertex out of range");
  return make_phase_table(n, spec).coefficient(x1, z1, x2, z2);
}

ComplexMatrix phase_coefficient_matrix(int n, const std::optional<SubsetSpec>& spec) {
  check_n(n);
  if (spec && spec->n() != n) throw ValidationError("phase_coefficient_matrix: spec has a different n");
  const PhaseTable table = make_phase_table(n, spec);
  const auto inner = static_cast<Eigen::Index>(std::size_t{2} << n);
  ComplexMatrix coeff(inner, inner);
  for (Eigen::Index s = 0; s < inner; ++s) {
    for (Eigen::Index r = 0; r < inner; ++r) {
      coeff(r, s) = table.coefficient(static_cast<std::uint32_t>(r / 2), static_cast<ZBit>(r % 2),
                                      static_cast<std::uint32_t>(s / 2), static_cast<ZBit>(s % 2));
    }
  }
  return coeff;
}

ChannelResult phase_channel_exact(const FunctionFamily& family, const ComplexMatrix& rho,
                                  const ChannelOptions& options) {
  require_closed_form(family, options);
  check_input(rho, RegisterLayout::phase(family.vertex_count()).with_workspace(options.workspace_qubits));
  const ComplexMatrix coeff = phase_coefficient_matrix(family.n(), family.spec());
  const auto inner = coeff.rows();
  const auto outer = Eigen::Index{1} << options.workspace_qubits;
  ChannelResult result;
  result.output = blockwise(rho, inner, outer, [&](const ComplexMatrix& block) {
    return ComplexMatrix(block.cwiseProduct(coeff));
  });
  return result;
}

}  // namespace oracle_lab
