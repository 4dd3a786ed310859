#include "oracle_lab/symmetry.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <sstream>

#include "oracle_lab/channels.hpp"
#include "oracle_lab/error.hpp"

namespace oracle_lab {

std::string BasisLabel::name() const {
  static const char* kNames[] = {"A", "B", "C1", "C2", "C3", "C4"};
  const auto sign = [](ZBit z) { return z == ZBit::plus ? "+1" : "-1"; };
  std::string out = kNames[static_cast<int>(kind)];
  if (kind == BasisKind::B || kind == BasisKind::C4) return out + "[" + sign(z1) + "]";
  return out + "[" + sign(z1) + "," + sign(z2) + "]";
}

BasisLabel parse_basis_label(const std::string& text) {
  static const std::pair<const char*, BasisKind> kKinds[] = {{"A", BasisKind::A},   {"B", BasisKind::B},
                                                             {"C1", BasisKind::C1}, {"C2", BasisKind::C2},
                                                             {"C3", BasisKind::C3}, {"C4", BasisKind::C4}};
  const auto open = text.find('[');
  if (open == std::string::npos || text.back() != ']') throw ValidationError("bad basis label '" + text + "'");
  const std::string head = text.substr(0, open);
  const std::string body = text.substr(open + 1, text.size() - open - 2);
  const auto sign = [&](const std::string& s) {
    if (s == "+1") return ZBit::plus;
    if (s == "-1") return ZBit::minus;
    throw ValidationError("bad basis label '" + text + "'");
  };
  for (const auto& [name, kind] : kKinds) {
    if (head != name) continue;
    BasisLabel label{kind, ZBit::plus, ZBit::plus};
    if (kind == BasisKind::B || kind == BasisKind::C4) {
      label.z1 = label.z2 = sign(body);
    } else {
      const auto comma = body.find(',');
      if (comma == std::string::npos) throw ValidationError("bad basis label '" + text + "'");
      label.z1 = sign(body.substr(0, comma));
      label.z2 = sign(body.substr(comma + 1));
    }
    if (label.name() != text) throw ValidationError("bad basis label '" + text + "'");
    return label;
  }
  throw ValidationError("bad basis label '" + text + "'");
}

BasisCheck check_basis(const Basis& basis, int n, const std::optional<SubsetSpec>& spec,
                       std::size_t conjugations, std::uint64_t seed) {
  BasisCheck check;
  check.elements = basis.size();
  check.conjugations = conjugations;
  check.min_frobenius = std::numeric_limits<double>::infinity();
  check.min_nuclear = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < basis.size(); ++a) {
    check.min_frobenius = std::min(check.min_frobenius, basis[a].frobenius_norm);
    const double nuc = nuclear_norm(basis[a].matrix);
    check.min_nuclear = std::min(check.min_nuclear, nuc);
    check.max_nuclear = std::max(check.max_nuclear, nuc);
    for (std::size_t b = a + 1; b < basis.size(); ++b) {
      const double overlap = std::abs(frobenius_inner(basis[a].matrix, basis[b].matrix)) /
                             (basis[a].frobenius_norm * basis[b].frobenius_norm);
      check.max_orthogonality_defect = std::max(check.max_orthogonality_defect, overlap);
    }
  }
  const FunctionFamily family = spec ? FunctionFamily::stabilizing(*spec) : FunctionFamily::all_permutations(n);
  const RegisterLayout layout = RegisterLayout::in_place_plain(family.vertex_count());
  for (std::size_t j = 0; j < conjugations; ++j) {
    Rng rng(derive_seed(seed, j));
    const BasisAction action = inplace_action(family.sample(rng, InverseCoupling::independent), layout);
    for (const auto& element : basis) {
      const double defect = frobenius_norm(conjugate(action, element.matrix) - element.matrix) / element.frobenius_norm;
      check.max_invariance_defect = std::max(check.max_invariance_defect, defect);
    }
  }
  return check;
}

namespace {

// m (x) |z1><z2| on the (x, z) layout.
ComplexMatrix lift(const ComplexMatrix& m, ZBit z1, ZBit z2) {
  const Eigen::Index size = m.rows();
  ComplexMatrix out = ComplexMatrix::Zero(2 * size, 2 * size);
  out(Eigen::seqN(static_cast<Eigen::Index>(z1), size, 2), Eigen::seqN(static_cast<Eigen::Index>(z2), size, 2)) = m;
  return out;
}

ComplexMatrix plus_projector(std::size_t size) {
  const auto s = static_cast<Eigen::Index>(size);
  return ComplexMatrix::Constant(s, s, 1.0 / static_cast<double>(size));
}

ComplexMatrix no_seed(std::size_t size, const BasisLabel& label) {
  const auto s = static_cast<Eigen::Index>(size);
  const ComplexMatrix plus = plus_projector(size);
  switch (label.kind) {
    case BasisKind::A: return lift(plus, label.z1, label.z2);
    case BasisKind::B:
      return lift((ComplexMatrix::Identity(s, s) - plus) / static_cast<double>(size), label.z1, label.z1);
    default: throw ContractError("no_seed: not a NO-basis label");
  }
}

const ZBit kZ[2] = {ZBit::plus, ZBit::minus};

std::vector<BasisLabel> sector_labels(ZBit z1, ZBit z2, bool yes) {
  std::vector<BasisLabel> labels{{BasisKind::A, z1, z2}};
  if (z1 == z2) labels.push_back({BasisKind::B, z1, z1});
  if (!yes) return labels;
  labels.push_back({BasisKind::C1, z1, z2});
  labels.push_back({BasisKind::C2, z1, z2});
  labels.push_back({BasisKind::C3, z1, z2});
  if (z1 == z2) labels.push_back({BasisKind::C4, z1, z1});
  return labels;
}

// Gram-Schmidt over seeds of one sector; residuals below 1e-9 of the seed
// norm are dropped.
void orthogonalize_into(Basis& out, std::vector<std::pair<BasisLabel, ComplexMatrix>> seeds) {
  const std::size_t first = out.size();
  for (auto& [label, m] : seeds) {
    const double seed_norm = frobenius_norm(m);
    for (std::size_t k = first; k < out.size(); ++k) {
      const auto& e = out[k];
      m -= (frobenius_inner(e.matrix, m) / (e.frobenius_norm * e.frobenius_norm)) * e.matrix;
    }
    const double norm = frobenius_norm(m);
    if (norm <= 1e-9 * seed_norm) continue;
    out.push_back({label, std::move(m), norm});
  }
}

Basis make_basis(int n, const SubsetSpec* spec) {
  const std::size_t size = std::size_t{1} << n;
  Basis basis;
  // NO part first so the YES basis extends it element for element.
  for (ZBit z1 : kZ) {
    for (ZBit z2 : kZ) {
      std::vector<std::pair<BasisLabel, ComplexMatrix>> seeds;
      for (const auto& label : sector_labels(z1, z2, false)) seeds.emplace_back(label, no_seed(size, label));
      orthogonalize_into(basis, std::move(seeds));
    }
  }
  if (!spec) return basis;
  // C elements: orthogonalize against the whole sector, then keep only them.
  for (ZBit z1 : kZ) {
    for (ZBit z2 : kZ) {
      Basis sector;
      std::vector<std::pair<BasisLabel, ComplexMatrix>> seeds;
      for (const auto& label : sector_labels(z1, z2, true)) {
        seeds.emplace_back(label, label.in_difference_space() ? basis_seed(*spec, label) : no_seed(size, label));
      }
      orthogonalize_into(sector, std::move(seeds));
      for (auto& e : sector) {
        if (e.label.in_difference_space()) basis.push_back(std::move(e));
      }
    }
  }
  return basis;
}

struct BasisCache {
  std::shared_mutex mutex;
  std::map<std::pair<int, std::vector<std::uint32_t>>, std::shared_ptr<const Basis>> entries;
  std::map<int, std::shared_ptr<const Basis>> no_entries;
};

BasisCache& cache() {
  static BasisCache instance;
  return instance;
}

}  // namespace

ComplexMatrix basis_seed(const SubsetSpec& spec, const BasisLabel& label) {
  const std::size_t size = spec.vertex_count();
  const auto s = static_cast<Eigen::Index>(size);
  const double total = static_cast<double>(size);
  const double inside = static_cast<double>(spec.size());
  const double outside = total - inside;
  if (label.kind == BasisKind::A || label.kind == BasisKind::B) return no_seed(size, label);
  if (outside == 0.0) throw ValidationError("basis_seed: V must be a proper subset");

  const ComplexVector v = StateVector::subset(size, spec.vertices()).amplitudes();
  const ComplexVector w = StateVector::subset(size, spec.complement()).amplitudes();
  const ComplexMatrix identity = ComplexMatrix::Identity(s, s);
  const ComplexMatrix plus = plus_projector(size);
  const double delta = label.z1 == label.z2 ? 1.0 : 0.0;
  ComplexMatrix m;
  switch (label.kind) {
    case BasisKind::C1: m = v * w.adjoint() - w * v.adjoint(); break;
    case BasisKind::C2:
      m = v * w.adjoint() + w * v.adjoint() -
          (2.0 / (total * std::sqrt(inside * outside))) * (plus - delta / total * identity);
      break;
    case BasisKind::C3:
      m = v * v.adjoint() - (inside / outside) * (w * w.adjoint()) -
          (delta * (1.0 - inside / outside) / total) * identity;
      break;
    case BasisKind::C4: {
      ComplexMatrix inside_id = ComplexMatrix::Zero(s, s);
      ComplexMatrix outside_id = ComplexMatrix::Zero(s, s);
      for (auto x : spec.vertices()) inside_id(x, x) = 1.0;
      for (auto x : spec.complement()) outside_id(x, x) = 1.0;
      m = (inside_id - v * v.adjoint()) / inside - (outside_id - w * w.adjoint()) / outside;
      if (label.z1 != label.z2) throw ContractError("basis_seed: C4 lives on diagonal z sectors only");
      break;
    }
    default: break;
  }
  return lift(m, label.z1, label.z2);
}

std::shared_ptr<const Basis> build_no_basis(int n) {
  if (n < 1 || n > 12) throw ValidationError("build_no_basis: n must lie in [1, 12]");
  auto& c = cache();
  {
    std::shared_lock lock(c.mutex);
    if (auto it = c.no_entries.find(n); it != c.no_entries.end()) return it->second;
  }
  auto basis = std::make_shared<const Basis>(make_basis(n, nullptr));
  std::unique_lock lock(c.mutex);
  return c.no_entries.emplace(n, std::move(basis)).first->second;
}

std::shared_ptr<const Basis> build_yes_basis(const SubsetSpec& spec) {
  if (spec.n() > 12) throw ValidationError("build_yes_basis: n must be at most 12");
  auto& c = cache();
  auto key = std::make_pair(spec.n(), spec.vertices());
  {
    std::shared_lock lock(c.mutex);
    if (auto it = c.entries.find(key); it != c.entries.end()) return it->second;
  }
  auto basis = std::make_shared<const Basis>(make_basis(spec.n(), &spec));
  std::unique_lock lock(c.mutex);
  return c.entries.emplace(std::move(key), std::move(basis)).first->second;
}

std::vector<Complex> basis_weights(const Basis& basis, const ComplexMatrix& x) {
  std::vector<Complex> weights;
  weights.reserve(basis.size());
  for (const auto& e : basis) {
    weights.push_back(frobenius_inner(e.matrix, x) / (e.frobenius_norm * e.frobenius_norm));
  }
  return weights;
}

ComplexMatrix project_onto(const Basis& basis, const ComplexMatrix& x) {
  if (basis.empty()) throw ContractError("project_onto: empty basis");
  if (x.rows() != basis.front().matrix.rows() || x.cols() != basis.front().matrix.cols()) {
    throw DimensionError("project_onto: matrix does not match the basis dimension");
  }
  const auto weights = basis_weights(basis, x);
  ComplexMatrix out = ComplexMatrix::Zero(x.rows(), x.cols());
  for (std::size_t k = 0; k < basis.size(); ++k) out += weights[k] * basis[k].matrix;
  return out;
}

ComplexMatrix d_V_rho(const ComplexMatrix& rho, const SubsetSpec& spec, int workspace_qubits) {
  ChannelOptions options;
  options.workspace_qubits = workspace_qubits;
  const auto yes = inplace_channel_exact(FunctionFamily::stabilizing(spec), rho, options);
  const auto no = inplace_channel_exact(FunctionFamily::all_permutations(spec.n()), rho, options);
  return yes.output - no.output;
}

const WeightEntry& WeightVector::at(const std::string& label_name) const {
  for (const auto& e : entries) {
    if (e.label.name() == label_name) return e;
  }
  throw ValidationError("WeightVector: no label '" + label_name + "'");
}

WeightVector decompose_difference(const ComplexMatrix& rho, const SubsetSpec& spec) {
  const auto basis = build_yes_basis(spec);
  const ComplexMatrix d = d_V_rho(rho, spec);
  WeightVector out;
  ComplexMatrix rebuilt = ComplexMatrix::Zero(d.rows(), d.cols());
  for (const auto& e : *basis) {
    if (!e.label.in_difference_space()) continue;
    const Complex c = frobenius_inner(e.matrix, rho) / (e.frobenius_norm * e.frobenius_norm);
    const double mass = std::abs(c) * nuclear_norm(e.matrix);
    out.entries.push_back({e.label, c, std::abs(c), mass});
    out.total_magnitude += std::abs(c);
    out.total_trace_norm_mass += mass;
    rebuilt += c * e.matrix;
  }
  out.residual = frobenius_norm(rebuilt - d);
  if (out.residual > 1e-6) {
    std::ostringstream msg;
    msg << "decompose_difference: reconstruction residual " << out.residual << " exceeds 1e-6";
    throw ConsistencyError(msg.str());
  }
  return out;
}

double DistinguisherReport::max_diagnostic() const {
  return std::max({std::abs(overlap[0]), std::abs(overlap[1]), std::abs(trace_diagnostic[0]),
                   std::abs(trace_diagnostic[1])});
}

DistinguisherReport distinguisher_diagnostics(const ComplexMatrix& rho, const SubsetSpec& spec,
                                              int workspace_qubits) {
  const std::size_t size = spec.vertex_count();
  const RegisterLayout layout = RegisterLayout::in_place_plain(size).with_workspace(workspace_qubits);
  if (rho.rows() != static_cast<Eigen::Index>(layout.dim()) || rho.cols() != rho.rows()) {
    throw DimensionError("distinguisher_diagnostics: rho does not match the (x, z[, w]) layout");
  }
  const auto outer = Eigen::Index{1} << workspace_qubits;
  const ComplexVector v = StateVector::subset(size, spec.vertices()).amplitudes();
  const double ratio = static_cast<double>(spec.size()) / static_cast<double>(size);

  DistinguisherReport report{};
  for (int zb = 0; zb < 2; ++zb) {
    double overlap = 0.0;
    double trace = 0.0;
    for (Eigen::Index w = 0; w < outer; ++w) {
      // Rows (x, z = zb, w).
      const auto idx = [&](std::size_t x) { return static_cast<Eigen::Index>((2 * x + zb) * outer) + w; };
      Complex acc(0.0, 0.0);
      for (std::size_t x = 0; x < size; ++x) {
        if (v[static_cast<Eigen::Index>(x)] == Complex(0.0)) continue;
        for (std::size_t y = 0; y < size; ++y) {
          if (v[static_cast<Eigen::Index>(y)] == Complex(0.0)) continue;
          acc += std::conj(v[static_cast<Eigen::Index>(x)]) * rho(idx(x), idx(y)) * v[static_cast<Eigen::Index>(y)];
        }
      }
      overlap += acc.real();
      for (std::size_t x = 0; x < size; ++x) {
        const double diag = rho(idx(x), idx(x)).real();
        trace += ((spec.contains(static_cast<std::uint32_t>(x)) ? 1.0 : 0.0) - ratio) * diag;
      }
    }
    report.overlap[zb] = overlap;
    report.trace_diagnostic[zb] = trace;
  }
  report.difference_norm = nuclear_norm(d_V_rho(rho, spec, workspace_qubits));
  return report;
}

ControlBlockReport control_block_residual(const ComplexMatrix& rho, const SubsetSpec& spec) {
  const std::size_t size = spec.vertex_count();
  const auto half = static_cast<Eigen::Index>(2 * size);
  if (rho.rows() != 2 * half || rho.cols() != 2 * half) {
    throw DimensionError("control_block_residual: rho must live on (a, x, z)");
  }
  ChannelOptions options;
  options.controlled = true;
  const ComplexMatrix yes =
      controlled_inplace_channel_exact(FunctionFamily::stabilizing(spec), rho, options).output;
  const ComplexMatrix no =
      controlled_inplace_channel_exact(FunctionFamily::all_permutations(spec.n()), rho, options).output;
  // Rows a = 1, columns a = 0.
  const ComplexMatrix block = (yes - no).bottomLeftCorner(half, half);

  const auto residual_against = [&](const ComplexVector& u) {
    ComplexMatrix p = ComplexMatrix::Zero(half, half);
    const ComplexMatrix pu = u * u.adjoint();
    p(Eigen::seqN(0, static_cast<Eigen::Index>(size), 2), Eigen::seqN(0, static_cast<Eigen::Index>(size), 2)) = pu;
    p(Eigen::seqN(1, static_cast<Eigen::Index>(size), 2), Eigen::seqN(1, static_cast<Eigen::Index>(size), 2)) = pu;
    return frobenius_norm(block - p * block);
  };

  ControlBlockReport report{};
  report.block_norm = frobenius_norm(block);
  report.bound = std::sqrt(static_cast<double>(spec.size()) / static_cast<double>(size));
  report.rank = report.block_norm > 0.0 ? numerical_rank(block) : 0;
  if (report.block_norm > 0.0) {
    report.residual_v_prime = residual_against(lambda2_witness(spec).amplitudes()) / report.block_norm;
    report.residual_v = residual_against(StateVector::subset(size, spec.vertices()).amplitudes()) / report.block_norm;
  }
  return report;
}

}  // namespace oracle_lab
