#include "oracle_lab/verifiers.hpp"

#include <cmath>
#include <sstream>

#include "oracle_lab/error.hpp"
#include "oracle_lab/oracles.hpp"

namespace oracle_lab {

namespace {

void require_vertex_state(const GraphCode& code, const StateVector& psi) {
  if (psi.dim() != code.vertex_count()) {
    std::ostringstream msg;
    msg << "state has dimension " << psi.dim() << " but the code has " << code.vertex_count() << " vertices";
    throw LayoutError(msg.str());
  }
}

// <psi|L|psi>/(2d) with A applied entry by entry from the factor tables.
double laplacian_prediction(const GraphCode& code, const StateVector& psi) {
  const auto& a = psi.amplitudes();
  double adjacency = 0.0;
  for (std::size_t i = 0; i < code.factor_count(); ++i) {
    for (std::uint32_t x = 0; x < code.vertex_count(); ++x) {
      // A[f(x), x] + A[x, f(x)].
      adjacency += 2.0 * (std::conj(a[code.forward(x, i)]) * a[x]).real();
    }
  }
  const double d = code.degree();
  return (d * a.squaredNorm() - adjacency) / (2.0 * d);
}

double plus_overlap(const StateVector& psi) {
  const double n = static_cast<double>(psi.dim());
  return std::norm(psi.amplitudes().sum()) / n;
}

double sector_weight(const StateVector& psi, const std::vector<std::uint32_t>& members) {
  Complex s(0.0, 0.0);
  for (auto x : members) s += psi[x];
  return std::norm(s) / static_cast<double>(members.size());
}

double failure_on(const ComplexVector& v, const RegisterLayout& layout, const std::string& reg, std::size_t bad) {
  const std::size_t pos = layout.position(reg);
  double p = 0.0;
  for (std::size_t k = 0; k < layout.dim(); ++k) {
    if (layout.digit(k, pos) == bad) p += std::norm(v[static_cast<Eigen::Index>(k)]);
  }
  return p;
}

}  // namespace

VerdictReport spectral_test_standard(const GraphCode& code, const StateVector& psi) {
  require_vertex_state(code, psi);
  const std::size_t size = code.vertex_count();
  const RegisterLayout layout = RegisterLayout::standard(size, code.degree());
  const OracleFunction fn = OracleFunction::from_code(code);
  const BasisAction query = standard_action(fn, layout);
  const double s = 1.0 / std::sqrt(2.0);
  double fail = 0.0;
  for (std::size_t i = 0; i < code.factor_count(); ++i) {
    ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(layout.dim()));
    for (std::size_t x = 0; x < size; ++x) {
      for (std::size_t zb = 0; zb < 2; ++zb) v[static_cast<Eigen::Index>(layout.pack({0, x, i, zb}))] = s * psi[x];
    }
    v = apply_action(query, v);
    v = apply_controlled_swap(v, layout, "z", static_cast<std::size_t>(ZBit::minus), "c", "x");
    v = apply_hadamard(v, layout, "z");
    fail += failure_on(v, layout, "z", static_cast<std::size_t>(ZBit::minus));
  }
  VerdictReport report;
  report.spectral_term = fail / static_cast<double>(code.factor_count());
  report.fail_probability = report.spectral_term;
  report.predicted = laplacian_prediction(code, psi);
  return report;
}

VerdictReport spectral_test_inplace(const GraphCode& code, const StateVector& psi) {
  require_vertex_state(code, psi);
  const std::size_t size = code.vertex_count();
  const RegisterLayout layout = RegisterLayout::in_place(size, code.degree(), true);
  const OracleFunction fn = OracleFunction::from_code(code);
  const BasisAction query = inplace_action(fn, layout);
  const double s = 1.0 / std::sqrt(2.0);
  double fail = 0.0;
  for (std::size_t i = 0; i < code.factor_count(); ++i) {
    ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(layout.dim()));
    for (std::size_t x = 0; x < size; ++x) {
      for (std::size_t a = 0; a < 2; ++a) {
        v[static_cast<Eigen::Index>(layout.pack({a, x, i, static_cast<std::size_t>(ZBit::plus)}))] = s * psi[x];
      }
    }
    v = apply_action(query, v);
    v = apply_hadamard(v, layout, "a");
    fail += failure_on(v, layout, "a", 1);
  }
  VerdictReport report;
  report.spectral_term = fail / static_cast<double>(code.factor_count());
  report.fail_probability = report.spectral_term;
  report.predicted = laplacian_prediction(code, psi);
  return report;
}

double spectral_fail_direct(const GraphCode& code, const StateVector& psi) {
  require_vertex_state(code, psi);
  double total = 0.0;
  for (std::size_t i = 0; i < code.factor_count(); ++i) {
    for (std::uint32_t x = 0; x < code.vertex_count(); ++x) total += std::norm(psi[x] - psi[code.forward(x, i)]);
  }
  return total / (4.0 * static_cast<double>(code.factor_count()));
}

VerdictReport qma_verify(const GraphCode& code, const StateVector& witness, OracleModel model) {
  VerdictReport spectral;
  switch (model) {
    case OracleModel::standard: spectral = spectral_test_standard(code, witness); break;
    case OracleModel::in_place: spectral = spectral_test_inplace(code, witness); break;
    case OracleModel::phase: throw ContractError("the spectral test is defined for standard and in-place oracles");
  }
  VerdictReport report;
  report.overlap_term = plus_overlap(witness);
  report.spectral_term = spectral.spectral_term;
  report.fail_probability = 0.5 * report.overlap_term + 0.5 * report.spectral_term;
  report.predicted = 0.5 * report.overlap_term + 0.5 * *spectral.predicted;
  return report;
}

double expected_spectral_fail(const FunctionFamily& family, const StateVector& psi) {
  if (!family.is_permutation_family() || family.kind() == FamilyKind::singleton) {
    throw ContractError("expected_spectral_fail: needs a graph-code family");
  }
  if (psi.dim() != family.vertex_count()) throw LayoutError("expected_spectral_fail: state dimension mismatch");
  // E[(P + P^T)/2] is J/N for uniform permutations and |V><V| + |W><W| on T_V.
  if (!family.spec()) return 0.5 * (psi.amplitudes().squaredNorm() - plus_overlap(psi));
  const auto& spec = *family.spec();
  return 0.5 * (psi.amplitudes().squaredNorm() - sector_weight(psi, spec.vertices()) -
                sector_weight(psi, spec.complement()));
}

GraphCode sample_code(const FunctionFamily& family, Rng& rng) {
  if (!family.is_permutation_family() || family.kind() == FamilyKind::singleton) {
    throw ContractError("sample_code: needs a graph-code family");
  }
  std::vector<Permutation> perms;
  for (std::size_t i = 0; i < family.factor_count(); ++i) {
    perms.push_back(family.spec() ? random_stabilizing_permutation(*family.spec(), rng)
                                  : random_permutation(family.vertex_count(), rng));
  }
  return GraphCode::build(family.n(), std::move(perms));
}

SpectralAverage spectral_average(const FunctionFamily& family, const StateVector& psi, std::size_t samples,
                                 std::uint64_t seed) {
  if (samples < 1) throw ValidationError("spectral_average: need at least one sample");
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t j = 0; j < samples; ++j) {
    Rng rng(derive_seed(seed, j));
    const double value = spectral_fail_direct(sample_code(family, rng), psi);
    sum += value;
    sum_sq += value * value;
  }
  const auto m = static_cast<double>(samples);
  SpectralAverage out;
  out.mean = sum / m;
  out.samples = samples;
  if (samples > 1) out.standard_error = std::sqrt(std::max(0.0, (sum_sq - m * out.mean * out.mean) / (m - 1.0)) / m);
  return out;
}

VerdictReport qma_verify_randomized(const FunctionFamily& family, const StateVector& witness,
                                    const RandomizedCheckOptions& options) {
  VerdictReport report;
  report.overlap_term = plus_overlap(witness);
  const double exact = expected_spectral_fail(family, witness);
  report.predicted = 0.5 * report.overlap_term + 0.5 * exact;
  if (options.samples == 0) {
    report.spectral_term = exact;
    report.method = "closed_form";
  } else {
    const auto avg = spectral_average(family, witness, options.samples, options.seed);
    report.spectral_term = avg.mean;
    report.standard_error = 0.5 * avg.standard_error;
    report.samples = avg.samples;
    report.method = "monte_carlo";
  }
  report.fail_probability = 0.5 * report.overlap_term + 0.5 * report.spectral_term;
  return report;
}

VerdictReport qma_verify_permutation_no(int n, const StateVector& witness, std::size_t samples,
                                        std::uint64_t seed) {
  RandomizedCheckOptions options;
  options.samples = samples;
  options.seed = seed;
  return qma_verify_randomized(FunctionFamily::graph_codes(n, 2, std::nullopt), witness, options);
}

double qcma_xor_verify(const FunctionFamily& family, std::uint32_t x, ZBit z) {
  if (family.kind() != FamilyKind::xor_subgroup) throw ContractError("qcma_xor_verify: needs an XOR family");
  const std::size_t size = family.vertex_count();
  if (x >= size) throw ValidationError("qcma_xor_verify: witness vertex out of range");
  const int n = family.n();
  const int k = family.bit_budget()[2 * x + static_cast<std::size_t>(z)];
  const RegisterLayout layout = RegisterLayout::standard_plain(size);
  const std::size_t c_pos = layout.position("c");
  const ComplexVector input = basis_vector(layout, {0, x, static_cast<std::size_t>(z)});
  double accept = 0.0;
  const std::uint64_t count = std::uint64_t{1} << k;
  for (std::uint64_t t = 0; t < count; ++t) {
    // Other coordinates are never queried, so they may be held at 0.
    std::vector<std::uint32_t> forward(size, 0);
    std::vector<std::uint32_t> backward(size, 0);
    (z == ZBit::plus ? forward : backward)[x] = static_cast<std::uint32_t>(t << (n - k));
    const auto fn = OracleFunction::from_branches(size, {forward}, {backward});
    const ComplexVector out = apply_action(standard_action(fn, layout), input);
    for (std::size_t idx = 0; idx < layout.dim(); ++idx) {
      if ((layout.digit(idx, c_pos) & 1U) == 0) accept += std::norm(out[static_cast<Eigen::Index>(idx)]);
    }
  }
  return accept / static_cast<double>(count);
}

}  // namespace oracle_lab
