#include <doctest.h>

#include <cmath>

#include "oracle_lab/error.hpp"
#include "oracle_lab/verifiers.hpp"

using namespace oracle_lab;

namespace {

double law(const GraphCode& code, const StateVector& psi) {
  return laplacian_of(code).quadratic_form(psi.amplitudes()) / (2.0 * code.degree());
}

GraphCode random_code(int n, int d, Rng& rng) {
  std::vector<Permutation> perms;
  for (int i = 0; i < d / 2; ++i) perms.push_back(random_permutation(std::size_t{1} << n, rng));
  return GraphCode::build(n, perms);
}

}  // namespace

TEST_CASE("spectral tests follow <psi|L|psi>/(2d)") {
  Rng rng(1);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + trial % 3;
    const int d = trial % 2 ? 4 : 2;
    const GraphCode code = random_code(n, d, rng);
    const StateVector psi = StateVector::random(code.vertex_count(), rng);
    const double want = law(code, psi);
    const VerdictReport standard = spectral_test_standard(code, psi);
    const VerdictReport inplace = spectral_test_inplace(code, psi);
    CHECK(std::abs(standard.fail_probability - want) < 1e-10);
    CHECK(std::abs(inplace.fail_probability - want) < 1e-10);
    CHECK(std::abs(spectral_fail_direct(code, psi) - want) < 1e-10);
    REQUIRE(standard.predicted.has_value());
    CHECK(std::abs(*standard.predicted - want) < 1e-10);
  }
}

TEST_CASE("spectral test examples") {
  Rng rng(2);
  const GraphCode code = random_code(3, 4, rng);
  const StateVector plus = StateVector::uniform(8);
  CHECK(spectral_test_standard(code, plus).fail_probability < 1e-12);
  CHECK(spectral_test_inplace(code, plus).fail_probability < 1e-12);

  const auto spec = SubsetSpec::from_vertices(3, 0.34, {2, 6});
  const GraphCode yes = sample_yes_instance(spec, 4, 3);
  const StateVector v = StateVector::subset(8, spec.vertices());
  CHECK(spectral_test_standard(yes, v).fail_probability < 1e-10);
  CHECK(spectral_test_inplace(yes, v).fail_probability < 1e-10);

  // 4-cycle, d = 2: fail = <psi|L|psi>/4.
  const GraphCode cycle = GraphCode::build(2, {{1, 2, 3, 0}});
  const StateVector psi = StateVector::random(4, rng);
  const double quad = laplacian_of(cycle).quadratic_form(psi.amplitudes());
  CHECK(std::abs(spectral_test_standard(cycle, psi).fail_probability - quad / 4.0) < 1e-10);

  // Derangement factors with distinct images have no self-loops: L[x][x] = d.
  const GraphCode shifts = GraphCode::build(3, {{1, 2, 3, 4, 5, 6, 7, 0}, {3, 4, 5, 6, 7, 0, 1, 2}});
  for (std::size_t x0 = 0; x0 < 8; ++x0) {
    const StateVector e = StateVector::basis(8, x0);
    CHECK(std::abs(spectral_test_inplace(shifts, e).fail_probability - 0.5) < 1e-12);
    CHECK(std::abs(spectral_test_standard(shifts, e).fail_probability - 0.5) < 1e-12);
  }
}

TEST_CASE("QMA verifier") {
  Rng rng(3);
  const NoInstance no = sample_no_instance(4, 4, 0.3, 5);
  for (auto model : {OracleModel::standard, OracleModel::in_place}) {
    const VerdictReport r = qma_verify(no.code, StateVector::uniform(16), model);
    CHECK(r.fail_probability == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(r.overlap_term == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS(qma_verify(no.code, StateVector::uniform(16), OracleModel::phase), ContractError);

  const auto spec = SubsetSpec::from_vertices(4, 0.3, {1, 9});
  const GraphCode yes = sample_yes_instance(spec, 4, 6);
  const VerdictReport r = qma_verify(yes, StateVector::subset(16, spec.vertices()));
  CHECK(std::abs(r.fail_probability - 2.0 / 32.0) < 1e-10);

  const double floor = 0.5 * std::min(1.0, no.lambda2 / 8.0);
  const Laplacian lap = laplacian_of(no.code);
  for (int k = 0; k < 100; ++k) {
    const StateVector w = StateVector::random(16, rng);
    const VerdictReport v = qma_verify(no.code, w);
    CHECK(v.fail_probability >= floor - 1e-9);
    // FAIL = 1/2 (|a_1|^2 + (1/2d) sum_i lambda_i |a_i|^2) in the eigenbasis.
    const auto eig = hermitian_eigensystem(lap.matrix);
    const ComplexVector a = eig.vectors.adjoint() * w.amplitudes();
    double spectral = 0.0;
    for (int i = 0; i < 16; ++i) spectral += eig.values[static_cast<std::size_t>(i)] * std::norm(a[i]);
    const double overlap = std::norm(StateVector::uniform(16).amplitudes().dot(w.amplitudes()));
    CHECK(std::abs(v.fail_probability - 0.5 * (overlap + spectral / 8.0)) < 1e-9);
  }
}

TEST_CASE("randomized families have the closed-form spectral term") {
  Rng rng(4);
  const StateVector psi = StateVector::random(16, rng);
  const double plus = std::norm(StateVector::uniform(16).amplitudes().dot(psi.amplitudes()));
  const auto no = FunctionFamily::graph_codes(4, 4, std::nullopt);
  CHECK(expected_spectral_fail(no, psi) == doctest::Approx((1.0 - plus) / 2.0));
  const auto avg = spectral_average(no, psi, 20000, 5);
  CHECK(std::abs(avg.mean - (1.0 - plus) / 2.0) < 4.0 * avg.standard_error);

  const auto spec = SubsetSpec::from_vertices(4, 0.3, {0, 7});
  const auto yes = FunctionFamily::graph_codes(4, 4, spec);
  const double on_v = std::norm(StateVector::subset(16, spec.vertices()).amplitudes().dot(psi.amplitudes()));
  const double on_w = std::norm(StateVector::subset(16, spec.complement()).amplitudes().dot(psi.amplitudes()));
  CHECK(expected_spectral_fail(yes, psi) == doctest::Approx((1.0 - on_v - on_w) / 2.0));
  const auto yes_avg = spectral_average(yes, psi, 20000, 6);
  CHECK(std::abs(yes_avg.mean - (1.0 - on_v - on_w) / 2.0) < 4.0 * yes_avg.standard_error);

  // The degree does not enter.
  CHECK(expected_spectral_fail(FunctionFamily::graph_codes(4, 2, std::nullopt), psi) ==
        doctest::Approx(expected_spectral_fail(no, psi)));

  const VerdictReport exact = qma_verify_randomized(yes, StateVector::subset(16, spec.vertices()));
  CHECK(exact.fail_probability == doctest::Approx(2.0 / 32.0));
  const VerdictReport sampled = qma_verify_randomized(no, psi, {4000, 7});
  CHECK(sampled.samples == 4000);
  REQUIRE(sampled.standard_error.has_value());
  CHECK(std::abs(sampled.fail_probability - 0.5 * plus - 0.25 * (1.0 - plus)) < 4.0 * *sampled.standard_error);
}

TEST_CASE("permutation NO family") {
  const VerdictReport uniform = qma_verify_permutation_no(6, StateVector::uniform(64), 1000, 1);
  CHECK(uniform.fail_probability == doctest::Approx(0.5).epsilon(1e-12));

  const StateVector v = StateVector::subset(64, {0, 1, 2, 3});
  const VerdictReport r = qma_verify_permutation_no(6, v, 10000, 2);
  REQUIRE(r.predicted.has_value());
  REQUIRE(r.standard_error.has_value());
  CHECK(r.fail_probability > 0.25);
  CHECK(std::abs(r.fail_probability - *r.predicted) <= 3.0 * *r.standard_error);
}

TEST_CASE("sampling is deterministic per seed") {
  const auto family = FunctionFamily::graph_codes(5, 4, std::nullopt);
  Rng rng(8);
  const StateVector psi = StateVector::random(32, rng);
  const auto a = spectral_average(family, psi, 500, 9);
  const auto b = spectral_average(family, psi, 500, 9);
  CHECK(a.mean == b.mean);
  CHECK(a.standard_error == b.standard_error);
  CHECK(spectral_average(family, psi, 500, 10).mean != a.mean);
}

TEST_CASE("QCMA XOR protocol") {
  for (int n : {3, 4}) {
    const std::size_t size = std::size_t{1} << n;
    std::vector<int> budget(2 * size, n);
    budget[2 * 5 + 1] = n - 1;  // coordinate (x = 5, z = -1)
    const auto yes = FunctionFamily::xor_subgroup(n, budget);
    const auto no = FunctionFamily::xor_subgroup(n, std::vector<int>(2 * size, n));
    CHECK(qcma_xor_verify(yes, 5, ZBit::minus) == 1.0);
    CHECK(qcma_xor_verify(yes, 5, ZBit::plus) == 0.5);
    for (std::uint32_t x = 0; x < size; ++x) {
      for (auto z : {ZBit::plus, ZBit::minus}) CHECK(qcma_xor_verify(no, x, z) == 0.5);
    }
    // A smaller subgroup is still even.
    budget[2 * 5 + 1] = 0;
    CHECK(qcma_xor_verify(FunctionFamily::xor_subgroup(n, budget), 5, ZBit::minus) == 1.0);
  }
  CHECK_THROWS_AS(qcma_xor_verify(FunctionFamily::all_permutations(3), 0, ZBit::plus), ContractError);
}
