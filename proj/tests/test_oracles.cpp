#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracle_lab/error.hpp"
#include "oracle_lab/oracles.hpp"

using namespace oracle_lab;

namespace {

// f = (3, 0, 2, 6, 1, 7, 4, 5) on [8].
const Permutation kPerm{3, 0, 2, 6, 1, 7, 4, 5};

std::size_t zi(ZBit z) { return static_cast<std::size_t>(z); }

}  // namespace

TEST_CASE("layouts pack big-endian") {
  const RegisterLayout layout({{"a", 2}, {"b", 3}, {"c", 4}});
  CHECK(layout.dim() == 24);
  CHECK(layout.pack({1, 2, 3}) == 1 * 12 + 2 * 4 + 3);
  CHECK(layout.unpack(23) == std::vector<std::size_t>{1, 2, 3});
  CHECK(layout.digit(23, 1) == 2);
  CHECK(layout.with_digit(23, 1, 0) == 15);
  CHECK(RegisterLayout::in_place_plain(8).pack({5, 1}) == 11);
  CHECK(index_register_size(2) == 1);
  CHECK(index_register_size(4) == 2);
  CHECK(index_register_size(6) == 4);
  CHECK(RegisterLayout::standard(8, 6).size_of("i") == 4);
  CHECK(RegisterLayout::in_place_plain(4).with_workspace(2).dim() == 32);
  CHECK_THROWS_AS(layout.position("zz"), LayoutError);
}

TEST_CASE("standard oracle") {
  const auto fn = OracleFunction::from_permutation(kPerm);
  const auto layout = RegisterLayout::standard_plain(8);
  for (std::uint32_t x = 0; x < 8; ++x) {
    for (auto z : {ZBit::plus, ZBit::minus}) {
      const StateVector in(basis_vector(layout, {0, x, zi(z)}));
      const StateVector out = apply_standard(fn, in, layout);
      const std::uint32_t want = z == ZBit::plus ? kPerm[x] : invert(kPerm)[x];
      CHECK(std::abs(out[layout.pack({want, x, zi(z)})] - Complex(1, 0)) == 0.0);
      // XOR twice is the identity.
      CHECK((apply_standard(fn, out, layout).amplitudes() - in.amplitudes()).norm() == 0.0);
    }
  }
}

TEST_CASE("in-place oracle") {
  const auto fn = OracleFunction::from_permutation(kPerm);
  const auto layout = RegisterLayout::in_place_plain(8);
  for (std::uint32_t x = 0; x < 8; ++x) {
    const StateVector in(basis_vector(layout, {x, 0}));
    const StateVector out = apply_inplace(fn, in, layout);
    CHECK(out[layout.pack({kPerm[x], 0})] == Complex(1, 0));
    // Same point with z = -1 applied to the image returns x.
    const StateVector back = apply_inplace(fn, StateVector(basis_vector(layout, {kPerm[x], 1})), layout);
    CHECK(back[layout.pack({x, 1})] == Complex(1, 0));
  }
  const auto controlled = RegisterLayout::in_place(8, 2, true);
  Rng rng(1);
  const StateVector psi = StateVector::random(controlled.dim(), rng);
  const StateVector out = apply_inplace(fn, psi, controlled);
  for (std::size_t k = 0; k < controlled.dim() / 2; ++k) CHECK(out[k] == psi[k]);  // a = 0 untouched
  CHECK(std::abs(out.amplitudes().norm() - 1.0) < 1e-12);
}

TEST_CASE("phase oracle") {
  const auto id = OracleFunction::from_permutation(identity_permutation(8));
  const auto layout = RegisterLayout::phase(8);
  Rng rng(2);
  const StateVector psi = StateVector::random(16, rng);
  StateVector out = apply_phase(id, psi, layout);
  for (std::size_t k = 0; k < 16; ++k) CHECK(std::abs(std::abs(out[k]) - std::abs(psi[k])) < 1e-15);
  const StateVector x3(basis_vector(layout, {3, 0}));
  const Complex phase = apply_phase(id, x3, layout)[layout.pack({3, 0})];
  CHECK(std::abs(phase - std::polar(1.0, 2.0 * std::numbers::pi * 3.0 / 8.0)) < 1e-15);
  for (int k = 1; k < 8; ++k) out = apply_phase(id, out, layout);
  CHECK((out.amplitudes() - psi.amplitudes()).norm() < 1e-9);
}

TEST_CASE("in-place from two standard queries") {
  Rng rng(3);
  const auto fn = OracleFunction::from_permutation(random_permutation(8, rng));
  const auto xz = RegisterLayout::in_place_plain(8);
  const auto cxz = RegisterLayout::standard_plain(8);
  for (std::uint32_t x = 0; x < 8; ++x) {
    for (auto z : {ZBit::plus, ZBit::minus}) {
      const StateVector in(basis_vector(xz, {x, zi(z)}));
      const StateVector direct = apply_inplace(fn, in, xz);
      const StateVector simulated = simulate_inplace_via_standard(fn, in);
      // Ancilla back in |0>: all weight sits on c = 0 and matches the in-place image.
      for (std::size_t k = 0; k < cxz.dim(); ++k) {
        const auto digits = cxz.unpack(k);
        const Complex want = digits[0] == 0 ? direct[xz.pack({digits[1], digits[2]})] : Complex(0, 0);
        CHECK(simulated[k] == want);
      }
    }
  }
  const auto non_inverse = OracleFunction::from_branches(8, {kPerm}, {kPerm});
  CHECK_THROWS_AS(simulate_inplace_via_standard(non_inverse, StateVector(basis_vector(xz, {0, 0}))), ContractError);
}

TEST_CASE("every action is unitary and maps basis states to basis states") {
  Rng rng(4);
  const GraphCode code = GraphCode::build(3, {random_permutation(8, rng), random_permutation(8, rng)});
  const auto fn = OracleFunction::from_code(code);
  CHECK(fn.has_true_inverse());
  const auto std_layout = RegisterLayout::standard(8, 4);
  const auto ip_layout = RegisterLayout::in_place(8, 4, true);
  const auto ph_layout = RegisterLayout(
      {{"x", 8}, {"i", 2}, {"z", 2}});
  for (const auto& [action, dim] :
       {std::pair{standard_action(fn, std_layout), std_layout.dim()},
        std::pair{inplace_action(fn, ip_layout), ip_layout.dim()},
        std::pair{phase_action(fn, ph_layout), ph_layout.dim()}}) {
    const ComplexMatrix u = to_dense(action);
    CHECK(frobenius_norm(u.adjoint() * u - ComplexMatrix::Identity(static_cast<Eigen::Index>(dim),
                                                                 static_cast<Eigen::Index>(dim))) < 1e-12);
    for (Eigen::Index col = 0; col < u.cols(); ++col) {
      int nonzero = 0;
      for (Eigen::Index row = 0; row < u.rows(); ++row) nonzero += std::abs(u(row, col)) > 0.0;
      CHECK(nonzero == 1);
    }
    const ComplexMatrix rho = DensityOperator::random(dim, 3, rng).matrix();
    CHECK(frobenius_norm(conjugate_adjoint(action, conjugate(action, rho)) - rho) < 1e-12);
    CHECK(frobenius_norm(conjugate(action, rho) - u * rho * u.adjoint()) < 1e-12);
  }
}

TEST_CASE("index values >= d/2 are rejected") {
  Rng rng(5);
  const GraphCode code = GraphCode::build(3, {random_permutation(8, rng), random_permutation(8, rng),
                                             random_permutation(8, rng)});
  const auto fn = OracleFunction::from_code(code);
  const auto layout = RegisterLayout::standard(8, 6);  // i has 4 levels, only 3 valid
  CHECK_THROWS_AS(apply_standard(fn, StateVector(basis_vector(layout, {0, 1, 3, 0})), layout), ValidationError);
  CHECK_NOTHROW(apply_standard(fn, StateVector(basis_vector(layout, {0, 1, 2, 0})), layout));
}

TEST_CASE("gates") {
  const RegisterLayout layout({{"a", 2}, {"b", 4}, {"c", 4}});
  const ComplexVector v = basis_vector(layout, {0, 1, 3});
  const ComplexVector h = apply_hadamard(v, layout, "a");
  CHECK(std::abs(h[static_cast<Eigen::Index>(layout.pack({0, 1, 3}))] - Complex(M_SQRT1_2, 0)) < 1e-15);
  CHECK(std::abs(h[static_cast<Eigen::Index>(layout.pack({1, 1, 3}))] - Complex(M_SQRT1_2, 0)) < 1e-15);
  CHECK((apply_hadamard(h, layout, "a") - v).norm() < 1e-15);
  CHECK(apply_pauli_x(v, layout, "a")[static_cast<Eigen::Index>(layout.pack({1, 1, 3}))] == Complex(1, 0));
  CHECK(apply_swap(v, layout, "b", "c")[static_cast<Eigen::Index>(layout.pack({0, 3, 1}))] == Complex(1, 0));
  CHECK(apply_controlled_swap(v, layout, "a", 1, "b", "c") == v);
  CHECK(apply_controlled_swap(v, layout, "a", 0, "b", "c")[static_cast<Eigen::Index>(layout.pack({0, 3, 1}))] ==
        Complex(1, 0));
  CHECK_THROWS_AS(apply_hadamard(v, layout, "b"), LayoutError);
}
