#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <vector>

#include "oracle_lab/random.hpp"

namespace oracle_lab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

namespace tol {
inline constexpr double kHermitian = 1e-12;
inline constexpr double kHermitianInput = 1e-10;
inline constexpr double kNormalized = 1e-10;
inline constexpr double kTrace = 1e-10;
inline constexpr double kPsd = 1e-10;
inline constexpr double kRankRelative = 1e-10;
inline constexpr double kExact = 1e-9;
}  // namespace tol

// Normalized pure state. Construction checks ||v||^2 = 1 within 1e-10.
class StateVector {
 public:
  explicit StateVector(ComplexVector amplitudes);

  // Rescales an arbitrary nonzero vector to unit norm.
  static StateVector normalized(ComplexVector amplitudes);
  static StateVector basis(std::size_t dim, std::size_t index);
  static StateVector uniform(std::size_t dim);
  // |S> = |S|^{-1/2} sum_{x in S} |x>.
  static StateVector subset(std::size_t dim, const std::vector<std::uint32_t>& members);
  static StateVector random(std::size_t dim, Rng& rng);

  std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
  const ComplexVector& amplitudes() const { return amplitudes_; }
  Complex operator[](std::size_t i) const { return amplitudes_[static_cast<Eigen::Index>(i)]; }

 private:
  ComplexVector amplitudes_;
};

// Hermitian, PSD, unit-trace matrix. Construction verifies all three.
class DensityOperator {
 public:
  explicit DensityOperator(ComplexMatrix matrix);

  static DensityOperator pure(const StateVector& psi);
  static DensityOperator maximally_mixed(std::size_t dim);
  // Random mixed state G G^dagger / Tr with a dim x rank Ginibre G.
  static DensityOperator random(std::size_t dim, std::size_t rank, Rng& rng);

  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
  const ComplexMatrix& matrix() const { return matrix_; }

 private:
  ComplexMatrix matrix_;
};

// Tr[A^dagger B].
Complex frobenius_inner(const ComplexMatrix& a, const ComplexMatrix& b);
double frobenius_norm(const ComplexMatrix& a);

double hermiticity_defect(const ComplexMatrix& a);
bool is_hermitian(const ComplexMatrix& a, double tolerance = tol::kHermitian);

// Singular values in descending order.
std::vector<double> singular_values(const ComplexMatrix& a);

// Sum of singular values. Hermitian inputs take the eigenvalue route
// (sum of |lambda|), which is the same quantity and much cheaper.
double nuclear_norm(const ComplexMatrix& a);

// Number of singular values above 1e-10 times the largest one.
std::size_t numerical_rank(const ComplexMatrix& a);

struct Eigensystem {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // columns are eigenvectors
};

// Requires Hermitian input within 1e-10; throws ContractError otherwise.
Eigensystem hermitian_eigensystem(const ComplexMatrix& a);

double min_eigenvalue(const ComplexMatrix& hermitian);

// <v|A|v>.
Complex expectation(const ComplexMatrix& a, const ComplexVector& v);

ComplexMatrix random_hermitian(std::size_t dim, Rng& rng);
ComplexMatrix random_ginibre(std::size_t rows, std::size_t cols, Rng& rng);
// Haar unitary from the QR decomposition of a Ginibre matrix with the phase
// of R's diagonal divided out.
ComplexMatrix haar_unitary(std::size_t dim, Rng& rng);
// Random 0 <= E <= I: V diag(u) V^dagger with u uniform in [0,1].
ComplexMatrix random_povm_element(std::size_t dim, Rng& rng);

}  // namespace oracle_lab
