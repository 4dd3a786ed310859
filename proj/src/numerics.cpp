#include "oracle_lab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "oracle_lab/error.hpp"

namespace oracle_lab {

namespace {

void require_finite(const ComplexMatrix& a, const char* where) {
  if (!a.allFinite()) {
    throw NumericError(std::string(where) + ": matrix has non-finite entries");
  }
}

}  // namespace

StateVector::StateVector(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0) throw DimensionError("StateVector: empty amplitude vector");
  const double norm2 = amplitudes_.squaredNorm();
  if (std::abs(norm2 - 1.0) > tol::kNormalized) {
    std::ostringstream msg;
    msg << "StateVector: squared norm " << norm2 << " is not 1";
    throw ValidationError(msg.str());
  }
}

StateVector StateVector::normalized(ComplexVector amplitudes) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw ValidationError("StateVector::normalized: vector has zero or non-finite norm");
  }
  amplitudes /= norm;
  return StateVector(std::move(amplitudes));
}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) throw DimensionError("StateVector::basis: index out of range");
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dim));
  v[static_cast<Eigen::Index>(index)] = 1.0;
  return StateVector(std::move(v));
}

StateVector StateVector::uniform(std::size_t dim) {
  ComplexVector v = ComplexVector::Constant(static_cast<Eigen::Index>(dim),
                                            Complex(1.0 / std::sqrt(static_cast<double>(dim)), 0.0));
  return normalized(std::move(v));
}

StateVector StateVector::subset(std::size_t dim, const std::vector<std::uint32_t>& members) {
  if (members.empty()) throw ValidationError("StateVector::subset: subset must be non-empty");
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dim));
  for (auto x : members) {
    if (x >= dim) throw DimensionError("StateVector::subset: member out of range");
    v[x] = 1.0;
  }
  return normalized(std::move(v));
}

StateVector StateVector::random(std::size_t dim, Rng& rng) {
  ComplexVector v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = Complex(rng.normal(), rng.normal());
  return normalized(std::move(v));
}

DensityOperator::DensityOperator(ComplexMatrix matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0) {
    throw DimensionError("DensityOperator: matrix must be square and non-empty");
  }
  require_finite(matrix_, "DensityOperator");
  if (!is_hermitian(matrix_, tol::kHermitian)) {
    std::ostringstream msg;
    msg << "DensityOperator: not Hermitian (defect " << hermiticity_defect(matrix_) << ")";
    throw ValidationError(msg.str());
  }
  const double trace = matrix_.trace().real();
  if (std::abs(trace - 1.0) > tol::kTrace) {
    std::ostringstream msg;
    msg << "DensityOperator: trace " << trace << " is not 1";
    throw ValidationError(msg.str());
  }
  const double lowest = min_eigenvalue(matrix_);
  if (lowest < -tol::kPsd) {
    std::ostringstream msg;
    msg << "DensityOperator: eigenvalue " << lowest << " is negative";
    throw ValidationError(msg.str());
  }
}

DensityOperator DensityOperator::pure(const StateVector& psi) {
  ComplexMatrix rho = psi.amplitudes() * psi.amplitudes().adjoint();
  // Exact Hermitian symmetrization removes rounding asymmetry.
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityOperator(std::move(rho));
}

DensityOperator DensityOperator::maximally_mixed(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  return DensityOperator(ComplexMatrix::Identity(d, d) / static_cast<double>(dim));
}

DensityOperator DensityOperator::random(std::size_t dim, std::size_t rank, Rng& rng) {
  const ComplexMatrix g = random_ginibre(dim, std::max<std::size_t>(rank, 1), rng);
  ComplexMatrix rho = g * g.adjoint();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace().real();
  return DensityOperator(std::move(rho));
}

Complex frobenius_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream msg;
    msg << "frobenius_inner: shape mismatch " << a.rows() << "x" << a.cols() << " vs " << b.rows()
        << "x" << b.cols();
    throw DimensionError(msg.str());
  }
  // sum_ij conj(A_ij) B_ij
  return (a.array().conjugate() * b.array()).sum();
}

double frobenius_norm(const ComplexMatrix& a) { return a.norm(); }

double hermiticity_defect(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix& a, double tolerance) {
  return a.rows() == a.cols() && hermiticity_defect(a) <= tolerance;
}

std::vector<double> singular_values(const ComplexMatrix& a) {
  require_finite(a, "singular_values");
  if (a.size() == 0) return {};
  Eigen::BDCSVD<ComplexMatrix> svd(a);
  if (svd.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "singular_values: SVD did not converge for " << a.rows() << "x" << a.cols()
        << " matrix (Frobenius norm " << a.norm() << ", max |entry| " << a.cwiseAbs().maxCoeff()
        << ")";
    throw NumericError(msg.str());
  }
  const auto& s = svd.singularValues();
  std::vector<double> values(s.data(), s.data() + s.size());
  std::sort(values.begin(), values.end(), std::greater<>());
  return values;
}

double nuclear_norm(const ComplexMatrix& a) {
  require_finite(a, "nuclear_norm");
  if (is_hermitian(a, tol::kHermitian)) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a, Eigen::EigenvaluesOnly);
    if (solver.info() == Eigen::Success) return solver.eigenvalues().cwiseAbs().sum();
  }
  double total = 0.0;
  for (double s : singular_values(a)) total += s;
  return total;
}

std::size_t numerical_rank(const ComplexMatrix& a) {
  const auto values = singular_values(a);
  if (values.empty() || values.front() == 0.0) return 0;
  const double cutoff = tol::kRankRelative * values.front();
  return static_cast<std::size_t>(
      std::count_if(values.begin(), values.end(), [cutoff](double s) { return s > cutoff; }));
}

Eigensystem hermitian_eigensystem(const ComplexMatrix& a) {
  require_finite(a, "hermitian_eigensystem");
  if (!is_hermitian(a, tol::kHermitianInput)) {
    std::ostringstream msg;
    msg << "hermitian_eigensystem: input is not Hermitian (defect " << hermiticity_defect(a) << ")";
    throw ContractError(msg.str());
  }
  const ComplexMatrix sym = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw NumericError("hermitian_eigensystem: eigensolver did not converge");
  }
  Eigensystem result;
  const auto& ev = solver.eigenvalues();
  result.values.assign(ev.data(), ev.data() + ev.size());  // Eigen sorts ascending
  result.vectors = solver.eigenvectors();
  return result;
}

double min_eigenvalue(const ComplexMatrix& hermitian) {
  const ComplexMatrix sym = 0.5 * (hermitian + hermitian.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericError("min_eigenvalue: eigensolver failed");
  return solver.eigenvalues()(0);
}

Complex expectation(const ComplexMatrix& a, const ComplexVector& v) {
  if (a.cols() != v.size() || a.rows() != v.size()) {
    throw DimensionError("expectation: dimension mismatch");
  }
  return v.dot(a * v);  // Eigen's dot conjugates the left operand
}

ComplexMatrix random_ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
  ComplexMatrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index j = 0; j < g.cols(); ++j) {
    for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = Complex(rng.normal(), rng.normal());
  }
  return g;
}

ComplexMatrix random_hermitian(std::size_t dim, Rng& rng) {
  const ComplexMatrix g = random_ginibre(dim, dim, rng);
  return 0.5 * (g + g.adjoint());
}

ComplexMatrix haar_unitary(std::size_t dim, Rng& rng) {
  const ComplexMatrix g = random_ginibre(dim, dim, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    const Complex diag = r(j, j);
    const double mag = std::abs(diag);
    if (mag > 0.0) q.col(j) *= diag / mag;
  }
  return q;
}

ComplexMatrix random_povm_element(std::size_t dim, Rng& rng) {
  const ComplexMatrix u = haar_unitary(dim, rng);
  Eigen::VectorXd weights(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < weights.size(); ++i) weights[i] = rng.uniform01();
  ComplexMatrix e = u * weights.cast<Complex>().asDiagonal() * u.adjoint();
  return 0.5 * (e + e.adjoint());
}

}  // namespace oracle_lab
