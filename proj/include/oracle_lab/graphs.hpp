#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "oracle_lab/numerics.hpp"

namespace oracle_lab {

using Permutation = std::vector<std::uint32_t>;

// Throws ValidationError naming `index` unless `perm` is a bijection on [size).
void validate_permutation(const Permutation& perm, std::size_t size, std::size_t index = 0);
Permutation invert(const Permutation& perm);
Permutation identity_permutation(std::size_t size);

// A d-regular graph on N = 2^n vertices given by d/2 permutation factors;
// factor(i)[x] = f(x, i). Fixed points and repeated edges are kept as
// multigraph multiplicity.
class GraphCode {
 public:
  static GraphCode build(int n, std::vector<Permutation> perms);

  int n() const { return n_; }
  std::size_t vertex_count() const { return std::size_t{1} << n_; }
  int degree() const { return static_cast<int>(2 * perms_.size()); }
  std::size_t factor_count() const { return perms_.size(); }

  const Permutation& factor(std::size_t i) const { return perms_.at(i); }
  const Permutation& inverse_factor(std::size_t i) const { return inverses_.at(i); }
  const std::vector<Permutation>& factors() const { return perms_; }

  std::uint32_t forward(std::uint32_t x, std::size_t i) const { return perms_[i][x]; }
  std::uint32_t backward(std::uint32_t x, std::size_t i) const { return inverses_[i][x]; }

  friend bool operator==(const GraphCode& a, const GraphCode& b) {
    return a.n_ == b.n_ && a.perms_ == b.perms_;
  }

 private:
  GraphCode(int n, std::vector<Permutation> perms, std::vector<Permutation> inverses)
      : n_(n), perms_(std::move(perms)), inverses_(std::move(inverses)) {}

  int n_;
  std::vector<Permutation> perms_;
  std::vector<Permutation> inverses_;
};

// |V| = floor(N^alpha) with a 1e-9 guard against pow() rounding just below
// an integer.
std::size_t subset_size(int n, double alpha);

// Hidden subset V of [N], sorted, |V| = floor(N^alpha).
class SubsetSpec {
 public:
  static SubsetSpec from_vertices(int n, double alpha, std::vector<std::uint32_t> vertices);
  static SubsetSpec sample(int n, double alpha, Rng& rng);

  int n() const { return n_; }
  double alpha() const { return alpha_; }
  std::size_t vertex_count() const { return std::size_t{1} << n_; }
  std::size_t size() const { return vertices_.size(); }
  const std::vector<std::uint32_t>& vertices() const { return vertices_; }
  std::vector<std::uint32_t> complement() const;
  bool contains(std::uint32_t x) const { return membership_[x] != 0; }

  friend bool operator==(const SubsetSpec& a, const SubsetSpec& b) {
    return a.n_ == b.n_ && a.alpha_ == b.alpha_ && a.vertices_ == b.vertices_;
  }

 private:
  SubsetSpec(int n, double alpha, std::vector<std::uint32_t> vertices);

  int n_;
  double alpha_;
  std::vector<std::uint32_t> vertices_;
  std::vector<std::uint8_t> membership_;
};

// L = d I - A_G with A_G[x][y] counting the tuples (x, f_i(x) = y),
// symmetrized: A = sum_i (P_i + P_i^T).
struct Laplacian {
  ComplexMatrix matrix;
  Eigen::MatrixXd adjacency;
  std::vector<double> spectrum;  // ascending
  double lambda2 = 0.0;

  // <psi|L|psi>, real for Hermitian L.
  double quadratic_form(const ComplexVector& psi) const;
};

Laplacian laplacian_of(const GraphCode& code);

// lambda_2 only; cheaper than a full laplacian_of when rejection sampling.
double spectral_gap(const GraphCode& code);

struct NoInstance {
  GraphCode code;
  double lambda2;
  int rejections;
};

// Configuration model (d/2 uniform permutations), resampled until
// lambda_2 >= epsilon. Gives up after 100 consecutive rejections.
NoInstance sample_no_instance(int n, int d, double epsilon, std::uint64_t seed);

// Every factor is an independent uniform permutation of V times one of the
// complement, so V is disconnected from [N]/V.
GraphCode sample_yes_instance(const SubsetSpec& spec, int d, std::uint64_t seed);

// sqrt((N-|V|)/N)|V> - sqrt(|V|/N)|[N]/V>: the unit vector in span{|V>, |[N]/V>}
// orthogonal to |+>^n.
StateVector lambda2_witness(const SubsetSpec& spec);

// Uniform element of T_V.
Permutation random_stabilizing_permutation(const SubsetSpec& spec, Rng& rng);

}  // namespace oracle_lab
