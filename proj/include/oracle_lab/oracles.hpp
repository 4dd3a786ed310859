#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oracle_lab/graphs.hpp"
#include "oracle_lab/numerics.hpp"

namespace oracle_lab {

// The inversion register. Bit 0 encodes z = +1 (apply f), bit 1 encodes
// z = -1 (apply f^{-1}).
enum class ZBit : std::uint8_t { plus = 0, minus = 1 };

inline int z_sign(ZBit z) { return z == ZBit::plus ? 1 : -1; }
inline ZBit flip(ZBit z) { return z == ZBit::plus ? ZBit::minus : ZBit::plus; }

struct Register {
  std::string name;
  std::size_t size;
};

// Ordered registers packed big-endian: the first register is the most
// significant digit of the state index, the last the least significant.
// Every module uses this convention, e.g. the in-place channel layout (x, z)
// puts |x, z> at index 2x + zbit.
class RegisterLayout {
 public:
  explicit RegisterLayout(std::vector<Register> registers);

  // (c, x, i, z): c, x in [N], i in [2^(ceil(log2 d) - 1)], z one qubit.
  static RegisterLayout standard(std::size_t vertex_count, int degree);
  // (c, x, z), the single-function layout.
  static RegisterLayout standard_plain(std::size_t vertex_count);
  // ([a,] x, i, z).
  static RegisterLayout in_place(std::size_t vertex_count, int degree, bool controlled);
  // (x, z); shared by the plain in-place and phase models.
  static RegisterLayout in_place_plain(std::size_t vertex_count);
  static RegisterLayout phase(std::size_t vertex_count);

  // Appends a workspace register "w" of 2^qubits levels (no-op for 0).
  RegisterLayout with_workspace(int qubits) const;

  std::size_t dim() const { return dim_; }
  const std::vector<Register>& registers() const { return registers_; }
  bool has(const std::string& name) const;
  std::size_t position(const std::string& name) const;
  std::size_t size_of(const std::string& name) const;

  std::size_t stride(std::size_t pos) const { return strides_[pos]; }
  // Value of register `pos` in basis state `index`.
  std::size_t digit(std::size_t index, std::size_t pos) const {
    return (index / strides_[pos]) % registers_[pos].size;
  }
  // Basis state `index` with register `pos` set to `value`.
  std::size_t with_digit(std::size_t index, std::size_t pos, std::size_t value) const {
    return index - digit(index, pos) * strides_[pos] + value * strides_[pos];
  }

  std::vector<std::size_t> unpack(std::size_t index) const;
  std::size_t pack(const std::vector<std::size_t>& values) const;

  friend bool operator==(const RegisterLayout& a, const RegisterLayout& b);

 private:
  std::vector<Register> registers_;
  std::vector<std::size_t> strides_;
  std::size_t dim_;
};

// 2^(ceil(log2 d) - 1): the index-register size for degree d.
std::size_t index_register_size(int degree);

// A function f(x, i) together with the table used on the z = -1 branch.
// For a graph code the second table is the true inverse; randomized
// families may draw the two branches independently.
class OracleFunction {
 public:
  static OracleFunction from_code(const GraphCode& code);
  static OracleFunction from_permutation(const Permutation& perm);
  // One table per factor and branch; tables need not be bijections.
  static OracleFunction from_branches(std::size_t domain_size,
                                      std::vector<std::vector<std::uint32_t>> forward,
                                      std::vector<std::vector<std::uint32_t>> inverse_branch);

  std::size_t domain_size() const { return domain_size_; }
  std::size_t factor_count() const { return forward_.size(); }

  // f^z(x, i).
  std::uint32_t value(std::uint32_t x, std::size_t i, ZBit z) const {
    return z == ZBit::plus ? forward_[i][x] : inverse_branch_[i][x];
  }

  bool is_permutation() const { return is_permutation_; }
  // True when inverse_branch[i] is the inverse of forward[i] for every i.
  bool has_true_inverse() const { return has_true_inverse_; }

 private:
  OracleFunction(std::size_t domain_size, std::vector<std::vector<std::uint32_t>> forward,
                 std::vector<std::vector<std::uint32_t>> inverse_branch);

  std::size_t domain_size_;
  std::vector<std::vector<std::uint32_t>> forward_;
  std::vector<std::vector<std::uint32_t>> inverse_branch_;
  bool is_permutation_ = false;
  bool has_true_inverse_ = false;
};

// U|k> = phase[k] |target[k]>. Oracles are stored this way and never as
// dense matrices. `invalid[k]` marks basis states the oracle refuses (index
// register values >= d/2); they map to themselves.
struct BasisAction {
  std::vector<std::size_t> target;
  std::vector<Complex> phase;  // empty means all ones
  std::vector<std::uint8_t> invalid;

  std::size_t dim() const { return target.size(); }
};

BasisAction standard_action(const OracleFunction& fn, const RegisterLayout& layout);
BasisAction inplace_action(const OracleFunction& fn, const RegisterLayout& layout);
BasisAction phase_action(const OracleFunction& fn, const RegisterLayout& layout);

ComplexVector apply_action(const BasisAction& action, const ComplexVector& v);
// U rho U^dagger.
ComplexMatrix conjugate(const BasisAction& action, const ComplexMatrix& rho);
// U^dagger rho U.
ComplexMatrix conjugate_adjoint(const BasisAction& action, const ComplexMatrix& rho);
ComplexMatrix to_dense(const BasisAction& action);

// |c, x, i, z> -> |c xor f^z(x, i), x, i, z>.
StateVector apply_standard(const OracleFunction& fn, const StateVector& state,
                           const RegisterLayout& layout);
// |[a,] x, i, z> -> |[a,] f^{a z}(x, i), i, z>; without a control a = 1.
StateVector apply_inplace(const OracleFunction& fn, const StateVector& state,
                          const RegisterLayout& layout);
// |x, i, z> -> omega_N^{f^z(x, i)} |x, i, z>.
StateVector apply_phase(const OracleFunction& fn, const StateVector& state,
                        const RegisterLayout& layout);

// Two standard queries with the swap-and-X sandwich:
// (I (x) X) U_f (SWAP (x) X) U_f |0^n>|x, z> = |0^n>|f^z(x), z>.
// Input lives on (x, z); the result is on (c, x, z).
StateVector simulate_inplace_via_standard(const OracleFunction& fn, const StateVector& xz_state);

// Gates used by the verification circuits. Each acts on a named register.
ComplexVector apply_hadamard(const ComplexVector& v, const RegisterLayout& layout,
                             const std::string& reg);
ComplexVector apply_pauli_x(const ComplexVector& v, const RegisterLayout& layout,
                            const std::string& reg);
ComplexVector apply_swap(const ComplexVector& v, const RegisterLayout& layout,
                         const std::string& first, const std::string& second);
// Swaps `first` and `second` where register `control` holds `control_value`.
ComplexVector apply_controlled_swap(const ComplexVector& v, const RegisterLayout& layout,
                                    const std::string& control, std::size_t control_value,
                                    const std::string& first, const std::string& second);

// Prepares |values...> on the given layout.
ComplexVector basis_vector(const RegisterLayout& layout, const std::vector<std::size_t>& values);

}  // namespace oracle_lab
