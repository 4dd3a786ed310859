#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "oracle_lab/graphs.hpp"
#include "oracle_lab/numerics.hpp"
#include "oracle_lab/oracles.hpp"

namespace oracle_lab {

enum class BasisKind { A, B, C1, C2, C3, C4 };

struct BasisLabel {
  BasisKind kind;
  ZBit z1;
  ZBit z2;

  // "A[+1,-1]", "B[+1]", "C4[-1]", ...
  std::string name() const;
  // C1..C4 span the part of the T_V subspace orthogonal to the T_empty one.
  bool in_difference_space() const { return kind >= BasisKind::C1; }

  friend bool operator==(const BasisLabel&, const BasisLabel&) = default;
};

// A symmetric-subspace basis matrix on the (x, z) layout (dim 2N).
struct BasisElement {
  BasisLabel label;
  ComplexMatrix matrix;
  double frobenius_norm;
};

using Basis = std::vector<BasisElement>;

// A[z1,z2] = |+><+| (x) |z1><z2| and B[z] = (I - |+><+|)/N (x) |z><z|.
std::shared_ptr<const Basis> build_no_basis(int n);

// The NO basis followed by C1..C3 for each (z1, z2) and C4 per z.
// The textbook matrices are used as seeds and orthogonalized (Gram-Schmidt
// within each (z1, z2) sector, order A, B, C1, C2, C3, C4); a seed already
// in the span of its predecessors is dropped (C4 when |V| = 1).
// Results are cached per (n, V).
std::shared_ptr<const Basis> build_yes_basis(const SubsetSpec& spec);

// The unorthogonalized seed matrix for one label.
ComplexMatrix basis_seed(const SubsetSpec& spec, const BasisLabel& label);

// Parses BasisLabel::name() output back; throws ValidationError otherwise.
BasisLabel parse_basis_label(const std::string& text);

struct BasisCheck {
  std::size_t elements = 0;
  double max_orthogonality_defect = 0.0;  // max |Tr[M^dagger M']| / (||M|| ||M'||), M != M'
  double max_invariance_defect = 0.0;     // max ||U M U^dagger - M||_F / ||M||_F
  double min_frobenius = 0.0;
  double max_nuclear = 0.0;
  double min_nuclear = 0.0;
  std::size_t conjugations = 0;
};

// Pairwise orthogonality and invariance under `conjugations` in-place oracle
// unitaries drawn from T_V (or T_empty without a spec), independent branches.
BasisCheck check_basis(const Basis& basis, int n, const std::optional<SubsetSpec>& spec,
                       std::size_t conjugations, std::uint64_t seed);

// c_M = Tr[M^dagger X] / ||M||_F^2 for each element.
std::vector<Complex> basis_weights(const Basis& basis, const ComplexMatrix& x);

// sum_M c_M M.
ComplexMatrix project_onto(const Basis& basis, const ComplexMatrix& x);

// O_{T_V}[rho] - O_{T_empty}[rho] for the in-place model, with
// `workspace_qubits` trailing workspace qubits.
ComplexMatrix d_V_rho(const ComplexMatrix& rho, const SubsetSpec& spec, int workspace_qubits = 0);

struct WeightEntry {
  BasisLabel label;
  Complex weight;          // c_M
  double magnitude;        // |c_M|
  double trace_norm_mass;  // ||c_M M||_1
};

struct WeightVector {
  std::vector<WeightEntry> entries;
  double total_magnitude = 0.0;
  double total_trace_norm_mass = 0.0;
  // ||sum c_M M - d_{V,rho}||_F.
  double residual = 0.0;

  const WeightEntry& at(const std::string& label_name) const;
};

// Weights of d_{V,rho} over the C elements. Throws ConsistencyError when the
// reconstruction residual exceeds 1e-6.
WeightVector decompose_difference(const ComplexMatrix& rho, const SubsetSpec& spec);

struct DistinguisherReport {
  // Indexed by z bit.
  double overlap[2];           // <V,z| rho |V,z>
  double trace_diagnostic[2];  // Tr[rho (I_{V,z} - |V|/N I_{[N],z})]
  double difference_norm;      // ||d_{V,rho}||_1

  double max_diagnostic() const;
};

// With workspace qubits the projectors are extended by I_W.
DistinguisherReport distinguisher_diagnostics(const ComplexMatrix& rho, const SubsetSpec& spec,
                                              int workspace_qubits = 0);

struct ControlBlockReport {
  double block_norm;            // ||D||_F of the (a=1, a=0) block of the difference
  double residual_v_prime;      // ||D - (|V'><V'| (x) I) D||_F / ||D||_F
  double residual_v;            // same with |V> in place of |V'>
  double bound;                 // sqrt(|V|/N)
  std::size_t rank;
};

// The (1,0) control block of the controlled in-place difference, compared
// against the rank-2 form sum_z alpha_z |1, V', z><psi_z|.
ControlBlockReport control_block_residual(const ComplexMatrix& rho, const SubsetSpec& spec);

}  // namespace oracle_lab
