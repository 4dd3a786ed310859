#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "oracle_lab/graphs.hpp"
#include "oracle_lab/numerics.hpp"
#include "oracle_lab/oracles.hpp"

namespace oracle_lab {

enum class OracleModel { standard, in_place, phase };

std::string to_string(OracleModel model);
OracleModel parse_model(const std::string& text);

// How the z = -1 table of a sampled element relates to the z = +1 table.
// `independent` draws both from the group (the direct-sum structure of the
// family); `paired` uses the genuine inverse.
enum class InverseCoupling { independent, paired };

enum class FamilyKind { singleton, all_permutations, stabilizing, xor_subgroup, graph_codes };

std::string to_string(FamilyKind kind);

class FunctionFamily {
 public:
  static FunctionFamily singleton(OracleFunction fn);
  // T_empty: all permutations of [2^n].
  static FunctionFamily all_permutations(int n);
  // T_V: permutations with i_V(pi(x)) = i_V(x).
  static FunctionFamily stabilizing(SubsetSpec spec);
  // Each coordinate (x, z) independently uniform over the subgroup of
  // 2^k values whose lowest n - k bits are 0. `bit_budget[2x + zbit]` = k.
  static FunctionFamily xor_subgroup(int n, std::vector<int> bit_budget);
  // d/2 independent factors, each from T_V when a spec is given, else T_empty.
  static FunctionFamily graph_codes(int n, int d, std::optional<SubsetSpec> spec);

  FamilyKind kind() const { return kind_; }
  int n() const { return n_; }
  std::size_t vertex_count() const { return std::size_t{1} << n_; }
  int degree() const { return degree_; }
  std::size_t factor_count() const { return static_cast<std::size_t>(degree_ / 2); }
  const std::optional<SubsetSpec>& spec() const { return spec_; }
  const std::vector<int>& bit_budget() const { return bit_budget_; }
  const std::optional<OracleFunction>& fixed() const { return fixed_; }

  // Elements are bijections (so the in-place model applies).
  bool is_permutation_family() const { return kind_ != FamilyKind::xor_subgroup; }

  // T_empty or T_V with a single factor: the families with closed forms.
  bool is_single_factor_group() const;

  OracleFunction sample(Rng& rng, InverseCoupling coupling) const;

  // Order of the group one factor table is drawn from (N! or |V|!(N-|V|)!),
  // 1 for a singleton, and the largest coordinate subgroup for XOR families.
  double group_order() const;

  // Visits every permutation of the single-factor group (T_empty or T_V).
  void for_each_permutation(const std::function<void(const Permutation&)>& visit) const;

  friend bool operator==(const FunctionFamily& a, const FunctionFamily& b);

 private:
  FamilyKind kind_ = FamilyKind::all_permutations;
  int n_ = 1;
  int degree_ = 2;
  std::optional<SubsetSpec> spec_;
  std::vector<int> bit_budget_;
  std::optional<OracleFunction> fixed_;
};

struct ChannelOptions {
  int workspace_qubits = 0;
  // Adds a control qubit "a" in front (in-place model only).
  bool controlled = false;
  InverseCoupling coupling = InverseCoupling::independent;
  std::size_t chunk_size = 1024;
  std::size_t threads = 0;  // 0: default_thread_count()
  double cap = 1e6;
};

enum class ChannelMethod { monte_carlo, exhaustive, closed_form };

std::string to_string(ChannelMethod method);

struct ChannelResult {
  ComplexMatrix output;
  ChannelMethod method = ChannelMethod::closed_form;
  std::size_t samples = 0;
  // Entrywise standard error of the mean; empty unless sampled.
  Eigen::MatrixXd standard_error;
  double max_standard_error = 0.0;
};

// The layout a family's oracle acts on under `model`:
// standard (c, x, [i,] z), in-place ([a,] x, [i,] z), phase (x, [i,] z),
// with the index register only when the family has several factors and a
// trailing workspace register when requested.
RegisterLayout channel_layout(OracleModel model, const FunctionFamily& family,
                              const ChannelOptions& options = {});

// The action of one oracle U_f on the channel layout.
BasisAction oracle_action(OracleModel model, const OracleFunction& fn, const RegisterLayout& layout);

// (1/m) sum_j U_{f_j} rho U_{f_j}^dagger with f_j drawn from an Rng seeded by
// derive_seed(seed, j). Chunk sums are reduced in chunk order.
ChannelResult monte_carlo_channel(OracleModel model, const FunctionFamily& family,
                                  const ComplexMatrix& rho, std::size_t samples,
                                  std::uint64_t seed, const ChannelOptions& options = {});

// Exact average over the family. Throws CapError when the enumerated group
// exceeds options.cap.
ChannelResult exhaustive_channel(OracleModel model, const FunctionFamily& family,
                                 const ComplexMatrix& rho, const ChannelOptions& options = {});

// Orthogonal projection onto the symmetric subspace of T_empty or T_V,
// applied blockwise over the workspace register.
ChannelResult inplace_channel_exact(const FunctionFamily& family, const ComplexMatrix& rho,
                                    const ChannelOptions& options = {});

// Entrywise multiplication by the averaged phase coefficients.
ChannelResult phase_channel_exact(const FunctionFamily& family, const ComplexMatrix& rho,
                                  const ChannelOptions& options = {});

// Controlled in-place channel on (a, x, z[, w]): the a = 1 block is the
// in-place channel, the off-diagonal control blocks pick up the mean
// unitary E[U_pi].
ChannelResult controlled_inplace_channel_exact(const FunctionFamily& family, const ComplexMatrix& rho,
                                               const ChannelOptions& options = {});

// E[U_pi] on (x, z) for T_empty (|+><+| (x) I) or T_V (|V><V| + |W><W|) (x) I.
ComplexMatrix mean_inplace_unitary(const FunctionFamily& family);

// E[omega^{f^{z1}(x1) - f^{z2}(x2)}] for f drawn from T_empty (spec empty)
// or T_V, with independent branches.
Complex phase_coefficient(int n, const std::optional<SubsetSpec>& spec, std::uint32_t x1, ZBit z1,
                          std::uint32_t x2, ZBit z2);

// All coefficients at once on the (x, z) layout, O(N) setup plus O(N^2).
ComplexMatrix phase_coefficient_matrix(int n, const std::optional<SubsetSpec>& spec);

}  // namespace oracle_lab
