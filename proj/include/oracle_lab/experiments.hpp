#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oracle_lab/channels.hpp"
#include "oracle_lab/graphs.hpp"
#include "oracle_lab/numerics.hpp"

namespace oracle_lab {

// ---------------------------------------------------------------------------
// Hybrid algorithms

// k unitaries interleaved with k randomized queries on (x, z[, w]). The first
// `switch_index` queries use T_empty, the remaining ones T_V; U^(j) is applied
// before query j.
struct HybridSpec {
  std::vector<ComplexMatrix> unitaries;
  std::size_t switch_index = 0;
  ComplexMatrix rho0;
  ComplexMatrix povm;
  OracleModel model = OracleModel::in_place;
  int workspace_qubits = 0;

  // Haar unitaries, a Haar-random pure rho0 and a random POVM element, all
  // derived from `seed`.
  static HybridSpec haar(int n, std::size_t queries, std::size_t switch_index, std::uint64_t seed,
                         OracleModel model = OracleModel::in_place, int workspace_qubits = 0);

  std::size_t queries() const { return unitaries.size(); }
  // Checks dimensions, 0 <= E <= I within 1e-10 and switch_index <= k.
  void validate() const;
};

// Tr[E A_{V,l}[rho0]] with closed-form channels. Without a spec every query
// uses T_empty.
double hybrid_run(const HybridSpec& spec, const std::optional<SubsetSpec>& subset);

// ---------------------------------------------------------------------------
// Phase coefficients

struct PhaseClassRow {
  std::string name;  // e.g. "equal_z/in-out"
  Complex value;
  std::size_t members;  // number of (x1, z1, x2, z2) entries in the class
};

// One row per class of (x1, z1, x2, z2): diagonal, opposite-z and equal-z
// off-diagonal (split by membership in V when a spec is given). Every class
// member is checked to carry the same coefficient.
std::vector<PhaseClassRow> phase_coefficient_table(int n, const std::optional<SubsetSpec>& spec);

// ---------------------------------------------------------------------------
// Censuses

// Y = (1/|S|) sum_{a in S} omega_N^a.
Complex subset_phase_mean(const std::vector<std::uint32_t>& members, std::size_t vertex_count);

struct ChernoffCensus {
  int n = 0;
  double alpha = 0.0;
  std::size_t subset_size = 0;
  std::size_t trials = 0;
  double threshold = 0.0;     // 0.5 N^{-3 alpha / 8}
  double tail_fraction = 0.0; // fraction with |Y| >= threshold
  double target = 0.0;        // N^{-3 alpha / 4}
  double mean_y2 = 0.0;
  double median_y2 = 0.0;
  double q90_y2 = 0.0;
  double q99_y2 = 0.0;
  double max_y2 = 0.0;
  double fraction_y2_above_target = 0.0;
};

// alpha may reach 1 here (|V| = N gives Y = 0).
ChernoffCensus chernoff_census(int n, double alpha, std::size_t trials, std::uint64_t seed);

struct CensusResult {
  std::size_t trials = 0;
  double threshold = 0.0;
  double fraction = 0.0;
  double mean = 0.0;
  double max = 0.0;
};

// Fraction of sampled V with <V|rho|V> >= threshold. rho is N x N.
CensusResult subset_overlap_census(const ComplexMatrix& rho, double alpha, std::size_t trials, double threshold,
                                   std::uint64_t seed);

// Fraction of sampled V with |Tr[I_V E]/|V| - Tr[E]/N| >= threshold.
CensusResult povm_mean_census(const ComplexMatrix& povm, double alpha, std::size_t trials, double threshold,
                              std::uint64_t seed);

// ---------------------------------------------------------------------------
// Distinguishability sweep

enum class RhoStrategy { subset_state, random_pure, maximally_mixed };

std::string to_string(RhoStrategy strategy);
RhoStrategy parse_strategy(const std::string& text);

struct SweepRow {
  int n = 0;
  std::size_t vertex_count = 0;
  std::size_t subset_size = 0;
  std::size_t draws = 0;
  double trace_distance = 0.0;  // mean over draws
  double standard_error = 0.0;
  double min_distance = 0.0;
  double max_distance = 0.0;
  // Phase model: max |coefficient difference| outside the (V,z) x (V,z)
  // blocks divided by N^{alpha - 1}, and the largest in-block difference.
  std::optional<double> off_block_constant;
  std::optional<double> in_block_max;
};

struct SweepFit {
  double slope = 0.0;  // d log(distance) / d log N
  double intercept = 0.0;
  double candidate_alpha_quarter = 0.0;  // -alpha/4
  double candidate_half_minus_alpha = 0.0;  // -(1/2 - alpha)
};

struct SweepResult {
  OracleModel model = OracleModel::phase;
  RhoStrategy strategy = RhoStrategy::random_pure;
  double alpha = 0.0;
  std::uint64_t seed = 0;
  std::vector<SweepRow> rows;
  std::optional<SweepFit> fit;

  bool monotonically_decreasing() const;
  std::string to_csv() const;
};

struct SweepOptions {
  std::size_t draws = 16;
  int workspace_qubits = 0;
};

// ||O_{T_V}[rho] - O_{T_empty}[rho]||_1 with exact channels for every n.
// Draw j at a given n uses derive_seed(seed, 1000 n + j) for both V and rho.
SweepResult distinguishability_sweep(OracleModel model, const std::vector<int>& ns, double alpha,
                                     RhoStrategy strategy, std::uint64_t seed, const SweepOptions& options = {});

}  // namespace oracle_lab
