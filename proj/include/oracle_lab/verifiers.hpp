#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oracle_lab/channels.hpp"
#include "oracle_lab/graphs.hpp"
#include "oracle_lab/numerics.hpp"

namespace oracle_lab {

struct VerdictReport {
  double fail_probability = 0.0;
  // |<+^n|psi>|^2, the Hadamard-basis branch (QMA checks only).
  double overlap_term = 0.0;
  // Failure probability of the spectral-test branch.
  double spectral_term = 0.0;
  // <psi|L|psi>/(2d) for a fixed code, or the exact family average.
  std::optional<double> predicted;
  std::optional<double> standard_error;
  std::size_t samples = 0;
  std::string method = "exact";
};

// Simulates the swap-test circuit on (c, x, i, z): |0>|psi>|i>|+>, one
// standard query, swap c and x where z = -1, Hadamard on z; fails on z = -1.
// The uniform choice of i is taken as an exact mixture.
VerdictReport spectral_test_standard(const GraphCode& code, const StateVector& psi);

// Simulates the controlled in-place circuit on (a, x, i, z): |+>|psi>|i>|+1>,
// one controlled query, Hadamard on a; fails on a = 1.
VerdictReport spectral_test_inplace(const GraphCode& code, const StateVector& psi);

// (1/(d/2)) sum_i sum_x |a_x - a_{f(x,i)}|^2 / 4, evaluated directly.
double spectral_fail_direct(const GraphCode& code, const StateVector& psi);

// FAIL = 1/2 |<+|psi>|^2 + 1/2 spectral, as an exact convex combination.
VerdictReport qma_verify(const GraphCode& code, const StateVector& witness,
                         OracleModel model = OracleModel::standard);

struct RandomizedCheckOptions {
  // 0: use the exact family average; otherwise Monte-Carlo over sampled codes.
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

// QMA check against a randomized graph-code family (configuration-model NO
// family, or the YES family with a subset spec). The exact spectral term is
// (1 - |<+|psi>|^2)/2 for NO and (1 - |<V|psi>|^2 - |<W|psi>|^2)/2 for YES.
VerdictReport qma_verify_randomized(const FunctionFamily& family, const StateVector& witness,
                                    const RandomizedCheckOptions& options = {});

// Exact average spectral term of a graph-code family.
double expected_spectral_fail(const FunctionFamily& family, const StateVector& psi);

// Draws one code from a graph-code family.
GraphCode sample_code(const FunctionFamily& family, Rng& rng);

struct SpectralAverage {
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t samples = 0;
};

// Mean spectral-test failure over codes sampled from the family; sample j
// uses derive_seed(seed, j).
SpectralAverage spectral_average(const FunctionFamily& family, const StateVector& psi, std::size_t samples,
                                 std::uint64_t seed);

// QMA check where every query is one uniformly random permutation (d = 2).
// The spectral term is sampled; `predicted` is the d = 4 configuration-model
// expectation, which is the same number.
VerdictReport qma_verify_permutation_no(int n, const StateVector& witness, std::size_t samples,
                                        std::uint64_t seed);

// Prepares |0^n>|x, z>, applies one standard query averaged over the XOR
// family, and accepts when the first register is even (lowest bit 0).
// Exact: enumerates the queried coordinate's subgroup.
double qcma_xor_verify(const FunctionFamily& family, std::uint32_t x, ZBit z);

}  // namespace oracle_lab
