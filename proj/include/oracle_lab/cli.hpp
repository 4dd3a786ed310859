#pragma once

#include <cstdint>
#include <exception>
#include <iosfwd>
#include <optional>
#include <string>

#include "oracle_lab/graphs.hpp"
#include "oracle_lab/numerics.hpp"

namespace oracle_lab::cli {

enum ExitCode : int {
  kOk = 0,
  kGeneration = 2,  // GenerationError
  kInput = 3,       // bad flags, files, witnesses; Validation/Dimension/Layout/Contract errors
  kCap = 4,         // CapError
  kInvariant = 5,   // ConsistencyError, NumericError, failed internal checks
};

int exit_code_for(const std::exception& e);

// Witness grammar: "uniform" | "subset" | "subset:1,5,9" | "file:path".
// Bare "subset" takes the instance's V when the code file records one and
// otherwise draws V with floor(N^alpha) vertices from derive_seed(seed, 0).
StateVector parse_witness(const std::string& text, int n, const std::optional<SubsetSpec>& instance_subset,
                          double alpha, std::uint64_t seed);

// Runs one command line. Summaries go to `out`, diagnostics to `err`;
// machine-readable results only to the --out file.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace oracle_lab::cli
