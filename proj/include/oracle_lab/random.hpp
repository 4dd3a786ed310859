#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace oracle_lab {

// Deterministic randomness used everywhere in the project.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. Everything built on top of it (bounded integers, shuffles,
// doubles, normals) is implemented here rather than through the
// implementation-defined std distributions, so a given seed produces
// bit-identical results with any standard library.
//
// Seed derivation: a child stream k of seed s is seeded with
// splitmix64(s ^ splitmix64(k + 0x9e3779b97f4a7c15)).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform integer in [0, bound), unbiased (Lemire's multiply-and-reject).
  std::uint64_t below(std::uint64_t bound);

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01();

  // Standard normal via Box-Muller (one value per call, the pair's second
  // half is cached).
  double normal();

  // Fisher-Yates shuffle, iterating from the back.
  template <typename T>
  void shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// Uniformly random permutation of [0, size).
std::vector<std::uint32_t> random_permutation(std::size_t size, Rng& rng);

// Uniform k-subset of [0, universe) via Floyd's algorithm, returned sorted.
std::vector<std::uint32_t> random_subset(std::size_t universe, std::size_t k, Rng& rng);

}  // namespace oracle_lab
