#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "oracle_lab/random.hpp"

using namespace oracle_lab;

TEST_CASE("Rng wraps the standard mt19937_64 sequence") {
  // The 10000th output of a default-seeded mt19937_64 is fixed by the standard.
  std::mt19937_64 reference;
  Rng rng(std::mt19937_64::default_seed);
  for (int k = 0; k < 9999; ++k) CHECK(rng.next_u64() == reference());
  CHECK(rng.next_u64() == 9981545732273789042ULL);
}

TEST_CASE("below is in range and roughly uniform") {
  Rng rng(1);
  std::vector<int> counts(7, 0);
  const int draws = 70000;
  for (int k = 0; k < draws; ++k) {
    const auto v = rng.below(7);
    REQUIRE(v < 7);
    ++counts[v];
  }
  for (int c : counts) CHECK(std::abs(c - draws / 7) < 5 * std::sqrt(draws / 7.0));
  CHECK(rng.below(1) == 0);
}

TEST_CASE("uniform01 and normal moments") {
  Rng rng(2);
  const int m = 200000;
  double su = 0.0;
  double sn = 0.0;
  double sn2 = 0.0;
  for (int k = 0; k < m; ++k) {
    const double u = rng.uniform01();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    su += u;
    const double z = rng.normal();
    sn += z;
    sn2 += z * z;
  }
  CHECK(std::abs(su / m - 0.5) < 5 * std::sqrt(1.0 / 12.0 / m));
  CHECK(std::abs(sn / m) < 5 / std::sqrt(m));
  CHECK(std::abs(sn2 / m - 1.0) < 5 * std::sqrt(2.0 / m));
}

TEST_CASE("derive_seed separates streams and is deterministic") {
  CHECK(derive_seed(5, 0) == derive_seed(5, 0));
  CHECK(derive_seed(5, 0) != derive_seed(5, 1));
  CHECK(derive_seed(5, 0) != derive_seed(6, 0));
  // splitmix64 reference value for input 0.
  CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);
}

TEST_CASE("random_permutation is a uniform bijection") {
  Rng rng(3);
  std::map<std::vector<std::uint32_t>, int> counts;
  const int draws = 60000;
  for (int k = 0; k < draws; ++k) {
    auto p = random_permutation(3, rng);
    auto sorted = p;
    std::sort(sorted.begin(), sorted.end());
    REQUIRE(sorted == std::vector<std::uint32_t>{0, 1, 2});
    ++counts[p];
  }
  CHECK(counts.size() == 6);
  for (const auto& [p, c] : counts) CHECK(std::abs(c - draws / 6) < 5 * std::sqrt(draws / 6.0));
}

TEST_CASE("random_subset returns sorted distinct members with uniform marginals") {
  Rng rng(4);
  std::vector<int> hits(10, 0);
  const int draws = 30000;
  for (int k = 0; k < draws; ++k) {
    const auto s = random_subset(10, 3, rng);
    REQUIRE(s.size() == 3);
    REQUIRE(std::is_sorted(s.begin(), s.end()));
    REQUIRE(std::adjacent_find(s.begin(), s.end()) == s.end());
    for (auto v : s) ++hits[v];
  }
  // Each element is in the subset with probability 3/10.
  for (int h : hits) CHECK(std::abs(h - 0.3 * draws) < 5 * std::sqrt(draws * 0.21));
  CHECK(random_subset(5, 5, rng) == std::vector<std::uint32_t>{0, 1, 2, 3, 4});
  CHECK(random_subset(5, 0, rng).empty());
}
