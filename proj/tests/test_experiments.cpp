#include <doctest.h>

#include <cmath>

#include "oracle_lab/error.hpp"
#include "oracle_lab/experiments.hpp"

using namespace oracle_lab;

namespace {

double log_choose(double n, double k) { return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1); }

}  // namespace

TEST_CASE("hybrid endpoints") {
  const auto spec_a = SubsetSpec::from_vertices(3, 0.34, {0, 5});
  const auto spec_b = SubsetSpec::from_vertices(3, 0.34, {2, 3});
  for (auto model : {OracleModel::in_place, OracleModel::phase}) {
    HybridSpec h = HybridSpec::haar(3, 3, 3, 11, model);
    // l = k: all NO queries, V does not matter, bit for bit.
    const double a = hybrid_run(h, spec_a);
    CHECK(a == hybrid_run(h, spec_b));
    CHECK(a == hybrid_run(h, std::nullopt));

    // l = 0: every query uses T_V; rebuild by hand.
    h.switch_index = 0;
    ComplexMatrix rho = h.rho0;
    for (const auto& u : h.unitaries) {
      rho = u * rho * u.adjoint();
      const auto family = FunctionFamily::stabilizing(spec_a);
      rho = model == OracleModel::in_place ? inplace_channel_exact(family, rho).output
                                           : phase_channel_exact(family, rho).output;
    }
    CHECK(std::abs(hybrid_run(h, spec_a) - frobenius_inner(h.povm, rho).real()) < 1e-12);
  }
}

TEST_CASE("hybrid telescoping at n = 4, k = 3") {
  const auto spec = SubsetSpec::from_vertices(4, 0.3, {4, 11});
  HybridSpec h = HybridSpec::haar(4, 3, 0, 12);
  std::vector<double> p;
  for (std::size_t ell = 0; ell <= 3; ++ell) {
    h.switch_index = ell;
    const double value = hybrid_run(h, spec);
    CHECK(value >= -1e-12);
    CHECK(value <= 1.0 + 1e-12);
    p.push_back(value);
  }
  double steps = 0.0;
  for (std::size_t k = 1; k < p.size(); ++k) steps += std::abs(p[k] - p[k - 1]);
  CHECK(std::abs(p.front() - p.back()) <= steps + 1e-15);
}

TEST_CASE("hybrid validation") {
  HybridSpec h = HybridSpec::haar(2, 2, 1, 3);
  CHECK_NOTHROW(h.validate());
  HybridSpec bad = h;
  bad.switch_index = 3;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = h;
  bad.povm *= 2.0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = h;
  bad.model = OracleModel::standard;
  CHECK_THROWS_AS(bad.validate(), ContractError);
  bad = h;
  bad.unitaries[1] = ComplexMatrix::Identity(4, 4);
  CHECK_THROWS_AS(bad.validate(), LayoutError);
  CHECK_THROWS_AS(hybrid_run(h, SubsetSpec::from_vertices(3, 0.34, {0, 1})), LayoutError);
  // Workspace qubits widen every matrix.
  const HybridSpec w = HybridSpec::haar(2, 2, 1, 3, OracleModel::in_place, 1);
  CHECK(w.rho0.rows() == 16);
  CHECK_NOTHROW(hybrid_run(w, SubsetSpec::from_vertices(2, 0.25, {1})));
}

TEST_CASE("phase coefficient table") {
  for (int n : {2, 3, 4}) {
    const double big_n = std::ldexp(1.0, n);
    const auto rows = phase_coefficient_table(n, std::nullopt);
    REQUIRE(rows.size() == 3);
    for (const auto& r : rows) {
      if (r.name == "diagonal") CHECK(std::abs(r.value - 1.0) < 1e-12);
      if (r.name == "opposite_z") CHECK(std::abs(r.value) < 1e-12);
      if (r.name == "equal_z") CHECK(std::abs(r.value + 1.0 / (big_n - 1.0)) < 1e-12);
    }
  }
  const auto spec = SubsetSpec::from_vertices(3, 0.34, {0, 1});
  const auto family = FunctionFamily::stabilizing(spec);
  const ComplexMatrix ones = ComplexMatrix::Ones(16, 16);
  const ComplexMatrix enumerated = exhaustive_channel(OracleModel::phase, family, ones).output;
  for (const auto& r : phase_coefficient_table(3, spec)) {
    CHECK(std::abs(r.value) <= 1.0 + 1e-12);
    // Every entry of the class matches the enumerated average.
    for (int row = 0; row < 16; ++row) {
      for (int col = 0; col < 16; ++col) {
        const bool diagonal = row == col;
        const bool equal_z = row % 2 == col % 2;
        std::string name = diagonal ? "diagonal" : (equal_z ? "equal_z" : "opposite_z");
        if (!diagonal) {
          name += std::string("/") + (spec.contains(row / 2) ? "in" : "out") + "-" +
                  (spec.contains(col / 2) ? "in" : "out");
        }
        if (name == r.name) CHECK(std::abs(enumerated(row, col) - r.value) < 1e-10);
      }
    }
  }
}

TEST_CASE("chernoff census edge cases") {
  const ChernoffCensus full = chernoff_census(6, 1.0, 50, 1);
  CHECK(full.subset_size == 64);
  CHECK(full.max_y2 < 1e-24);
  CHECK(full.tail_fraction == 0.0);

  const ChernoffCensus single = chernoff_census(6, 0.1, 50, 1);
  CHECK(single.subset_size == 1);
  CHECK(std::abs(single.mean_y2 - 1.0) < 1e-12);
  CHECK(single.tail_fraction == 1.0);

  const ChernoffCensus a = chernoff_census(10, 0.5, 4000, 3);
  const ChernoffCensus b = chernoff_census(10, 0.5, 4000, 3);
  CHECK(a.tail_fraction == b.tail_fraction);
  CHECK(a.mean_y2 == b.mean_y2);
  // E|Y|^2 = (1/k)(N - k)/(N - 1) for a uniform k-subset of the N-th roots.
  const double k = 32.0;
  const double n = 1024.0;
  CHECK(std::abs(a.mean_y2 - (n - k) / (k * (n - 1.0))) < 0.05 * (n - k) / (k * (n - 1.0)) + 5e-4);
  CHECK(a.threshold == doctest::Approx(0.5 * std::pow(n, -3.0 * 0.5 / 8.0)));
  CHECK_THROWS_AS(chernoff_census(10, 0.0, 10, 1), ValidationError);
  CHECK_THROWS_AS(chernoff_census(10, 0.5, 0, 1), ValidationError);
}

TEST_CASE("subset overlap census") {
  const int n = 10;
  const std::size_t size = 1024;
  Rng rng(4);
  const auto v0 = SubsetSpec::sample(n, 0.3, rng);
  const ComplexMatrix rho_v0 = DensityOperator::pure(StateVector::subset(size, v0.vertices())).matrix();
  const CensusResult r = subset_overlap_census(rho_v0, 0.3, 10000, 0.5, 5);
  CHECK(r.fraction <= 1e-3);

  const ComplexMatrix mixed = DensityOperator::maximally_mixed(size).matrix();
  const CensusResult m = subset_overlap_census(mixed, 0.3, 500, 2.0 / 1024.0, 6);
  CHECK(m.fraction == 0.0);
  CHECK(std::abs(m.max - 1.0 / 1024.0) < 1e-15);

  const ComplexMatrix plus = DensityOperator::pure(StateVector::uniform(size)).matrix();
  const CensusResult p = subset_overlap_census(plus, 0.3, 200, 0.0, 7);
  CHECK(std::abs(p.mean - 8.0 / 1024.0) < 1e-12);
  CHECK(std::abs(p.max - 8.0 / 1024.0) < 1e-12);
  CHECK_THROWS_AS(subset_overlap_census(ComplexMatrix::Identity(6, 6), 0.3, 10, 0.1, 1), DimensionError);
}

TEST_CASE("POVM mean census") {
  const std::size_t size = 1024;
  const ComplexMatrix id = ComplexMatrix::Identity(size, size);
  CHECK(povm_mean_census(id, 0.3, 300, 1e-12, 1).max < 1e-12);
  CHECK(povm_mean_census(ComplexMatrix::Zero(size, size), 0.3, 300, 1e-12, 1).max == 0.0);

  // E = indicator of the lower half; |V| = 8, f(V) = h/8 - 1/2 with h
  // hypergeometric. |f| >= 1/4 iff h <= 2 or h >= 6.
  ComplexMatrix half = ComplexMatrix::Zero(size, size);
  for (std::size_t x = 0; x < size / 2; ++x) half(x, x) = 1.0;
  double exact = 0.0;
  for (int h : {0, 1, 2, 6, 7, 8}) {
    exact += std::exp(log_choose(512, h) + log_choose(512, 8 - h) - log_choose(1024, 8));
  }
  const std::size_t trials = 40000;
  const CensusResult r = povm_mean_census(half, 0.3, trials, 0.25, 2);
  MESSAGE("census " << r.fraction << " vs hypergeometric " << exact);
  CHECK(std::abs(r.fraction - exact) < 5.0 * std::sqrt(exact * (1 - exact) / trials));
  ComplexMatrix not_povm = id * 1.5;
  CHECK_THROWS_AS(povm_mean_census(not_povm, 0.3, 10, 0.1, 1), ValidationError);
}

TEST_CASE("distinguishability sweep") {
  SUBCASE("phase, random pure: decreasing") {
    const SweepResult r = distinguishability_sweep(OracleModel::phase, {4, 5, 6, 7}, 0.25, RhoStrategy::random_pure, 7);
    CHECK(r.monotonically_decreasing());
    REQUIRE(r.fit.has_value());
    CHECK(r.fit->slope < 0.0);
    CHECK(r.fit->candidate_alpha_quarter == doctest::Approx(-0.0625));
    CHECK(r.fit->candidate_half_minus_alpha == doctest::Approx(-0.25));
    for (const auto& row : r.rows) {
      REQUIRE(row.off_block_constant.has_value());
      CHECK(*row.off_block_constant > 0.0);
      CHECK(*row.off_block_constant < 10.0);
      CHECK(row.min_distance <= row.trace_distance);
      CHECK(row.trace_distance <= row.max_distance);
    }
  }
  SUBCASE("in-place, subset state: order one at every n") {
    const SweepResult r = distinguishability_sweep(OracleModel::in_place, {3, 4, 5, 6}, 1.0 / 3.0,
                                                   RhoStrategy::subset_state, 1, {4, 0});
    for (const auto& row : r.rows) CHECK(row.min_distance >= 0.5);
  }
  SUBCASE("maximally mixed: zero") {
    for (auto model : {OracleModel::in_place, OracleModel::phase}) {
      const SweepResult r =
          distinguishability_sweep(model, {3, 4}, 0.3, RhoStrategy::maximally_mixed, 1, {2, 1});
      for (const auto& row : r.rows) CHECK(row.max_distance <= 1e-10);
    }
  }
  SUBCASE("determinism and CSV") {
    const auto a = distinguishability_sweep(OracleModel::phase, {3, 4}, 0.3, RhoStrategy::random_pure, 9, {3, 0});
    const auto b = distinguishability_sweep(OracleModel::phase, {3, 4}, 0.3, RhoStrategy::random_pure, 9, {3, 0});
    CHECK(a.to_csv() == b.to_csv());
    CHECK(a.to_csv().rfind("model,strategy,alpha,n,N,V,draws,trace_distance", 0) == 0);
  }
  CHECK_THROWS_AS(distinguishability_sweep(OracleModel::standard, {3}, 0.3, RhoStrategy::random_pure, 1),
                  ContractError);
  CHECK(parse_strategy(to_string(RhoStrategy::subset_state)) == RhoStrategy::subset_state);
  CHECK_THROWS_AS(parse_strategy("pure"), ValidationError);
}
