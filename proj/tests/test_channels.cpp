#include <doctest.h>

#include <cmath>

#include "oracle_lab/channels.hpp"
#include "oracle_lab/error.hpp"
#include "oracle_lab/symmetry.hpp"

using namespace oracle_lab;

namespace {

ComplexMatrix random_rho(std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  return DensityOperator::random(dim, dim, rng).matrix();
}

double diff(const ComplexMatrix& a, const ComplexMatrix& b) { return frobenius_norm(a - b); }

SubsetSpec spec3() { return SubsetSpec::from_vertices(3, 0.34, {0, 1}); }

}  // namespace

TEST_CASE("a singleton family is a single conjugation") {
  Rng rng(3);
  const auto fn = OracleFunction::from_permutation(random_permutation(4, rng));
  const auto family = FunctionFamily::singleton(fn);
  const ComplexMatrix rho = random_rho(8, 5);
  const auto layout = channel_layout(OracleModel::in_place, family);
  const ComplexMatrix expected = conjugate(inplace_action(fn, layout), rho);
  const auto mc = monte_carlo_channel(OracleModel::in_place, family, rho, 17, 9);
  CHECK(diff(mc.output, expected) < 1e-14);
  CHECK(mc.max_standard_error < 1e-6);
  const auto ex = exhaustive_channel(OracleModel::in_place, family, rho);
  CHECK(diff(ex.output, expected) == 0.0);
}

TEST_CASE("in-place T_empty sampling converges to the projection") {
  const auto family = FunctionFamily::all_permutations(2);
  const ComplexMatrix rho = random_rho(8, 11);
  const auto exact = inplace_channel_exact(family, rho);
  const auto mc = monte_carlo_channel(OracleModel::in_place, family, rho, 100000, 42);
  CHECK(mc.method == ChannelMethod::monte_carlo);
  CHECK(mc.samples == 100000);
  // E||mean - exact||_F^2 = sum of squared standard errors.
  const double expected_error = std::sqrt(mc.standard_error.array().square().sum());
  CHECK(diff(mc.output, exact.output) <= 3.0 * expected_error);
  CHECK(std::abs(mc.output.trace() - 1.0) < 1e-9);
}

TEST_CASE("closed-form in-place channels match enumeration") {
  const ComplexMatrix rho = random_rho(16, 21);
  SUBCASE("T_V at n=3, |V|=2 (1440 elements)") {
    const auto family = FunctionFamily::stabilizing(spec3());
    const auto ex = exhaustive_channel(OracleModel::in_place, family, rho);
    CHECK(ex.samples == 1440);
    CHECK(diff(ex.output, inplace_channel_exact(family, rho).output) < 1e-10);
  }
  SUBCASE("T_empty at n=2") {
    const auto family = FunctionFamily::all_permutations(2);
    const ComplexMatrix r = random_rho(8, 22);
    CHECK(diff(exhaustive_channel(OracleModel::in_place, family, r).output,
               inplace_channel_exact(family, r).output) < 1e-10);
  }
  SUBCASE("T_V with |V| = 1") {
    const auto family = FunctionFamily::stabilizing(SubsetSpec::from_vertices(3, 0.1, {5}));
    CHECK(diff(exhaustive_channel(OracleModel::in_place, family, rho).output,
               inplace_channel_exact(family, rho).output) < 1e-10);
  }
}

TEST_CASE("closed-form channels are idempotent") {
  const ComplexMatrix rho = random_rho(16, 31);
  for (const auto& family : {FunctionFamily::all_permutations(3), FunctionFamily::stabilizing(spec3())}) {
    const ComplexMatrix once = inplace_channel_exact(family, rho).output;
    CHECK(diff(inplace_channel_exact(family, once).output, once) < 1e-9);
    // Phase oracles compose additively, so their average is not a projector.
    const ComplexMatrix p1 = phase_channel_exact(family, rho).output;
    CHECK(diff(phase_channel_exact(family, p1).output, p1) > 1e-3);
  }
}

TEST_CASE("phase channel over T_empty scales equal-z off-diagonals by -1/(N-1)") {
  const auto family = FunctionFamily::all_permutations(2);
  ComplexMatrix ones = ComplexMatrix::Constant(8, 8, 1.0);
  const auto ex = exhaustive_channel(OracleModel::phase, family, ones);
  for (int r = 0; r < 8; ++r) {
    for (int s = 0; s < 8; ++s) {
      Complex want;
      if (r == s) want = 1.0;
      else if (r % 2 == s % 2) want = -1.0 / 3.0;
      else want = 0.0;
      CHECK(std::abs(ex.output(r, s) - want) < 1e-12);
    }
  }
  CHECK(diff(ex.output, phase_channel_exact(family, ones).output) < 1e-12);
}

TEST_CASE("phase closed form matches enumeration on T_V") {
  const auto family = FunctionFamily::stabilizing(spec3());
  const ComplexMatrix rho = random_rho(16, 41);
  CHECK(diff(exhaustive_channel(OracleModel::phase, family, rho).output,
             phase_channel_exact(family, rho).output) < 1e-10);
}

TEST_CASE("phase coefficients have magnitude at most one") {
  const auto spec = SubsetSpec::from_vertices(4, 0.4, {1, 6, 11});
  for (std::uint32_t a = 0; a < 16; ++a) {
    for (std::uint32_t b = 0; b < 16; ++b) {
      for (ZBit z1 : {ZBit::plus, ZBit::minus}) {
        for (ZBit z2 : {ZBit::plus, ZBit::minus}) {
          CHECK(std::abs(phase_coefficient(4, spec, a, z1, b, z2)) <= 1.0 + 1e-12);
          CHECK(std::abs(phase_coefficient(4, std::nullopt, a, z1, b, z2)) <= 1.0 + 1e-12);
        }
      }
    }
  }
}

TEST_CASE("oracle conjugation is a representation of the branch group") {
  Rng rng(8);
  const ComplexMatrix rho = random_rho(16, 51);
  const auto layout = RegisterLayout::in_place_plain(8);
  for (int trial = 0; trial < 20; ++trial) {
    const Permutation g1 = random_permutation(8, rng), h1 = random_permutation(8, rng);
    const Permutation g2 = random_permutation(8, rng), h2 = random_permutation(8, rng);
    Permutation g12(8), h12(8);
    for (std::uint32_t x = 0; x < 8; ++x) {
      g12[x] = g1[g2[x]];
      h12[x] = h1[h2[x]];
    }
    const auto f1 = OracleFunction::from_branches(8, {g1}, {h1});
    const auto f2 = OracleFunction::from_branches(8, {g2}, {h2});
    const auto f12 = OracleFunction::from_branches(8, {g12}, {h12});
    const auto u = [&](const OracleFunction& f) { return inplace_action(f, layout); };
    CHECK(diff(conjugate(u(f12), rho), conjugate(u(f1), conjugate(u(f2), rho))) == 0.0);
  }
}

TEST_CASE("paired inverse branches break idempotence") {
  // Genuine (pi, pi^-1) pairs are not closed under the channel average; the
  // deviation is what motivates the independent-branch default.
  const auto family = FunctionFamily::all_permutations(2);
  ChannelOptions paired;
  paired.coupling = InverseCoupling::paired;
  const ComplexMatrix rho = random_rho(8, 61);
  const ComplexMatrix once = exhaustive_channel(OracleModel::in_place, family, rho, paired).output;
  const ComplexMatrix twice = exhaustive_channel(OracleModel::in_place, family, once, paired).output;
  CHECK(diff(once, twice) > 1e-3);
  // Same-z blocks agree with the independent version; only z1 != z2 differs.
  const ComplexMatrix indep = inplace_channel_exact(family, rho).output;
  for (int r = 0; r < 8; ++r) {
    for (int s = 0; s < 8; ++s) {
      if (r % 2 == s % 2) CHECK(std::abs(once(r, s) - indep(r, s)) < 1e-12);
    }
  }
  CHECK_THROWS_AS(inplace_channel_exact(family, rho, paired), ContractError);
}

TEST_CASE("monte carlo determinism and chunking") {
  const auto family = FunctionFamily::stabilizing(spec3());
  const ComplexMatrix rho = random_rho(16, 71);
  ChannelOptions a;
  a.chunk_size = 64;
  ChannelOptions b;
  b.chunk_size = 7;
  b.threads = 3;
  const auto r1 = monte_carlo_channel(OracleModel::phase, family, rho, 500, 5, a);
  const auto r2 = monte_carlo_channel(OracleModel::phase, family, rho, 500, 5, a);
  const auto r3 = monte_carlo_channel(OracleModel::phase, family, rho, 500, 5, b);
  CHECK(diff(r1.output, r2.output) == 0.0);
  CHECK(diff(r1.output, r3.output) < 1e-12);
  const auto other = monte_carlo_channel(OracleModel::phase, family, rho, 500, 6, a);
  CHECK(diff(r1.output, other.output) > 0.0);
}

TEST_CASE("monte carlo error shrinks like 1/sqrt(m)") {
  const auto family = FunctionFamily::all_permutations(2);
  const ComplexMatrix rho = random_rho(8, 81);
  const ComplexMatrix exact = inplace_channel_exact(family, rho).output;
  std::vector<double> logs_m, logs_e;
  for (std::size_t m : {100, 1000, 10000}) {
    double err = 0.0;
    for (std::uint64_t s = 0; s < 8; ++s) {
      err += diff(monte_carlo_channel(OracleModel::in_place, family, rho, m, 1000 + s).output, exact);
    }
    logs_m.push_back(std::log(static_cast<double>(m)));
    logs_e.push_back(std::log(err / 8.0));
  }
  const double slope = (logs_e.back() - logs_e.front()) / (logs_m.back() - logs_m.front());
  CHECK(slope == doctest::Approx(-0.5).epsilon(0.3));
}

TEST_CASE("standard-model channels") {
  const auto family = FunctionFamily::all_permutations(2);
  const auto layout = channel_layout(OracleModel::standard, family);
  CHECK(layout.dim() == 32);
  const ComplexMatrix rho = random_rho(32, 91);
  const auto ex = exhaustive_channel(OracleModel::standard, family, rho);
  CHECK(std::abs(ex.output.trace() - 1.0) < 1e-12);
  CHECK(min_eigenvalue(ex.output) > -1e-10);
  // XOR composition of permutations leaves the family, so no idempotence here.
  const ComplexMatrix twice = exhaustive_channel(OracleModel::standard, family, ex.output).output;
  CHECK(diff(twice, ex.output) > 1e-3);
  const auto mc = monte_carlo_channel(OracleModel::standard, family, rho, 20000, 3);
  CHECK(diff(mc.output, ex.output) <= 3.0 * std::sqrt(mc.standard_error.array().square().sum()));
}

TEST_CASE("graph-code families with several factors") {
  const auto family = FunctionFamily::graph_codes(2, 4, std::nullopt);
  const auto layout = channel_layout(OracleModel::in_place, family);
  CHECK(layout.has("i"));
  CHECK(layout.dim() == 16);
  const ComplexMatrix rho = random_rho(16, 101);
  const auto ex = exhaustive_channel(OracleModel::in_place, family, rho);
  const auto mc = monte_carlo_channel(OracleModel::in_place, family, rho, 20000, 4);
  CHECK(diff(mc.output, ex.output) <= 3.0 * std::sqrt(mc.standard_error.array().square().sum()));
  CHECK_THROWS_AS(inplace_channel_exact(family, rho), ContractError);
}

TEST_CASE("index-register values >= d/2 are rejected") {
  const auto family = FunctionFamily::graph_codes(1, 6, std::nullopt);
  const auto layout = channel_layout(OracleModel::in_place, family);
  CHECK(layout.size_of("i") == 4);
  ComplexMatrix rho = ComplexMatrix::Zero(static_cast<Eigen::Index>(layout.dim()),
                                          static_cast<Eigen::Index>(layout.dim()));
  rho(static_cast<Eigen::Index>(layout.pack({0, 3, 0})), static_cast<Eigen::Index>(layout.pack({0, 3, 0}))) = 1.0;
  CHECK_THROWS_AS(monte_carlo_channel(OracleModel::in_place, family, rho, 4, 1), ValidationError);
}

TEST_CASE("workspace and control registers") {
  const auto family = FunctionFamily::stabilizing(spec3());
  ChannelOptions ws;
  ws.workspace_qubits = 1;
  const ComplexMatrix rho = random_rho(32, 111);
  CHECK(diff(exhaustive_channel(OracleModel::in_place, family, rho, ws).output,
             inplace_channel_exact(family, rho, ws).output) < 1e-10);
  CHECK(diff(exhaustive_channel(OracleModel::phase, family, rho, ws).output,
             phase_channel_exact(family, rho, ws).output) < 1e-10);

  ChannelOptions ctl;
  ctl.controlled = true;
  CHECK(channel_layout(OracleModel::in_place, family, ctl).registers().front().name == "a");
  CHECK(diff(exhaustive_channel(OracleModel::in_place, family, rho, ctl).output,
             controlled_inplace_channel_exact(family, rho, ctl).output) < 1e-10);
  CHECK_THROWS_AS(channel_layout(OracleModel::phase, family, ctl), ContractError);
}

TEST_CASE("xor families") {
  std::vector<int> budget(8, 2);
  budget[2 * 1 + 0] = 1;
  const auto family = FunctionFamily::xor_subgroup(2, budget);
  Rng rng(1);
  for (int t = 0; t < 50; ++t) {
    const auto fn = family.sample(rng, InverseCoupling::independent);
    CHECK(fn.value(1, 0, ZBit::plus) % 2 == 0);
  }
  CHECK_THROWS_AS(monte_carlo_channel(OracleModel::in_place, family, random_rho(8, 1), 1, 1), ContractError);
  const ComplexMatrix rho = random_rho(32, 121);
  const auto ex = exhaustive_channel(OracleModel::standard, family, rho);
  const auto mc = monte_carlo_channel(OracleModel::standard, family, rho, 20000, 9);
  CHECK(diff(mc.output, ex.output) <= 3.0 * std::sqrt(mc.standard_error.array().square().sum()));
  CHECK(diff(exhaustive_channel(OracleModel::standard, family, ex.output).output, ex.output) < 1e-10);
}

TEST_CASE("enumeration cap") {
  const auto family = FunctionFamily::all_permutations(4);
  const ComplexMatrix rho = random_rho(32, 1);
  CHECK_THROWS_AS(exhaustive_channel(OracleModel::in_place, family, rho), CapError);
  ChannelOptions small;
  small.cap = 100;
  CHECK_THROWS_AS(exhaustive_channel(OracleModel::in_place, FunctionFamily::stabilizing(spec3()),
                                     random_rho(16, 1), small),
                  CapError);
}

TEST_CASE("mean unitary of T_V differs from T_empty by a rank-one projector") {
  const auto spec = spec3();
  const ComplexMatrix dm = mean_inplace_unitary(FunctionFamily::stabilizing(spec)) -
                           mean_inplace_unitary(FunctionFamily::all_permutations(3));
  const ComplexVector u = lambda2_witness(spec).amplitudes();
  ComplexMatrix want = ComplexMatrix::Zero(16, 16);
  want(Eigen::seqN(0, 8, 2), Eigen::seqN(0, 8, 2)) = u * u.adjoint();
  want(Eigen::seqN(1, 8, 2), Eigen::seqN(1, 8, 2)) = u * u.adjoint();
  CHECK(diff(dm, want) < 1e-12);
}

TEST_CASE("dimension mismatches are reported") {
  CHECK_THROWS_AS(inplace_channel_exact(FunctionFamily::all_permutations(2), random_rho(6, 1)), DimensionError);
  CHECK_THROWS_AS(monte_carlo_channel(OracleModel::phase, FunctionFamily::all_permutations(2),
                                      random_rho(8, 1), 0, 1),
                  ValidationError);
}
