#include "oracle_lab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "oracle_lab/error.hpp"
#include "oracle_lab/parallel.hpp"

namespace oracle_lab {

// ---------------------------------------------------------------------------
// Hybrid algorithms

namespace {

int n_from_dim(std::size_t dim, int workspace_qubits) {
  const std::size_t inner = dim >> workspace_qubits;
  int n = 0;
  while ((std::size_t{2} << n) < inner) ++n;
  if ((std::size_t{2} << n) != inner || (inner << workspace_qubits) != dim || n < 1) {
    throw LayoutError("hybrid: dimension is not 2N * 2^w for the given workspace");
  }
  return n;
}

}  // namespace

HybridSpec HybridSpec::haar(int n, std::size_t queries, std::size_t switch_index, std::uint64_t seed,
                            OracleModel model, int workspace_qubits) {
  const std::size_t dim = (std::size_t{2} << n) << workspace_qubits;
  HybridSpec spec;
  Rng unitary_rng(derive_seed(seed, 0));
  for (std::size_t j = 0; j < queries; ++j) spec.unitaries.push_back(haar_unitary(dim, unitary_rng));
  Rng state_rng(derive_seed(seed, 1));
  spec.rho0 = DensityOperator::pure(StateVector::random(dim, state_rng)).matrix();
  Rng povm_rng(derive_seed(seed, 2));
  spec.povm = random_povm_element(dim, povm_rng);
  spec.switch_index = switch_index;
  spec.model = model;
  spec.workspace_qubits = workspace_qubits;
  spec.validate();
  return spec;
}

void HybridSpec::validate() const {
  if (model == OracleModel::standard) throw ContractError("hybrid runs support the in-place and phase models");
  if (switch_index > unitaries.size()) throw ValidationError("hybrid: switch index exceeds the query count");
  const auto dim = rho0.rows();
  n_from_dim(static_cast<std::size_t>(dim), workspace_qubits);
  if (rho0.cols() != dim || povm.rows() != dim || povm.cols() != dim) {
    throw LayoutError("hybrid: rho0 and E must share one square dimension");
  }
  for (const auto& u : unitaries) {
    if (u.rows() != dim || u.cols() != dim) throw LayoutError("hybrid: unitary dimension mismatch");
  }
  if (!is_hermitian(povm, tol::kHermitianInput)) throw ValidationError("hybrid: E is not Hermitian");
  const auto eig = hermitian_eigensystem(povm);
  if (eig.values.front() < -1e-10 || eig.values.back() > 1.0 + 1e-10) {
    throw ValidationError("hybrid: E must satisfy 0 <= E <= I");
  }
}

double hybrid_run(const HybridSpec& spec, const std::optional<SubsetSpec>& subset) {
  spec.validate();
  const int n = n_from_dim(static_cast<std::size_t>(spec.rho0.rows()), spec.workspace_qubits);
  if (subset && subset->n() != n) throw LayoutError("hybrid: subset spec has a different n");
  const FunctionFamily no = FunctionFamily::all_permutations(n);
  const FunctionFamily yes = subset ? FunctionFamily::stabilizing(*subset) : no;
  ChannelOptions options;
  options.workspace_qubits = spec.workspace_qubits;
  ComplexMatrix rho = spec.rho0;
  for (std::size_t j = 0; j < spec.queries(); ++j) {
    rho = spec.unitaries[j] * rho * spec.unitaries[j].adjoint();
    const FunctionFamily& family = j < spec.switch_index ? no : yes;
    rho = spec.model == OracleModel::in_place ? inplace_channel_exact(family, rho, options).output
                                              : phase_channel_exact(family, rho, options).output;
  }
  return frobenius_inner(spec.povm, rho).real();
}

// ---------------------------------------------------------------------------
// Phase coefficients

std::vector<PhaseClassRow> phase_coefficient_table(int n, const std::optional<SubsetSpec>& spec) {
  if (n < 1 || n > 12) throw ValidationError("phase_coefficient_table: n must lie in [1, 12]");
  if (spec && spec->n() != n) throw ValidationError("phase_coefficient_table: spec has a different n");
  const std::uint32_t size = 1U << n;
  const auto part = [&](std::uint32_t x) { return spec ? (spec->contains(x) ? "in" : "out") : ""; };
  const ComplexMatrix coeff = phase_coefficient_matrix(n, spec);
  std::map<std::string, PhaseClassRow> rows;
  for (std::uint32_t x1 = 0; x1 < size; ++x1) {
    for (std::uint32_t x2 = 0; x2 < size; ++x2) {
      for (std::uint32_t z1 = 0; z1 < 2; ++z1) {
        for (std::uint32_t z2 = 0; z2 < 2; ++z2) {
          std::string name;
          if (x1 == x2 && z1 == z2) {
            name = "diagonal";
          } else {
            name = z1 == z2 ? "equal_z" : "opposite_z";
            if (spec) name += std::string("/") + part(x1) + "-" + part(x2);
          }
          const Complex c = coeff(2 * x1 + z1, 2 * x2 + z2);
          auto [it, fresh] = rows.try_emplace(name, PhaseClassRow{name, c, 0});
          if (!fresh && std::abs(it->second.value - c) > 1e-12) {
            throw ConsistencyError("phase_coefficient_table: class '" + name + "' is not constant");
          }
          ++it->second.members;
        }
      }
    }
  }
  std::vector<PhaseClassRow> out;
  for (auto& [name, row] : rows) out.push_back(row);
  return out;
}

// ---------------------------------------------------------------------------
// Censuses

Complex subset_phase_mean(const std::vector<std::uint32_t>& members, std::size_t vertex_count) {
  if (members.empty()) throw ValidationError("subset_phase_mean: empty subset");
  Complex s(0.0, 0.0);
  for (auto a : members) {
    if (a >= vertex_count) throw ValidationError("subset_phase_mean: member out of range");
    s += std::polar(1.0, 2.0 * std::numbers::pi * a / static_cast<double>(vertex_count));
  }
  return s / static_cast<double>(members.size());
}

namespace {

std::size_t census_subset_size(int n, double alpha) {
  const std::size_t k = subset_size(n, alpha);
  if (k < 1) throw ValidationError("census: floor(N^alpha) must be at least 1");
  if (k > (std::size_t{1} << n)) throw ValidationError("census: floor(N^alpha) exceeds N");
  return k;
}

int n_of_square(const ComplexMatrix& m, const char* what) {
  const auto size = static_cast<std::size_t>(m.rows());
  int n = 0;
  while ((std::size_t{1} << n) < size) ++n;
  if (m.rows() != m.cols() || (std::size_t{1} << n) != size || n < 1) {
    throw DimensionError(std::string(what) + " must be N x N with N a power of two");
  }
  return n;
}

double quantile(std::vector<double> values, double q) {
  const auto idx = static_cast<std::size_t>(std::floor(q * static_cast<double>(values.size() - 1)));
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(idx), values.end());
  return values[idx];
}

}  // namespace

ChernoffCensus chernoff_census(int n, double alpha, std::size_t trials, std::uint64_t seed) {
  if (trials < 1) throw ValidationError("chernoff_census: need at least one trial");
  if (n < 1 || n > 24) throw ValidationError("chernoff_census: n must lie in [1, 24]");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ValidationError("chernoff_census: alpha must lie in (0, 1]");
  const std::size_t size = std::size_t{1} << n;
  const std::size_t k = census_subset_size(n, alpha);
  const double big_n = static_cast<double>(size);

  std::vector<Complex> omega(size);
  for (std::size_t a = 0; a < size; ++a) omega[a] = std::polar(1.0, 2.0 * std::numbers::pi * a / big_n);

  ChernoffCensus out;
  out.n = n;
  out.alpha = alpha;
  out.subset_size = k;
  out.trials = trials;
  out.threshold = 0.5 * std::pow(big_n, -3.0 * alpha / 8.0);
  out.target = std::pow(big_n, -3.0 * alpha / 4.0);

  std::vector<double> y2(trials);
  parallel_for(trials, [&](std::size_t j) {
    Rng rng(derive_seed(seed, j));
    Complex s(0.0, 0.0);
    for (auto a : random_subset(size, k, rng)) s += omega[a];
    y2[j] = std::norm(s / static_cast<double>(k));
  });
  std::size_t tail = 0;
  std::size_t above = 0;
  double sum = 0.0;
  for (double v : y2) {
    if (std::sqrt(v) >= out.threshold) ++tail;
    if (v >= out.target) ++above;
    sum += v;
    out.max_y2 = std::max(out.max_y2, v);
  }
  const auto t = static_cast<double>(trials);
  out.tail_fraction = static_cast<double>(tail) / t;
  out.fraction_y2_above_target = static_cast<double>(above) / t;
  out.mean_y2 = sum / t;
  out.median_y2 = quantile(y2, 0.5);
  out.q90_y2 = quantile(y2, 0.9);
  out.q99_y2 = quantile(y2, 0.99);
  return out;
}

namespace {

template <typename Stat>
CensusResult run_census(int n, double alpha, std::size_t trials, double threshold, std::uint64_t seed,
                        Stat&& stat) {
  if (trials < 1) throw ValidationError("census: need at least one trial");
  const std::size_t k = census_subset_size(n, alpha);
  std::vector<double> values(trials);
  parallel_for(trials, [&](std::size_t j) {
    Rng rng(derive_seed(seed, j));
    values[j] = stat(random_subset(std::size_t{1} << n, k, rng));
  });
  CensusResult out;
  out.trials = trials;
  out.threshold = threshold;
  std::size_t hits = 0;
  double sum = 0.0;
  out.max = values.front();
  for (double v : values) {
    if (v >= threshold) ++hits;
    sum += v;
    out.max = std::max(out.max, v);
  }
  out.fraction = static_cast<double>(hits) / static_cast<double>(trials);
  out.mean = sum / static_cast<double>(trials);
  return out;
}

}  // namespace

CensusResult subset_overlap_census(const ComplexMatrix& rho, double alpha, std::size_t trials, double threshold,
                                   std::uint64_t seed) {
  const int n = n_of_square(rho, "subset_overlap_census: rho");
  DensityOperator check(rho);
  return run_census(n, alpha, trials, threshold, seed, [&](const std::vector<std::uint32_t>& v) {
    Complex s(0.0, 0.0);
    for (auto x : v) {
      for (auto y : v) s += rho(x, y);
    }
    return s.real() / static_cast<double>(v.size());
  });
}

CensusResult povm_mean_census(const ComplexMatrix& povm, double alpha, std::size_t trials, double threshold,
                              std::uint64_t seed) {
  const int n = n_of_square(povm, "povm_mean_census: E");
  if (!is_hermitian(povm, tol::kHermitianInput)) throw ValidationError("povm_mean_census: E is not Hermitian");
  const auto eig = hermitian_eigensystem(povm);
  if (eig.values.front() < -1e-10 || eig.values.back() > 1.0 + 1e-10) {
    throw ValidationError("povm_mean_census: E must satisfy 0 <= E <= I");
  }
  const double mean_all = povm.trace().real() / static_cast<double>(povm.rows());
  return run_census(n, alpha, trials, threshold, seed, [&](const std::vector<std::uint32_t>& v) {
    double s = 0.0;
    for (auto x : v) s += povm(x, x).real();
    return std::abs(s / static_cast<double>(v.size()) - mean_all);
  });
}

// ---------------------------------------------------------------------------
// Distinguishability sweep

std::string to_string(RhoStrategy strategy) {
  switch (strategy) {
    case RhoStrategy::subset_state: return "subset";
    case RhoStrategy::random_pure: return "random";
    case RhoStrategy::maximally_mixed: return "mixed";
  }
  return "unknown";
}

RhoStrategy parse_strategy(const std::string& text) {
  if (text == "subset") return RhoStrategy::subset_state;
  if (text == "random") return RhoStrategy::random_pure;
  if (text == "mixed") return RhoStrategy::maximally_mixed;
  throw ValidationError("unknown rho strategy '" + text + "' (expected subset, random or mixed)");
}

bool SweepResult::monotonically_decreasing() const {
  for (std::size_t k = 1; k < rows.size(); ++k) {
    if (!(rows[k].trace_distance < rows[k - 1].trace_distance)) return false;
  }
  return true;
}

std::string SweepResult::to_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "model,strategy,alpha,n,N,V,draws,trace_distance,standard_error,min,max,off_block_constant,in_block_max\n";
  for (const auto& r : rows) {
    out << to_string(model) << ',' << to_string(strategy) << ',' << alpha << ',' << r.n << ',' << r.vertex_count
        << ',' << r.subset_size << ',' << r.draws << ',' << r.trace_distance << ',' << r.standard_error << ','
        << r.min_distance << ',' << r.max_distance << ',';
    if (r.off_block_constant) out << *r.off_block_constant;
    out << ',';
    if (r.in_block_max) out << *r.in_block_max;
    out << '\n';
  }
  return out.str();
}

namespace {

ComplexMatrix strategy_rho(RhoStrategy strategy, const SubsetSpec& spec, int workspace_qubits, Rng& rng) {
  const std::size_t inner = 2 * spec.vertex_count();
  const std::size_t dim = inner << workspace_qubits;
  switch (strategy) {
    case RhoStrategy::maximally_mixed: return DensityOperator::maximally_mixed(dim).matrix();
    case RhoStrategy::random_pure: return DensityOperator::pure(StateVector::random(dim, rng)).matrix();
    case RhoStrategy::subset_state: {
      // |V, +1> with the workspace in |0>.
      ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dim));
      const double amp = 1.0 / std::sqrt(static_cast<double>(spec.size()));
      for (auto x : spec.vertices()) {
        v[static_cast<Eigen::Index>((2 * x + static_cast<std::size_t>(ZBit::plus)) << workspace_qubits)] = amp;
      }
      return DensityOperator::pure(StateVector(std::move(v))).matrix();
    }
  }
  throw ContractError("unknown strategy");
}

// Coefficient differences between T_V and T_empty, split by whether both
// entries sit in the (V, z) x (V, z) blocks.
std::pair<double, double> phase_block_split(const SubsetSpec& spec) {
  const ComplexMatrix delta =
      phase_coefficient_matrix(spec.n(), spec) - phase_coefficient_matrix(spec.n(), std::nullopt);
  double off = 0.0;
  double in = 0.0;
  for (Eigen::Index s = 0; s < delta.cols(); ++s) {
    for (Eigen::Index r = 0; r < delta.rows(); ++r) {
      const bool inside = spec.contains(static_cast<std::uint32_t>(r / 2)) && spec.contains(static_cast<std::uint32_t>(s / 2));
      (inside ? in : off) = std::max(inside ? in : off, std::abs(delta(r, s)));
    }
  }
  return {off, in};
}

}  // namespace

SweepResult distinguishability_sweep(OracleModel model, const std::vector<int>& ns, double alpha,
                                     RhoStrategy strategy, std::uint64_t seed, const SweepOptions& options) {
  if (model == OracleModel::standard) throw ContractError("the sweep supports the in-place and phase models");
  if (ns.empty()) throw ValidationError("distinguishability_sweep: empty n list");
  if (options.draws < 1) throw ValidationError("distinguishability_sweep: need at least one draw");
  SweepResult result;
  result.model = model;
  result.strategy = strategy;
  result.alpha = alpha;
  result.seed = seed;
  result.rows.resize(ns.size());

  ChannelOptions channel_options;
  channel_options.workspace_qubits = options.workspace_qubits;

  parallel_for(ns.size(), [&](std::size_t g) {
    const int n = ns[g];
    if (n < 1 || n > 9) throw ValidationError("distinguishability_sweep: n must lie in [1, 9]");
    SweepRow row;
    row.n = n;
    row.vertex_count = std::size_t{1} << n;
    row.draws = options.draws;
    std::vector<double> values;
    for (std::size_t j = 0; j < options.draws; ++j) {
      Rng rng(derive_seed(seed, 1000 * static_cast<std::uint64_t>(n) + j));
      const SubsetSpec spec = SubsetSpec::sample(n, alpha, rng);
      row.subset_size = spec.size();
      const ComplexMatrix rho = strategy_rho(strategy, spec, options.workspace_qubits, rng);
      const FunctionFamily yes = FunctionFamily::stabilizing(spec);
      const FunctionFamily no = FunctionFamily::all_permutations(n);
      ComplexMatrix d;
      if (model == OracleModel::in_place) {
        d = inplace_channel_exact(yes, rho, channel_options).output - inplace_channel_exact(no, rho, channel_options).output;
      } else {
        d = phase_channel_exact(yes, rho, channel_options).output - phase_channel_exact(no, rho, channel_options).output;
        const auto [off, in] = phase_block_split(spec);
        const double scale = std::pow(static_cast<double>(row.vertex_count), alpha - 1.0);
        row.off_block_constant = std::max(row.off_block_constant.value_or(0.0), off / scale);
        row.in_block_max = std::max(row.in_block_max.value_or(0.0), in);
      }
      values.push_back(nuclear_norm(d));
    }
    double sum = 0.0;
    double sum_sq = 0.0;
    for (double v : values) {
      sum += v;
      sum_sq += v * v;
    }
    const auto m = static_cast<double>(values.size());
    row.trace_distance = sum / m;
    row.min_distance = *std::min_element(values.begin(), values.end());
    row.max_distance = *std::max_element(values.begin(), values.end());
    if (values.size() > 1) {
      row.standard_error = std::sqrt(std::max(0.0, (sum_sq - m * row.trace_distance * row.trace_distance) / (m - 1.0)) / m);
    }
    result.rows[g] = row;
  });

  // Least squares of log(distance) on log N where every distance is positive.
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& r : result.rows) {
    if (r.trace_distance > 1e-12) {
      xs.push_back(std::log(static_cast<double>(r.vertex_count)));
      ys.push_back(std::log(r.trace_distance));
    }
  }
  if (xs.size() >= 2) {
    const auto k = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sx += xs[i];
      sy += ys[i];
      sxx += xs[i] * xs[i];
      sxy += xs[i] * ys[i];
    }
    SweepFit fit;
    fit.slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    fit.intercept = (sy - fit.slope * sx) / k;
    fit.candidate_alpha_quarter = -alpha / 4.0;
    fit.candidate_half_minus_alpha = -(0.5 - alpha);
    result.fit = fit;
  }
  return result;
}

}  // namespace oracle_lab
