#include "oracle_lab/graphs.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "oracle_lab/error.hpp"

namespace oracle_lab {

void validate_permutation(const Permutation& perm, std::size_t size, std::size_t index) {
  if (perm.size() != size) {
    std::ostringstream msg;
    msg << "permutation " << index << " has length " << perm.size() << ", expected " << size;
    throw ValidationError(msg.str());
  }
  std::vector<std::uint8_t> seen(size, 0);
  for (std::size_t x = 0; x < size; ++x) {
    const auto y = perm[x];
    if (y >= size || seen[y]) {
      std::ostringstream msg;
      msg << "permutation " << index << " is not a bijection on [" << size << "] (entry " << x
          << " -> " << y << ")";
      throw ValidationError(msg.str());
    }
    seen[y] = 1;
  }
}

Permutation invert(const Permutation& perm) {
  Permutation inv(perm.size());
  for (std::size_t x = 0; x < perm.size(); ++x) inv[perm[x]] = static_cast<std::uint32_t>(x);
  return inv;
}

Permutation identity_permutation(std::size_t size) {
  Permutation id(size);
  for (std::size_t x = 0; x < size; ++x) id[x] = static_cast<std::uint32_t>(x);
  return id;
}

GraphCode GraphCode::build(int n, std::vector<Permutation> perms) {
  if (n < 1 || n > 20) throw ValidationError("GraphCode: n must be in [1, 20]");
  if (perms.empty()) throw ValidationError("GraphCode: need at least one permutation factor");
  const std::size_t size = std::size_t{1} << n;
  std::vector<Permutation> inverses;
  inverses.reserve(perms.size());
  for (std::size_t i = 0; i < perms.size(); ++i) {
    validate_permutation(perms[i], size, i);
    inverses.push_back(invert(perms[i]));
  }
  return GraphCode(n, std::move(perms), std::move(inverses));
}

std::size_t subset_size(int n, double alpha) {
  const double raw = std::pow(2.0, n * alpha);
  return static_cast<std::size_t>(std::floor(raw + 1e-9));
}

SubsetSpec::SubsetSpec(int n, double alpha, std::vector<std::uint32_t> vertices)
    : n_(n), alpha_(alpha), vertices_(std::move(vertices)) {
  membership_.assign(vertex_count(), 0);
  for (auto x : vertices_) membership_[x] = 1;
}

SubsetSpec SubsetSpec::from_vertices(int n, double alpha, std::vector<std::uint32_t> vertices) {
  if (n < 1 || n > 24) throw ValidationError("SubsetSpec: n must be in [1, 24]");
  if (!(alpha > 0.0 && alpha < 0.5)) throw ValidationError("SubsetSpec: alpha must lie in (0, 1/2)");
  const std::size_t size = std::size_t{1} << n;
  std::sort(vertices.begin(), vertices.end());
  if (std::adjacent_find(vertices.begin(), vertices.end()) != vertices.end()) {
    throw ValidationError("SubsetSpec: vertices must be distinct");
  }
  if (vertices.empty()) throw ValidationError("SubsetSpec: |V| must be at least 1");
  if (vertices.back() >= size) throw ValidationError("SubsetSpec: vertex out of range");
  const std::size_t expected = subset_size(n, alpha);
  if (vertices.size() != expected) {
    std::ostringstream msg;
    msg << "SubsetSpec: |V| = " << vertices.size() << " but floor(N^alpha) = " << expected;
    throw ValidationError(msg.str());
  }
  return SubsetSpec(n, alpha, std::move(vertices));
}

SubsetSpec SubsetSpec::sample(int n, double alpha, Rng& rng) {
  if (n < 1 || n > 24) throw ValidationError("SubsetSpec: n must be in [1, 24]");
  const std::size_t k = subset_size(n, alpha);
  if (k < 1) throw ValidationError("SubsetSpec: floor(N^alpha) < 1");
  return from_vertices(n, alpha, random_subset(std::size_t{1} << n, k, rng));
}

std::vector<std::uint32_t> SubsetSpec::complement() const {
  std::vector<std::uint32_t> out;
  out.reserve(vertex_count() - vertices_.size());
  for (std::uint32_t x = 0; x < vertex_count(); ++x) {
    if (!membership_[x]) out.push_back(x);
  }
  return out;
}

double Laplacian::quadratic_form(const ComplexVector& psi) const {
  return expectation(matrix, psi).real();
}

namespace {

Eigen::MatrixXd adjacency_of(const GraphCode& code) {
  const auto size = static_cast<Eigen::Index>(code.vertex_count());
  Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(size, size);
  for (std::size_t i = 0; i < code.factor_count(); ++i) {
    const auto& perm = code.factor(i);
    for (std::size_t x = 0; x < perm.size(); ++x) {
      adj(static_cast<Eigen::Index>(x), perm[x]) += 1.0;
      adj(perm[x], static_cast<Eigen::Index>(x)) += 1.0;
    }
  }
  return adj;
}

}  // namespace

Laplacian laplacian_of(const GraphCode& code) {
  Laplacian lap;
  lap.adjacency = adjacency_of(code);
  const auto size = lap.adjacency.rows();
  const Eigen::MatrixXd l =
      static_cast<double>(code.degree()) * Eigen::MatrixXd::Identity(size, size) - lap.adjacency;
  lap.matrix = l.cast<Complex>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(l, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericError("laplacian_of: eigensolver failed");
  const auto& ev = solver.eigenvalues();
  lap.spectrum.assign(ev.data(), ev.data() + ev.size());
  lap.lambda2 = lap.spectrum.size() > 1 ? lap.spectrum[1] : 0.0;
  return lap;
}

double spectral_gap(const GraphCode& code) {
  const Eigen::MatrixXd adj = adjacency_of(code);
  const auto size = adj.rows();
  const Eigen::MatrixXd l =
      static_cast<double>(code.degree()) * Eigen::MatrixXd::Identity(size, size) - adj;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(l, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericError("spectral_gap: eigensolver failed");
  return size > 1 ? solver.eigenvalues()(1) : 0.0;
}

NoInstance sample_no_instance(int n, int d, double epsilon, std::uint64_t seed) {
  if (d < 2 || d % 2 != 0) throw ValidationError("sample_no_instance: d must be even and >= 2");
  if (n < 1 || n > 16) throw ValidationError("sample_no_instance: n must be in [1, 16]");
  constexpr int kMaxRejections = 100;
  const std::size_t size = std::size_t{1} << n;
  Rng rng(seed);
  for (int rejections = 0; rejections < kMaxRejections; ++rejections) {
    std::vector<Permutation> perms;
    for (int i = 0; i < d / 2; ++i) perms.push_back(random_permutation(size, rng));
    GraphCode code = GraphCode::build(n, std::move(perms));
    const double gap = spectral_gap(code);
    if (gap >= epsilon) return NoInstance{std::move(code), gap, rejections};
  }
  std::ostringstream msg;
  msg << "sample_no_instance: " << kMaxRejections << " consecutive samples had lambda2 < " << epsilon
      << " (n=" << n << ", d=" << d << "); try a smaller epsilon";
  throw GenerationError(msg.str());
}

Permutation random_stabilizing_permutation(const SubsetSpec& spec, Rng& rng) {
  auto inside = spec.vertices();
  auto outside = spec.complement();
  auto inside_image = inside;
  auto outside_image = outside;
  rng.shuffle(std::span<std::uint32_t>(inside_image));
  rng.shuffle(std::span<std::uint32_t>(outside_image));
  Permutation perm(spec.vertex_count());
  for (std::size_t k = 0; k < inside.size(); ++k) perm[inside[k]] = inside_image[k];
  for (std::size_t k = 0; k < outside.size(); ++k) perm[outside[k]] = outside_image[k];
  return perm;
}

GraphCode sample_yes_instance(const SubsetSpec& spec, int d, std::uint64_t seed) {
  if (d < 2 || d % 2 != 0) throw ValidationError("sample_yes_instance: d must be even and >= 2");
  if (spec.size() < 1) throw ValidationError("sample_yes_instance: |V| must be at least 1");
  Rng rng(seed);
  std::vector<Permutation> perms;
  for (int i = 0; i < d / 2; ++i) perms.push_back(random_stabilizing_permutation(spec, rng));
  return GraphCode::build(spec.n(), std::move(perms));
}

StateVector lambda2_witness(const SubsetSpec& spec) {
  const auto total = static_cast<double>(spec.vertex_count());
  const auto inside = static_cast<double>(spec.size());
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(spec.vertex_count()));
  const auto outside = spec.complement();
  if (outside.empty()) throw ValidationError("lambda2_witness: V must be a proper subset");
  // Per-vertex amplitudes of sqrt((N-|V|)/N)|V> and -sqrt(|V|/N)|W>.
  const double a = std::sqrt((total - inside) / total) / std::sqrt(inside);
  const double b = -std::sqrt(inside / total) / std::sqrt(total - inside);
  for (auto x : spec.vertices()) v[x] = a;
  for (auto x : outside) v[x] = b;
  return StateVector::normalized(std::move(v));
}

}  // namespace oracle_lab
