#include "oracle_lab/oracles.hpp"

#include <algorithm>
#include <optional>
#include <cmath>
#include <numbers>
#include <sstream>

#include "oracle_lab/error.hpp"

namespace oracle_lab {

RegisterLayout::RegisterLayout(std::vector<Register> registers) : registers_(std::move(registers)) {
  if (registers_.empty()) throw LayoutError("RegisterLayout: no registers");
  strides_.assign(registers_.size(), 1);
  dim_ = 1;
  for (std::size_t k = registers_.size(); k-- > 0;) {
    if (registers_[k].size == 0) throw LayoutError("RegisterLayout: register '" + registers_[k].name + "' is empty");
    for (std::size_t j = k + 1; j < registers_.size(); ++j) {
      if (registers_[j].name == registers_[k].name) {
        throw LayoutError("RegisterLayout: duplicate register '" + registers_[k].name + "'");
      }
    }
    strides_[k] = dim_;
    dim_ *= registers_[k].size;
  }
}

std::size_t index_register_size(int degree) {
  if (degree < 2 || degree % 2 != 0) throw ValidationError("degree must be even and >= 2");
  int bits = 0;
  while ((1 << bits) < degree) ++bits;
  return std::size_t{1} << (bits - 1);
}

RegisterLayout RegisterLayout::standard(std::size_t vertex_count, int degree) {
  return RegisterLayout({{"c", vertex_count},
                         {"x", vertex_count},
                         {"i", index_register_size(degree)},
                         {"z", 2}});
}

RegisterLayout RegisterLayout::standard_plain(std::size_t vertex_count) {
  return RegisterLayout({{"c", vertex_count}, {"x", vertex_count}, {"z", 2}});
}

RegisterLayout RegisterLayout::in_place(std::size_t vertex_count, int degree, bool controlled) {
  std::vector<Register> regs;
  if (controlled) regs.push_back({"a", 2});
  regs.push_back({"x", vertex_count});
  regs.push_back({"i", index_register_size(degree)});
  regs.push_back({"z", 2});
  return RegisterLayout(std::move(regs));
}

RegisterLayout RegisterLayout::in_place_plain(std::size_t vertex_count) {
  return RegisterLayout({{"x", vertex_count}, {"z", 2}});
}

RegisterLayout RegisterLayout::phase(std::size_t vertex_count) {
  return in_place_plain(vertex_count);
}

RegisterLayout RegisterLayout::with_workspace(int qubits) const {
  if (qubits < 0) throw LayoutError("workspace qubits must be non-negative");
  if (qubits == 0) return *this;
  auto regs = registers_;
  regs.push_back({"w", std::size_t{1} << qubits});
  return RegisterLayout(std::move(regs));
}

bool RegisterLayout::has(const std::string& name) const {
  return std::any_of(registers_.begin(), registers_.end(),
                     [&](const Register& r) { return r.name == name; });
}

std::size_t RegisterLayout::position(const std::string& name) const {
  for (std::size_t k = 0; k < registers_.size(); ++k) {
    if (registers_[k].name == name) return k;
  }
  throw LayoutError("layout has no register '" + name + "'");
}

std::size_t RegisterLayout::size_of(const std::string& name) const {
  return registers_[position(name)].size;
}

std::vector<std::size_t> RegisterLayout::unpack(std::size_t index) const {
  std::vector<std::size_t> values(registers_.size());
  for (std::size_t k = 0; k < registers_.size(); ++k) {
    values[k] = (index / strides_[k]) % registers_[k].size;
  }
  return values;
}

std::size_t RegisterLayout::pack(const std::vector<std::size_t>& values) const {
  if (values.size() != registers_.size()) throw LayoutError("pack: wrong number of register values");
  std::size_t index = 0;
  for (std::size_t k = 0; k < registers_.size(); ++k) {
    if (values[k] >= registers_[k].size) throw LayoutError("pack: value out of range for '" + registers_[k].name + "'");
    index += values[k] * strides_[k];
  }
  return index;
}

bool operator==(const RegisterLayout& a, const RegisterLayout& b) {
  if (a.registers_.size() != b.registers_.size()) return false;
  for (std::size_t k = 0; k < a.registers_.size(); ++k) {
    if (a.registers_[k].name != b.registers_[k].name || a.registers_[k].size != b.registers_[k].size) {
      return false;
    }
  }
  return true;
}

OracleFunction::OracleFunction(std::size_t domain_size, std::vector<std::vector<std::uint32_t>> forward,
                               std::vector<std::vector<std::uint32_t>> inverse_branch)
    : domain_size_(domain_size), forward_(std::move(forward)), inverse_branch_(std::move(inverse_branch)) {
  if (forward_.empty() || forward_.size() != inverse_branch_.size()) {
    throw ValidationError("OracleFunction: need matching, non-empty forward and inverse tables");
  }
  is_permutation_ = true;
  has_true_inverse_ = true;
  for (std::size_t i = 0; i < forward_.size(); ++i) {
    for (const auto* table : {&forward_[i], &inverse_branch_[i]}) {
      if (table->size() != domain_size_) throw ValidationError("OracleFunction: table has wrong length");
      for (auto y : *table) {
        if (y >= domain_size_) throw ValidationError("OracleFunction: value out of range");
      }
      try {
        validate_permutation(*table, domain_size_, i);
      } catch (const ValidationError&) {
        is_permutation_ = false;
      }
    }
    if (!is_permutation_) {
      has_true_inverse_ = false;
      continue;
    }
    for (std::size_t x = 0; x < domain_size_; ++x) {
      if (inverse_branch_[i][forward_[i][x]] != x) {
        has_true_inverse_ = false;
        break;
      }
    }
  }
}

OracleFunction OracleFunction::from_code(const GraphCode& code) {
  std::vector<std::vector<std::uint32_t>> forward;
  std::vector<std::vector<std::uint32_t>> backward;
  for (std::size_t i = 0; i < code.factor_count(); ++i) {
    forward.push_back(code.factor(i));
    backward.push_back(code.inverse_factor(i));
  }
  return OracleFunction(code.vertex_count(), std::move(forward), std::move(backward));
}

OracleFunction OracleFunction::from_permutation(const Permutation& perm) {
  validate_permutation(perm, perm.size(), 0);
  return OracleFunction(perm.size(), {perm}, {invert(perm)});
}

OracleFunction OracleFunction::from_branches(std::size_t domain_size,
                                             std::vector<std::vector<std::uint32_t>> forward,
                                             std::vector<std::vector<std::uint32_t>> inverse_branch) {
  return OracleFunction(domain_size, std::move(forward), std::move(inverse_branch));
}

namespace {

struct OracleRegisters {
  std::size_t x;
  std::size_t z;
  std::optional<std::size_t> i;
};

OracleRegisters locate(const OracleFunction& fn, const RegisterLayout& layout) {
  OracleRegisters regs{layout.position("x"), layout.position("z"), std::nullopt};
  if (layout.size_of("x") != fn.domain_size()) {
    throw LayoutError("x register size does not match the function's domain");
  }
  if (layout.size_of("z") != 2) throw LayoutError("z register must have two levels");
  if (layout.has("i")) {
    regs.i = layout.position("i");
  } else if (fn.factor_count() != 1) {
    throw LayoutError("layout has no index register but the function has several factors");
  }
  return regs;
}

BasisAction identity_action(std::size_t dim) {
  BasisAction action;
  action.target.resize(dim);
  for (std::size_t k = 0; k < dim; ++k) action.target[k] = k;
  action.invalid.assign(dim, 0);
  return action;
}

void require_valid_support(const BasisAction& action, const ComplexVector& v) {
  for (std::size_t k = 0; k < action.dim(); ++k) {
    if (action.invalid[k] && v[static_cast<Eigen::Index>(k)] != Complex(0.0, 0.0)) {
      throw ValidationError("state has amplitude on an index-register value >= d/2");
    }
  }
}

}  // namespace

BasisAction standard_action(const OracleFunction& fn, const RegisterLayout& layout) {
  if (!layout.has("c")) throw LayoutError("standard oracle needs a 'c' register");
  const auto regs = locate(fn, layout);
  const std::size_t c_pos = layout.position("c");
  if (layout.size_of("c") != fn.domain_size()) throw LayoutError("c register size must equal N");
  if ((fn.domain_size() & (fn.domain_size() - 1)) != 0) {
    throw LayoutError("standard oracle needs N to be a power of two");
  }
  BasisAction action = identity_action(layout.dim());
  for (std::size_t k = 0; k < layout.dim(); ++k) {
    const std::size_t factor = regs.i ? layout.digit(k, *regs.i) : 0;
    if (factor >= fn.factor_count()) {
      action.invalid[k] = 1;
      continue;
    }
    const auto z = static_cast<ZBit>(layout.digit(k, regs.z));
    const auto x = static_cast<std::uint32_t>(layout.digit(k, regs.x));
    action.target[k] = layout.with_digit(k, c_pos, layout.digit(k, c_pos) ^ fn.value(x, factor, z));
  }
  return action;
}

BasisAction inplace_action(const OracleFunction& fn, const RegisterLayout& layout) {
  if (!fn.is_permutation()) throw ValidationError("in-place oracle needs bijective branch tables");
  const auto regs = locate(fn, layout);
  const std::optional<std::size_t> a_pos =
      layout.has("a") ? std::optional<std::size_t>(layout.position("a")) : std::nullopt;
  if (a_pos && layout.size_of("a") != 2) throw LayoutError("control register must be one qubit");
  BasisAction action = identity_action(layout.dim());
  for (std::size_t k = 0; k < layout.dim(); ++k) {
    const std::size_t factor = regs.i ? layout.digit(k, *regs.i) : 0;
    if (factor >= fn.factor_count()) {
      action.invalid[k] = 1;
      continue;
    }
    if (a_pos && layout.digit(k, *a_pos) == 0) continue;  // f^0 = identity
    const auto z = static_cast<ZBit>(layout.digit(k, regs.z));
    const auto x = static_cast<std::uint32_t>(layout.digit(k, regs.x));
    action.target[k] = layout.with_digit(k, regs.x, fn.value(x, factor, z));
  }
  return action;
}

BasisAction phase_action(const OracleFunction& fn, const RegisterLayout& layout) {
  const auto regs = locate(fn, layout);
  const double n_values = static_cast<double>(fn.domain_size());
  BasisAction action = identity_action(layout.dim());
  action.phase.assign(layout.dim(), Complex(1.0, 0.0));
  for (std::size_t k = 0; k < layout.dim(); ++k) {
    const std::size_t factor = regs.i ? layout.digit(k, *regs.i) : 0;
    if (factor >= fn.factor_count()) {
      action.invalid[k] = 1;
      continue;
    }
    const auto z = static_cast<ZBit>(layout.digit(k, regs.z));
    const auto x = static_cast<std::uint32_t>(layout.digit(k, regs.x));
    action.phase[k] = std::polar(1.0, 2.0 * std::numbers::pi * fn.value(x, factor, z) / n_values);
  }
  return action;
}

ComplexVector apply_action(const BasisAction& action, const ComplexVector& v) {
  if (static_cast<std::size_t>(v.size()) != action.dim()) throw DimensionError("apply: dimension mismatch");
  require_valid_support(action, v);
  ComplexVector out = ComplexVector::Zero(v.size());
  for (std::size_t k = 0; k < action.dim(); ++k) {
    const Complex amp = v[static_cast<Eigen::Index>(k)];
    out[static_cast<Eigen::Index>(action.target[k])] += action.phase.empty() ? amp : action.phase[k] * amp;
  }
  return out;
}

ComplexMatrix conjugate(const BasisAction& action, const ComplexMatrix& rho) {
  const auto dim = static_cast<Eigen::Index>(action.dim());
  if (rho.rows() != dim || rho.cols() != dim) throw DimensionError("conjugate: dimension mismatch");
  ComplexMatrix out(dim, dim);
  const auto& t = action.target;
  if (action.phase.empty()) {
    for (Eigen::Index b = 0; b < dim; ++b) {
      const auto tb = static_cast<Eigen::Index>(t[static_cast<std::size_t>(b)]);
      for (Eigen::Index a = 0; a < dim; ++a) out(static_cast<Eigen::Index>(t[static_cast<std::size_t>(a)]), tb) = rho(a, b);
    }
  } else {
    const auto& ph = action.phase;
    for (Eigen::Index b = 0; b < dim; ++b) {
      const auto tb = static_cast<Eigen::Index>(t[static_cast<std::size_t>(b)]);
      const Complex pb = std::conj(ph[static_cast<std::size_t>(b)]);
      for (Eigen::Index a = 0; a < dim; ++a) {
        out(static_cast<Eigen::Index>(t[static_cast<std::size_t>(a)]), tb) = ph[static_cast<std::size_t>(a)] * rho(a, b) * pb;
      }
    }
  }
  return out;
}

ComplexMatrix conjugate_adjoint(const BasisAction& action, const ComplexMatrix& rho) {
  const auto dim = static_cast<Eigen::Index>(action.dim());
  if (rho.rows() != dim || rho.cols() != dim) throw DimensionError("conjugate_adjoint: dimension mismatch");
  ComplexMatrix out(dim, dim);
  const auto& t = action.target;
  for (Eigen::Index b = 0; b < dim; ++b) {
    const auto tb = static_cast<Eigen::Index>(t[static_cast<std::size_t>(b)]);
    const Complex pb = action.phase.empty() ? Complex(1.0) : action.phase[static_cast<std::size_t>(b)];
    for (Eigen::Index a = 0; a < dim; ++a) {
      const Complex pa = action.phase.empty() ? Complex(1.0) : std::conj(action.phase[static_cast<std::size_t>(a)]);
      out(a, b) = pa * rho(static_cast<Eigen::Index>(t[static_cast<std::size_t>(a)]), tb) * pb;
    }
  }
  return out;
}

ComplexMatrix to_dense(const BasisAction& action) {
  const auto dim = static_cast<Eigen::Index>(action.dim());
  ComplexMatrix u = ComplexMatrix::Zero(dim, dim);
  for (std::size_t k = 0; k < action.dim(); ++k) {
    u(static_cast<Eigen::Index>(action.target[k]), static_cast<Eigen::Index>(k)) =
        action.phase.empty() ? Complex(1.0) : action.phase[k];
  }
  return u;
}

namespace {

void require_dim(const StateVector& state, const RegisterLayout& layout) {
  if (state.dim() != layout.dim()) {
    std::ostringstream msg;
    msg << "state dimension " << state.dim() << " does not match layout dimension " << layout.dim();
    throw LayoutError(msg.str());
  }
}

}  // namespace

StateVector apply_standard(const OracleFunction& fn, const StateVector& state, const RegisterLayout& layout) {
  require_dim(state, layout);
  return StateVector(apply_action(standard_action(fn, layout), state.amplitudes()));
}

StateVector apply_inplace(const OracleFunction& fn, const StateVector& state, const RegisterLayout& layout) {
  require_dim(state, layout);
  return StateVector(apply_action(inplace_action(fn, layout), state.amplitudes()));
}

StateVector apply_phase(const OracleFunction& fn, const StateVector& state, const RegisterLayout& layout) {
  require_dim(state, layout);
  return StateVector(apply_action(phase_action(fn, layout), state.amplitudes()));
}

StateVector simulate_inplace_via_standard(const OracleFunction& fn, const StateVector& xz_state) {
  if (!fn.has_true_inverse()) {
    throw ContractError("simulate_inplace_via_standard needs a standard oracle with true inverse access");
  }
  if (fn.factor_count() != 1) throw ContractError("simulate_inplace_via_standard expects a single factor");
  const std::size_t size = fn.domain_size();
  if (xz_state.dim() != 2 * size) throw LayoutError("input must live on the (x, z) layout");
  const RegisterLayout layout = RegisterLayout::standard_plain(size);
  // |0^n> (x) psi: the c register is most significant, so the input fills
  // the first 2N amplitudes.
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(layout.dim()));
  v.head(static_cast<Eigen::Index>(2 * size)) = xz_state.amplitudes();
  const BasisAction query = standard_action(fn, layout);
  v = apply_action(query, v);
  v = apply_swap(v, layout, "c", "x");
  v = apply_pauli_x(v, layout, "z");
  v = apply_action(query, v);
  v = apply_pauli_x(v, layout, "z");
  return StateVector(std::move(v));
}

namespace {

template <typename Map>
ComplexVector permute_basis(const ComplexVector& v, const RegisterLayout& layout, Map&& map) {
  if (static_cast<std::size_t>(v.size()) != layout.dim()) throw DimensionError("gate: dimension mismatch");
  ComplexVector out = ComplexVector::Zero(v.size());
  for (std::size_t k = 0; k < layout.dim(); ++k) {
    out[static_cast<Eigen::Index>(map(k))] += v[static_cast<Eigen::Index>(k)];
  }
  return out;
}

}  // namespace

ComplexVector apply_hadamard(const ComplexVector& v, const RegisterLayout& layout, const std::string& reg) {
  if (static_cast<std::size_t>(v.size()) != layout.dim()) throw DimensionError("hadamard: dimension mismatch");
  const std::size_t pos = layout.position(reg);
  if (layout.registers()[pos].size != 2) throw LayoutError("hadamard needs a one-qubit register");
  const double s = 1.0 / std::sqrt(2.0);
  const std::size_t stride = layout.stride(pos);
  ComplexVector out = v;
  for (std::size_t k = 0; k < layout.dim(); ++k) {
    if (layout.digit(k, pos) != 0) continue;
    const auto k0 = static_cast<Eigen::Index>(k);
    const auto k1 = static_cast<Eigen::Index>(k + stride);
    out[k0] = s * (v[k0] + v[k1]);
    out[k1] = s * (v[k0] - v[k1]);
  }
  return out;
}

ComplexVector apply_pauli_x(const ComplexVector& v, const RegisterLayout& layout, const std::string& reg) {
  const std::size_t pos = layout.position(reg);
  if (layout.registers()[pos].size != 2) throw LayoutError("X needs a one-qubit register");
  return permute_basis(v, layout, [&](std::size_t k) { return layout.with_digit(k, pos, layout.digit(k, pos) ^ 1); });
}

namespace {

std::size_t swapped(const RegisterLayout& layout, std::size_t k, std::size_t p, std::size_t q) {
  const std::size_t dp = layout.digit(k, p);
  const std::size_t dq = layout.digit(k, q);
  return layout.with_digit(layout.with_digit(k, p, dq), q, dp);
}

}  // namespace

ComplexVector apply_swap(const ComplexVector& v, const RegisterLayout& layout, const std::string& first,
                         const std::string& second) {
  const std::size_t p = layout.position(first);
  const std::size_t q = layout.position(second);
  if (layout.registers()[p].size != layout.registers()[q].size) throw LayoutError("swap needs equal-size registers");
  return permute_basis(v, layout, [&](std::size_t k) { return swapped(layout, k, p, q); });
}

ComplexVector apply_controlled_swap(const ComplexVector& v, const RegisterLayout& layout, const std::string& control,
                                    std::size_t control_value, const std::string& first, const std::string& second) {
  const std::size_t c = layout.position(control);
  const std::size_t p = layout.position(first);
  const std::size_t q = layout.position(second);
  if (layout.registers()[p].size != layout.registers()[q].size) throw LayoutError("swap needs equal-size registers");
  return permute_basis(v, layout, [&](std::size_t k) {
    return layout.digit(k, c) == control_value ? swapped(layout, k, p, q) : k;
  });
}

ComplexVector basis_vector(const RegisterLayout& layout, const std::vector<std::size_t>& values) {
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(layout.dim()));
  v[static_cast<Eigen::Index>(layout.pack(values))] = 1.0;
  return v;
}

}  // namespace oracle_lab
