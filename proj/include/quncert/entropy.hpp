#pragma once

// Entropy functionals (bits) and the quantum-memory-assisted uncertainty bound
//   S(Q|B) + S(R|B) >= log2(1/c) + S(A|B).

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "quncert/common.hpp"
#include "quncert/linalg.hpp"

namespace quncert {

using Basis = std::vector<ComplexVector>;

/// Shannon entropy in bits of a spectrum; 0 log 0 = 0 and tiny negatives clip to 0.
inline double spectrum_entropy(const RealVector& probs) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    const double p = probs[i];
    if (p > 0.0) s -= p * std::log2(p);
  }
  return s;
}

inline double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

inline double von_neumann_entropy(const DensityMatrix& rho) { return spectrum_entropy(rho.eigenvalues()); }

inline double von_neumann_entropy(const DensityMatrix& rho, std::span<const std::size_t> subsystems) {
  if (subsystems.empty()) return 0.0;
  return von_neumann_entropy(partial_trace(rho, subsystems));
}

inline double von_neumann_entropy(const DensityMatrix& rho, std::initializer_list<std::size_t> subsystems) {
  return von_neumann_entropy(rho, std::span<const std::size_t>(subsystems.begin(), subsystems.size()));
}

/// S(of | given) = S(rho_{of u given}) - S(rho_given).
inline double conditional_entropy(const DensityMatrix& rho, std::span<const std::size_t> of,
                                  std::span<const std::size_t> given) {
  if (of.empty()) throw BadSubsystemIndex("conditional entropy needs a nonempty target");
  std::vector<std::size_t> joint(of.begin(), of.end());
  joint.insert(joint.end(), given.begin(), given.end());
  // validates range and disjointness
  const auto sorted = detail::sorted_unique_subsystems(joint, rho.num_subsystems());
  return von_neumann_entropy(rho, sorted) - von_neumann_entropy(rho, given);
}

inline double conditional_entropy(const DensityMatrix& rho, std::initializer_list<std::size_t> of,
                                  std::initializer_list<std::size_t> given) {
  return conditional_entropy(rho, std::span<const std::size_t>(of.begin(), of.size()),
                             std::span<const std::size_t>(given.begin(), given.size()));
}

inline double mutual_information(const DensityMatrix& rho, std::span<const std::size_t> a,
                                 std::span<const std::size_t> b) {
  std::vector<std::size_t> joint(a.begin(), a.end());
  joint.insert(joint.end(), b.begin(), b.end());
  if (a.empty() || b.empty()) throw BadSubsystemIndex("mutual information needs two nonempty parties");
  const auto sorted = detail::sorted_unique_subsystems(joint, rho.num_subsystems());
  return von_neumann_entropy(rho, a) + von_neumann_entropy(rho, b) - von_neumann_entropy(rho, sorted);
}

/// I(a:b) between two single subsystems.
inline double mutual_information(const DensityMatrix& rho, std::size_t a, std::size_t b) {
  if (a == b) throw BadSubsystemIndex("mutual information needs two distinct subsystems");
  const std::size_t sa[] = {a};
  const std::size_t sb[] = {b};
  return mutual_information(rho, sa, sb);
}

/// Throws IncompleteBasis unless `basis` is `dim` orthonormal vectors of length `dim`.
inline void require_orthonormal_basis(const Basis& basis, std::size_t dim) {
  if (basis.size() != dim) throw IncompleteBasis("basis must contain exactly one vector per dimension");
  for (std::size_t k = 0; k < dim; ++k) {
    if (static_cast<std::size_t>(basis[k].size()) != dim) throw IncompleteBasis("basis vector has wrong length");
    for (std::size_t l = k; l < dim; ++l) {
      const cplx overlap = basis[k].dot(basis[l]);
      const double expected = (k == l) ? 1.0 : 0.0;
      if (std::abs(overlap - expected) > kTauExact) throw IncompleteBasis("basis is not orthonormal");
    }
  }
}

/// sum_k (P_k (x) I) rho (P_k (x) I) for projectors P_k = |b_k><b_k| on `measured`.
inline DensityMatrix post_measurement_state(const DensityMatrix& rho, const Basis& basis, std::size_t measured = 0) {
  const auto& dims = rho.space().dims();
  const std::size_t dm = rho.space().dim(measured);
  require_orthonormal_basis(basis, dm);
  std::size_t before = 1, after = 1;
  for (std::size_t i = 0; i < measured; ++i) before *= dims[i];
  for (std::size_t i = measured + 1; i < dims.size(); ++i) after *= dims[i];
  const ComplexMatrix id_before = ComplexMatrix::Identity(before, before);
  const ComplexMatrix id_after = ComplexMatrix::Identity(after, after);

  ComplexMatrix out = ComplexMatrix::Zero(rho.dim(), rho.dim());
  for (const auto& b : basis) {
    const ComplexMatrix proj = tensor(tensor(id_before, b * b.adjoint()), id_after);
    out += proj * rho.matrix() * proj;
  }
  return DensityMatrix(rho.space(), out);
}

/// Eigenbasis of a named observable on a d-level system: Z is the
/// computational basis, X the discrete Fourier basis, Y (qubits only) the
/// sigma_y eigenbasis. Eigenvectors are listed +1 first for Pauli names.
inline Basis named_basis(std::string_view name, std::size_t dim) {
  Basis out;
  if (name == "Z") {
    for (std::size_t k = 0; k < dim; ++k) out.push_back(ComplexVector::Unit(dim, k));
  } else if (name == "X") {
    const double norm = 1.0 / std::sqrt(static_cast<double>(dim));
    for (std::size_t k = 0; k < dim; ++k) {
      ComplexVector v(dim);
      for (std::size_t j = 0; j < dim; ++j) v[j] = norm * std::polar(1.0, 2.0 * std::numbers::pi * double(j * k) / double(dim));
      out.push_back(v);
    }
  } else if (name == "Y") {
    if (dim != 2) throw NotAQubit("Y observable is defined for qubits only");
    const double s = 1.0 / std::sqrt(2.0);
    out.push_back((ComplexVector(2) << s, cplx(0, s)).finished());
    out.push_back((ComplexVector(2) << s, cplx(0, -s)).finished());
  } else {
    throw ParseError("unknown observable '" + std::string(name) + "' (expected X, Y or Z)");
  }
  return out;
}

/// Two complete orthonormal eigenbases and their complementarity
/// c = max_{k,l} |<q_k|r_l>|^2.
class ObservablePair {
 public:
  ObservablePair(Basis q, Basis r) : q_(std::move(q)), r_(std::move(r)) {
    if (q_.empty()) throw IncompleteBasis("empty basis");
    const std::size_t d = q_.size();
    require_orthonormal_basis(q_, d);
    require_orthonormal_basis(r_, d);
    c_ = 0.0;
    for (const auto& a : q_)
      for (const auto& b : r_) c_ = std::max(c_, std::norm(a.dot(b)));
  }

  /// Pair from names like "Z,X" on a `dim`-level measured system.
  static ObservablePair named(std::string_view spec, std::size_t dim = 2) {
    const auto comma = spec.find(',');
    if (comma == std::string_view::npos) throw ParseError("observable pair must look like Q,R");
    return ObservablePair(named_basis(spec.substr(0, comma), dim), named_basis(spec.substr(comma + 1), dim));
  }

  static ObservablePair pauli_zx() { return named("Z,X", 2); }

  const Basis& basis_q() const { return q_; }
  const Basis& basis_r() const { return r_; }
  double complementarity() const { return c_; }
  std::size_t dim() const { return q_.size(); }

 private:
  Basis q_, r_;
  double c_ = 1.0;
};

struct UncertaintyReport {
  double s_q_given_b = 0.0;
  double s_r_given_b = 0.0;
  double lhs = 0.0;
  double ub = 0.0;
  double s_a_given_b = 0.0;
  double slack = 0.0;
};

/// Both sides of the uncertainty relation for measurements on subsystem 0,
/// with every remaining subsystem acting as the memory B.
inline UncertaintyReport uncertainty_report(const DensityMatrix& rho_ab, const ObservablePair& obs) {
  const std::size_t n = rho_ab.num_subsystems();
  if (n < 2) throw DimensionMismatch("uncertainty report needs a measured system and a memory");
  if (rho_ab.space().dim(0) != obs.dim())
    throw DimensionMismatch("observables do not act on the measured subsystem");
  std::vector<std::size_t> memory;
  for (std::size_t i = 1; i < n; ++i) memory.push_back(i);
  const std::size_t a[] = {0};

  UncertaintyReport r;
  r.s_q_given_b = conditional_entropy(post_measurement_state(rho_ab, obs.basis_q()), a, memory);
  r.s_r_given_b = conditional_entropy(post_measurement_state(rho_ab, obs.basis_r()), a, memory);
  r.lhs = r.s_q_given_b + r.s_r_given_b;
  r.s_a_given_b = conditional_entropy(rho_ab, a, memory);
  r.ub = std::log2(1.0 / obs.complementarity()) + r.s_a_given_b;
  r.slack = r.lhs - r.ub;
  return r;
}

}  // namespace quncert
