#pragma once

// Dense complex linear algebra over registered multi-subsystem spaces.
//
// Index convention: subsystem 0 is the most significant tensor factor, so a
// basis state |i0 i1 ... in> sits at row i0*(d1*...*dn) + ... + in.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "quncert/common.hpp"

namespace quncert {

class HilbertSpace {
 public:
  explicit HilbertSpace(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw DimensionMismatch("HilbertSpace needs at least one subsystem");
    total_ = 1;
    for (std::size_t d : dims_) {
      if (d == 0) throw DimensionMismatch("subsystem dimension must be positive");
      total_ *= d;
      if (total_ > kMaxPureDim) throw DimTooLarge("total dimension exceeds supported maximum");
    }
  }

  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t num_subsystems() const { return dims_.size(); }
  std::size_t dim(std::size_t i) const {
    if (i >= dims_.size()) throw BadSubsystemIndex("subsystem index " + std::to_string(i) + " out of range");
    return dims_[i];
  }
  std::size_t total_dim() const { return total_; }

  /// Space on the given subsystems, in the order given.
  HilbertSpace select(std::span<const std::size_t> which) const {
    std::vector<std::size_t> out;
    out.reserve(which.size());
    for (std::size_t i : which) out.push_back(dim(i));
    return HilbertSpace(std::move(out));
  }

  HilbertSpace append(const HilbertSpace& other) const {
    std::vector<std::size_t> out = dims_;
    out.insert(out.end(), other.dims_.begin(), other.dims_.end());
    return HilbertSpace(std::move(out));
  }

  friend bool operator==(const HilbertSpace&, const HilbertSpace&) = default;

 private:
  std::vector<std::size_t> dims_;
  std::size_t total_ = 1;
};

namespace detail {

inline double hermiticity_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

/// Rotates v so that its first component with modulus above the rank
/// threshold is real and positive.
inline void apply_phase_convention(Eigen::Ref<ComplexVector> v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v[i]);
    if (mag > kRankThreshold) {
      v *= std::conj(v[i]) / mag;
      v[i] = cplx(mag, 0.0);
      return;
    }
  }
}

inline std::vector<std::size_t> sorted_unique_subsystems(std::span<const std::size_t> keep, std::size_t n) {
  std::vector<std::size_t> out(keep.begin(), keep.end());
  std::sort(out.begin(), out.end());
  if (std::adjacent_find(out.begin(), out.end()) != out.end())
    throw BadSubsystemIndex("duplicate subsystem index");
  for (std::size_t i : out)
    if (i >= n) throw BadSubsystemIndex("subsystem index " + std::to_string(i) + " out of range");
  return out;
}

/// For every basis index of `space`, the index obtained after reordering the
/// subsystems to `order` (a permutation of 0..n-1).
inline std::vector<std::size_t> permuted_indices(const HilbertSpace& space, std::span<const std::size_t> order) {
  const auto& dims = space.dims();
  const std::size_t n = dims.size();
  std::vector<std::size_t> old_stride(n, 1);
  for (std::size_t i = n - 1; i-- > 0;) old_stride[i] = old_stride[i + 1] * dims[i + 1];
  std::vector<std::size_t> new_dims(n), new_stride(n, 1);
  for (std::size_t k = 0; k < n; ++k) new_dims[k] = dims[order[k]];
  for (std::size_t k = n - 1; k-- > 0;) new_stride[k] = new_stride[k + 1] * new_dims[k + 1];

  // map[new_index] = old_index
  std::vector<std::size_t> map(space.total_dim());
  std::vector<std::size_t> digit(n, 0);
  for (std::size_t idx = 0; idx < map.size(); ++idx) {
    std::size_t old = 0;
    for (std::size_t k = 0; k < n; ++k) old += digit[k] * old_stride[order[k]];
    map[idx] = old;
    for (std::size_t k = n; k-- > 0;) {
      if (++digit[k] < new_dims[k]) break;
      digit[k] = 0;
    }
  }
  return map;
}

inline std::vector<std::size_t> validated_permutation(std::span<const std::size_t> order, std::size_t n) {
  if (order.size() != n) throw BadSubsystemIndex("permutation must list every subsystem once");
  auto sorted = sorted_unique_subsystems(order, n);
  (void)sorted;
  return {order.begin(), order.end()};
}

}  // namespace detail

struct EigenDecomposition {
  RealVector values;      // descending
  ComplexMatrix vectors;  // orthonormal columns
};

/// Hermitian eigendecomposition with eigenvalues sorted descending and each
/// eigenvector's first nonzero component made real and positive.
inline EigenDecomposition eigh(const ComplexMatrix& m) {
  const double defect = detail::hermiticity_defect(m);
  if (!(defect <= kTauExact))
    throw NonHermitian("matrix is not Hermitian (deviation " + std::to_string(defect) + ")");
  const ComplexMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  const Eigen::Index n = sym.rows();
  EigenDecomposition out{RealVector(n), ComplexMatrix(n, n)};
  // Eigen returns ascending order.
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values[i] = solver.eigenvalues()[n - 1 - i];
    out.vectors.col(i) = solver.eigenvectors().col(n - 1 - i);
    detail::apply_phase_convention(out.vectors.col(i));
  }
  return out;
}

inline RealVector eigvalsh(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().reverse();
}

/// Kronecker product; `a` is the most significant factor.
inline ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

class PureState {
 public:
  /// Requires a unit vector; applies the global phase convention.
  PureState(HilbertSpace space, ComplexVector amplitudes) : space_(std::move(space)), amps_(std::move(amplitudes)) {
    if (static_cast<std::size_t>(amps_.size()) != space_.total_dim())
      throw DimensionMismatch("amplitude count does not match the space dimension");
    if (std::abs(amps_.norm() - 1.0) > kTauExact) throw InvalidState("pure state is not normalized");
    detail::apply_phase_convention(amps_);
  }

  static PureState normalized(HilbertSpace space, ComplexVector amplitudes) {
    const double n = amplitudes.norm();
    if (n <= 0.0) throw InvalidState("cannot normalize the zero vector");
    return PureState(std::move(space), amplitudes / n);
  }

  const HilbertSpace& space() const { return space_; }
  const ComplexVector& amplitudes() const { return amps_; }
  std::size_t dim() const { return space_.total_dim(); }

 private:
  HilbertSpace space_;
  ComplexVector amps_;
};

class DensityMatrix {
 public:
  /// Validates hermiticity and unit trace within kTauExact and positivity down
  /// to -kNegativeEigenvalueFloor.
  DensityMatrix(HilbertSpace space, const ComplexMatrix& mat) : space_(std::move(space)) {
    const auto d = static_cast<Eigen::Index>(space_.total_dim());
    if (space_.total_dim() > kMaxTotalDim) throw DimTooLarge("density matrix dimension exceeds 64");
    if (mat.rows() != d || mat.cols() != d) throw DimensionMismatch("matrix shape does not match the space");
    const double defect = detail::hermiticity_defect(mat);
    if (!(defect <= kTauExact)) throw NonHermitian("density matrix is not Hermitian");
    mat_ = 0.5 * (mat + mat.adjoint());
    if (std::abs(mat_.trace().real() - 1.0) > kTauExact) throw InvalidState("density matrix trace is not 1");
    spectrum_ = eigvalsh(mat_);
    if (spectrum_[d - 1] < -kNegativeEigenvalueFloor) throw InvalidState("density matrix is not positive semidefinite");
    spectrum_ = spectrum_.cwiseMax(0.0);
  }

  static DensityMatrix from_pure(const PureState& psi) {
    return DensityMatrix(psi.space(), psi.amplitudes() * psi.amplitudes().adjoint());
  }

  const HilbertSpace& space() const { return space_; }
  const ComplexMatrix& matrix() const { return mat_; }
  std::size_t dim() const { return space_.total_dim(); }
  std::size_t num_subsystems() const { return space_.num_subsystems(); }

  /// Eigenvalues, descending, with small negative values clipped to zero.
  const RealVector& eigenvalues() const { return spectrum_; }

  std::size_t rank(double threshold = kRankThreshold) const {
    return static_cast<std::size_t>((spectrum_.array() > threshold).count());
  }

 private:
  HilbertSpace space_;
  ComplexMatrix mat_;
  RealVector spectrum_;
};

inline DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix(a.space().append(b.space()), tensor(a.matrix(), b.matrix()));
}

inline PureState tensor(const PureState& a, const PureState& b) {
  ComplexVector v(a.amplitudes().size() * b.amplitudes().size());
  for (Eigen::Index i = 0; i < a.amplitudes().size(); ++i)
    v.segment(i * b.amplitudes().size(), b.amplitudes().size()) = a.amplitudes()[i] * b.amplitudes();
  return PureState::normalized(a.space().append(b.space()), std::move(v));
}

/// Reduced state on `keep`; the kept subsystems stay in their original order.
inline DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep) {
  const auto& space = rho.space();
  const std::size_t n = space.num_subsystems();
  if (keep.empty()) throw BadSubsystemIndex("partial_trace needs at least one kept subsystem");
  const auto kept = detail::sorted_unique_subsystems(keep, n);
  if (kept.size() == n) return rho;

  std::vector<std::size_t> order = kept;
  for (std::size_t i = 0; i < n; ++i)
    if (!std::binary_search(kept.begin(), kept.end(), i)) order.push_back(i);
  const auto map = detail::permuted_indices(space, order);
  const HilbertSpace out_space = space.select(kept);
  const std::size_t dk = out_space.total_dim();
  const std::size_t dt = space.total_dim() / dk;

  const ComplexMatrix& m = rho.matrix();
  ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
  for (std::size_t i = 0; i < dk; ++i)
    for (std::size_t j = 0; j < dk; ++j) {
      cplx acc = 0.0;
      for (std::size_t t = 0; t < dt; ++t) acc += m(map[i * dt + t], map[j * dt + t]);
      out(i, j) = acc;
    }
  return DensityMatrix(out_space, out);
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<std::size_t> keep) {
  return partial_trace(rho, std::span<const std::size_t>(keep.begin(), keep.size()));
}

/// Reduced state of a pure state on `keep`, formed directly from amplitudes.
inline DensityMatrix reduced_state(const PureState& psi, std::span<const std::size_t> keep) {
  const auto& space = psi.space();
  const std::size_t n = space.num_subsystems();
  if (keep.empty()) throw BadSubsystemIndex("reduced_state needs at least one kept subsystem");
  const auto kept = detail::sorted_unique_subsystems(keep, n);
  std::vector<std::size_t> order = kept;
  for (std::size_t i = 0; i < n; ++i)
    if (!std::binary_search(kept.begin(), kept.end(), i)) order.push_back(i);
  const auto map = detail::permuted_indices(space, order);
  const HilbertSpace out_space = space.select(kept);
  const std::size_t dk = out_space.total_dim();
  const std::size_t dt = space.total_dim() / dk;

  ComplexMatrix coeffs(dk, dt);
  for (std::size_t i = 0; i < dk; ++i)
    for (std::size_t t = 0; t < dt; ++t) coeffs(i, t) = psi.amplitudes()[map[i * dt + t]];
  return DensityMatrix(out_space, coeffs * coeffs.adjoint());
}

inline DensityMatrix reduced_state(const PureState& psi, std::initializer_list<std::size_t> keep) {
  return reduced_state(psi, std::span<const std::size_t>(keep.begin(), keep.size()));
}

/// Reorders subsystems: subsystem k of the result is subsystem order[k] of rho.
inline DensityMatrix permute(const DensityMatrix& rho, std::span<const std::size_t> order) {
  const auto ord = detail::validated_permutation(order, rho.num_subsystems());
  const auto map = detail::permuted_indices(rho.space(), ord);
  const std::size_t d = rho.dim();
  ComplexMatrix out(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) out(i, j) = rho.matrix()(map[i], map[j]);
  return DensityMatrix(rho.space().select(ord), out);
}

inline PureState permute(const PureState& psi, std::span<const std::size_t> order) {
  const auto ord = detail::validated_permutation(order, psi.space().num_subsystems());
  const auto map = detail::permuted_indices(psi.space(), ord);
  ComplexVector out(psi.dim());
  for (std::size_t i = 0; i < psi.dim(); ++i) out[i] = psi.amplitudes()[map[i]];
  return PureState::normalized(psi.space().select(ord), std::move(out));
}

/// Reduced state on the listed subsystems, arranged in the listed order.
inline DensityMatrix marginal(const DensityMatrix& rho, std::span<const std::size_t> order) {
  const DensityMatrix reduced = partial_trace(rho, order);
  if (std::is_sorted(order.begin(), order.end())) return reduced;
  std::vector<std::size_t> sorted(order.begin(), order.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::size_t> rel;
  for (std::size_t s : order)
    rel.push_back(static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), s) - sorted.begin()));
  return permute(reduced, rel);
}

inline DensityMatrix marginal(const DensityMatrix& rho, std::initializer_list<std::size_t> order) {
  return marginal(rho, std::span<const std::size_t>(order.begin(), order.size()));
}

/// Canonical purification sum_i sqrt(l_i) |v_i>|i> over eigenpairs with
/// l_i > kRankThreshold; the ancilla is appended as the last subsystem with
/// dimension rank(rho).
inline PureState purify(const DensityMatrix& rho) {
  const auto eig = eigh(rho.matrix());
  std::size_t rank = 0;
  while (rank < static_cast<std::size_t>(eig.values.size()) && eig.values[rank] > kRankThreshold) ++rank;
  const std::size_t d = rho.dim();
  ComplexVector v = ComplexVector::Zero(d * rank);
  for (std::size_t i = 0; i < rank; ++i) {
    const double w = std::sqrt(eig.values[i]);
    for (std::size_t r = 0; r < d; ++r) v[r * rank + i] = w * eig.vectors(r, i);
  }
  return PureState::normalized(rho.space().append(HilbertSpace({rank})), std::move(v));
}

}  // namespace quncert
