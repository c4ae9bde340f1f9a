#pragma once

// Measurement-optimized correlation measures with a qubit measured party A
// (subsystem 0; every other subsystem forms the target B):
//   J(B|A)    = S(B) - min_m S(B|m)                   classical correlation
//   D(B|A)    = I(A:B) - J(B|A)                        quantum discord
//   delta_u   = S(A) - S(AB) + max_m S(B|m)            one-way unlocalizable discord
//   E_u       = S(B) - max_m S(B|m)                    one-way unlocalizable entanglement
// where S(B|m) = sum_k p_k S(rho_{B|k}) over rank-1 projective measurements m.
// Plus Wootters' entanglement of formation and the entanglement of assistance.

#include <cmath>
#include <limits>
#include <vector>

#include "quncert/common.hpp"
#include "quncert/entropy.hpp"
#include "quncert/linalg.hpp"
#include "quncert/optimize.hpp"

namespace quncert {

struct OptimizerResult {
  double value = 0.0;
  MeasurementBasis basis;  // argmin or argmax of the underlying measurement objective
  double grid_value = 0.0;
  double refinement_delta = 0.0;  // value - grid_value
  bool converged = false;
  int iterations = 0;
};

namespace detail {

/// p S(sigma / p) for an unnormalized 2x2 Hermitian sigma with trace p.
inline double weighted_entropy_2x2(double a, double d, cplx b) {
  const double p = a + d;
  if (p < kOutcomeProbabilityFloor) return 0.0;
  const double half_gap = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(b));
  const double mu1 = 0.5 * p + half_gap;
  const double mu2 = std::max(0.5 * p - half_gap, 0.0);
  double s = p * std::log2(p);
  if (mu1 > 0.0) s -= mu1 * std::log2(mu1);
  if (mu2 > 0.0) s -= mu2 * std::log2(mu2);
  return s;
}

inline double weighted_entropy(const ComplexMatrix& sigma) {
  const double p = sigma.trace().real();
  if (p < kOutcomeProbabilityFloor) return 0.0;
  if (sigma.rows() == 1) return 0.0;
  if (sigma.rows() == 2) return weighted_entropy_2x2(sigma(0, 0).real(), sigma(1, 1).real(), sigma(0, 1));
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sigma, Eigen::EigenvaluesOnly);
  double s = p * std::log2(p);
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const double mu = solver.eigenvalues()[i];
    if (mu > 0.0) s -= mu * std::log2(mu);
  }
  return s;
}

inline void require_measured_qubit(const HilbertSpace& space) {
  if (space.num_subsystems() < 2) throw DimensionMismatch("need a measured party and a target");
  if (space.dim(0) != 2) throw NotAQubit("measured subsystem must be a qubit");
}

inline std::vector<std::size_t> rest_of(std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i < n; ++i) out.push_back(i);
  return out;
}

/// Blocks M_ij = <i|_A rho |j>_A so that the unnormalized conditional state
/// after outcome |m> is sum_ij conj(m_i) m_j M_ij.
class MeasuredQubitModel {
 public:
  explicit MeasuredQubitModel(const DensityMatrix& rho) {
    require_measured_qubit(rho.space());
    d_ = static_cast<Eigen::Index>(rho.dim() / 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) blocks_[2 * i + j] = rho.matrix().block(i * d_, j * d_, d_, d_);
  }

  double objective(double theta, double phi) const {
    const auto m = MeasurementBasis::vectors_for(theta, phi);
    double total = 0.0;
    for (const auto& v : m) {
      const cplx w00 = std::norm(v[0]);
      const cplx w11 = std::norm(v[1]);
      const cplx w01 = std::conj(v[0]) * v[1];
      if (d_ == 2) {
        const auto& M00 = blocks_[0];
        const auto& M01 = blocks_[1];
        const auto& M10 = blocks_[2];
        const auto& M11 = blocks_[3];
        auto entry = [&](int r, int c) {
          return w00 * M00(r, c) + w11 * M11(r, c) + w01 * M01(r, c) + std::conj(w01) * M10(r, c);
        };
        total += weighted_entropy_2x2(entry(0, 0).real(), entry(1, 1).real(), entry(0, 1));
      } else {
        const ComplexMatrix sigma =
            w00 * blocks_[0] + w11 * blocks_[3] + w01 * blocks_[1] + std::conj(w01) * blocks_[2];
        total += weighted_entropy(0.5 * (sigma + sigma.adjoint()));
      }
    }
    return total;
  }

 private:
  Eigen::Index d_ = 0;
  std::array<ComplexMatrix, 4> blocks_;
};

inline OptimizerResult wrap(const SphereOptimum& opt, double offset, double scale) {
  OptimizerResult r;
  r.value = offset + scale * opt.value;
  r.grid_value = offset + scale * opt.grid_value;
  r.refinement_delta = r.value - r.grid_value;
  r.basis = opt.basis;
  r.converged = opt.converged;
  r.iterations = opt.iterations;
  return r;
}

}  // namespace detail

/// S(B|{P_k}) = sum_k p_k S(rho_{B|k}); outcomes with p_k < 1e-12 contribute 0.
inline double conditional_entropy_after_measurement(const DensityMatrix& rho_ab, const MeasurementBasis& m) {
  return detail::MeasuredQubitModel(rho_ab).objective(m.theta(), m.phi());
}

/// J(B|A), maximized over projective measurements on A.
inline OptimizerResult classical_correlation(const DensityMatrix& rho_ab, const OptimizerSettings& cfg = {}) {
  const detail::MeasuredQubitModel model(rho_ab);
  const double s_b = von_neumann_entropy(rho_ab, detail::rest_of(rho_ab.num_subsystems()));
  const auto opt = optimize_on_sphere([&](double t, double p) { return model.objective(t, p); }, Sense::Minimize, cfg);
  return detail::wrap(opt, s_b, -1.0);
}

/// D(B|A) = I(A:B) - J(B|A), from the same measurement optimization.
inline OptimizerResult quantum_discord(const DensityMatrix& rho_ab, const OptimizerSettings& cfg = {}) {
  const auto rest = detail::rest_of(rho_ab.num_subsystems());
  const std::size_t a[] = {0};
  const double info = mutual_information(rho_ab, a, rest);
  const auto j = classical_correlation(rho_ab, cfg);
  OptimizerResult d = j;
  d.value = info - j.value;
  d.grid_value = info - j.grid_value;
  d.refinement_delta = d.value - d.grid_value;
  return d;
}

/// delta_u(B|A) = S(A) - S(AB) + max_m S(B|m).
inline OptimizerResult unlocalizable_discord(const DensityMatrix& rho_ab, const OptimizerSettings& cfg = {}) {
  const detail::MeasuredQubitModel model(rho_ab);
  const double offset = von_neumann_entropy(rho_ab, {0}) - von_neumann_entropy(rho_ab);
  const auto opt = optimize_on_sphere([&](double t, double p) { return model.objective(t, p); }, Sense::Maximize, cfg);
  return detail::wrap(opt, offset, 1.0);
}

/// E_u(rho_BA) = S(B) - max_m S(B|m) with A measured.
inline double unlocalizable_entanglement(const DensityMatrix& rho_ab, const OptimizerSettings& cfg = {}) {
  const detail::MeasuredQubitModel model(rho_ab);
  const double s_b = von_neumann_entropy(rho_ab, detail::rest_of(rho_ab.num_subsystems()));
  const auto opt = optimize_on_sphere([&](double t, double p) { return model.objective(t, p); }, Sense::Maximize, cfg);
  return s_b - opt.value;
}

inline void require_two_qubits(const DensityMatrix& rho) {
  const auto& dims = rho.space().dims();
  if (dims.size() != 2 || dims[0] != 2 || dims[1] != 2) throw NotTwoQubits("expected a two-qubit state");
}

/// Wootters concurrence: max(0, l1 - l2 - l3 - l4) with l_i the descending
/// square roots of the eigenvalues of rho (sy x sy) rho* (sy x sy).
inline double concurrence(const DensityMatrix& rho) {
  require_two_qubits(rho);
  Eigen::Matrix4cd flip = Eigen::Matrix4cd::Zero();
  // sigma_y (x) sigma_y is real: anti-diagonal (-1, 1, 1, -1)
  flip(0, 3) = -1.0;
  flip(1, 2) = 1.0;
  flip(2, 1) = 1.0;
  flip(3, 0) = -1.0;
  const ComplexMatrix tilde = flip * rho.matrix().conjugate() * flip;
  const auto eig = eigh(rho.matrix());
  const RealVector root = eig.values.cwiseMax(0.0).cwiseSqrt();
  const ComplexMatrix sqrt_rho = eig.vectors * root.asDiagonal() * eig.vectors.adjoint();
  const ComplexMatrix r = sqrt_rho * tilde * sqrt_rho;
  const RealVector mu = eigvalsh(r).cwiseMax(0.0).cwiseSqrt();
  return std::clamp(mu[0] - mu[1] - mu[2] - mu[3], 0.0, 1.0);
}

inline double entanglement_of_formation(const DensityMatrix& rho) {
  const double c = concurrence(rho);
  return binary_entropy(0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - c * c))));
}

/// max over projective measurements on `helper` of sum_k p_k S(Tr_c |psi_k><psi_k|),
/// computed from the post-measurement pure states of the pair (b, c).
inline OptimizerResult assistance_optimum(const PureState& psi, std::size_t b, std::size_t c, std::size_t helper,
                                          const OptimizerSettings& cfg = {}) {
  if (psi.space().num_subsystems() != 3) throw DimensionMismatch("entanglement of assistance needs a tripartite state");
  const std::size_t order[] = {helper, b, c};
  const PureState arranged = permute(psi, order);
  const auto& dims = arranged.space().dims();
  if (dims[0] != 2) throw NotAQubit("helper subsystem must be a qubit");
  const auto db = static_cast<Eigen::Index>(dims[1]);
  const auto dc = static_cast<Eigen::Index>(dims[2]);
  // Row-major amplitude blocks: psi_i(x, y) = <i x y|psi>.
  std::array<ComplexMatrix, 2> slices;
  for (int i = 0; i < 2; ++i) {
    slices[i].resize(db, dc);
    for (Eigen::Index x = 0; x < db; ++x)
      for (Eigen::Index y = 0; y < dc; ++y) slices[i](x, y) = arranged.amplitudes()[(i * db + x) * dc + y];
  }
  auto objective = [&](double t, double p) {
    const auto m = MeasurementBasis::vectors_for(t, p);
    double total = 0.0;
    for (const auto& v : m) {
      const ComplexMatrix post = std::conj(v[0]) * slices[0] + std::conj(v[1]) * slices[1];
      total += detail::weighted_entropy(post * post.adjoint());
    }
    return total;
  };
  return detail::wrap(optimize_on_sphere(objective, Sense::Maximize, cfg), 0.0, 1.0);
}

inline double entanglement_of_assistance(const PureState& psi, std::size_t b, std::size_t c, std::size_t helper,
                                         const OptimizerSettings& cfg = {}) {
  return assistance_optimum(psi, b, c, helper, cfg).value;
}

enum class ToleranceTier { Exact, Opt };

inline double tolerance_of(ToleranceTier t) { return t == ToleranceTier::Exact ? kTauExact : kTauOpt; }

/// Every bipartite correlation quantity of rho_AB (A = subsystem 0, a qubit).
/// E_a and E_u use the canonical purification; e_f is NaN unless two qubits.
struct CorrelationReport {
  double s_a = 0.0, s_b = 0.0, s_ab = 0.0, s_a_given_b = 0.0, mutual_information = 0.0;
  double j = 0.0, d = 0.0, e_f = 0.0, e_a = 0.0, e_u = 0.0, delta_u = 0.0;
  OptimizerResult j_run, delta_u_run, e_a_run;

  static constexpr ToleranceTier tier_j = ToleranceTier::Opt;
  static constexpr ToleranceTier tier_d = ToleranceTier::Opt;
  static constexpr ToleranceTier tier_e_f = ToleranceTier::Exact;
  static constexpr ToleranceTier tier_e_a = ToleranceTier::Opt;
  static constexpr ToleranceTier tier_e_u = ToleranceTier::Opt;
  static constexpr ToleranceTier tier_delta_u = ToleranceTier::Opt;
};

inline CorrelationReport correlation_report(const DensityMatrix& rho_ab, const OptimizerSettings& cfg = {}) {
  if (rho_ab.num_subsystems() != 2) throw DimensionMismatch("correlation report needs a bipartite state");
  detail::require_measured_qubit(rho_ab.space());
  CorrelationReport r;
  r.s_a = von_neumann_entropy(rho_ab, {0});
  r.s_b = von_neumann_entropy(rho_ab, {1});
  r.s_ab = von_neumann_entropy(rho_ab);
  r.s_a_given_b = r.s_ab - r.s_b;
  r.mutual_information = r.s_a + r.s_b - r.s_ab;
  r.j_run = classical_correlation(rho_ab, cfg);
  r.j = r.j_run.value;
  r.d = r.mutual_information - r.j;
  r.e_f = (rho_ab.space().dim(1) == 2) ? entanglement_of_formation(rho_ab) : std::numeric_limits<double>::quiet_NaN();
  r.delta_u_run = unlocalizable_discord(rho_ab, cfg);
  r.delta_u = r.delta_u_run.value;
  r.e_u = unlocalizable_entanglement(rho_ab, cfg);
  r.e_a_run = assistance_optimum(purify(rho_ab), 1, 2, 0, cfg);
  r.e_a = r.e_a_run.value;
  return r;
}

}  // namespace quncert
