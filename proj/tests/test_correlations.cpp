#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "quncert/correlations.hpp"
#include "quncert/states.hpp"

using namespace quncert;

TEST(Optimizer, FindsKnownMinimumOnSphere) {
  // f = distance^2 of the Bloch vector from (sin 1 cos 2, sin 1 sin 2, cos 1)
  const double t0 = 1.0, p0 = 2.0;
  auto f = [&](double t, double p) {
    const double x = std::sin(t) * std::cos(p) - std::sin(t0) * std::cos(p0);
    const double y = std::sin(t) * std::sin(p) - std::sin(t0) * std::sin(p0);
    const double z = std::cos(t) - std::cos(t0);
    return x * x + y * y + z * z;
  };
  const auto opt = optimize_on_sphere(f, Sense::Minimize, {});
  EXPECT_LT(opt.value, 1e-10);
  EXPECT_LE(opt.value, opt.grid_value);
  EXPECT_TRUE(opt.converged);
  EXPECT_NEAR(opt.basis.theta(), t0, 1e-4);
}

TEST(Optimizer, MeasurementBasisIsOrthonormal) {
  const MeasurementBasis m(2.3, -0.7);
  const auto v = m.vectors();
  EXPECT_NEAR(std::abs(v[0].dot(v[1])), 0.0, 1e-15);
  EXPECT_NEAR(v[0].norm(), 1.0, 1e-15);
  const auto p = m.projectors();
  EXPECT_LT(((p[0] + p[1]) - Eigen::Matrix2cd::Identity()).norm(), 1e-15);
}

TEST(MeasuredEntropy, AgreesWithOracleAtArbitraryAngles) {
  const DensityMatrix rho = sample_random_mixed({2, 2}, 3, 8, 0);
  for (double t : {0.0, 0.4, 1.7, 3.1})
    for (double p : {0.0, 1.1, 4.0})
      EXPECT_NEAR(conditional_entropy_after_measurement(rho, MeasurementBasis(t, p)),
                  oracle::measured_entropy_2x2(rho.matrix(), t, p), 1e-11);
}

TEST(ClassicalCorrelation, MatchesFineGridOnRandomStates) {
  for (std::uint64_t i = 0; i < 4; ++i) {
    const DensityMatrix rho = sample_random_mixed({2, 2}, 1 + i, 21, i);
    const auto j = classical_correlation(rho);
    const auto d = quantum_discord(rho);
    const double j_ref = oracle::grid_classical_correlation(rho.matrix());
    EXPECT_NEAR(j.value, j_ref, 1e-4) << i;
    EXPECT_GE(j.value, j_ref - 1e-9) << "refinement must not lose to the grid";
    EXPECT_NEAR(d.value, oracle::grid_discord(rho.matrix()), 1e-4) << i;
    EXPECT_NEAR(j.value + d.value, mutual_information(rho, 0, 1), 1e-12);
    EXPECT_GE(j.refinement_delta, -1e-12);
    EXPECT_TRUE(j.converged);
  }
}

TEST(ClassicalCorrelation, WernerClosedForm) {
  for (double r : {0.0, 0.2, 0.5, 0.7476, 0.9, 1.0}) {
    const DensityMatrix w = make_werner(r);
    const double j = oracle::werner_classical_correlation(r);
    const double info = 2.0 - oracle::werner_joint_entropy(r);
    EXPECT_NEAR(classical_correlation(w).value, j, 1e-9) << r;
    EXPECT_NEAR(quantum_discord(w).value, info - j, 1e-9) << r;
  }
}

TEST(ClassicalCorrelation, PureStateDiscordIsEntanglement) {
  const double c = std::cos(std::numbers::pi / 8), s = std::sin(std::numbers::pi / 8);
  ComplexVector amps = ComplexVector::Zero(4);
  amps[0] = c;
  amps[3] = s;
  const auto rho = DensityMatrix::from_pure(PureState(HilbertSpace({2, 2}), amps));
  const double e = oracle::h2(c * c);
  EXPECT_NEAR(quantum_discord(rho).value, e, 1e-9);
  EXPECT_NEAR(classical_correlation(rho).value, e, 1e-9);
  // measured B states are pure, so max_m S(B|m) = 0
  EXPECT_NEAR(unlocalizable_entanglement(rho), e, 1e-9);
  EXPECT_NEAR(unlocalizable_discord(rho).value, e, 1e-9);
}

TEST(ClassicalCorrelation, RequiresQubitMeasuredSide) {
  EXPECT_THROW(classical_correlation(sample_random_mixed({3, 2}, 2, 1, 0)), NotAQubit);
}

TEST(UnlocalizableQuantities, MatchFineGridMaximum) {
  for (std::uint64_t i = 0; i < 3; ++i) {
    const DensityMatrix rho = sample_random_mixed({2, 2}, 2 + i, 23, i);
    const auto g = oracle::grid_extremes(rho.matrix());
    const double s_b = oracle::entropy(oracle::trace_out_first(rho.matrix(), 2, 2));
    const double s_a = oracle::entropy(oracle::trace_out_second(rho.matrix(), 2, 2));
    EXPECT_NEAR(unlocalizable_entanglement(rho), s_b - g.max, 1e-4);
    EXPECT_NEAR(unlocalizable_discord(rho).value, s_a - oracle::entropy(rho.matrix()) + g.max, 1e-4);
  }
}

TEST(Formation, ConcurrenceAgreesWithNonHermitianRoute) {
  for (std::uint64_t i = 0; i < 20; ++i) {
    const DensityMatrix rho = sample_random_mixed({2, 2}, 1 + i % 4, 31, i);
    EXPECT_NEAR(concurrence(rho), oracle::concurrence(rho.matrix()), 1e-7) << i;
  }
  EXPECT_NEAR(concurrence(DensityMatrix::from_pure(make_bell())), 1.0, 1e-12);
}

TEST(Formation, WernerClosedForm) {
  for (double r : {0.1, 1.0 / 3.0, 0.5, 0.7, 0.9}) {
    const double c = oracle::werner_concurrence(r);
    EXPECT_NEAR(concurrence(make_werner(r)), c, 1e-9) << r;
    EXPECT_NEAR(entanglement_of_formation(make_werner(r)), oracle::formation_from_concurrence(c), 1e-9) << r;
  }
}

TEST(Formation, BelowEveryRandomDecomposition) {
  const DensityMatrix rho = sample_random_mixed({2, 2}, 3, 41, 0);
  const double ef = entanglement_of_formation(rho);
  RandomStream rs(41, 99);
  for (int k = 0; k < 50; ++k) {
    std::vector<double> x(16);
    for (auto& v : x) v = 6.0 * rs.uniform();
    EXPECT_GE(oracle::decomposition_average(rho.matrix(), oracle::unitary_from_params(x)), ef - 1e-12);
  }
}

TEST(Formation, MatchesDecompositionSearch) {
  for (double r : {0.5, 0.7, 0.9}) {
    const DensityMatrix w = make_werner(r);
    EXPECT_NEAR(entanglement_of_formation(w), oracle::decomposition_search(w.matrix()), 1e-4) << r;
  }
  const DensityMatrix rho = sample_random_mixed({2, 2}, 2, 43, 0);
  EXPECT_NEAR(entanglement_of_formation(rho), oracle::decomposition_search(rho.matrix()), 1e-4);
}

TEST(Formation, RequiresTwoQubits) {
  EXPECT_THROW(entanglement_of_formation(make_qubit_qudit_example()), NotTwoQubits);
}

TEST(Assistance, MatchesFineGrid) {
  for (std::uint64_t i = 0; i < 3; ++i) {
    const PureState psi = sample_haar_pure({2, 2, 2}, 51, i);
    // helper 0, pair (1, 2): the oracle's native index order
    EXPECT_NEAR(entanglement_of_assistance(psi, 1, 2, 0), oracle::grid_assistance(psi.amplitudes()), 1e-4) << i;
    EXPECT_NEAR(entanglement_of_assistance(psi, 1, 2, 0), entanglement_of_assistance(psi, 2, 1, 0), 1e-9);
  }
}

TEST(Assistance, GhzGivesOneEbit) {
  EXPECT_NEAR(entanglement_of_assistance(make_ghz(), 1, 2, 0), 1.0, 1e-9);
  EXPECT_NEAR(entanglement_of_formation(marginal(DensityMatrix::from_pure(make_ghz()), {1, 2})), 0.0, 1e-9);
}

TEST(Report, WernerFieldsAreConsistent) {
  const double r = 0.7;
  const auto rep = correlation_report(make_werner(r));
  EXPECT_NEAR(rep.s_a, 1.0, 1e-12);
  EXPECT_NEAR(rep.s_ab, oracle::werner_joint_entropy(r), 1e-12);
  EXPECT_NEAR(rep.j, oracle::werner_classical_correlation(r), 1e-9);
  EXPECT_NEAR(rep.d, rep.mutual_information - rep.j, 1e-12);
  EXPECT_NEAR(rep.e_f, oracle::formation_from_concurrence(oracle::werner_concurrence(r)), 1e-9);
  // pure-state duality on the purification: E_a + E_u = S_B
  EXPECT_NEAR(rep.e_a + rep.e_u, rep.s_b, 2e-3);
  EXPECT_NEAR(tolerance_of(CorrelationReport::tier_e_f), kTauExact, 0.0);
}

TEST(Report, QutritMemoryLeavesFormationUndefined) {
  const auto rep = correlation_report(make_qubit_qudit_example());
  EXPECT_TRUE(std::isnan(rep.e_f));
  EXPECT_NEAR(rep.s_a_given_b, -1.0, 1e-9);
}
