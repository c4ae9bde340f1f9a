#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "quncert/theorems.hpp"

using namespace quncert;

namespace {

// S(A|B) along the phi = pi/4 sweep: h(sin^2 theta) - h(sin^2 theta / 2).
double sweep_conditional_entropy(double theta_over_pi) {
  const double s = std::pow(std::sin(std::numbers::pi * theta_over_pi), 2);
  return oracle::h2(s) - oracle::h2(s / 2.0);
}

// Werner S(A|B) = 0 solved by bisection on the closed-form joint entropy.
double werner_root() {
  double lo = 0.5, hi = 1.0;
  for (int i = 0; i < 200 && hi - lo > 1e-14; ++i) {
    const double mid = 0.5 * (lo + hi);
    (oracle::werner_joint_entropy(mid) > 1.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST(Claims, NamesRoundTrip) {
  for (ClaimId id : all_claims()) EXPECT_EQ(parse_claim(claim_name(id)), id);
  EXPECT_EQ(all_claims().size(), 15u);
  EXPECT_THROW(parse_claim("EQ99"), ParseError);
}

TEST(Claims, KindsAndGates) {
  EXPECT_EQ(claim_kind(ClaimId::Eq9), ClaimKind::Equality);
  EXPECT_EQ(claim_kind(ClaimId::Eq2), ClaimKind::Inequality);
  EXPECT_EQ(claim_kind(ClaimId::Prop1), ClaimKind::StrictInequality);
  EXPECT_TRUE(claim_is_gated(ClaimId::Prop2));
  EXPECT_FALSE(claim_is_gated(ClaimId::Eq11));
}

TEST(AuditClaim, BellSaturatesUncertaintyBound) {
  const auto r = audit_claim(ClaimId::Eq1Slack, make_bell());
  EXPECT_TRUE(r.pass());
  EXPECT_NEAR(r.lhs, 0.0, 1e-9);
  EXPECT_NEAR(r.rhs, 0.0, 1e-9);
}

TEST(AuditClaim, CustomObservables) {
  const auto r = audit_claim(ClaimId::Eq1Slack, make_qubit_qudit_example(), ObservablePair::named("Z,Y"));
  EXPECT_TRUE(r.pass());
  EXPECT_NEAR(r.rhs, 0.0, 1e-9);
}

TEST(AuditClaim, GhzEntropicInequalities) {
  for (ClaimId id : {ClaimId::Eq2, ClaimId::Eq6, ClaimId::Eq7, ClaimId::Eq9, ClaimId::Eq11, ClaimId::Eq14,
                     ClaimId::Eq15})
    EXPECT_TRUE(audit_claim(id, make_ghz()).pass()) << claim_name(id);
  // GHZ has S(A|B) = 0, outside the gate of the conditional claims
  EXPECT_EQ(audit_claim(ClaimId::Prop1, make_ghz()).status, ClaimStatus::NotApplicable);
}

TEST(AuditClaim, GatedClaimsOnNegativeConditionalEntropy) {
  // theta = 0.4 pi: A and B share most of the entanglement
  const PureState w = make_w_purification(0.4 * std::numbers::pi, 0.3 * std::numbers::pi);
  const auto rho = DensityMatrix::from_pure(w);
  ASSERT_LT(conditional_entropy(rho, {0}, {1}), -kTauOpt);
  for (ClaimId id : {ClaimId::Eq8, ClaimId::Eq10, ClaimId::Prop1, ClaimId::Prop2}) {
    const auto r = audit_claim(id, w);
    EXPECT_TRUE(r.pass()) << claim_name(id) << " residual " << r.residual;
  }
  // D(B|A) - D(C|A) = -S(A|B) on pure states
  const auto p1 = audit_claim(ClaimId::Prop1, w);
  EXPECT_GT(p1.residual, kTauOpt);
}

TEST(AuditClaim, LowRankTwoQubitStateIsPurified) {
  const auto r = audit_claim(ClaimId::Eq9, make_w_marginal(0.3, 0.6));
  EXPECT_TRUE(r.pass());
  EXPECT_THROW(audit_claim(ClaimId::Eq9, make_werner(0.5)), DimensionMismatch);
}

TEST(AuditClaim, FactorizationCase) {
  const auto f = make_factorized(make_schmidt_pair(0.75), make_diagonal_qubit(0.3));
  const auto r = audit_claim(ClaimId::Eq17Case, f);
  EXPECT_TRUE(r.pass()) << r.residual;
  EXPECT_NEAR(r.lhs, -oracle::h2(0.75), 1e-9);
  EXPECT_NEAR(r.rhs, -oracle::h2(0.75), 1e-9);
  EXPECT_THROW(audit_claim(ClaimId::Eq17Case, make_bell()), NotApplicable);
}

TEST(AuditClaim, QubitQuditCase) {
  const auto f = build_factorized(StateSpec::parse("family=qubit_qudit_factorized"));
  const auto r = check_factorization_case(f);
  EXPECT_TRUE(r.pass());
  EXPECT_NEAR(r.lhs, -1.0, 1e-9);
}

TEST(AuditClaim, EntropyTriangleOnQuditMemory) {
  // |S(A) - S(B)| <= S(AB) with equality for the factorized qubit-qudit state
  const auto r = audit_claim(ClaimId::Eq16, make_qubit_qudit_example());
  EXPECT_TRUE(r.pass());
  EXPECT_NEAR(r.residual, 0.0, 1e-9);
}

TEST(Batch, EqualityClaimsHold) {
  for (ClaimId id : {ClaimId::Eq6, ClaimId::Eq9, ClaimId::Eq11, ClaimId::Eq14}) {
    const auto s = audit_random_batch(id, 25, 3);
    EXPECT_EQ(s.failures, 0u) << claim_name(id) << " worst " << s.worst_residual;
    EXPECT_EQ(s.passes, 25u);
  }
}

TEST(Batch, InequalitiesOnMixedStates) {
  for (ClaimId id : {ClaimId::Eq1Slack, ClaimId::Eq2, ClaimId::Eq3, ClaimId::Eq16}) {
    const auto s = audit_random_batch(id, 40, 4);
    EXPECT_EQ(s.failures, 0u) << claim_name(id);
    EXPECT_GE(s.worst_residual, -1e-9) << claim_name(id);
  }
  EXPECT_EQ(default_batch_shape(ClaimId::Eq3).dims.size(), 4u);
}

TEST(Batch, FactorizationSamples) {
  const auto s = audit_random_batch(ClaimId::Eq17Case, 10, 8);
  EXPECT_EQ(s.failures, 0u);
}

TEST(Batch, DeterministicAndReproducibleFromSpec) {
  const auto a = audit_random_batch(ClaimId::Eq7, 12, 42);
  const auto b = audit_random_batch(ClaimId::Eq7, 12, 42);
  for (std::size_t i = 0; i < a.results.size(); ++i) EXPECT_EQ(a.results[i].residual, b.results[i].residual);
  ASSERT_TRUE(a.worst_spec);
  const StateSpec spec = StateSpec::parse(a.worst_spec->to_string());
  const auto again = std::visit([](const auto& s) { return audit_claim(ClaimId::Eq7, AuditState(s)); }, build_state(spec));
  EXPECT_EQ(again.residual, a.worst_residual);
}

TEST(Batch, RejectsWrongShape) {
  EXPECT_THROW(audit_random_batch(ClaimId::Eq9, 5, BatchShape{{2, 2}, true}, 1), DimensionMismatch);
  EXPECT_THROW(audit_random_batch(ClaimId::Eq9, 0, 1), ParamOutOfRange);
}

TEST(Sweep, ConditionalEntropyMatchesClosedForm) {
  const auto pts = sweep_w_family(std::numbers::pi / 4, 64);
  for (const auto& p : pts) {
    EXPECT_NEAR(p.s_a_given_b, sweep_conditional_entropy(p.theta_over_pi), 1e-9) << p.theta_over_pi;
    // pure-state identity S(A|B) = D(C|A) - D(B|A) on every row
    EXPECT_NEAR(p.s_a_given_b, p.d_c_given_a - p.d_b_given_a, kTauOpt) << p.theta_over_pi;
  }
}

TEST(Sweep, DerivativeCrossingAtConditionalEntropyMaximum) {
  const auto pts = sweep_w_family(std::numbers::pi / 4, 512);
  const auto c = find_derivative_crossing(pts);
  ASSERT_TRUE(c);
  // S(A|B) is maximal where sin^2 theta = 1 - 1/sqrt(2)
  const double peak = std::asin(std::sqrt(1.0 - 1.0 / std::sqrt(2.0))) / std::numbers::pi;
  EXPECT_NEAR(c->estimate, peak, 2.0 / 511.0);
  EXPECT_LE(c->lo, c->estimate);
  EXPECT_GE(c->hi, c->estimate);
  EXPECT_NEAR(c->estimate, 0.182, 0.005);
}

TEST(Sweep, TooFewPoints) { EXPECT_THROW(sweep_w_family(0.5, 8), ParamOutOfRange); }

TEST(Werner, ThresholdMatchesClosedFormRoot) {
  const auto w = find_werner_threshold(1e-8);
  EXPECT_NEAR(w.r_star, werner_root(), 1e-8);
  EXPECT_NEAR(w.r_star, 0.7476, 5e-4);
  EXPECT_LT(w.residual, 1e-6);
  EXPECT_THROW(find_werner_threshold(0.0), ParamOutOfRange);
}
