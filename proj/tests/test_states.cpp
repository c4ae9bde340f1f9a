#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "quncert/entropy.hpp"
#include "quncert/states.hpp"

using namespace quncert;

TEST(Philox, KnownAnswerVectors) {
  using A4 = std::array<std::uint32_t, 4>;
  EXPECT_EQ(philox4x32_10({0, 0, 0, 0}, {0, 0}), (A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
            (A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
            (A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(RandomStream, StreamsAreReproducibleAndDistinct) {
  RandomStream a(7, 3), b(7, 3), c(7, 4), d(8, 3);
  for (int i = 0; i < 10; ++i) {
    const auto x = a.next_u64();
    EXPECT_EQ(x, b.next_u64());
    EXPECT_NE(x, c.next_u64());
    EXPECT_NE(x, d.next_u64());
  }
}

TEST(RandomStream, NormalMoments) {
  RandomStream rs(1, 0);
  double sum = 0, sq = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double x = rs.normal();
    sum += x;
    sq += x * x;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.02);
  EXPECT_NEAR(sq / n, 1.0, 0.02);
}

TEST(Samplers, HaarQubitMoments) {
  // |<0|psi>|^2 is uniform on [0, 1] for a Haar qubit: mean 1/2, second moment 1/3
  double m1 = 0, m2 = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const double p = std::norm(sample_haar_pure({2}, 2024, i).amplitudes()[0]);
    m1 += p;
    m2 += p * p;
  }
  EXPECT_NEAR(m1 / n, 0.5, 0.02);
  EXPECT_NEAR(m2 / n, 1.0 / 3.0, 0.02);
}

TEST(Samplers, InducedMeasurePurity) {
  // E tr(rho^2) = (d + k) / (d k + 1) for the reduced state of a Haar state on C^d (x) C^k
  for (auto [d, k] : {std::pair<std::size_t, std::size_t>{4, 2}, {4, 4}, {2, 2}}) {
    double mean = 0;
    const int n = 4000;
    std::vector<std::size_t> dims = (d == 4) ? std::vector<std::size_t>{2, 2} : std::vector<std::size_t>{2};
    for (int i = 0; i < n; ++i) {
      const auto rho = sample_random_mixed(dims, k, 77, i);
      mean += (rho.matrix() * rho.matrix()).trace().real();
    }
    const double expect = double(d + k) / double(d * k + 1);
    EXPECT_NEAR(mean / n, expect, 0.01) << d << " " << k;
  }
}

TEST(Samplers, DeterministicByIndex) {
  const auto a = sample_haar_pure({2, 2, 2}, 5, 17);
  const auto b = sample_haar_pure({2, 2, 2}, 5, 17);
  EXPECT_EQ(a.amplitudes(), b.amplitudes());
  EXPECT_THROW(sample_haar_pure({4, 4, 8}, 1), DimTooLarge);
  EXPECT_THROW(sample_random_mixed({2, 2}, 5, 1), ParamOutOfRange);
}

TEST(Constructors, BellAndGhz) {
  const auto bell = DensityMatrix::from_pure(make_bell());
  EXPECT_NEAR(von_neumann_entropy(bell, {0}), 1.0, 1e-12);
  const auto ghz = DensityMatrix::from_pure(make_ghz());
  EXPECT_NEAR(von_neumann_entropy(ghz, {0, 1}), 1.0, 1e-12);
  EXPECT_NEAR(conditional_entropy(ghz, {0}, {1}), 0.0, 1e-12);
}

TEST(Constructors, WPurificationReducesToMixedFamily) {
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const double t = std::numbers::pi * (0.05 + 0.3 * i);
      const double p = std::numbers::pi * (0.02 + 0.15 * j);
      const auto w = DensityMatrix::from_pure(make_w_purification(t, p));
      EXPECT_LT((marginal(w, {0, 1}).matrix() - make_w_marginal(t, p).matrix()).norm(), 1e-12) << i << "," << j;
    }
  const auto sym = make_w_purification(kSymmetricWTheta, kSymmetricWPhi).amplitudes();
  for (int k : {3, 5, 6}) EXPECT_NEAR(std::abs(sym[k]), 1.0 / std::sqrt(3.0), 1e-12);
}

TEST(Constructors, WernerRange) {
  EXPECT_THROW(make_werner(1.5), ParamOutOfRange);
  EXPECT_THROW(make_werner(-0.1), ParamOutOfRange);
  EXPECT_NEAR(von_neumann_entropy(make_werner(0.0)), 2.0, 1e-12);
}

TEST(Constructors, QubitQuditIsBellTimesMixedQubit) {
  const auto fac = make_factorized(make_bell(), make_diagonal_qubit(0.5));
  EXPECT_LT((fac.state.matrix() - make_qubit_qudit_example().matrix()).norm(), 1e-15);
  EXPECT_EQ(fac.state.space().dims(), (std::vector<std::size_t>{2, 4}));
}

TEST(Constructors, FactorizedConditionalEntropyIsMinusSA) {
  for (double p : {0.5, 0.75, 0.9})
    for (double q : {0.5, 0.2}) {
      const auto f = make_factorized(make_schmidt_pair(p), make_diagonal_qubit(q));
      EXPECT_NEAR(conditional_entropy(f.state, {0}, {1}), -oracle::h2(p), 1e-12);
      EXPECT_NEAR(von_neumann_entropy(f.state, {0}), oracle::h2(p), 1e-12);
    }
  EXPECT_NEAR(oracle::h2(0.75), 0.811278124459133, 1e-12);
}

TEST(StateSpec, RoundTrip) {
  for (const char* text : {"family=werner r=0.25", "family=w_generalized theta=0.3 phi=0.785",
                           "family=random_mixed dims=2,3 rank=2 seed=4 index=9", "family=factorized_eq17 seed=1 index=2",
                           "family=bell", "family=haar_pure dims=2,2,2 seed=42 index=7"}) {
    const auto spec = StateSpec::parse(text);
    EXPECT_EQ(spec.to_string(), text);
    EXPECT_EQ(StateSpec::parse(spec.to_string()).to_string(), spec.to_string());
  }
}

TEST(StateSpec, PiSuffix) {
  const auto spec = StateSpec::parse("family=eq12_mixed theta=0.25pi phi=pi");
  EXPECT_DOUBLE_EQ(*spec.theta, std::numbers::pi / 4);
  EXPECT_DOUBLE_EQ(*spec.phi, std::numbers::pi);
}

TEST(StateSpec, Errors) {
  EXPECT_THROW(StateSpec::parse("theta=1"), ParseError);
  EXPECT_THROW(StateSpec::parse("family=nope"), ParseError);
  EXPECT_THROW(StateSpec::parse("family=bell r=0.5"), ParseError);
  EXPECT_THROW(StateSpec::parse("family=werner"), ParseError);
  EXPECT_THROW(StateSpec::parse("family=werner r=2"), ParamOutOfRange);
  EXPECT_THROW(StateSpec::parse("family=werner r=abc"), ParseError);
  EXPECT_THROW(StateSpec::parse("family=haar_pure"), ParseError);
  EXPECT_THROW(StateSpec::parse("family=factorized_eq17 schmidt=0.5 seed=3"), ParseError);
  EXPECT_THROW(build_state(StateSpec::parse("family=haar_pure dims=8,16")), DimTooLarge);
}

TEST(StateSpec, BuildsEveryFamily) {
  for (const auto& [fam, name] : kFamilyNames) {
    std::string text = "family=" + std::string(name);
    if (fam == StateFamily::Werner) text += " r=0.5";
    if (fam == StateFamily::HaarPure || fam == StateFamily::RandomMixed) text += " dims=2,2";
    EXPECT_NO_THROW(build_state(StateSpec::parse(text))) << text;
  }
}
