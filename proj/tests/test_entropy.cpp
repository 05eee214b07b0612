#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/QR>
#include <gtest/gtest.h>

#include "netent/entropy.hpp"
#include "netent/errors.hpp"
#include "netent/oracle.hpp"
#include "netent/quantum.hpp"
#include "netent/rng.hpp"

using namespace netent;

namespace {

CMatX random_density(int d, int rank, Rng& rng) {
  std::normal_distribution<double> normal;
  CMatX g(d, rank);
  for (Index i = 0; i < g.size(); ++i) g.data()[i] = Complex(normal(rng), normal(rng));
  CMatX rho = g * g.adjoint();
  rho /= rho.trace().real();
  return (rho + rho.adjoint()) / 2.0;
}

CMatX random_unitary(int d, Rng& rng) {
  std::normal_distribution<double> normal;
  CMatX g(d, d);
  for (Index i = 0; i < g.size(); ++i) g.data()[i] = Complex(normal(rng), normal(rng));
  Eigen::HouseholderQR<CMatX> qr(g);
  return qr.householderQ() * CMatX::Identity(d, d);
}

}  // namespace

TEST(DiscreteDist, Validation) {
  EXPECT_THROW(DiscreteDist({0.5, 0.6}), ValidationError);
  EXPECT_THROW(DiscreteDist({1.5, -0.5}), ValidationError);
  EXPECT_THROW(DiscreteDist(std::vector<double>{}), ValidationError);
  EXPECT_NO_THROW(DiscreteDist({0.25, 0.75}));
}

TEST(Shannon, Examples) {
  EXPECT_DOUBLE_EQ(shannon(DiscreteDist({0.5, 0.5})).value(), 1.0);
  EXPECT_DOUBLE_EQ(shannon(DiscreteDist({1.0, 0.0, 0.0})).value(), 0.0);
  EXPECT_DOUBLE_EQ(shannon(DiscreteDist::uniform(4)).value(), 2.0);
}

TEST(Shannon, PermutationInvariantAndBounded) {
  Rng rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> p(1 + trial % 9);
    double sum = 0;
    for (double& x : p) sum += (x = u(rng));
    for (double& x : p) x /= sum;
    const double h = shannon(DiscreteDist(p)).value();
    std::shuffle(p.begin(), p.end(), rng);
    EXPECT_NEAR(shannon(DiscreteDist(p)).value(), h, 1e-12);
    EXPECT_GE(h, 0.0);
    EXPECT_LE(h, std::log2(static_cast<double>(p.size())) + 1e-12);
  }
}

TEST(BernoulliNetwork, Examples) {
  EXPECT_DOUBLE_EQ(bernoulli_network_entropy(4, 0.5).value(), 4.0);
  EXPECT_DOUBLE_EQ(bernoulli_network_entropy(1, 0.5).value(), 1.0);
  EXPECT_NEAR(bernoulli_network_entropy(10, 0.3).value(), 8.812908992306927, 1e-12);
  EXPECT_THROW(bernoulli_network_entropy(4, 0.0), ValidationError);
  EXPECT_THROW(bernoulli_network_entropy(4, 1.0), ValidationError);
}

TEST(BinomialExact, SmallCases) {
  EXPECT_NEAR(binomial_entropy_exact(1, 0.5).value(), 1.0, 1e-14);
  EXPECT_NEAR(binomial_entropy_exact(2, 0.5).value(), 1.5, 1e-14);
  // (1,4,6,4,1)/16.
  EXPECT_NEAR(binomial_entropy_exact(4, 0.5).value(), 2.0306390622295662, 1e-13);
}

TEST(BinomialExact, AgreesWithRecurrenceOracle) {
  for (double p : {0.05, 0.3, 0.5, 0.9}) {
    for (int n : {1, 3, 10, 100, 1000, 10000}) {
      EXPECT_NEAR(binomial_entropy_exact(n, p).value(), oracle::binomial_entropy_recurrence(n, p),
                  1e-9)
          << n << " " << p;
    }
  }
}

TEST(BinomialAsymptotic, Examples) {
  EXPECT_NEAR(binomial_entropy_asymptotic(100, 0.5).value(), 4.369023680068003, 1e-13);
  EXPECT_NEAR(binomial_entropy_asymptotic(100, 0.3).value(),
              binomial_entropy_asymptotic(100, 0.7).value(), 1e-14);
  EXPECT_NEAR(binomial_entropy_exact(100, 0.3).value(), binomial_entropy_asymptotic(100, 0.3).value(),
              0.01);
  const double gap50 = std::abs(binomial_entropy_exact(50, 0.3).value() -
                                binomial_entropy_asymptotic(50, 0.3).value());
  const double gap200 = std::abs(binomial_entropy_exact(200, 0.3).value() -
                                 binomial_entropy_asymptotic(200, 0.3).value());
  EXPECT_LT(gap200, gap50);
}

TEST(BinomialAsymptotic, GapIsFirstOrder) {
  // Away from p = 1/2, n * gap settles to a constant.
  for (double p : {0.2, 0.3}) {
    double prev = 0.0;
    for (int n = 160; n <= 5120; n *= 2) {
      const double gap = binomial_entropy_exact(n, p).value() - binomial_entropy_asymptotic(n, p).value();
      const double scaled = n * std::abs(gap);
      EXPECT_LT(scaled, 1.0) << n << " " << p;
      if (n > 160) EXPECT_NEAR(scaled, prev, 0.05 * prev) << n << " " << p;
      prev = scaled;
    }
  }
}

TEST(BinomialAsymptotic, SymmetricCaseIsSecondOrder) {
  for (int n = 160; n <= 5120; n *= 2) {
    const double gap = binomial_entropy_exact(n, 0.5).value() - binomial_entropy_asymptotic(n, 0.5).value();
    EXPECT_LT(static_cast<double>(n) * n * std::abs(gap), 1.0) << n;
  }
}

TEST(GaussianEntropy, Examples) {
  EXPECT_NEAR(gaussian_differential_entropy(MatX::Identity(1, 1)).value(), 2.047095585180641,
              1e-14);
  for (int n : {1, 3, 6}) {
    for (double s2 : {0.5, 1.0, 4.0}) {
      const double expected = 0.5 * n * std::log2(2 * std::numbers::pi * std::numbers::e * s2);
      EXPECT_NEAR(gaussian_differential_entropy(s2 * MatX::Identity(n, n)).value(), expected, 1e-12);
    }
  }
  EXPECT_TRUE(gaussian_differential_entropy(MatX::Ones(3, 3)).is_minus_infinity());
  EXPECT_THROW(gaussian_differential_entropy(-MatX::Identity(2, 2)), NumericalError);
}

TEST(GaussianEntropy, MarginalMatchesOneDimensional) {
  EXPECT_NEAR(gaussian_marginal_entropy(2.5).value(),
              gaussian_differential_entropy(2.5 * MatX::Identity(1, 1)).value(), 1e-14);
  EXPECT_TRUE(gaussian_marginal_entropy(0.0).is_minus_infinity());
}

TEST(VonNeumann, PureStatesHaveZeroEntropy) {
  for (const char* ket : {"0", "+", "01+-", "1-0"}) {
    EXPECT_NEAR(von_neumann(qstate_from_kets(ket)).value(), 0.0, 1e-10) << ket;
  }
}

TEST(VonNeumann, MaximallyMixed) {
  for (int n = 1; n <= 4; ++n) {
    EXPECT_NEAR(von_neumann(DensityMatrix::maximally_mixed(n)).value(), n, 1e-12);
  }
}

TEST(VonNeumann, TwoStateMix) {
  VecX p = VecX::Zero(4);
  p(1) = p(2) = 0.5;
  EXPECT_NEAR(von_neumann(DensityMatrix::diagonal(p)).value(), 1.0, 1e-14);
}

TEST(VonNeumann, RejectsBadTrace) {
  EXPECT_THROW(von_neumann(CMatX(CMatX::Identity(2, 2))), ValidationError);
}

TEST(VonNeumann, UnitaryInvariance) {
  Rng rng(31);
  for (int d : {2, 4, 8, 16}) {
    const CMatX rho = random_density(d, 1 + d / 2, rng);
    const CMatX u = random_unitary(d, rng);
    const CMatX rotated = u * rho * u.adjoint();
    EXPECT_NEAR(von_neumann(CMatX((rotated + rotated.adjoint()) / 2.0)).value(),
                von_neumann(rho).value(), 1e-9);
  }
}

TEST(VonNeumann, Concavity) {
  Rng rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 1 << (1 + trial % 4);
    const CMatX a = random_density(d, 1 + trial % d, rng);
    const CMatX b = random_density(d, 1 + (trial * 7) % d, rng);
    const double lambda = u(rng);
    const CMatX mix = lambda * a + (1 - lambda) * b;
    EXPECT_GE(von_neumann(mix).value(),
              lambda * von_neumann(a).value() + (1 - lambda) * von_neumann(b).value() - 1e-9);
  }
}
