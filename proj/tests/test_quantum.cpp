#include <cmath>

#include <gtest/gtest.h>

#include "netent/entropy.hpp"
#include "netent/errors.hpp"
#include "netent/linalg.hpp"
#include "netent/oracle.hpp"
#include "netent/quantum.hpp"
#include "netent/rng.hpp"

using namespace netent;

namespace {

double max_abs(const CMatX& m) { return m.cwiseAbs().maxCoeff(); }

CMatX basis_projector(int n_qubits, Index index) {
  const Index d = Index{1} << n_qubits;
  CMatX rho = CMatX::Zero(d, d);
  rho(index, index) = 1.0;
  return rho;
}

DensityMatrix random_state(int n_qubits, Rng& rng) {
  const Index d = Index{1} << n_qubits;
  std::normal_distribution<double> normal;
  CMatX g(d, d);
  for (Index i = 0; i < g.size(); ++i) g.data()[i] = Complex(normal(rng), normal(rng));
  CMatX rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix((rho + rho.adjoint()) / 2.0);
}

}  // namespace

TEST(SwapOperator, ExchangesBits) {
  const auto u = swap_operator(2, {0, 1});
  EXPECT_EQ(u.basis_image()[1], 2);  // |01> -> |10>
  EXPECT_EQ(u.basis_image()[2], 1);
  const auto u13 = swap_operator(3, {0, 2});
  EXPECT_EQ(u13.basis_image()[5], 5);  // |101> fixed
  EXPECT_EQ(u13.basis_image()[4], 1);  // |100> -> |001>
}

TEST(SwapOperator, UnitaryInvolution) {
  for (int n = 2; n <= 4; ++n) {
    for (int j = 0; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        const MatX u = swap_operator(n, {j, k}).matrix();
        const MatX id = MatX::Identity(u.rows(), u.cols());
        EXPECT_EQ(u * u, id);
        EXPECT_EQ(u * u.transpose(), id);
      }
    }
  }
}

TEST(SwapOperator, Errors) {
  EXPECT_THROW(swap_operator(2, {0, 2}), ValidationError);
  EXPECT_THROW(swap_operator(2, {1, 1}), ValidationError);
}

TEST(QubitPermutation, CompositionMatchesMatrixProduct) {
  const auto perms = all_qubit_permutations(3);
  ASSERT_EQ(perms.size(), 6u);
  EXPECT_EQ(perms[0].permutation(), (std::vector<int>{0, 1, 2}));
  for (const auto& a : perms) {
    for (const auto& b : perms) {
      EXPECT_EQ(a.compose(b).matrix(), a.matrix() * b.matrix());
    }
  }
}

TEST(QubitPermutation, ConjugateMatchesDenseProduct) {
  Rng rng(2);
  const DensityMatrix rho = random_state(3, rng);
  for (const auto& p : all_qubit_permutations(3)) {
    const CMatX u = p.matrix().cast<Complex>();
    EXPECT_LE(max_abs(p.conjugate(rho.matrix()) - u * rho.matrix() * u.adjoint()), 1e-15);
  }
}

TEST(QubitPermutation, RejectsNonPermutation) {
  EXPECT_THROW(QubitPermutation({0, 0}), ValidationError);
  EXPECT_THROW(all_qubit_permutations(7), ValidationError);
}

TEST(Kets, SingleQubitStates) {
  const CMatX zero = qstate_from_kets("0").matrix();
  EXPECT_LE(max_abs(zero - basis_projector(1, 0)), 1e-15);
  CMatX plus(2, 2);
  plus << 0.5, 0.5, 0.5, 0.5;
  EXPECT_LE(max_abs(qstate_from_kets("+").matrix() - plus), 1e-15);
  CMatX minus(2, 2);
  minus << 0.5, -0.5, -0.5, 0.5;
  EXPECT_LE(max_abs(qstate_from_kets("-").matrix() - minus), 1e-15);
}

TEST(Kets, FourQubitInitialState) {
  const DensityMatrix rho = qstate_from_kets("01+-");
  EXPECT_EQ(rho.n_qubits(), 4);
  EXPECT_NEAR(von_neumann(rho).value(), 0.0, 1e-10);
  EXPECT_NEAR(rho.matrix().trace().real(), 1.0, 1e-14);
  // Amplitude of |0100> is 1/2 (first qubit 0, second 1, then +, -).
  EXPECT_NEAR(rho.matrix()(4, 4).real(), 0.25, 1e-15);
  EXPECT_NEAR(rho.matrix()(4, 5).real(), -0.25, 1e-15);
  EXPECT_NEAR(rho.matrix()(4, 6).real(), 0.25, 1e-15);
}

TEST(Kets, Errors) {
  EXPECT_THROW(qstate_from_kets("01x"), ValidationError);
  EXPECT_THROW(qstate_from_kets(""), ValidationError);
}

TEST(DensityMatrix, Validation) {
  EXPECT_THROW(DensityMatrix(CMatX::Identity(3, 3) / 3.0), ValidationError);
  EXPECT_THROW(DensityMatrix(CMatX::Identity(2, 2)), ValidationError);
  CMatX negative = CMatX::Zero(2, 2);
  negative(0, 0) = 1.5;
  negative(1, 1) = -0.5;
  EXPECT_THROW(DensityMatrix{negative}, ValidationError);
}

TEST(IntegrateQuantum, SingleEdgeClosedForm) {
  const Graph g = path_graph(2);
  const DensityMatrix rho0 = qstate_from_kets("0+");
  const auto u = swap_operator(2, {0, 1});
  const CMatX swapped = u.conjugate(rho0.matrix());
  const std::vector<double> grid{0.0, 0.25, 0.5, 1.0, 2.0};
  const auto traj = integrate_quantum(g, rho0, grid);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double d = std::exp(-2.0 * grid[k]);
    const CMatX expected = 0.5 * (1 + d) * rho0.matrix() + 0.5 * (1 - d) * swapped;
    EXPECT_LE(max_abs(traj.states[k].matrix() - expected), 1e-9) << grid[k];
  }
}

TEST(IntegrateQuantum, SymmetricStateIsFixed) {
  const Graph g = default_graph();
  const DensityMatrix rho0 = qstate_from_kets("++++");
  const std::vector<double> grid{0.0, 1.0, 3.0};
  const auto traj = integrate_quantum(g, rho0, grid);
  for (const auto& s : traj.states) EXPECT_LE(max_abs(s.matrix() - rho0.matrix()), 1e-14);
}

TEST(IntegrateQuantum, AgreesWithSuperoperatorOracle) {
  Rng rng(23);
  const std::vector<Graph> graphs{path_graph(2), path_graph(3), complete_graph(3)};
  for (const Graph& g : graphs) {
    const DensityMatrix rho0 = random_state(g.node_count(), rng);
    const std::vector<double> grid{0.5, 1.5, 4.0};
    const auto traj = integrate_quantum(g, rho0, grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const CMatX exact = oracle::superoperator_evolution(g, rho0.matrix(), grid[k]);
      EXPECT_LE(max_abs(traj.states[k].matrix() - exact), 1e-6);
    }
  }
}

TEST(IntegrateQuantum, EntropyIsNonDecreasing) {
  const Graph g = default_graph();
  const auto traj = integrate_quantum(g, qstate_from_kets("01+-"), std::vector<double>{
      0.0, 0.1, 0.2, 0.4, 0.8, 1.6, 3.2});
  for (std::size_t k = 1; k < traj.times.size(); ++k) {
    EXPECT_GE(traj.entropy_bits[k], traj.entropy_bits[k - 1] - 1e-8);
    EXPECT_LT(traj.trace_drift[k], 1e-9);
  }
}

TEST(IntegrateQuantum, GridHandling) {
  const Graph g = path_graph(2);
  const DensityMatrix rho0 = qstate_from_kets("01");
  // Off-step grid points are hit exactly.
  const auto traj = integrate_quantum(g, rho0, std::vector<double>{0.013, 0.013, 0.5});
  ASSERT_EQ(traj.states.size(), 3u);
  EXPECT_EQ(traj.states[0].matrix(), traj.states[1].matrix());
  EXPECT_THROW(integrate_quantum(g, rho0, std::vector<double>{1.0, 0.5}), ValidationError);
  EXPECT_THROW(integrate_quantum(g, rho0, std::vector<double>{1.0}, 0.0), ValidationError);
  EXPECT_THROW(integrate_quantum(default_graph(), rho0, std::vector<double>{1.0}),
               ValidationError);
}

TEST(IntegrateQuantum, RejectsUnstableStep) {
  EXPECT_THROW(integrate_quantum(default_graph(), qstate_from_kets("01+-"),
                                 std::vector<double>{1.0}, 0.5),
               ValidationError);
}

TEST(SymmetrizedLimit, Examples) {
  const DensityMatrix sym = qstate_from_kets("00");
  EXPECT_LE(max_abs(symmetrized_limit(sym).matrix() - sym.matrix()), 1e-15);

  const DensityMatrix lim = symmetrized_limit(qstate_from_kets("01"));
  CMatX expected = CMatX::Zero(4, 4);
  expected(1, 1) = expected(2, 2) = 0.5;
  EXPECT_LE(max_abs(lim.matrix() - expected), 1e-15);
  EXPECT_NEAR(von_neumann(lim).value(), 1.0, 1e-12);
}

TEST(SymmetrizedLimit, InvariantUnderEverySwapAndFixedPoint) {
  Rng rng(41);
  for (int n = 2; n <= 4; ++n) {
    const DensityMatrix lim = symmetrized_limit(random_state(n, rng));
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        EXPECT_LE(max_abs(swap_operator(n, {j, k}).conjugate(lim.matrix()) - lim.matrix()), 1e-10);
    EXPECT_LT(consensus_generator(complete_graph(n), lim.matrix()).norm(), 1e-10);
    EXPECT_LT(consensus_generator(path_graph(n), lim.matrix()).norm(), 1e-10);
  }
}

TEST(SymmetrizedLimit, LongRunConverges) {
  const Graph g = default_graph();
  const DensityMatrix rho0 = qstate_from_kets("01+-");
  const auto traj = integrate_quantum(g, rho0, std::vector<double>{20.0});
  EXPECT_LT(max_abs(traj.states[0].matrix() - symmetrized_limit(rho0).matrix()), 1e-4);
}

TEST(SymmetrizedLimit, SixQubitCap) {
  EXPECT_NO_THROW(symmetrized_limit(DensityMatrix::maximally_mixed(6)));
  EXPECT_THROW(symmetrized_limit(DensityMatrix::maximally_mixed(7)), ValidationError);
}

TEST(ConvexHull, ZeroIntervalPutsAllWeightOnIdentity) {
  const Graph g = path_graph(3);
  const auto cert = convex_hull_check(g, qstate_from_kets("01+"), 0.0, 0.0);
  EXPECT_TRUE(cert.certified);
  EXPECT_NEAR(cert.mixture.weights[0], 1.0, 1e-8);
  for (std::size_t j = 1; j < cert.mixture.weights.size(); ++j)
    EXPECT_NEAR(cert.mixture.weights[j], 0.0, 1e-8);
}

TEST(ConvexHull, SingleEdgeWeightsMatchClosedForm) {
  const Graph g = path_graph(2);
  for (double eps : {0.1, 0.5, 1.0}) {
    const auto cert = convex_hull_check(g, qstate_from_kets("0+"), 0.3, eps);
    ASSERT_TRUE(cert.certified) << cert.mixture.residual;
    const double d = std::exp(-2.0 * eps);
    EXPECT_NEAR(cert.mixture.weights[0], 0.5 * (1 + d), 1e-7);
    EXPECT_NEAR(cert.mixture.weights[1], 0.5 * (1 - d), 1e-7);
  }
}

TEST(ConvexHull, WeightsMatchPermutationWalk) {
  Rng rng(17);
  for (const Graph& g : {path_graph(3), star_graph(3), default_graph()}) {
    const DensityMatrix rho0 = random_state(g.node_count(), rng);
    for (double s : {0.0, 0.7}) {
      for (double eps : {0.1, 1.0}) {
        const auto cert = convex_hull_check(g, rho0, s, eps);
        const VecX exact = oracle::permutation_walk_weights(g, eps);
        ASSERT_EQ(cert.mixture.weights.size(), static_cast<std::size_t>(exact.size()));
        for (Index j = 0; j < exact.size(); ++j)
          EXPECT_NEAR(cert.mixture.weights[static_cast<std::size_t>(j)], exact(j), 1e-6);
      }
    }
  }
}

TEST(ConvexHull, WeightsFormADistribution) {
  Rng rng(5);
  for (const Graph& g : {path_graph(3), complete_graph(3), star_graph(3)}) {
    const DensityMatrix rho0 = random_state(g.node_count(), rng);
    for (double s : {0.0, 1.0}) {
      for (double eps : {0.1, 1.0}) {
        const auto cert = convex_hull_check(g, rho0, s, eps);
        EXPECT_TRUE(cert.certified) << cert.mixture.residual;
        EXPECT_NEAR(cert.mixture.weight_sum, 1.0, 1e-8);
        for (double w : cert.mixture.weights) {
          EXPECT_GE(w, 0.0);
          EXPECT_LE(w, 1.0);
        }
      }
    }
  }
}

TEST(ConvexHull, QubitCap) {
  EXPECT_THROW(convex_hull_check(path_graph(5), qstate_from_kets("01010"), 0.0, 0.1),
               ValidationError);
}
