#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "netent/errors.hpp"
#include "netent/gossip.hpp"
#include "netent/linalg.hpp"
#include "netent/oracle.hpp"

using namespace netent;

namespace {

VecX vec(std::initializer_list<double> v) {
  VecX x(static_cast<Index>(v.size()));
  Index i = 0;
  for (double e : v) x(i++) = e;
  return x;
}

// Empirical edge frequencies from the two-stage draw.
std::vector<double> edge_frequencies(const GossipConfig& cfg, long draws) {
  Rng rng = derive_stream(cfg.seed(), 0);
  std::vector<double> counts(cfg.graph().edges().size(), 0.0);
  for (long s = 0; s < draws; ++s) {
    const Edge e = sample_pair(cfg, rng);
    counts[cfg.graph().edge_index(e.first, e.second)] += 1.0;
  }
  for (double& c : counts) c /= static_cast<double>(draws);
  return counts;
}

}  // namespace

TEST(GossipConfig, RejectsDegenerateBeta) {
  EXPECT_THROW(GossipConfig(default_graph(), 0.0), ValidationError);
  EXPECT_THROW(GossipConfig(default_graph(), 1.0), ValidationError);
  EXPECT_THROW(GossipConfig(build_graph(4, {{1, 2}, {3, 4}})), ValidationError);
  EXPECT_NO_THROW(GossipConfig(default_graph(), 0.3));
}

TEST(Algorithm, NamesRoundTrip) {
  for (auto a : {Algorithm::A1, Algorithm::A1Prime, Algorithm::A2, Algorithm::AQ1, Algorithm::AQ2})
    EXPECT_EQ(parse_algorithm(algorithm_name(a)), a);
  EXPECT_EQ(parse_algorithm("a1prime"), Algorithm::A1Prime);
  EXPECT_THROW(parse_algorithm("A3"), ValidationError);
}

TEST(SamplePair, K2AlwaysPicksTheEdge) {
  GossipConfig cfg(path_graph(2));
  Rng rng(1);
  for (int s = 0; s < 100; ++s) EXPECT_EQ(sample_pair(cfg, rng), (Edge{0, 1}));
}

TEST(SamplePair, FrequenciesMatchPairDistribution) {
  const long draws = 100000;
  for (const Graph& g : {complete_graph(3), star_graph(3), default_graph()}) {
    GossipConfig cfg(g, 0.5, 99);
    const auto freq = edge_frequencies(cfg, draws);
    for (std::size_t e = 0; e < freq.size(); ++e) {
      const double q = cfg.pairs().probs[e];
      EXPECT_NEAR(freq[e], q, 3.0 * std::sqrt(q * (1 - q) / draws)) << e;
    }
  }
}

TEST(StepA1, AveragesPair) {
  const auto s = step_A1({vec({0.0, 1.0}), 0}, {0, 1});
  EXPECT_EQ(s.x, vec({0.5, 0.5}));
  EXPECT_EQ(s.k, 1);
  EXPECT_EQ(step_A1({vec({2.0, 2.0, 7.0}), 0}, {0, 1}).x, vec({2.0, 2.0, 7.0}));
}

TEST(StepA1, PreservesSum) {
  Rng rng(3);
  GossipConfig cfg(default_graph());
  ClassicalGossipState s{vec({0.3, -1.0, 2.5, 4.0}), 0};
  const double sum = s.x.sum();
  for (int k = 0; k < 200; ++k) s = step_A1(s, sample_pair(cfg, rng));
  EXPECT_NEAR(s.x.sum(), sum, 1e-12);
}

TEST(StepA1Prime, CopiesOneEnd) {
  EXPECT_EQ(step_A1prime({vec({0.0, 1.0}), 0}, {0, 1}, true).x, vec({0.0, 0.0}));
  EXPECT_EQ(step_A1prime({vec({0.0, 1.0}), 0}, {0, 1}, false).x, vec({1.0, 1.0}));
}

TEST(StepA2, SwapsOrHolds) {
  EXPECT_EQ(step_A2({vec({0.0, 1.0}), 0}, {0, 1}, false).x, vec({1.0, 0.0}));
  EXPECT_EQ(step_A2({vec({0.0, 1.0}), 0}, {0, 1}, true).x, vec({0.0, 1.0}));
}

TEST(StepA2, PreservesMultiset) {
  Rng rng(4);
  GossipConfig cfg(default_graph());
  ClassicalGossipState s{vec({0.3, -1.0, 2.5, 4.0}), 0};
  std::vector<double> sorted0(s.x.data(), s.x.data() + 4);
  std::sort(sorted0.begin(), sorted0.end());
  for (int k = 0; k < 500; ++k) {
    s = step_A2(s, sample_pair(cfg, rng), sample_coin(cfg, rng));
    std::vector<double> sorted(s.x.data(), s.x.data() + 4);
    std::sort(sorted.begin(), sorted.end());
    ASSERT_EQ(sorted, sorted0);
  }
}

TEST(StepA2, CoinAverageIsA1) {
  // With beta = 1/2, E_b[A2 step] = A1 step exactly.
  const VecX x = vec({0.3, -1.0, 2.5, 4.0});
  const Graph g = default_graph();
  for (const Edge& e : g.edges()) {
    const VecX mean = 0.5 * step_A2({x, 0}, e, true).x + 0.5 * step_A2({x, 0}, e, false).x;
    EXPECT_EQ(mean, step_A1({x, 0}, e).x);
  }
}

TEST(StepAQ1, MixesAsymmetricState) {
  const DensityMatrix rho0 = qstate_from_kets("01");
  const auto s = step_AQ1({rho0, 0}, {0, 1});
  CMatX expected = CMatX::Zero(4, 4);
  expected(1, 1) = expected(2, 2) = 0.5;
  EXPECT_LE((s.rho.matrix() - expected).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR(von_neumann(rho0).value(), 0.0, 1e-12);
  EXPECT_NEAR(von_neumann(s.rho).value(), 1.0, 1e-12);
}

TEST(StepAQ1, SymmetricStateUnchanged) {
  const DensityMatrix rho0 = qstate_from_kets("+++");
  const auto s = step_AQ1({rho0, 0}, {0, 2});
  EXPECT_LE((s.rho.matrix() - rho0.matrix()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(StepAQ1, EntropyNonDecreasingAlongPaths) {
  GossipConfig cfg(path_graph(3), 0.5, 8);
  Rng rng(8);
  QuantumGossipState s{qstate_from_kets("01+"), 0};
  double prev = von_neumann(s.rho).value();
  for (int k = 0; k < 60; ++k) {
    s = step_AQ1(s, sample_pair(cfg, rng));
    const double cur = von_neumann(s.rho).value();
    EXPECT_GE(cur, prev - 1e-10);
    EXPECT_NEAR(s.rho.matrix().trace().real(), 1.0, 1e-12);
    prev = cur;
  }
}

TEST(StepAQ2, PreservesSpectrum) {
  GossipConfig cfg(complete_graph(3), 0.5, 2);
  Rng rng(2);
  VecX p(8);
  p << 0.3, 0.2, 0.15, 0.1, 0.1, 0.08, 0.05, 0.02;
  QuantumGossipState s{DensityMatrix::diagonal(p), 0};
  const VecX spectrum0 = s.rho.spectrum();
  const double s0 = von_neumann(s.rho).value();
  EXPECT_EQ(step_AQ2(s, {0, 1}, true).rho.matrix(), s.rho.matrix());
  for (int k = 0; k < 100; ++k) {
    s = step_AQ2(s, sample_pair(cfg, rng), sample_coin(cfg, rng));
    EXPECT_LE((s.rho.spectrum() - spectrum0).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_NEAR(von_neumann(s.rho).value(), s0, 1e-10);
  }
}

TEST(SingleParticle, K2IsProjector) {
  const auto chain = single_particle_matrix(GossipConfig(path_graph(2)));
  EXPECT_LE((chain.P - MatX::Constant(2, 2, 0.5)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(SingleParticle, Triangle) {
  const auto chain = single_particle_matrix(GossipConfig(complete_graph(3)));
  MatX expected(3, 3);
  expected << 2.0 / 3, 1.0 / 6, 1.0 / 6, 1.0 / 6, 2.0 / 3, 1.0 / 6, 1.0 / 6, 1.0 / 6, 2.0 / 3;
  EXPECT_LE((chain.P - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(SingleParticle, DoublyStochasticOnRandomConfigs) {
  Rng rng(6);
  std::uniform_real_distribution<double> beta(0.05, 0.95);
  for (int trial = 0; trial < 30; ++trial) {
    const auto chain =
        single_particle_matrix(GossipConfig(random_connected_graph(2 + trial % 7, 0.3, rng), beta(rng)));
    const Index n = chain.P.rows();
    EXPECT_LE((chain.P - chain.P.transpose()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_GE(chain.P.minCoeff(), 0.0);
    EXPECT_LE((chain.P * VecX::Ones(n) - VecX::Ones(n)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE((VecX::Ones(n).transpose() * chain.P - VecX::Ones(n).transpose()).cwiseAbs().maxCoeff(),
              1e-12);
  }
}

TEST(SingleParticle, MatchesLabelTrackingOracle) {
  const long steps = 1000000;
  for (const Graph& g : {complete_graph(3), default_graph()}) {
    const auto chain = single_particle_matrix(GossipConfig(g, 0.5));
    const MatX empirical = oracle::label_tracking_transition(g, 0.5, steps, 1234);
    for (Index i = 0; i < chain.P.rows(); ++i) {
      for (Index j = 0; j < chain.P.cols(); ++j) {
        const double p = chain.P(i, j);
        EXPECT_NEAR(empirical(i, j), p, 3.0 * std::sqrt(p * (1 - p) / steps) + 1e-12) << i << j;
      }
    }
  }
}

TEST(MarginalEvolution, Basics) {
  const auto chain = single_particle_matrix(GossipConfig(path_graph(2)));
  const std::vector<DiscreteDist> m0{DiscreteDist::point_mass(2, 0), DiscreteDist::point_mass(2, 1)};
  const auto same = marginal_evolution(chain, m0, 0);
  EXPECT_EQ(same[0].probs(), m0[0].probs());
  const auto one = marginal_evolution(chain, m0, 1);
  for (const auto& m : one) {
    EXPECT_NEAR(m[0], 0.5, 1e-15);
    EXPECT_NEAR(m[1], 0.5, 1e-15);
  }
}

TEST(MarginalEvolution, IdenticalMarginalsAreInvariant) {
  const auto chain = single_particle_matrix(GossipConfig(default_graph()));
  const DiscreteDist m({0.2, 0.5, 0.3});
  const std::vector<DiscreteDist> m0(4, m);
  for (int k : {1, 5, 30}) {
    for (const auto& out : marginal_evolution(chain, m0, k))
      for (std::size_t v = 0; v < 3; ++v) EXPECT_NEAR(out[v], m[v], 1e-14);
  }
}

TEST(MarginalEvolution, Errors) {
  const auto chain = single_particle_matrix(GossipConfig(path_graph(2)));
  const std::vector<DiscreteDist> wrong_count{DiscreteDist::uniform(2)};
  EXPECT_THROW(marginal_evolution(chain, wrong_count, 1), ValidationError);
  const std::vector<DiscreteDist> mismatch{DiscreteDist::uniform(2), DiscreteDist::uniform(3)};
  EXPECT_THROW(marginal_evolution(chain, mismatch, 1), ValidationError);
}

TEST(JointPmf, OrbitSizes) {
  EXPECT_EQ(JointPmf::point_mass(default_graph(), vec({0, 1, 2, 3})).support().size(), 24u);
  EXPECT_EQ(JointPmf::point_mass(default_graph(), vec({0, 0, 1, 1})).support().size(), 6u);
  EXPECT_EQ(JointPmf::point_mass(default_graph(), vec({5, 5, 5, 5})).support().size(), 1u);
  EXPECT_THROW(JointPmf::point_mass(path_graph(7), VecX::Zero(7)), ValidationError);
}

TEST(JointPmf, SymmetricVectorIsFixedPoint) {
  GossipConfig cfg(default_graph());
  const auto f = JointPmf::point_mass(cfg.graph(), vec({2, 2, 2, 2}));
  const auto next = joint_pmf_operator_step(f, cfg);
  ASSERT_EQ(next.support().size(), 1u);
  EXPECT_NEAR(next.probs()[0], 1.0, 1e-15);
}

TEST(JointPmf, K2OneStep) {
  GossipConfig cfg(path_graph(2));
  const auto f = joint_pmf_operator_step(JointPmf::point_mass(cfg.graph(), vec({0, 1})), cfg);
  EXPECT_NEAR(f.probs()[f.find(vec({0, 1}))], 0.5, 1e-15);
  EXPECT_NEAR(f.probs()[f.find(vec({1, 0}))], 0.5, 1e-15);
}

TEST(JointPmf, MarginalsMatchSingleParticleChain) {
  // The joint operator and the P^k mixture are independent computations.
  for (const Graph& g : {complete_graph(3), default_graph(), path_graph(4), star_graph(3)}) {
    for (double beta : {0.5, 0.2}) {
      GossipConfig cfg(g, beta);
      const int n = g.node_count();
      const VecX x0 = VecX::LinSpaced(n, 0.0, n - 1.0);
      const auto values = distinct_values(x0);
      const auto chain = single_particle_matrix(cfg);
      std::vector<DiscreteDist> m0;
      for (int i = 0; i < n; ++i) m0.push_back(DiscreteDist::point_mass(n, i));
      auto f = JointPmf::point_mass(g, x0);
      for (int k = 1; k <= 50; ++k) {
        f = joint_pmf_operator_step(f, cfg);
        const auto joint = f.node_marginals(values);
        const auto mixture = marginal_evolution(chain, m0, k);
        for (int i = 0; i < n; ++i)
          for (int v = 0; v < n; ++v) ASSERT_NEAR(joint[i][v], mixture[i][v], 1e-12) << k;
      }
    }
  }
}

TEST(JointPmf, EntropyIsNonDecreasing) {
  GossipConfig cfg(default_graph());
  auto f = JointPmf::point_mass(cfg.graph(), vec({0, 1, 2, 3}));
  double prev = shannon(f.distribution()).value();
  for (int k = 0; k < 60; ++k) {
    f = joint_pmf_operator_step(f, cfg);
    const double cur = shannon(f.distribution()).value();
    EXPECT_GE(cur, prev - 1e-12);
    prev = cur;
  }
  EXPECT_NEAR(prev, std::log2(24.0), 1e-6);
}

TEST(MonteCarlo, A2OnK2MatchesProjector) {
  GossipConfig cfg(path_graph(2), 0.5, 7, 10);
  const long trials = 100000;
  const auto st = run_monte_carlo(cfg, Algorithm::A2, vec({0, 1}), trials);
  const double sigma = std::sqrt(0.25 / trials);
  EXPECT_NEAR(st.frequency(10, 0, 0), 0.5, 3 * sigma);
}

TEST(MonteCarlo, DeterministicGivenSeed) {
  GossipConfig cfg(default_graph(), 0.5, 42, 20);
  const auto a = run_monte_carlo(cfg, Algorithm::A2, vec({0, 1, 2, 3}), 500);
  const auto b = run_monte_carlo(cfg, Algorithm::A2, vec({0, 1, 2, 3}), 500);
  EXPECT_EQ(a.counts, b.counts);
  GossipConfig other(default_graph(), 0.5, 43, 20);
  EXPECT_NE(run_monte_carlo(other, Algorithm::A2, vec({0, 1, 2, 3}), 500).counts, a.counts);
}

TEST(MonteCarlo, A1PrimeReachesConsensus) {
  GossipConfig cfg(default_graph(), 0.5, 5, 200);
  const auto st = run_monte_carlo(cfg, Algorithm::A1Prime, vec({0, 1, 2, 3}), 2000);
  for (std::size_t k = 1; k < st.hit_cdf.size(); ++k) EXPECT_GE(st.hit_cdf[k], st.hit_cdf[k - 1]);
  EXPECT_GE(st.hit_cdf.back(), 0.99);
}

TEST(MonteCarlo, A1DisagreementDecays) {
  GossipConfig cfg(default_graph(), 0.5, 5, 100);
  const auto st = run_monte_carlo(cfg, Algorithm::A1, vec({0, 1, 2, 3}), 200);
  EXPECT_LT(st.mean_disagreement.back(), 1e-3 * st.mean_disagreement.front());
  EXPECT_TRUE(st.counts.empty());
  for (const VecX& m : st.mean_state) EXPECT_NEAR(m.sum(), 6.0, 1e-10);
}

TEST(MonteCarlo, QuantumEntropyTraces) {
  GossipConfig cfg(path_graph(3), 0.5, 3, 40);
  const auto aq1 = run_monte_carlo(cfg, Algorithm::AQ1, qstate_from_kets("01+"), 20);
  const auto aq2 = run_monte_carlo(cfg, Algorithm::AQ2, qstate_from_kets("01+"), 20);
  EXPECT_GT(aq1.mean_entropy.back(), 0.5);
  EXPECT_NEAR(aq2.max_entropy.back(), 0.0, 1e-10);
  EXPECT_THROW(run_monte_carlo(cfg, Algorithm::A2, qstate_from_kets("01+"), 2), ValidationError);
  EXPECT_THROW(run_monte_carlo(cfg, Algorithm::AQ1, vec({0, 1, 2}), 2), ValidationError);
}

TEST(FrozenPairs, A2MeanTracksA1) {
  GossipConfig cfg(default_graph(), 0.5, 11, 20);
  const auto cmp = frozen_pair_expectation(cfg, vec({0.0, 1.0, 3.0, -2.0}), 20000);
  ASSERT_EQ(cmp.a1.size(), 21u);
  for (std::size_t k = 0; k < cmp.a1.size(); ++k) {
    for (Index i = 0; i < 4; ++i) {
      EXPECT_LE(std::abs(cmp.a2_mean[k](i) - cmp.a1[k](i)), 3.0 * cmp.a2_stderr[k](i) + 1e-12)
          << k << " " << i;
    }
  }
}

TEST(Ergodicity, K2) {
  const auto r = ergodicity_report(single_particle_matrix(GossipConfig(path_graph(2))), 10);
  EXPECT_NEAR(r.slem, 0.0, 1e-12);
  EXPECT_LE(r.distances[1], 1e-15);
  EXPECT_TRUE(r.bound_holds);
}

TEST(Ergodicity, SpectralGapOnConnectedGraphs) {
  Rng rng(15);
  std::uniform_real_distribution<double> beta(0.05, 0.95);
  for (int trial = 0; trial < 20; ++trial) {
    const auto chain = single_particle_matrix(
        GossipConfig(random_connected_graph(2 + trial % 7, 0.3, rng), beta(rng)));
    const auto r = ergodicity_report(chain, 200);
    EXPECT_LT(r.slem, 1.0);
    EXPECT_TRUE(r.bound_holds);
    EXPECT_TRUE(r.symmetric && r.doubly_stochastic && r.nonnegative);
    EXPECT_LE(r.fitted_constant, 1.0 + 1e-8);
    EXPECT_NEAR(r.tail_rate, std::log(r.slem), 0.05 * std::abs(std::log(r.slem)));
  }
}

TEST(Ergodicity, IdentityChainIsNotMixing) {
  const auto r = ergodicity_report({MatX::Identity(3, 3)}, 20);
  EXPECT_NEAR(r.slem, 1.0, 1e-12);
  EXPECT_GT(r.distances.back(), 0.5);
}
