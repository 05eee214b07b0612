#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string_view>
#include <vector>

#include "netent/entropy.hpp"
#include "netent/graph.hpp"
#include "netent/quantum.hpp"
#include "netent/rng.hpp"
#include "netent/types.hpp"

namespace netent {

// Randomized pair gossip on a connected graph. Each tick draws a node
// uniformly, then one of its neighbors uniformly, and an independent coin
// b ~ Bernoulli(beta).
class GossipConfig {
 public:
  // Throws ValidationError unless beta is in (0,1), the graph is connected
  // and horizon >= 0.
  explicit GossipConfig(Graph graph, double beta = 0.5, std::uint64_t seed = 0, int horizon = 50);

  const Graph& graph() const { return graph_; }
  double beta() const { return beta_; }
  std::uint64_t seed() const { return seed_; }
  int horizon() const { return horizon_; }
  // Edge selection probabilities aligned with graph().edges().
  const PairDistribution& pairs() const { return pairs_; }

 private:
  Graph graph_;
  double beta_;
  std::uint64_t seed_;
  int horizon_;
  PairDistribution pairs_;
};

enum class Algorithm { A1, A1Prime, A2, AQ1, AQ2 };

std::string_view algorithm_name(Algorithm a);
// Accepts A1, A1', A1prime, A2, AQ1, AQ2 (case-insensitive).
Algorithm parse_algorithm(std::string_view text);
bool is_quantum(Algorithm a);

// Two-stage draw, implemented literally.
Edge sample_pair(const GossipConfig& cfg, Rng& rng);
// b ~ Bernoulli(beta).
bool sample_coin(const GossipConfig& cfg, Rng& rng);

struct ClassicalGossipState {
  VecX x;
  long k = 0;
};

struct QuantumGossipState {
  DensityMatrix rho;
  long k = 0;
};

// x_i, x_j <- (x_i + x_j) / 2.
ClassicalGossipState step_A1(const ClassicalGossipState& s, Edge pair);
// x_i, x_j <- x_i if b else x_j.
ClassicalGossipState step_A1prime(const ClassicalGossipState& s, Edge pair, bool b);
// b: hold; !b: exchange x_i and x_j.
ClassicalGossipState step_A2(const ClassicalGossipState& s, Edge pair, bool b);
// rho <- rho/2 + U rho U^dagger / 2.
QuantumGossipState step_AQ1(const QuantumGossipState& s, Edge pair);
// b: hold; !b: rho <- U rho U^dagger.
QuantumGossipState step_AQ2(const QuantumGossipState& s, Edge pair, bool b);

// Transition matrix of one tracked value's position under [A2]:
// P = I - sum_edges q_ij (1 - beta) (e_i - e_j)(e_i - e_j)^T.
struct SingleParticleChain {
  MatX P;
};

SingleParticleChain single_particle_matrix(const GossipConfig& cfg);

// P^k by repeated multiplication.
MatX matrix_power(const MatX& p, int k);

// p_k^i = sum_s (P^k)_{s,i} p_0^s. All marginals share one support and
// there is one per node.
std::vector<DiscreteDist> marginal_evolution(const SingleParticleChain& chain,
                                             std::span<const DiscreteDist> marginals0, int k);

inline constexpr int kMaxJointPmfNodes = 6;

// Probability mass over the orbit {M_pi x0} of an initial vector under the
// edge transpositions of a graph. The orbit is built by breadth-first
// closure, so repeated initial values give a smaller support than N!.
class JointPmf {
 public:
  // Throws ValidationError for more than kMaxJointPmfNodes nodes or a
  // size mismatch.
  static JointPmf point_mass(const Graph& g, const VecX& x0);

  int node_count() const { return n_; }
  const std::vector<VecX>& support() const { return support_; }
  const std::vector<double>& probs() const { return probs_; }
  const std::vector<Edge>& edges() const { return edges_; }
  // Index of `x` in support(), or -1.
  Index find(const VecX& x) const;
  // Support index reached from state `s` by exchanging the ends of edge `e`.
  Index swap_target(Index s, std::size_t e) const { return transitions_[s][e]; }

  // Same support with new masses; throws unless they form a distribution.
  JointPmf with_probs(std::vector<double> probs) const;

  DiscreteDist distribution() const { return DiscreteDist(probs_); }
  // Law of x_i over `values`; every support entry must appear in `values`.
  std::vector<DiscreteDist> node_marginals(std::span<const double> values) const;

 private:
  std::vector<VecX> support_;
  std::vector<double> probs_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Index>> transitions_;
  std::map<std::vector<double>, Index> index_;
  int n_ = 0;
};

// f <- beta f + (1 - beta) f o swap_ij for a selected edge.
JointPmf joint_pmf_pair_step(const JointPmf& f, Edge pair, double beta);
// One tick averaged over pair selection:
// T = sum_edges q_ij (beta Id + (1 - beta) Swap_ij).
JointPmf joint_pmf_operator_step(const JointPmf& f, const GossipConfig& cfg);

// Sorted distinct entries of x.
std::vector<double> distinct_values(const VecX& x);

// Aggregated Monte Carlo results. Which fields are filled depends on the
// algorithm: histograms for A2 and A1', hit times for A1', entropies for
// AQ1 and AQ2, means and disagreement for every classical algorithm.
struct MonteCarloStats {
  Algorithm algorithm = Algorithm::A2;
  std::uint64_t seed = 0;
  long trials = 0;
  int horizon = 0;

  std::vector<VecX> mean_state;           // E X(k), k = 0..horizon
  std::vector<double> mean_disagreement;  // E |X(k) - avg 1|_2

  std::vector<double> values;                          // histogram support
  std::vector<std::vector<std::vector<long>>> counts;  // [k][node][value]

  std::vector<long> hit_times;  // per trial; -1 if no consensus by horizon
  std::vector<double> hit_cdf;  // P(hit time <= k), k = 0..horizon

  std::vector<double> mean_entropy;  // E S(rho(k)), bits
  std::vector<double> min_entropy;
  std::vector<double> max_entropy;

  // Empirical P(X_i(k) = values[v]).
  double frequency(int k, int node, std::size_t v) const {
    return static_cast<double>(counts[k][node][v]) / static_cast<double>(trials);
  }
};

// Classical algorithms (A1, A1', A2). Trial t draws from
// derive_stream(cfg.seed(), t), so results are independent of trial order.
MonteCarloStats run_monte_carlo(const GossipConfig& cfg, Algorithm algorithm, const VecX& x0,
                                long trials);
// Quantum algorithms (AQ1, AQ2).
MonteCarloStats run_monte_carlo(const GossipConfig& cfg, Algorithm algorithm,
                                const DensityMatrix& rho0, long trials);

// [A1] along a frozen pair sequence against the coin-averaged [A2] along the
// same sequence. The pair sequence is replayed from the config seed.
struct ExpectationComparison {
  std::vector<Edge> pairs;
  std::vector<VecX> a1;         // k = 0..horizon
  std::vector<VecX> a2_mean;
  std::vector<VecX> a2_stderr;  // standard error of the mean
};

ExpectationComparison frozen_pair_expectation(const GossipConfig& cfg, const VecX& x0,
                                              long coin_sequences);

struct ErgodicityReport {
  double slem = 0.0;               // second-largest eigenvalue modulus
  std::vector<double> distances;   // |P^k - 11^T/N|_max, k = 0..k_max
  double fitted_constant = 0.0;    // C in d_k <= C slem^k
  double tail_rate = 0.0;          // slope of log d_k over the resolvable tail
  bool bound_holds = false;        // d_k <= C slem^k + slack for k >= 1
  bool symmetric = false;
  bool doubly_stochastic = false;
  bool nonnegative = false;
};

inline constexpr double kChainTolerance = 1e-12;

ErgodicityReport ergodicity_report(const SingleParticleChain& chain, int k_max,
                                   double slack = 1e-8);

}  // namespace netent
