#include "netent/gossip.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "netent/errors.hpp"
#include "netent/linalg.hpp"

namespace netent {

GossipConfig::GossipConfig(Graph graph, double beta, std::uint64_t seed, int horizon)
    : graph_(std::move(graph)), beta_(beta), seed_(seed), horizon_(horizon) {
  if (!(beta_ > 0.0 && beta_ < 1.0)) {
    throw ValidationError("beta must lie strictly inside (0,1), got " + std::to_string(beta_));
  }
  if (!graph_.is_connected()) throw ValidationError("gossip requires a connected graph");
  if (horizon_ < 0) throw ValidationError("horizon must be non-negative");
  pairs_ = pair_distribution(graph_);
}

std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::A1: return "A1";
    case Algorithm::A1Prime: return "A1'";
    case Algorithm::A2: return "A2";
    case Algorithm::AQ1: return "AQ1";
    case Algorithm::AQ2: return "AQ2";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view text) {
  std::string t;
  for (char c : text) t.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  if (t == "A1") return Algorithm::A1;
  if (t == "A1'" || t == "A1PRIME") return Algorithm::A1Prime;
  if (t == "A2") return Algorithm::A2;
  if (t == "AQ1") return Algorithm::AQ1;
  if (t == "AQ2") return Algorithm::AQ2;
  throw ValidationError("unknown gossip algorithm '" + std::string(text) +
                        "' (expected A1, A1', A2, AQ1 or AQ2)");
}

bool is_quantum(Algorithm a) { return a == Algorithm::AQ1 || a == Algorithm::AQ2; }

Edge sample_pair(const GossipConfig& cfg, Rng& rng) {
  const Graph& g = cfg.graph();
  std::uniform_int_distribution<int> pick_node(0, g.node_count() - 1);
  const int i = pick_node(rng);
  const auto& nbrs = g.neighbors(i);
  std::uniform_int_distribution<std::size_t> pick_nbr(0, nbrs.size() - 1);
  const int j = nbrs[pick_nbr(rng)];
  return {std::min(i, j), std::max(i, j)};
}

bool sample_coin(const GossipConfig& cfg, Rng& rng) {
  return std::bernoulli_distribution(cfg.beta())(rng);
}

namespace {

void require_pair(Index n, Edge pair) {
  if (pair.first < 0 || pair.second >= n || pair.first >= pair.second) {
    throw ValidationError("gossip pair {" + std::to_string(pair.first + 1) + "," +
                          std::to_string(pair.second + 1) + "} is invalid");
  }
}

}  // namespace

ClassicalGossipState step_A1(const ClassicalGossipState& s, Edge pair) {
  require_pair(s.x.size(), pair);
  ClassicalGossipState out{s.x, s.k + 1};
  const double avg = 0.5 * s.x(pair.first) + 0.5 * s.x(pair.second);
  out.x(pair.first) = avg;
  out.x(pair.second) = avg;
  return out;
}

ClassicalGossipState step_A1prime(const ClassicalGossipState& s, Edge pair, bool b) {
  require_pair(s.x.size(), pair);
  ClassicalGossipState out{s.x, s.k + 1};
  const double v = b ? s.x(pair.first) : s.x(pair.second);
  out.x(pair.first) = v;
  out.x(pair.second) = v;
  return out;
}

ClassicalGossipState step_A2(const ClassicalGossipState& s, Edge pair, bool b) {
  require_pair(s.x.size(), pair);
  ClassicalGossipState out{s.x, s.k + 1};
  if (!b) std::swap(out.x(pair.first), out.x(pair.second));
  return out;
}

QuantumGossipState step_AQ1(const QuantumGossipState& s, Edge pair) {
  require_pair(s.rho.n_qubits(), pair);
  const auto u = swap_operator(s.rho.n_qubits(), pair);
  const CMatX& rho = s.rho.matrix();
  return {DensityMatrix(symmetrized(0.5 * rho + 0.5 * u.conjugate(rho))), s.k + 1};
}

QuantumGossipState step_AQ2(const QuantumGossipState& s, Edge pair, bool b) {
  require_pair(s.rho.n_qubits(), pair);
  if (b) return {s.rho, s.k + 1};
  const auto u = swap_operator(s.rho.n_qubits(), pair);
  return {DensityMatrix(u.conjugate(s.rho.matrix())), s.k + 1};
}

SingleParticleChain single_particle_matrix(const GossipConfig& cfg) {
  const Graph& g = cfg.graph();
  const Index n = g.node_count();
  MatX p = MatX::Identity(n, n);
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    const auto [i, j] = g.edges()[e];
    const double move = cfg.pairs().probs[e] * (1.0 - cfg.beta());
    p(i, i) -= move;
    p(j, j) -= move;
    p(i, j) += move;
    p(j, i) += move;
  }
  return {p};
}

MatX matrix_power(const MatX& p, int k) {
  if (k < 0) throw ValidationError("matrix_power: negative exponent");
  MatX out = MatX::Identity(p.rows(), p.cols());
  for (int s = 0; s < k; ++s) out = out * p;
  return out;
}

std::vector<DiscreteDist> marginal_evolution(const SingleParticleChain& chain,
                                             std::span<const DiscreteDist> marginals0, int k) {
  const Index n = chain.P.rows();
  if (static_cast<Index>(marginals0.size()) != n) {
    throw ValidationError("marginal_evolution: expected one marginal per node");
  }
  const std::size_t support = marginals0.front().size();
  for (const auto& m : marginals0) {
    if (m.size() != support) throw ValidationError("marginal_evolution: support size mismatch");
  }
  const MatX pk = matrix_power(chain.P, k);
  std::vector<DiscreteDist> out;
  out.reserve(n);
  for (Index i = 0; i < n; ++i) {
    std::vector<double> probs(support, 0.0);
    for (Index s = 0; s < n; ++s) {
      const double w = pk(s, i);
      for (std::size_t v = 0; v < support; ++v) probs[v] += w * marginals0[s][v];
    }
    for (double& p : probs) p = std::max(p, 0.0);
    out.emplace_back(std::move(probs));
  }
  return out;
}

namespace {

std::vector<double> key_of(const VecX& x) { return {x.data(), x.data() + x.size()}; }

}  // namespace

JointPmf JointPmf::point_mass(const Graph& g, const VecX& x0) {
  const int n = g.node_count();
  if (n > kMaxJointPmfNodes) {
    throw ValidationError("joint pmf supports at most " + std::to_string(kMaxJointPmfNodes) +
                          " nodes, got " + std::to_string(n));
  }
  if (x0.size() != n) throw ValidationError("joint pmf: initial vector size does not match graph");

  JointPmf f;
  f.n_ = n;
  f.edges_ = g.edges();
  std::deque<Index> frontier;
  auto intern = [&](const VecX& x) {
    auto [it, inserted] = f.index_.emplace(key_of(x), static_cast<Index>(f.support_.size()));
    if (inserted) {
      f.support_.push_back(x);
      f.transitions_.emplace_back(f.edges_.size(), -1);
      frontier.push_back(it->second);
    }
    return it->second;
  };
  intern(x0);
  while (!frontier.empty()) {
    const Index s = frontier.front();
    frontier.pop_front();
    for (std::size_t e = 0; e < f.edges_.size(); ++e) {
      VecX y = f.support_[s];
      std::swap(y(f.edges_[e].first), y(f.edges_[e].second));
      const Index t = intern(y);
      f.transitions_[s][e] = t;
    }
  }
  f.probs_.assign(f.support_.size(), 0.0);
  f.probs_[0] = 1.0;
  return f;
}

Index JointPmf::find(const VecX& x) const {
  const auto it = index_.find(key_of(x));
  return it == index_.end() ? -1 : it->second;
}

JointPmf JointPmf::with_probs(std::vector<double> probs) const {
  if (probs.size() != support_.size()) throw ValidationError("joint pmf: support size mismatch");
  (void)DiscreteDist(probs);
  JointPmf f = *this;
  f.probs_ = std::move(probs);
  return f;
}

std::vector<DiscreteDist> JointPmf::node_marginals(std::span<const double> values) const {
  std::vector<std::vector<double>> probs(n_, std::vector<double>(values.size(), 0.0));
  for (std::size_t s = 0; s < support_.size(); ++s) {
    for (int i = 0; i < n_; ++i) {
      const auto it = std::find(values.begin(), values.end(), support_[s](i));
      if (it == values.end()) throw ValidationError("node_marginals: value missing from support");
      probs[i][static_cast<std::size_t>(it - values.begin())] += probs_[s];
    }
  }
  std::vector<DiscreteDist> out;
  out.reserve(n_);
  for (auto& p : probs) out.emplace_back(std::move(p));
  return out;
}

JointPmf joint_pmf_pair_step(const JointPmf& f, Edge pair, double beta) {
  const auto& edges = f.edges();
  const auto it = std::find(edges.begin(), edges.end(), pair);
  if (it == edges.end()) throw ValidationError("joint_pmf_pair_step: pair is not a graph edge");
  const auto e = static_cast<std::size_t>(it - edges.begin());
  std::vector<double> next(f.probs().size(), 0.0);
  for (std::size_t s = 0; s < next.size(); ++s) {
    next[s] += beta * f.probs()[s];
    next[f.swap_target(static_cast<Index>(s), e)] += (1.0 - beta) * f.probs()[s];
  }
  return f.with_probs(std::move(next));
}

JointPmf joint_pmf_operator_step(const JointPmf& f, const GossipConfig& cfg) {
  if (f.edges() != cfg.graph().edges()) {
    throw ValidationError("joint_pmf_operator_step: pmf was built for a different graph");
  }
  const double beta = cfg.beta();
  std::vector<double> next(f.probs().size(), 0.0);
  for (std::size_t s = 0; s < next.size(); ++s) {
    const double mass = f.probs()[s];
    if (mass == 0.0) continue;
    for (std::size_t e = 0; e < f.edges().size(); ++e) {
      const double q = cfg.pairs().probs[e];
      next[s] += q * beta * mass;
      next[f.swap_target(static_cast<Index>(s), e)] += q * (1.0 - beta) * mass;
    }
  }
  return f.with_probs(std::move(next));
}

std::vector<double> distinct_values(const VecX& x) {
  std::vector<double> v(x.data(), x.data() + x.size());
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

MonteCarloStats run_monte_carlo(const GossipConfig& cfg, Algorithm algorithm, const VecX& x0,
                                long trials) {
  if (is_quantum(algorithm)) {
    throw ValidationError("algorithm " + std::string(algorithm_name(algorithm)) +
                          " needs a density matrix initial state");
  }
  const int n = cfg.graph().node_count();
  if (x0.size() != n) throw ValidationError("initial vector size does not match the graph");
  if (trials < 1) throw ValidationError("trials must be positive");

  const int horizon = cfg.horizon();
  MonteCarloStats st;
  st.algorithm = algorithm;
  st.seed = cfg.seed();
  st.trials = trials;
  st.horizon = horizon;
  st.mean_state.assign(horizon + 1, VecX::Zero(n));
  st.mean_disagreement.assign(horizon + 1, 0.0);
  const bool histogram = algorithm != Algorithm::A1;
  if (histogram) {
    st.values = distinct_values(x0);
    st.counts.assign(horizon + 1,
                     std::vector<std::vector<long>>(n, std::vector<long>(st.values.size(), 0)));
  }
  if (algorithm == Algorithm::A1Prime) st.hit_times.reserve(trials);

  auto record = [&](int k, const VecX& x) {
    st.mean_state[k] += x;
    st.mean_disagreement[k] += (x.array() - x.mean()).matrix().norm();
    if (!histogram) return;
    for (int i = 0; i < n; ++i) {
      const auto it = std::lower_bound(st.values.begin(), st.values.end(), x(i));
      ++st.counts[k][i][static_cast<std::size_t>(it - st.values.begin())];
    }
  };
  auto consensus = [](const VecX& x) { return (x.array() == x(0)).all(); };

  for (long t = 0; t < trials; ++t) {
    Rng rng = derive_stream(cfg.seed(), static_cast<std::uint64_t>(t));
    ClassicalGossipState s{x0, 0};
    long hit = consensus(s.x) ? 0 : -1;
    record(0, s.x);
    for (int k = 1; k <= horizon; ++k) {
      const Edge pair = sample_pair(cfg, rng);
      const bool b = sample_coin(cfg, rng);
      switch (algorithm) {
        case Algorithm::A1: s = step_A1(s, pair); break;
        case Algorithm::A1Prime: s = step_A1prime(s, pair, b); break;
        default: s = step_A2(s, pair, b); break;
      }
      record(k, s.x);
      if (hit < 0 && consensus(s.x)) hit = k;
    }
    if (algorithm == Algorithm::A1Prime) st.hit_times.push_back(hit);
  }

  for (int k = 0; k <= horizon; ++k) {
    st.mean_state[k] /= static_cast<double>(trials);
    st.mean_disagreement[k] /= static_cast<double>(trials);
  }
  if (algorithm == Algorithm::A1Prime) {
    std::vector<long> hits_at(horizon + 1, 0);
    for (long h : st.hit_times)
      if (h >= 0) ++hits_at[h];
    st.hit_cdf.resize(horizon + 1);
    long cumulative = 0;
    for (int k = 0; k <= horizon; ++k) {
      cumulative += hits_at[k];
      st.hit_cdf[k] = static_cast<double>(cumulative) / static_cast<double>(trials);
    }
  }
  return st;
}

MonteCarloStats run_monte_carlo(const GossipConfig& cfg, Algorithm algorithm,
                                const DensityMatrix& rho0, long trials) {
  if (!is_quantum(algorithm)) {
    throw ValidationError("algorithm " + std::string(algorithm_name(algorithm)) +
                          " needs a classical initial vector");
  }
  if (rho0.n_qubits() != cfg.graph().node_count()) {
    throw ValidationError("initial state qubit count does not match the graph");
  }
  if (trials < 1) throw ValidationError("trials must be positive");

  const int horizon = cfg.horizon();
  MonteCarloStats st;
  st.algorithm = algorithm;
  st.seed = cfg.seed();
  st.trials = trials;
  st.horizon = horizon;
  st.mean_entropy.assign(horizon + 1, 0.0);
  st.min_entropy.assign(horizon + 1, std::numeric_limits<double>::infinity());
  st.max_entropy.assign(horizon + 1, -std::numeric_limits<double>::infinity());

  auto record = [&](int k, const DensityMatrix& rho) {
    const double s = von_neumann(rho).value();
    st.mean_entropy[k] += s;
    st.min_entropy[k] = std::min(st.min_entropy[k], s);
    st.max_entropy[k] = std::max(st.max_entropy[k], s);
  };

  for (long t = 0; t < trials; ++t) {
    Rng rng = derive_stream(cfg.seed(), static_cast<std::uint64_t>(t));
    QuantumGossipState s{rho0, 0};
    record(0, s.rho);
    for (int k = 1; k <= horizon; ++k) {
      const Edge pair = sample_pair(cfg, rng);
      const bool b = sample_coin(cfg, rng);
      s = algorithm == Algorithm::AQ1 ? step_AQ1(s, pair) : step_AQ2(s, pair, b);
      record(k, s.rho);
    }
  }
  for (double& m : st.mean_entropy) m /= static_cast<double>(trials);
  return st;
}

namespace {

// Stream index reserved for the frozen pair sequence; coin streams use the
// trial index, which never reaches this value.
constexpr std::uint64_t kPairStream = ~std::uint64_t{0};

}  // namespace

ExpectationComparison frozen_pair_expectation(const GossipConfig& cfg, const VecX& x0,
                                              long coin_sequences) {
  const int n = cfg.graph().node_count();
  if (x0.size() != n) throw ValidationError("initial vector size does not match the graph");
  if (coin_sequences < 2) throw ValidationError("need at least two coin sequences");
  const int horizon = cfg.horizon();

  ExpectationComparison out;
  Rng pair_rng = derive_stream(cfg.seed(), kPairStream);
  for (int k = 0; k < horizon; ++k) out.pairs.push_back(sample_pair(cfg, pair_rng));

  ClassicalGossipState a1{x0, 0};
  out.a1.push_back(a1.x);
  for (const Edge& e : out.pairs) {
    a1 = step_A1(a1, e);
    out.a1.push_back(a1.x);
  }

  std::vector<VecX> sum(horizon + 1, VecX::Zero(n));
  std::vector<VecX> sum_sq(horizon + 1, VecX::Zero(n));
  for (long t = 0; t < coin_sequences; ++t) {
    Rng rng = derive_stream(cfg.seed(), static_cast<std::uint64_t>(t));
    ClassicalGossipState s{x0, 0};
    sum[0] += s.x;
    sum_sq[0] += s.x.cwiseAbs2();
    for (int k = 0; k < horizon; ++k) {
      s = step_A2(s, out.pairs[k], sample_coin(cfg, rng));
      sum[k + 1] += s.x;
      sum_sq[k + 1] += s.x.cwiseAbs2();
    }
  }
  const auto count = static_cast<double>(coin_sequences);
  for (int k = 0; k <= horizon; ++k) {
    const VecX mean = sum[k] / count;
    const VecX var =
        ((sum_sq[k] - count * mean.cwiseAbs2()) / (count - 1.0)).cwiseMax(0.0);
    out.a2_mean.push_back(mean);
    out.a2_stderr.push_back((var / count).cwiseSqrt());
  }
  return out;
}

ErgodicityReport ergodicity_report(const SingleParticleChain& chain, int k_max, double slack) {
  const MatX& p = chain.P;
  const Index n = p.rows();
  if (p.cols() != n || n < 1) throw ValidationError("ergodicity_report: P must be square");
  if (k_max < 1) throw ValidationError("ergodicity_report: k_max must be at least 1");

  ErgodicityReport r;
  r.symmetric = (p - p.transpose()).cwiseAbs().maxCoeff() <= kChainTolerance;
  r.nonnegative = p.minCoeff() >= -kChainTolerance;
  r.doubly_stochastic = (p.rowwise().sum().array() - 1.0).abs().maxCoeff() <= kChainTolerance &&
                        (p.colwise().sum().array() - 1.0).abs().maxCoeff() <= kChainTolerance;

  Eigen::EigenSolver<MatX> solver(p, false);
  std::vector<double> moduli;
  for (Index i = 0; i < n; ++i) moduli.push_back(std::abs(solver.eigenvalues()(i)));
  std::sort(moduli.begin(), moduli.end(), std::greater<>());
  r.slem = n > 1 ? moduli[1] : 0.0;

  const MatX average = MatX::Constant(n, n, 1.0 / static_cast<double>(n));
  MatX pk = MatX::Identity(n, n);
  for (int k = 0; k <= k_max; ++k) {
    if (k > 0) pk = pk * p;
    r.distances.push_back((pk - average).cwiseAbs().maxCoeff());
  }

  // Fit C where slem^k is well above the round-off floor of d_k.
  constexpr double kResolvable = 1e-10;
  r.fitted_constant = 0.0;
  for (int k = 1; k <= k_max; ++k) {
    const double decay = std::pow(r.slem, k);
    if (decay < kResolvable) break;
    r.fitted_constant = std::max(r.fitted_constant, r.distances[k] / decay);
  }
  r.bound_holds = true;
  for (int k = 1; k <= k_max; ++k) {
    if (r.distances[k] > r.fitted_constant * std::pow(r.slem, k) + slack) r.bound_holds = false;
  }

  // Least-squares slope of log d_k over the last resolvable samples.
  std::vector<std::pair<double, double>> tail;
  for (int k = 1; k <= k_max; ++k) {
    if (r.distances[k] > 1e-12) tail.emplace_back(k, std::log(r.distances[k]));
  }
  if (tail.size() > 10) tail.erase(tail.begin(), tail.end() - 10);
  if (tail.size() >= 2) {
    double mx = 0, my = 0;
    for (auto [x, y] : tail) {
      mx += x;
      my += y;
    }
    mx /= tail.size();
    my /= tail.size();
    double sxy = 0, sxx = 0;
    for (auto [x, y] : tail) {
      sxy += (x - mx) * (y - my);
      sxx += (x - mx) * (x - mx);
    }
    r.tail_rate = sxy / sxx;
  } else {
    r.tail_rate = std::log(std::max(r.slem, std::numeric_limits<double>::min()));
  }
  return r;
}

}  // namespace netent
