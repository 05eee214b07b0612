#include "netent/oracle.hpp"

#include <cmath>
#include <map>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "netent/errors.hpp"
#include "netent/linalg.hpp"
#include "netent/quantum.hpp"
#include "netent/rng.hpp"

namespace netent::oracle {

CMatX superoperator_evolution(const Graph& g, const CMatX& rho0, double t) {
  const int n = g.node_count();
  if (n > kMaxSuperoperatorQubits) {
    throw ValidationError("superoperator oracle supports at most 3 qubits");
  }
  const Index d = Index{1} << n;
  if (rho0.rows() != d || rho0.cols() != d) {
    throw ValidationError("superoperator oracle: state dimension mismatch");
  }
  const Index d2 = d * d;
  MatX gen = MatX::Zero(d2, d2);
  for (const Edge& e : g.edges()) {
    const MatX u = swap_operator(n, e).matrix();
    // vec(U rho U^T) = (U (x) U) vec(rho) for real U.
    gen += Eigen::kroneckerProduct(u, u).eval();
    gen -= MatX::Identity(d2, d2);
  }
  const MatX propagator = expm_sym(gen, t);
  const CVecX vec_rho = rho0.reshaped();
  const CVecX out = propagator.cast<Complex>() * vec_rho;
  return out.reshaped(d, d);
}

double binomial_entropy_recurrence(int n, double p) {
  if (n < 1 || !(p > 0.0 && p < 1.0)) throw ValidationError("binomial oracle: bad parameters");
  const long double q = 1.0L - p;
  const long double ratio = static_cast<long double>(p) / q;
  // Start from the mode to avoid underflow of b(0) for large n.
  const int mode = static_cast<int>(std::floor((n + 1) * p));
  // log b(mode) via sum of logs of the recurrence from k = 0.
  long double log_b = n * std::log(q);
  for (int k = 0; k < mode; ++k) log_b += std::log((n - k) * ratio / (k + 1));
  long double h = 0.0L;
  long double lb = log_b;
  for (int k = mode; k <= n; ++k) {
    if (k > mode) lb += std::log((n - k + 1) * ratio / k);
    h -= std::exp(lb) * lb;
  }
  lb = log_b;
  for (int k = mode - 1; k >= 0; --k) {
    lb -= std::log((n - k) * ratio / (k + 1));
    h -= std::exp(lb) * lb;
  }
  return static_cast<double>(h / std::log(2.0L));
}

MatX label_tracking_transition(const Graph& g, double beta, long steps, std::uint64_t seed) {
  const int n = g.node_count();
  MatX counts = MatX::Zero(n, n);
  Rng rng(seed);
  std::uniform_int_distribution<int> pick_node(0, n - 1);
  std::bernoulli_distribution coin(beta);
  for (long s = 0; s < steps; ++s) {
    const int i = pick_node(rng);
    const auto& nbrs = g.neighbors(i);
    const int j = nbrs[std::uniform_int_distribution<std::size_t>(0, nbrs.size() - 1)(rng)];
    const bool hold = coin(rng);
    // A label at node `from` ends at node `to` after this tick.
    for (int from = 0; from < n; ++from) {
      int to = from;
      if (!hold && from == i) to = j;
      if (!hold && from == j) to = i;
      counts(from, to) += 1.0;
    }
  }
  return counts / static_cast<double>(steps);
}

VecX permutation_walk_weights(const Graph& g, double eps) {
  const int n = g.node_count();
  const auto perms = all_qubit_permutations(n);
  std::map<std::vector<int>, Index> index;
  for (std::size_t j = 0; j < perms.size(); ++j) index[perms[j].permutation()] = static_cast<Index>(j);
  const auto m = static_cast<Index>(perms.size());
  MatX gen = MatX::Zero(m, m);
  for (Index j = 0; j < m; ++j) {
    for (const Edge& e : g.edges()) {
      std::vector<int> next = perms[static_cast<std::size_t>(j)].permutation();
      for (int& v : next) {
        if (v == e.first) v = e.second;
        else if (v == e.second) v = e.first;
      }
      gen(index.at(next), j) += 1.0;
      gen(j, j) -= 1.0;
    }
  }
  return expm_sym(gen, eps).col(0);
}

int laplacian_zero_multiplicity(const Graph& g, double tol) {
  const auto values = eig_sym(laplacian(g)).values;
  int zeros = 0;
  for (Index i = 0; i < values.size(); ++i)
    if (std::abs(values(i)) <= tol) ++zeros;
  return zeros;
}

}  // namespace netent::oracle
