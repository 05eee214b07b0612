#pragma once

// Reference computations that share no code path with the production
// routines they check. Used by the test and acceptance suites.

#include <cstdint>

#include "netent/graph.hpp"
#include "netent/types.hpp"

namespace netent::oracle {

inline constexpr int kMaxSuperoperatorQubits = 3;

// rho(t) for the quantum consensus flow by exponentiating the vectorized
// 4^N x 4^N generator sum_edges (U (x) U - I), built from dense swap
// matrices. The generator is symmetric because each U is a real involution.
CMatX superoperator_evolution(const Graph& g, const CMatX& rho0, double t);

// Entropy of Binomial(n, p) from the pmf recurrence
// b(k+1) = b(k) (n-k)/(k+1) p/(1-p), in long double.
double binomial_entropy_recurrence(int n, double p);

// Empirical single-particle transition matrix: runs `steps` two-stage pair
// draws with coin flips and counts where a tracked label starting at each
// node moves after one tick. Returns row-normalized counts.
MatX label_tracking_transition(const Graph& g, double beta, long steps, std::uint64_t seed);

// Mixture weights of rho(s + eps) over the conjugates U_pi rho(s) U_pi^T, from
// the continuous-time walk on permutations that applies each edge
// transposition at unit rate. Ordered like all_qubit_permutations(N).
VecX permutation_walk_weights(const Graph& g, double eps);

// Number of zero Laplacian eigenvalues (|lambda| <= tol).
int laplacian_zero_multiplicity(const Graph& g, double tol = 1e-8);

}  // namespace netent::oracle
