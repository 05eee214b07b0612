#pragma once

#include <span>
#include <vector>

#include "netent/bits.hpp"
#include "netent/graph.hpp"
#include "netent/types.hpp"

namespace netent {

// Mean and covariance of the node-state vector X(t).
struct GaussianState {
  VecX mean;
  MatX cov;
};

// X_i(0) i.i.d. N(mu, sigma2).
GaussianState iid_gaussian(int n, double mu, double sigma2);

// Exact solution of dX/dt = -L X: mean <- e^{-tL} mean, cov <- e^{-tL} cov e^{-tL}.
// Throws ValidationError for t < 0, a dimension mismatch, or a non-PSD cov.
GaussianState propagate_gaussian(const Graph& g, const GaussianState& init, double t);

struct ClassicalTrajectory {
  std::vector<double> times;
  // Joint differential entropy h(X(t)).
  std::vector<EntropyValue> joint_bits;
  // Node-averaged scalar marginal entropy (1/N) sum_i h(X_i(t)).
  std::vector<EntropyValue> marginal_bits;
  bool connected = true;
};

// Differential entropy of the consensus flow from i.i.d. N(mu, sigma2)
// initial values. The joint entropy is evaluated from the Laplacian spectrum,
// log|e^{-2tL}| = -2t sum(lambda), so it stays finite and exact at large t.
ClassicalTrajectory differential_entropy_trajectory(const Graph& g, double sigma2,
                                                    std::span<const double> grid);

// h(0) - t tr(L) log2(e), with h(0) = (N/2) log2(2 pi e sigma2).
double closed_form_differential_entropy(const Graph& g, double sigma2, double t);

// Scalar entropy of the common limit value, 1/2 log2(2 pi e sigma2 / N).
EntropyValue consensus_limit_marginal_entropy(int n, double sigma2);

// 0, step, 2 step, ..., horizon.
std::vector<double> uniform_time_grid(double step, double horizon);

inline constexpr double kDefaultGridStep = 0.1;
inline constexpr double kDefaultGridHorizon = 5.0;

// True if values[k+1] <= values[k] + slack for all k. -infinity compares
// below every finite value.
bool is_non_increasing(std::span<const EntropyValue> values, double slack);

// Entropy before and after consensus for i.i.d. Bernoulli(p) initial values.
struct BernoulliLimitReport {
  int n = 0;
  double p = 0.0;
  double h0 = 0.0;                // n h_b(p)
  double h_inf_exact = 0.0;       // entropy of Binomial(n, p)
  double h_inf_asymptotic = 0.0;  // 1/2 log2(2 pi e n p (1-p))
  bool decreased = false;         // h_inf_exact < h0
};

BernoulliLimitReport bernoulli_limit_report(int n, double p);

}  // namespace netent
