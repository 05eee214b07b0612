#include "netent/classical.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "netent/entropy.hpp"
#include "netent/errors.hpp"
#include "netent/linalg.hpp"

namespace netent {

namespace {

constexpr double kTwoPiE = 2.0 * std::numbers::pi * std::numbers::e;

void require_positive_variance(double sigma2) {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw ValidationError("sigma2 must be positive, got " + std::to_string(sigma2));
  }
}

}  // namespace

GaussianState iid_gaussian(int n, double mu, double sigma2) {
  require_positive_variance(sigma2);
  if (n < 1) throw ValidationError("iid_gaussian: n must be at least 1");
  return {VecX::Constant(n, mu), sigma2 * MatX::Identity(n, n)};
}

GaussianState propagate_gaussian(const Graph& g, const GaussianState& init, double t) {
  if (t < 0.0) throw ValidationError("propagate_gaussian: t must be non-negative");
  const Index n = g.node_count();
  if (init.mean.size() != n || init.cov.rows() != n || init.cov.cols() != n) {
    throw ValidationError("propagate_gaussian: state dimension does not match the graph");
  }
  const auto cov_eig = eig_sym(init.cov);
  if (cov_eig.values(0) < -kNegativeEigenTolerance) {
    throw ValidationError("propagate_gaussian: covariance is not positive semidefinite");
  }
  const MatX flow = expm_sym(laplacian(g), -t);
  return {flow * init.mean, symmetrized(flow * init.cov * flow)};
}

double closed_form_differential_entropy(const Graph& g, double sigma2, double t) {
  require_positive_variance(sigma2);
  const double n = g.node_count();
  return 0.5 * n * std::log2(kTwoPiE * sigma2) - t * laplacian(g).trace() * kLog2E;
}

EntropyValue consensus_limit_marginal_entropy(int n, double sigma2) {
  require_positive_variance(sigma2);
  if (n < 1) throw ValidationError("consensus_limit_marginal_entropy: n must be at least 1");
  return gaussian_marginal_entropy(sigma2 / n);
}

ClassicalTrajectory differential_entropy_trajectory(const Graph& g, double sigma2,
                                                    std::span<const double> grid) {
  require_positive_variance(sigma2);
  const MatX lap = laplacian(g);
  const auto lap_eig = eig_sym(lap);
  const double n = g.node_count();
  const double h_scale = 0.5 * n * std::log2(kTwoPiE * sigma2);

  ClassicalTrajectory traj;
  traj.connected = g.is_connected();
  for (double t : grid) {
    if (t < 0.0) throw ValidationError("time grid must be non-negative");
    // |sigma2 e^{-2tL}| from the eigenvalues of -2tL.
    const double log_det = (-2.0 * t * lap_eig.values.array()).sum() * kLog2E;
    traj.times.push_back(t);
    traj.joint_bits.emplace_back(h_scale + 0.5 * log_det);

    const VecX variances =
        sigma2 * (lap_eig.vectors * (-2.0 * t * lap_eig.values.array()).exp().matrix().asDiagonal() *
                  lap_eig.vectors.transpose())
                     .diagonal();
    double sum = 0.0;
    bool degenerate = false;
    for (Index i = 0; i < variances.size(); ++i) {
      const auto h = gaussian_marginal_entropy(variances(i));
      if (h.is_minus_infinity()) degenerate = true;
      else sum += h.value();
    }
    traj.marginal_bits.push_back(degenerate ? EntropyValue::minus_infinity()
                                            : EntropyValue(sum / n));
  }
  return traj;
}

std::vector<double> uniform_time_grid(double step, double horizon) {
  if (!(step > 0.0) || horizon < 0.0) {
    throw ValidationError("time grid needs step > 0 and horizon >= 0");
  }
  const auto count = static_cast<long>(std::floor(horizon / step + 1e-9));
  std::vector<double> grid;
  grid.reserve(count + 1);
  for (long k = 0; k <= count; ++k) grid.push_back(static_cast<double>(k) * step);
  return grid;
}

bool is_non_increasing(std::span<const EntropyValue> values, double slack) {
  for (std::size_t k = 1; k < values.size(); ++k) {
    const auto& prev = values[k - 1];
    const auto& cur = values[k];
    if (cur.is_minus_infinity()) continue;
    if (prev.is_minus_infinity()) return false;
    if (cur.value() > prev.value() + slack) return false;
  }
  return true;
}

BernoulliLimitReport bernoulli_limit_report(int n, double p) {
  BernoulliLimitReport r;
  r.n = n;
  r.p = p;
  r.h0 = bernoulli_network_entropy(n, p).value();
  r.h_inf_exact = binomial_entropy_exact(n, p).value();
  r.h_inf_asymptotic = binomial_entropy_asymptotic(n, p).value();
  r.decreased = r.h_inf_exact < r.h0;
  return r;
}

}  // namespace netent
