#include "netent/entropy.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "netent/errors.hpp"
#include "netent/linalg.hpp"
#include "netent/quantum.hpp"

namespace netent {

namespace {

constexpr double kTwoPiE = 2.0 * std::numbers::pi * std::numbers::e;

double plogp(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

void require_open_unit(double p, const char* what) {
  if (!(p > 0.0 && p < 1.0)) {
    throw ValidationError(std::string(what) + ": p must lie in (0,1), got " + std::to_string(p));
  }
}

void require_positive_count(int n, const char* what) {
  if (n < 1) throw ValidationError(std::string(what) + ": n must be at least 1");
}

}  // namespace

DiscreteDist::DiscreteDist(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw ValidationError("distribution has empty support");
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw ValidationError("distribution has a negative or non-finite entry");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kDistSumTolerance) {
    throw ValidationError("distribution is not normalized (sum " + std::to_string(sum) + ")");
  }
}

DiscreteDist DiscreteDist::point_mass(std::size_t size, std::size_t at) {
  std::vector<double> p(size, 0.0);
  p.at(at) = 1.0;
  return DiscreteDist(std::move(p));
}

DiscreteDist DiscreteDist::uniform(std::size_t size) {
  return DiscreteDist(std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

EntropyValue shannon(const DiscreteDist& d) {
  double h = 0.0;
  for (double p : d.probs()) h -= plogp(p);
  return EntropyValue(std::max(h, 0.0));
}

double binary_entropy(double p) {
  require_open_unit(p, "binary_entropy");
  return -plogp(p) - plogp(1.0 - p);
}

EntropyValue bernoulli_network_entropy(int n, double p) {
  require_positive_count(n, "bernoulli_network_entropy");
  return EntropyValue(n * binary_entropy(p));
}

EntropyValue binomial_entropy_exact(int n, double p) {
  require_positive_count(n, "binomial_entropy_exact");
  require_open_unit(p, "binomial_entropy_exact");
  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  const double log_n_fact = std::lgamma(n + 1.0);
  double h = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double log_b = log_n_fact - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) +
                         k * log_p + (n - k) * log_q;
    const double b = std::exp(log_b);
    h -= b * log_b;
  }
  return EntropyValue(h * kLog2E);
}

EntropyValue binomial_entropy_asymptotic(int n, double p) {
  require_positive_count(n, "binomial_entropy_asymptotic");
  require_open_unit(p, "binomial_entropy_asymptotic");
  return EntropyValue(0.5 * std::log2(kTwoPiE * n * p * (1.0 - p)));
}

EntropyValue gaussian_differential_entropy(const MatX& cov) {
  const Bits log_det = log_det_sym(cov);
  if (log_det.is_minus_infinity()) return EntropyValue::minus_infinity();
  return EntropyValue(0.5 * (static_cast<double>(cov.rows()) * std::log2(kTwoPiE) + log_det.value()));
}

EntropyValue gaussian_marginal_entropy(double variance) {
  if (variance < -kNegativeEigenTolerance) {
    throw NumericalError("gaussian_marginal_entropy: negative variance");
  }
  if (variance <= kEigenClip) return EntropyValue::minus_infinity();
  return EntropyValue(0.5 * std::log2(kTwoPiE * variance));
}

double spectrum_entropy(const VecX& eigenvalues) {
  double s = 0.0;
  for (Index i = 0; i < eigenvalues.size(); ++i) {
    const double v = eigenvalues(i);
    if (v < -kNegativeEigenTolerance) {
      throw NumericalError("spectrum has a negative eigenvalue " + std::to_string(v));
    }
    if (v > kEigenClip) s -= v * std::log2(v);
  }
  return std::max(s, 0.0);
}

EntropyValue von_neumann(const DensityMatrix& rho) {
  return EntropyValue(spectrum_entropy(rho.spectrum()));
}

EntropyValue von_neumann(const CMatX& rho) { return von_neumann(DensityMatrix(rho)); }

}  // namespace netent
