#pragma once

#include <vector>

#include "netent/bits.hpp"
#include "netent/types.hpp"

namespace netent {

class DensityMatrix;

// Probability mass function over an implicit finite support 0..size()-1.
class DiscreteDist {
 public:
  // Throws ValidationError on negative entries or |sum - 1| > 1e-12.
  explicit DiscreteDist(std::vector<double> probs);

  static DiscreteDist point_mass(std::size_t size, std::size_t at);
  static DiscreteDist uniform(std::size_t size);

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  const std::vector<double>& probs() const { return probs_; }

 private:
  std::vector<double> probs_;
};

inline constexpr double kDistSumTolerance = 1e-12;

// -sum p log2 p, with 0 log 0 = 0.
EntropyValue shannon(const DiscreteDist& d);

// Binary entropy h_b(p) in bits.
double binary_entropy(double p);

// Joint entropy of n i.i.d. Bernoulli(p) values: n h_b(p). Requires p in (0,1).
EntropyValue bernoulli_network_entropy(int n, double p);

// Entropy of Binomial(n, p), summed in log space (lgamma coefficients).
EntropyValue binomial_entropy_exact(int n, double p);

// 1/2 log2(2 pi e n p (1-p)).
EntropyValue binomial_entropy_asymptotic(int n, double p);

// 1/2 log2((2 pi e)^n |cov|); -infinity when cov is singular after clipping.
EntropyValue gaussian_differential_entropy(const MatX& cov);

// 1/2 log2(2 pi e variance) for a scalar Gaussian. -infinity when variance
// is clipped to zero.
EntropyValue gaussian_marginal_entropy(double variance);

// -tr(rho log2 rho) over clipped eigenvalues.
EntropyValue von_neumann(const DensityMatrix& rho);
// Same, for a raw matrix; validates unit trace, Hermiticity and PSD.
EntropyValue von_neumann(const CMatX& rho);

// Entropy of a clipped spectrum that already sums to one.
double spectrum_entropy(const VecX& eigenvalues);

}  // namespace netent
