#include "netent/linalg.hpp"

#include <limits>
#include <vector>

namespace netent {

VecX nnls(const MatX& a, const VecX& b) {
  if (a.rows() != b.size()) throw ValidationError("nnls: dimension mismatch");
  const Index n = a.cols();
  VecX x = VecX::Zero(n);
  std::vector<bool> passive(n, false);
  const double tol = 10.0 * std::numeric_limits<double>::epsilon() *
                     std::max<double>(1.0, a.cwiseAbs().maxCoeff()) *
                     static_cast<double>(std::max(a.rows(), n));

  // Least squares restricted to the passive columns; zero elsewhere.
  auto solve_passive = [&]() {
    std::vector<Index> cols;
    for (Index j = 0; j < n; ++j)
      if (passive[j]) cols.push_back(j);
    MatX sub(a.rows(), static_cast<Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) sub.col(static_cast<Index>(c)) = a.col(cols[c]);
    const VecX z = sub.colPivHouseholderQr().solve(b);
    VecX s = VecX::Zero(n);
    for (std::size_t c = 0; c < cols.size(); ++c) s(cols[c]) = z(static_cast<Index>(c));
    return s;
  };

  const int max_outer = static_cast<int>(3 * n + 10);
  for (int outer = 0; outer < max_outer; ++outer) {
    const VecX w = a.transpose() * (b - a * x);
    Index best = -1;
    double best_w = tol;
    for (Index j = 0; j < n; ++j) {
      if (!passive[j] && w(j) > best_w) {
        best_w = w(j);
        best = j;
      }
    }
    if (best < 0) break;
    passive[best] = true;

    for (int inner = 0; inner < max_outer; ++inner) {
      const VecX s = solve_passive();
      bool feasible = true;
      for (Index j = 0; j < n; ++j)
        if (passive[j] && s(j) <= 0.0) feasible = false;
      if (feasible) {
        x = s;
        break;
      }
      double alpha = 1.0;
      for (Index j = 0; j < n; ++j) {
        if (passive[j] && s(j) <= 0.0) alpha = std::min(alpha, x(j) / (x(j) - s(j)));
      }
      x += alpha * (s - x);
      for (Index j = 0; j < n; ++j) {
        if (passive[j] && x(j) <= tol) {
          passive[j] = false;
          x(j) = 0.0;
        }
      }
    }
  }
  return x;
}

}  // namespace netent
