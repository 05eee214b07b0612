#include "netent/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "netent/entropy.hpp"
#include "netent/errors.hpp"
#include "netent/linalg.hpp"

namespace netent {

namespace {

int qubits_for_dim(Index dim) {
  int n = 0;
  while ((Index{1} << n) < dim) ++n;
  if ((Index{1} << n) != dim || n == 0) {
    throw ValidationError("density matrix dimension " + std::to_string(dim) +
                          " is not 2^N with N >= 1");
  }
  return n;
}

// Largest real step h with h * 2|E| inside the RK4 stability interval on the
// negative real axis (|h lambda| <= 2.785).
constexpr double kRk4StabilityLimit = 2.78;

}  // namespace

DensityMatrix::DensityMatrix(CMatX matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols()) throw ValidationError("density matrix is not square");
  n_qubits_ = qubits_for_dim(matrix_.rows());
  const Complex trace = matrix_.trace();
  if (std::abs(trace.real() - 1.0) > kTraceTolerance || std::abs(trace.imag()) > kTraceTolerance) {
    throw ValidationError("density matrix trace is not 1 (got " + std::to_string(trace.real()) +
                          ")");
  }
  spectrum_ = eigvals_hermitian(matrix_);
  if (spectrum_(0) < -kNegativeEigenTolerance) {
    throw ValidationError("density matrix has negative eigenvalue " +
                          std::to_string(spectrum_(0)));
  }
}

DensityMatrix DensityMatrix::maximally_mixed(int n_qubits) {
  const Index d = Index{1} << n_qubits;
  return DensityMatrix(CMatX::Identity(d, d) / static_cast<double>(d));
}

DensityMatrix DensityMatrix::diagonal(const VecX& probs) {
  return DensityMatrix(probs.cast<Complex>().asDiagonal().toDenseMatrix());
}

QubitPermutation::QubitPermutation(std::vector<int> perm) : perm_(std::move(perm)) {
  const int n = static_cast<int>(perm_.size());
  if (n < 1) throw ValidationError("qubit permutation must act on at least one qubit");
  std::vector<int> sorted = perm_;
  std::sort(sorted.begin(), sorted.end());
  for (int j = 0; j < n; ++j) {
    if (sorted[j] != j) throw ValidationError("not a permutation of 0..N-1");
  }
  const Index dim = Index{1} << n;
  image_.resize(dim);
  for (Index b = 0; b < dim; ++b) {
    Index c = 0;
    for (int j = 0; j < n; ++j) {
      c |= qubit_bit(b, j, n) << (n - 1 - perm_[j]);
    }
    image_[b] = c;
  }
}

QubitPermutation QubitPermutation::identity(int n_qubits) {
  std::vector<int> perm(n_qubits);
  std::iota(perm.begin(), perm.end(), 0);
  return QubitPermutation(std::move(perm));
}

MatX QubitPermutation::matrix() const {
  const auto dim = static_cast<Index>(image_.size());
  MatX u = MatX::Zero(dim, dim);
  for (Index b = 0; b < dim; ++b) u(image_[b], b) = 1.0;
  return u;
}

CMatX QubitPermutation::conjugate(const CMatX& rho) const {
  const auto dim = static_cast<Index>(image_.size());
  if (rho.rows() != dim || rho.cols() != dim) {
    throw ValidationError("conjugate: matrix dimension does not match qubit count");
  }
  CMatX out(dim, dim);
  for (Index b = 0; b < dim; ++b) {
    for (Index a = 0; a < dim; ++a) out(image_[a], image_[b]) = rho(a, b);
  }
  return out;
}

QubitPermutation QubitPermutation::compose(const QubitPermutation& inner) const {
  if (inner.n_qubits() != n_qubits()) throw ValidationError("compose: qubit count mismatch");
  std::vector<int> perm(perm_.size());
  for (std::size_t j = 0; j < perm.size(); ++j) perm[j] = perm_[inner.perm_[j]];
  return QubitPermutation(std::move(perm));
}

QubitPermutation swap_operator(int n_qubits, Edge pair) {
  const auto [j, k] = pair;
  if (j < 0 || k < 0 || j >= n_qubits || k >= n_qubits || j == k) {
    throw ValidationError("swap_operator: pair {" + std::to_string(j + 1) + "," +
                          std::to_string(k + 1) + "} is invalid for " + std::to_string(n_qubits) +
                          " qubits");
  }
  std::vector<int> perm(n_qubits);
  std::iota(perm.begin(), perm.end(), 0);
  std::swap(perm[j], perm[k]);
  return QubitPermutation(std::move(perm));
}

std::vector<QubitPermutation> all_qubit_permutations(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxSymmetrizedQubits) {
    throw ValidationError("permutation enumeration supports 1.." +
                          std::to_string(kMaxSymmetrizedQubits) + " qubits, got " +
                          std::to_string(n_qubits));
  }
  std::vector<int> perm(n_qubits);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<QubitPermutation> out;
  do {
    out.emplace_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

std::vector<Ket> parse_kets(std::string_view text) {
  if (text.empty()) throw ValidationError("ket string is empty");
  std::vector<Ket> kets;
  for (std::size_t i = 0; i < text.size(); ++i) {
    switch (text[i]) {
      case '0': kets.push_back(Ket::Zero); break;
      case '1': kets.push_back(Ket::One); break;
      case '+': kets.push_back(Ket::Plus); break;
      case '-': kets.push_back(Ket::Minus); break;
      default:
        throw ValidationError("unknown qubit symbol '" + std::string(1, text[i]) +
                              "' at position " + std::to_string(i + 1) +
                              " (expected 0, 1, + or -)");
    }
  }
  return kets;
}

DensityMatrix qstate_from_kets(std::span<const Ket> kets) {
  if (kets.empty()) throw ValidationError("ket list is empty");
  const double r = std::numbers::sqrt2 / 2.0;
  CVecX psi = CVecX::Ones(1);
  for (Ket k : kets) {
    Complex v0, v1;
    switch (k) {
      case Ket::Zero: v0 = 1.0; v1 = 0.0; break;
      case Ket::One: v0 = 0.0; v1 = 1.0; break;
      case Ket::Plus: v0 = r; v1 = r; break;
      case Ket::Minus: v0 = r; v1 = -r; break;
    }
    CVecX next(psi.size() * 2);
    for (Index a = 0; a < psi.size(); ++a) {
      next(2 * a) = psi(a) * v0;
      next(2 * a + 1) = psi(a) * v1;
    }
    psi = std::move(next);
  }
  CMatX rho = psi * psi.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(symmetrized(rho));
}

DensityMatrix qstate_from_kets(std::string_view text) {
  const auto kets = parse_kets(text);
  return qstate_from_kets(std::span<const Ket>(kets));
}

namespace {

std::vector<QubitPermutation> edge_swaps(const Graph& g) {
  std::vector<QubitPermutation> swaps;
  swaps.reserve(g.edges().size());
  for (const Edge& e : g.edges()) swaps.push_back(swap_operator(g.node_count(), e));
  return swaps;
}

CMatX generator(const std::vector<QubitPermutation>& swaps, const CMatX& rho) {
  CMatX out = CMatX::Zero(rho.rows(), rho.cols());
  for (const auto& u : swaps) out += u.conjugate(rho);
  out -= static_cast<double>(swaps.size()) * rho;
  return out;
}

}  // namespace

CMatX consensus_generator(const Graph& g, const CMatX& rho) {
  return generator(edge_swaps(g), rho);
}

QuantumTrajectory integrate_quantum(const Graph& g, const DensityMatrix& rho0,
                                    std::span<const double> grid, double step) {
  if (rho0.n_qubits() != g.node_count()) {
    throw ValidationError("initial state has " + std::to_string(rho0.n_qubits()) +
                          " qubits but the graph has " + std::to_string(g.node_count()) +
                          " nodes");
  }
  if (!(step > 0.0)) throw ValidationError("integration step must be positive");
  if (step * 2.0 * static_cast<double>(g.edge_count()) > kRk4StabilityLimit) {
    throw ValidationError("integration step " + std::to_string(step) +
                          " is outside the RK4 stability region for this graph; use h <= " +
                          std::to_string(kRk4StabilityLimit / (2.0 * g.edge_count())));
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0) || (i > 0 && grid[i] < grid[i - 1])) {
      throw ValidationError("time grid must be non-negative and non-decreasing");
    }
  }

  const auto swaps = edge_swaps(g);
  QuantumTrajectory traj;
  CMatX rho = rho0.matrix();
  double t = 0.0;
  for (double target : grid) {
    double drift = 0.0;
    const double span = target - t;
    if (span > 0.0) {
      const auto steps = static_cast<long>(std::max(1.0, std::ceil(span / step - 1e-9)));
      const double h = span / static_cast<double>(steps);
      for (long s = 0; s < steps; ++s) {
        const CMatX k1 = generator(swaps, rho);
        const CMatX k2 = generator(swaps, rho + 0.5 * h * k1);
        const CMatX k3 = generator(swaps, rho + 0.5 * h * k2);
        const CMatX k4 = generator(swaps, rho + h * k3);
        CMatX next = rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        const Complex tr = next.trace();
        const double step_drift =
            std::max({std::abs(tr - Complex(1.0)), (next - next.adjoint()).cwiseAbs().maxCoeff()});
        if (step_drift >= kMaxStepDrift) {
          throw NumericalError("RK4 step drift " + std::to_string(step_drift) +
                               " exceeds bound; use a smaller step");
        }
        drift = std::max(drift, step_drift);
        next = symmetrized(next);
        next /= next.trace().real();
        rho = std::move(next);
      }
      t = target;
    }
    DensityMatrix sample(rho);
    traj.times.push_back(target);
    traj.entropy_bits.push_back(spectrum_entropy(sample.spectrum()));
    traj.trace_drift.push_back(drift);
    traj.states.push_back(std::move(sample));
  }
  return traj;
}

DensityMatrix symmetrized_limit(const DensityMatrix& rho0) {
  const auto perms = all_qubit_permutations(rho0.n_qubits());
  CMatX sum = CMatX::Zero(rho0.dim(), rho0.dim());
  for (const auto& u : perms) sum += u.conjugate(rho0.matrix());
  sum /= static_cast<double>(perms.size());
  return DensityMatrix(symmetrized(sum));
}

PermutationMixture permutation_mixture(const CMatX& target, const DensityMatrix& base) {
  if (base.n_qubits() > kMaxDecompositionQubits) {
    throw ValidationError("permutation mixture supports at most " +
                          std::to_string(kMaxDecompositionQubits) + " qubits");
  }
  if (target.rows() != base.dim() || target.cols() != base.dim()) {
    throw ValidationError("permutation mixture: dimension mismatch");
  }
  // Every atom has unit trace, so the data rows already pin the weight sum.
  // The explicit row is kept at unit scale; a heavy row stalls NNLS once the
  // atoms become nearly collinear.
  constexpr double kSumRowWeight = 1.0;

  PermutationMixture out;
  out.permutations = all_qubit_permutations(base.n_qubits());
  const Index d2 = base.dim() * base.dim();
  const auto atoms = static_cast<Index>(out.permutations.size());
  MatX a(2 * d2 + 1, atoms);
  std::vector<CMatX> conjugates;
  conjugates.reserve(out.permutations.size());
  for (Index j = 0; j < atoms; ++j) {
    conjugates.push_back(out.permutations[j].conjugate(base.matrix()));
    const auto flat = conjugates.back().reshaped();
    a.col(j).head(d2) = flat.real();
    a.col(j).segment(d2, d2) = flat.imag();
    a(2 * d2, j) = kSumRowWeight;
  }
  VecX b(2 * d2 + 1);
  b.head(d2) = target.reshaped().real();
  b.segment(d2, d2) = target.reshaped().imag();
  b(2 * d2) = kSumRowWeight;

  const VecX x = nnls(a, b);
  out.weights.assign(x.data(), x.data() + x.size());
  CMatX mix = CMatX::Zero(base.dim(), base.dim());
  for (Index j = 0; j < atoms; ++j) mix += x(j) * conjugates[j];
  out.residual = (mix - target).norm();
  out.weight_sum = x.sum();
  return out;
}

ConvexHullCertificate convex_hull_check(const Graph& g, const DensityMatrix& rho0,
                                        double s, double eps, double step) {
  if (s < 0.0 || eps < 0.0) throw ValidationError("s and eps must be non-negative");
  if (rho0.n_qubits() > kMaxDecompositionQubits) {
    throw ValidationError("convex hull check supports at most " +
                          std::to_string(kMaxDecompositionQubits) + " qubits");
  }
  const double grid[] = {s, s + eps};
  const auto traj = integrate_quantum(g, rho0, grid, step);
  ConvexHullCertificate cert;
  cert.mixture = permutation_mixture(traj.states[1].matrix(), traj.states[0]);
  cert.certified = cert.mixture.residual < kDecompositionResidualBound;
  return cert;
}

}  // namespace netent
