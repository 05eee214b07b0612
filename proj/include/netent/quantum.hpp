#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "netent/bits.hpp"
#include "netent/graph.hpp"
#include "netent/types.hpp"

namespace netent {

inline constexpr double kTraceTolerance = 1e-9;

// Hermitian, positive semidefinite, unit-trace matrix over N qubits
// (dimension 2^N). The constructor validates and caches the spectrum.
class DensityMatrix {
 public:
  // Throws ValidationError when the dimension is not a power of two, the
  // trace differs from 1 by more than kTraceTolerance, the matrix is not
  // Hermitian, or an eigenvalue is below -kNegativeEigenTolerance.
  explicit DensityMatrix(CMatX matrix);

  static DensityMatrix maximally_mixed(int n_qubits);
  // diag(probs) in the computational basis.
  static DensityMatrix diagonal(const VecX& probs);

  int n_qubits() const { return n_qubits_; }
  Index dim() const { return matrix_.rows(); }
  const CMatX& matrix() const { return matrix_; }
  // Ascending eigenvalues.
  const VecX& spectrum() const { return spectrum_; }

 private:
  CMatX matrix_;
  VecX spectrum_;
  int n_qubits_ = 0;
};

// Qubit 0 is the most significant bit of a computational basis index, so
// the ket "01+-" lists qubits 0..3 left to right.
inline Index qubit_bit(Index basis, int qubit, int n_qubits) {
  return (basis >> (n_qubits - 1 - qubit)) & 1;
}

// Unitary U_pi that moves the tensor factor at position j to position
// perm[j]. Composition follows the group: U_pi U_sigma = U_{pi o sigma}.
class QubitPermutation {
 public:
  // Throws ValidationError if `perm` is not a permutation of 0..N-1.
  explicit QubitPermutation(std::vector<int> perm);

  static QubitPermutation identity(int n_qubits);

  int n_qubits() const { return static_cast<int>(perm_.size()); }
  const std::vector<int>& permutation() const { return perm_; }
  // U |b> = |basis_image()[b]>.
  const std::vector<Index>& basis_image() const { return image_; }

  // Dense real 0/1 matrix of U.
  MatX matrix() const;
  // U rho U^dagger, computed by index relabeling.
  CMatX conjugate(const CMatX& rho) const;
  // this o inner, i.e. the operator U_this U_inner.
  QubitPermutation compose(const QubitPermutation& inner) const;

 private:
  std::vector<int> perm_;
  std::vector<Index> image_;
};

// U_jk for 0-based qubits j != k, both < n_qubits.
QubitPermutation swap_operator(int n_qubits, Edge pair);

// All N! qubit permutations in lexicographic order (identity first).
// Throws ValidationError for N > kMaxSymmetrizedQubits.
inline constexpr int kMaxSymmetrizedQubits = 6;
std::vector<QubitPermutation> all_qubit_permutations(int n_qubits);

enum class Ket { Zero, One, Plus, Minus };

// Parses one symbol per qubit from {0, 1, +, -}.
std::vector<Ket> parse_kets(std::string_view text);
// Pure product state |k_1 ... k_N><k_1 ... k_N|.
DensityMatrix qstate_from_kets(std::span<const Ket> kets);
DensityMatrix qstate_from_kets(std::string_view text);

// Right-hand side of the quantum consensus flow:
// sum over edges {j,k} of (U_jk rho U_jk^dagger - rho).
CMatX consensus_generator(const Graph& g, const CMatX& rho);

struct QuantumTrajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
  std::vector<double> entropy_bits;
  // Largest pre-correction |tr rho - 1| or Hermitian defect over the RK4
  // steps that led to each sample (0 for a sample taken at t = 0).
  std::vector<double> trace_drift;
};

inline constexpr double kDefaultQuantumStep = 0.01;
// Per-step drift above this aborts integration.
inline constexpr double kMaxStepDrift = 1e-8;

// Fixed-step RK4 integration of the quantum consensus flow, sampled at the
// non-decreasing, non-negative `grid`. Steps are shrunk so every grid point
// is hit exactly. Each step is re-Hermitized and trace-renormalized after
// the drift check. Throws ValidationError if `step` leaves the RK4
// stability interval for this graph, NumericalError on drift.
QuantumTrajectory integrate_quantum(const Graph& g, const DensityMatrix& rho0,
                                    std::span<const double> grid,
                                    double step = kDefaultQuantumStep);

// (1/N!) sum_pi U_pi rho U_pi^dagger.
DensityMatrix symmetrized_limit(const DensityMatrix& rho0);

// Convex combination sum_pi m_pi U_pi base U_pi^dagger closest to `target`
// in Frobenius norm, with m >= 0 and sum m = 1.
struct PermutationMixture {
  std::vector<QubitPermutation> permutations;
  std::vector<double> weights;
  double residual = 0.0;  // Frobenius norm of the mismatch
  double weight_sum = 0.0;
};

inline constexpr int kMaxDecompositionQubits = 4;
inline constexpr double kDecompositionResidualBound = 1e-6;

PermutationMixture permutation_mixture(const CMatX& target, const DensityMatrix& base);

struct ConvexHullCertificate {
  PermutationMixture mixture;
  bool certified = false;  // residual < kDecompositionResidualBound
};

// Integrates to s and s + eps and certifies that rho(s + eps) lies in the
// convex hull of the permutation conjugates of rho(s).
ConvexHullCertificate convex_hull_check(const Graph& g, const DensityMatrix& rho0,
                                        double s, double eps,
                                        double step = kDefaultQuantumStep);

}  // namespace netent
