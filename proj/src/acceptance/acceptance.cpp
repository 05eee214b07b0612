#include "netent/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "netent/classical.hpp"
#include "netent/entropy.hpp"
#include "netent/gossip.hpp"
#include "netent/graph.hpp"
#include "netent/linalg.hpp"
#include "netent/oracle.hpp"
#include "netent/quantum.hpp"
#include "netent/rng.hpp"

namespace netent {
namespace {

std::string printf_string(const char* format, ...) {
  va_list args;
  va_start(args, format);
  char buffer[512];
  std::vsnprintf(buffer, sizeof buffer, format, args);
  va_end(args);
  return buffer;
}

struct Outcome {
  bool passed = true;
  std::string detail;

  // Records the first failing check; later ones only clear the flag.
  void require(bool ok, const std::string& what) {
    if (!ok && passed) detail = what;
    passed = passed && ok;
  }
};

double max_abs(const CMatX& m) { return m.cwiseAbs().maxCoeff(); }

SingleParticleChain checked_chain(const GossipConfig& cfg, const AcceptanceOptions& opt) {
  SingleParticleChain chain = single_particle_matrix(cfg);
  if (opt.perturb_chain) chain.P(0, 1) += 1e-3;
  return chain;
}

// Differential-entropy trajectories on random connected graphs.
Outcome criterion_1(const AcceptanceOptions& opt) {
  Outcome out;
  Rng rng = derive_stream(opt.seed, 1);
  std::uniform_int_distribution<int> size(2, 8);
  const auto grid = uniform_time_grid(kDefaultGridStep, kDefaultGridHorizon);
  double worst_closed_form = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = random_connected_graph(size(rng), 0.3, rng);
    const double trace = laplacian(g).trace();
    for (double sigma2 : {0.5, 1.0, 4.0}) {
      const auto traj = differential_entropy_trajectory(g, sigma2, grid);
      out.require(is_non_increasing(traj.joint_bits, 1e-9),
                  printf_string("graph %d sigma2=%g: entropy increased", trial, sigma2));
      const double h0 =
          0.5 * g.node_count() * std::log2(2.0 * std::numbers::pi * std::numbers::e * sigma2);
      for (std::size_t k = 0; k < grid.size(); ++k) {
        const double expected = h0 - grid[k] * trace * kLog2E;
        worst_closed_form =
            std::max(worst_closed_form, std::abs(traj.joint_bits[k].value() - expected));
      }
    }
  }
  out.require(worst_closed_form < 1e-8,
              printf_string("closed-form gap %.3g >= 1e-8", worst_closed_form));
  if (out.passed) out.detail = printf_string("max closed-form gap %.3g", worst_closed_form);
  return out;
}

// Binomial entropy asymptotics and the Bernoulli limit.
Outcome criterion_2(const AcceptanceOptions&) {
  Outcome out;
  const int sizes[] = {50, 100, 200, 400};
  std::string scaled_list;
  for (double p : {0.3, 0.5}) {
    double prev_gap = 0.0;
    double prev_scaled = 0.0;
    for (std::size_t s = 0; s < std::size(sizes); ++s) {
      const int n = sizes[s];
      const double gap =
          std::abs(binomial_entropy_exact(n, p).value() - binomial_entropy_asymptotic(n, p).value());
      const double scaled = n * gap;
      if (s > 0) {
        out.require(gap < prev_gap, printf_string("p=%g: gap did not decrease at N=%d", p, n));
        out.require(scaled <= 1.1 * prev_scaled,
                    printf_string("p=%g: N*gap grew by more than 10%% at N=%d", p, n));
      }
      const auto report = bernoulli_limit_report(n, p);
      out.require(report.h_inf_exact < report.h0,
                  printf_string("p=%g N=%d: limit entropy not below initial", p, n));
      scaled_list += printf_string("%s%.3g", scaled_list.empty() ? "" : ",", scaled);
      prev_gap = gap;
      prev_scaled = scaled;
    }
  }
  if (out.passed) out.detail = "N*gap = " + scaled_list;
  return out;
}

// Quantum consensus flow from |01+->.
Outcome criterion_3(const AcceptanceOptions&) {
  Outcome out;
  const Graph g = default_graph();
  const DensityMatrix rho0 = qstate_from_kets("01+-");
  const auto grid = uniform_time_grid(kDefaultQuantumStep, 20.0);
  const auto traj = integrate_quantum(g, rho0, grid, kDefaultQuantumStep);

  double worst_drop = 0.0;
  for (std::size_t k = 1; k < traj.entropy_bits.size(); ++k)
    worst_drop = std::max(worst_drop, traj.entropy_bits[k - 1] - traj.entropy_bits[k]);
  out.require(worst_drop <= 1e-8, printf_string("(a) entropy dropped by %.3g", worst_drop));

  const double worst_drift = *std::max_element(traj.trace_drift.begin(), traj.trace_drift.end());
  out.require(worst_drift < 1e-9, printf_string("(b) trace drift %.3g >= 1e-9", worst_drift));

  const double limit_gap = max_abs(traj.states.back().matrix() - symmetrized_limit(rho0).matrix());
  out.require(limit_gap < 1e-4, printf_string("(c) |rho(20) - limit| = %.3g", limit_gap));

  double worst_oracle = 0.0;
  const std::pair<Graph, const char*> small[] = {
      {path_graph(2), "0+"}, {path_graph(3), "01+"}, {complete_graph(3), "1-0"}};
  const double times[] = {0.25, 1.0, 3.0};
  for (const auto& [graph, ket] : small) {
    const DensityMatrix start = qstate_from_kets(ket);
    const auto rk4 = integrate_quantum(graph, start, times, kDefaultQuantumStep);
    for (std::size_t k = 0; k < std::size(times); ++k) {
      const CMatX exact = oracle::superoperator_evolution(graph, start.matrix(), times[k]);
      worst_oracle = std::max(worst_oracle, max_abs(rk4.states[k].matrix() - exact));
    }
  }
  out.require(worst_oracle < 1e-6, printf_string("(d) RK4 vs oracle %.3g", worst_oracle));

  if (out.passed) {
    out.detail = printf_string("S(20)=%.6f drift=%.2g limit gap=%.2g oracle gap=%.2g",
                               traj.entropy_bits.back(), worst_drift, limit_gap, worst_oracle);
  }
  return out;
}

// Convex-hull decomposition over permutation conjugates.
Outcome criterion_4(const AcceptanceOptions& opt) {
  Outcome out;
  Rng rng = derive_stream(opt.seed, 4);
  std::normal_distribution<double> normal;
  std::vector<std::pair<Graph, DensityMatrix>> cases;
  cases.emplace_back(path_graph(2), qstate_from_kets("0+"));
  cases.emplace_back(path_graph(3), qstate_from_kets("01+"));
  cases.emplace_back(complete_graph(3), qstate_from_kets("1-0"));
  {
    CMatX a(8, 8);
    for (Index i = 0; i < a.size(); ++i) a.data()[i] = Complex(normal(rng), normal(rng));
    CMatX rho = a * a.adjoint();
    rho /= rho.trace().real();
    cases.emplace_back(path_graph(3), DensityMatrix(CMatX((rho + rho.adjoint()) / 2.0)));
  }
  double worst_residual = 0.0;
  double worst_sum = 0.0;
  for (const auto& [g, rho0] : cases) {
    for (double s : {0.0, 1.0}) {
      for (double eps : {0.1, 1.0}) {
        const auto cert = convex_hull_check(g, rho0, s, eps);
        worst_residual = std::max(worst_residual, cert.mixture.residual);
        worst_sum = std::max(worst_sum, std::abs(cert.mixture.weight_sum - 1.0));
        for (double w : cert.mixture.weights)
          out.require(w >= 0.0 && w <= 1.0, printf_string("weight %.3g outside [0,1]", w));
      }
    }
  }
  out.require(worst_residual < 1e-6, printf_string("residual %.3g >= 1e-6", worst_residual));
  out.require(worst_sum <= 1e-8, printf_string("weight sum off by %.3g", worst_sum));
  if (out.passed)
    out.detail = printf_string("max residual %.2g, max |sum-1| %.2g", worst_residual, worst_sum);
  return out;
}

// Single-particle chain ergodicity and the joint/marginal cross-check.
Outcome criterion_5(const AcceptanceOptions& opt) {
  Outcome out;
  std::string summary;
  const std::pair<Graph, const char*> graphs[] = {{cycle_graph(3), "C3"},
                                                  {default_graph(), "default"}};
  for (const auto& [g, label] : graphs) {
    const GossipConfig cfg(g, 0.5);
    const auto chain = checked_chain(cfg, opt);
    const auto report = ergodicity_report(chain, 50);
    out.require(report.symmetric, printf_string("%s: P not symmetric", label));
    out.require(report.doubly_stochastic, printf_string("%s: P not doubly stochastic", label));
    out.require(report.nonnegative, printf_string("%s: P has negative entries", label));
    out.require(report.slem < 1.0, printf_string("%s: slem %.6f >= 1", label, report.slem));
    out.require(report.bound_holds, printf_string("%s: d_k exceeds C slem^k", label));

    const int n = g.node_count();
    const VecX x0 = VecX::LinSpaced(n, 0.0, n - 1.0);
    const auto values = distinct_values(x0);
    std::vector<DiscreteDist> m0;
    for (int i = 0; i < n; ++i) m0.push_back(DiscreteDist::point_mass(n, i));
    auto f = JointPmf::point_mass(g, x0);
    double worst = 0.0;
    try {
      for (int k = 1; k <= 50; ++k) {
        f = joint_pmf_operator_step(f, cfg);
        const auto joint = f.node_marginals(values);
        const auto mixture = marginal_evolution(chain, m0, k);
        for (int i = 0; i < n; ++i)
          for (int v = 0; v < n; ++v) worst = std::max(worst, std::abs(joint[i][v] - mixture[i][v]));
      }
    } catch (const std::exception& e) {
      out.require(false, printf_string("%s: marginal evolution failed: %s", label, e.what()));
      worst = INFINITY;
    }
    out.require(worst <= 1e-12, printf_string("%s: joint vs mixture marginals %.3g", label, worst));
    summary += printf_string("%s%s slem=%.4f C=%.3f gap=%.1g", summary.empty() ? "" : "; ", label,
                             report.slem, report.fitted_constant, worst);
  }
  if (out.passed) out.detail = summary;
  return out;
}

// Monte Carlo label positions against the P^k mixture.
Outcome criterion_6(const AcceptanceOptions& opt) {
  Outcome out;
  const int k = 50;
  const long trials = 100000;
  const GossipConfig cfg(default_graph(), 0.5, opt.seed, k);
  const VecX labels = VecX::LinSpaced(4, 0.0, 3.0);
  const auto stats = run_monte_carlo(cfg, Algorithm::A2, labels, trials);
  std::vector<DiscreteDist> m0;
  for (int i = 0; i < 4; ++i) m0.push_back(DiscreteDist::point_mass(4, i));
  const auto analytic = marginal_evolution(checked_chain(cfg, opt), m0, k);
  double worst_z = 0.0;
  for (int node = 0; node < 4; ++node) {
    for (std::size_t v = 0; v < 4; ++v) {
      const double p = analytic[node][v];
      const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
      const double diff = std::abs(stats.frequency(k, node, v) - p);
      const double z = sigma > 0.0 ? diff / sigma : (diff > 0.0 ? INFINITY : 0.0);
      worst_z = std::max(worst_z, z);
      out.require(z <= 3.0, printf_string("node %d value %zu: %.2f sigma", node + 1, v, z));
    }
  }
  if (out.passed) out.detail = printf_string("worst bin %.2f sigma over 16 bins", worst_z);
  return out;
}

Index basis_index(const VecX& bits) {
  Index idx = 0;
  for (Index i = 0; i < bits.size(); ++i) idx = (idx << 1) | static_cast<Index>(bits(i) != 0.0);
  return idx;
}

// Largest gap between a joint pmf on bit vectors and the diagonal of rho,
// plus the largest off-diagonal magnitude of rho.
double pmf_diagonal_gap(const JointPmf& f, const CMatX& rho) {
  VecX diag = VecX::Zero(rho.rows());
  for (std::size_t s = 0; s < f.support().size(); ++s) diag(basis_index(f.support()[s])) = f.probs()[s];
  const CMatX off = rho - CMatX(rho.diagonal().asDiagonal());
  return std::max((rho.diagonal().real() - diag).cwiseAbs().maxCoeff(), max_abs(off));
}

// Expectation identity and physical equivalence.
Outcome criterion_7(const AcceptanceOptions& opt) {
  Outcome out;
  const GossipConfig cfg(default_graph(), 0.5, opt.seed, 20);
  VecX x0(4);
  x0 << 0.0, 1.0, 3.0, -2.0;
  const auto cmp = frozen_pair_expectation(cfg, x0, 100000);
  double worst_z = 0.0;
  for (std::size_t k = 0; k < cmp.a1.size(); ++k) {
    for (Index i = 0; i < x0.size(); ++i) {
      const double diff = std::abs(cmp.a2_mean[k](i) - cmp.a1[k](i));
      const double bound = 3.0 * cmp.a2_stderr[k](i) + 1e-12;
      out.require(diff <= bound, printf_string("(a) k=%zu node %ld off by %.3g", k,
                                               static_cast<long>(i) + 1, diff));
      if (cmp.a2_stderr[k](i) > 0.0) worst_z = std::max(worst_z, diff / cmp.a2_stderr[k](i));
    }
  }

  double worst_gap = 0.0;
  for (const Graph& g : {path_graph(2), path_graph(3), complete_graph(3)}) {
    const GossipConfig small(g, 0.5);
    const int n = g.node_count();
    for (Index code = 0; code < (Index{1} << n); ++code) {
      VecX bits(n);
      for (int i = 0; i < n; ++i) bits(i) = static_cast<double>(qubit_bit(code, i, n));
      VecX diag = VecX::Zero(Index{1} << n);
      diag(code) = 1.0;
      const DensityMatrix rho0 = DensityMatrix::diagonal(diag);
      const JointPmf f0 = JointPmf::point_mass(g, bits);

      for (const Edge& e : g.edges()) {
        const auto f1 = joint_pmf_pair_step(f0, e, 0.5);
        const auto rho1 = step_AQ1({rho0, 0}, e);
        worst_gap = std::max(worst_gap, pmf_diagonal_gap(f1, rho1.rho.matrix()));
      }

      // Pair-averaged tick, iterated.
      JointPmf f = f0;
      CMatX rho = rho0.matrix();
      for (int k = 0; k < 10; ++k) {
        f = joint_pmf_operator_step(f, small);
        CMatX next = CMatX::Zero(rho.rows(), rho.cols());
        for (std::size_t e = 0; e < g.edges().size(); ++e) {
          next += small.pairs().probs[e] *
                  step_AQ1({DensityMatrix(rho), 0}, g.edges()[e]).rho.matrix();
        }
        rho = next;
        worst_gap = std::max(worst_gap, pmf_diagonal_gap(f, rho));
      }
    }
  }
  out.require(worst_gap <= 1e-12, printf_string("(b) pmf vs AQ1 diagonal gap %.3g", worst_gap));
  if (out.passed)
    out.detail = printf_string("(a) worst %.2f sigma; (b) gap %.2g", worst_z, worst_gap);
  return out;
}

// Copy-gossip consensus times.
Outcome criterion_8(const AcceptanceOptions& opt) {
  Outcome out;
  const GossipConfig cfg(default_graph(), 0.5, opt.seed, 200);
  VecX x0(4);
  x0 << 0.0, 1.0, 2.0, 3.0;
  const auto stats = run_monte_carlo(cfg, Algorithm::A1Prime, x0, 10000);
  for (std::size_t k = 1; k < stats.hit_cdf.size(); ++k)
    out.require(stats.hit_cdf[k] >= stats.hit_cdf[k - 1], "hit-time CDF decreased");
  const double reached = stats.hit_cdf.back();
  out.require(reached >= 0.99, printf_string("only %.4f reached consensus by k=200", reached));
  long latest = 0;
  for (long t : stats.hit_times) latest = std::max(latest, t);
  if (out.passed)
    out.detail = printf_string("P(hit <= 200) = %.4f, latest hit %ld", reached, latest);
  return out;
}

// Spectrum invariance under swap gossip against mixing gossip.
Outcome criterion_9(const AcceptanceOptions& opt) {
  Outcome out;
  Rng rng = derive_stream(opt.seed, 9);
  std::normal_distribution<double> normal;
  double worst_spectrum = 0.0;
  for (const Graph& g : {path_graph(2), path_graph(3), complete_graph(3)}) {
    const GossipConfig cfg(g, 0.5, opt.seed);
    const Index d = Index{1} << g.node_count();
    for (int path = 0; path < 20; ++path) {
      CMatX a(d, d);
      for (Index i = 0; i < a.size(); ++i) a.data()[i] = Complex(normal(rng), normal(rng));
      CMatX rho = a * a.adjoint();
      rho /= rho.trace().real();
      QuantumGossipState s{DensityMatrix(CMatX((rho + rho.adjoint()) / 2.0)), 0};
      const VecX spectrum0 = s.rho.spectrum();
      for (int k = 0; k < 100; ++k) {
        s = step_AQ2(s, sample_pair(cfg, rng), sample_coin(cfg, rng));
        worst_spectrum =
            std::max(worst_spectrum, (s.rho.spectrum() - spectrum0).cwiseAbs().maxCoeff());
      }
    }
  }
  out.require(worst_spectrum <= 1e-10, printf_string("AQ2 spectrum moved by %.3g", worst_spectrum));

  // Contrast: one sampled AQ1 path from an asymmetric pure state.
  const GossipConfig cfg(path_graph(3), 0.5, opt.seed);
  QuantumGossipState s{qstate_from_kets("01+"), 0};
  const double s0 = von_neumann(s.rho).value();
  double prev = s0;
  int increases = 0;
  for (int k = 0; k < 100; ++k) {
    s = step_AQ1(s, sample_pair(cfg, rng));
    const double cur = von_neumann(s.rho).value();
    out.require(cur >= prev - 1e-10, printf_string("AQ1 entropy dropped at k=%d", k + 1));
    if (cur > prev + 1e-10) ++increases;
    prev = cur;
  }
  out.require(prev > s0 + 1e-3, "AQ1 entropy did not increase");
  if (out.passed) {
    out.detail = printf_string("AQ2 spectrum drift %.2g; AQ1 S: %.3f -> %.3f (%d increases)",
                               worst_spectrum, s0, prev, increases);
  }
  return out;
}

struct CriterionSpec {
  const char* name;
  double budget_seconds;
  std::function<Outcome(const AcceptanceOptions&)> run;
};

const CriterionSpec kCriteria[kCriterionCount] = {
    {"classical entropy decay", 5.0, criterion_1},
    {"binomial limit asymptotics", 2.0, criterion_2},
    {"quantum consensus flow", 60.0, criterion_3},
    {"permutation convex hull", 30.0, criterion_4},
    {"single-particle ergodicity", 10.0, criterion_5},
    {"gossip Monte Carlo marginals", 60.0, criterion_6},
    {"expectation and equivalence", 60.0, criterion_7},
    {"copy gossip consensus", 10.0, criterion_8},
    {"swap gossip spectrum", 10.0, criterion_9},
};

}  // namespace

CriterionResult run_criterion(int id, const AcceptanceOptions& options) {
  if (id < 1 || id > kCriterionCount) throw std::out_of_range("criterion id out of range");
  const CriterionSpec& spec = kCriteria[id - 1];
  CriterionResult result;
  result.id = id;
  result.name = spec.name;
  result.budget_seconds = spec.budget_seconds;
  const auto start = std::chrono::steady_clock::now();
  Outcome outcome;
  try {
    outcome = spec.run(options);
  } catch (const std::exception& e) {
    outcome.passed = false;
    outcome.detail = std::string("exception: ") + e.what();
  }
  result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  result.passed = outcome.passed;
  result.detail = outcome.detail;
  if (result.passed && result.seconds > result.budget_seconds) {
    result.passed = false;
    result.detail = printf_string("over time budget (%.1f s > %.0f s)", result.seconds,
                                  result.budget_seconds);
  }
  return result;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options) {
  std::vector<CriterionResult> results;
  for (int id = 1; id <= kCriterionCount; ++id) results.push_back(run_criterion(id, options));
  return results;
}

std::string format_result(const CriterionResult& r) {
  return printf_string("%s  %d  %-30s (%6.2f s / %3.0f s)  %s", r.passed ? "PASS" : "FAIL", r.id,
                       r.name.c_str(), r.seconds, r.budget_seconds, r.detail.c_str());
}

}  // namespace netent
