#include "experiments.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <Eigen/Core>
#include <json.hpp>

#include "netent/classical.hpp"
#include "netent/entropy.hpp"
#include "netent/errors.hpp"
#include "netent/gossip.hpp"
#include "netent/graph.hpp"
#include "netent/quantum.hpp"

namespace netent::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

inline constexpr int kMaxCliQubits = 8;

std::string num(double v) {
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", v);
  return buffer;
}

std::vector<double> as_vector(const VecX& x) { return {x.data(), x.data() + x.size()}; }

VecX as_vec(const std::vector<double>& v) {
  VecX x(static_cast<Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) x(static_cast<Index>(i)) = v[i];
  return x;
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (double e : v) out += (out.empty() ? "" : ",") + num(e);
  return out;
}

// The artifact writer for one run: collects file names and the resolved
// config for the manifest.
class Run {
 public:
  Run(const ExperimentConfig& cfg, fs::path dir) : cfg_(cfg), dir_(std::move(dir)) {
    fs::create_directories(dir_);
  }

  void write(const std::string& name, const std::string& contents) {
    write_atomic(dir_ / name, contents);
    result_.files.push_back(name);
  }

  void check(bool ok, const std::string& invariant) {
    if (!ok) result_.violations.push_back(invariant);
  }

  void resolve(const std::string& key, const std::string& value) { cfg_.values[key] = value; }

  Graph graph() {
    const std::string& spec = cfg_.get("graph");
    if (spec == "default") return default_graph();
    fs::path path = spec;
    if (path.is_relative()) path = cfg_.base_dir / path;
    if (!fs::exists(path)) throw ValidationError("graph file not found: " + path.string());
    Graph g = read_edge_list(path.string());
    resolve("graph", fs::absolute(path).lexically_normal().string());
    return g;
  }

  const ExperimentConfig& config() const { return cfg_; }

  RunResult finish() {
    json manifest;
    manifest["tool"] = "netent";
    manifest["version"] = NETENT_VERSION;
    manifest["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                        "." + std::to_string(EIGEN_MINOR_VERSION);
    json config = json::object();
    config["experiment"] = cfg_.experiment;
    for (const auto& [key, value] : cfg_.values) config[key] = value;
    manifest["config"] = config;
    manifest["outputs"] = result_.files;
    manifest["invariant_violations"] = result_.violations;
    write_atomic(dir_ / "manifest.json", manifest.dump(2) + "\n");
    result_.files.push_back("manifest.json");
    return result_;
  }

 private:
  ExperimentConfig cfg_;
  fs::path dir_;
  RunResult result_;
};

std::string gnuplot_script(const std::string& csv, const std::string& xlabel,
                           const std::vector<std::string>& columns) {
  std::ostringstream gp;
  gp << "set datafile separator ','\n"
     << "set key autotitle columnhead\n"
     << "set xlabel '" << xlabel << "'\n"
     << "set terminal pngcairo size 800,500\n"
     << "set output '" << fs::path(csv).replace_extension(".png").string() << "'\n"
     << "plot ";
  for (std::size_t c = 0; c < columns.size(); ++c)
    gp << (c ? ", \\\n     " : "") << "'" << csv << "' using 1:" << columns[c] << " with lines";
  gp << "\n";
  return gp.str();
}

void classical_flow(Run& run) {
  const Graph g = run.graph();
  const auto& cfg = run.config();
  const double sigma2 = cfg.number("sigma2");
  if (!(sigma2 > 0.0)) throw ValidationError("sigma2 must be positive");
  const auto grid = uniform_time_grid(cfg.number("grid_step"), cfg.number("horizon"));
  if (!g.is_connected())
    std::cerr << "warning: graph is disconnected; the marginal limit is per component\n";
  const auto traj = differential_entropy_trajectory(g, sigma2, grid);

  std::ostringstream csv;
  csv << "t,h_joint_bits,h_marginal_bits\n";
  for (std::size_t k = 0; k < grid.size(); ++k)
    csv << num(grid[k]) << "," << traj.joint_bits[k].to_string() << ","
        << traj.marginal_bits[k].to_string() << "\n";
  run.write("classical_flow.csv", csv.str());
  run.write("classical_flow.gp", gnuplot_script("classical_flow.csv", "t", {"2", "3"}));
  run.check(is_non_increasing(traj.joint_bits, 1e-9), "joint differential entropy non-increasing");
}

void quantum_flow(Run& run) {
  const Graph g = run.graph();
  const auto& cfg = run.config();
  if (g.node_count() > kMaxCliQubits)
    throw ValidationError("quantum-flow supports at most " + std::to_string(kMaxCliQubits) + " nodes");
  const std::string& ket = cfg.get("ket");
  if (static_cast<int>(parse_kets(ket).size()) != g.node_count())
    throw ValidationError("ket '" + ket + "' has " + std::to_string(parse_kets(ket).size()) +
                          " qubits but the graph has " + std::to_string(g.node_count()) + " nodes");
  const auto grid = uniform_time_grid(cfg.number("grid_step"), cfg.number("horizon"));
  const auto traj = integrate_quantum(g, qstate_from_kets(ket), grid, cfg.number("rk4_step"));

  std::ostringstream csv;
  csv << "t,S_bits,trace_drift\n";
  bool monotone = true;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    csv << num(traj.times[k]) << "," << num(traj.entropy_bits[k]) << "," << num(traj.trace_drift[k])
        << "\n";
    if (k > 0 && traj.entropy_bits[k] < traj.entropy_bits[k - 1] - 1e-8) monotone = false;
  }
  run.write("quantum_flow.csv", csv.str());
  run.write("quantum_flow.gp", gnuplot_script("quantum_flow.csv", "t", {"2"}));
  run.check(monotone, "von Neumann entropy non-decreasing");
}

void bernoulli_report(Run& run) {
  const auto& cfg = run.config();
  const double p = cfg.number("p");
  std::ostringstream csv;
  csv << "n,p,h0_bits,h_inf_exact_bits,h_inf_asymptotic_bits,decreased\n";
  for (double n_value : cfg.number_list("nodes")) {
    const int n = static_cast<int>(n_value);
    if (n_value != n || n < 1) throw ValidationError("nodes must be positive integers");
    const auto r = bernoulli_limit_report(n, p);
    csv << n << "," << num(p) << "," << num(r.h0) << "," << num(r.h_inf_exact) << ","
        << num(r.h_inf_asymptotic) << "," << (r.decreased ? "true" : "false") << "\n";
    if (n >= 2) run.check(r.decreased, "limit entropy below initial entropy for n=" + std::to_string(n));
  }
  run.write("bernoulli_report.csv", csv.str());
}

VecX initial_values(Run& run, const Graph& g) {
  std::vector<double> x0 = run.config().number_list("x0");
  if (x0.empty()) {
    for (int i = 0; i < g.node_count(); ++i) x0.push_back(i);
    run.resolve("x0", join(x0));
  }
  if (static_cast<int>(x0.size()) != g.node_count())
    throw ValidationError("x0 has " + std::to_string(x0.size()) + " entries but the graph has " +
                          std::to_string(g.node_count()) + " nodes");
  return as_vec(x0);
}

void histogram_csvs(Run& run, const MonteCarloStats& st) {
  const int n = static_cast<int>(st.counts.front().size());
  for (int node = 0; node < n; ++node) {
    std::ostringstream csv;
    csv << "k";
    for (double v : st.values) csv << "," << num(v);
    csv << "\n";
    for (int k = 0; k <= st.horizon; ++k) {
      csv << k;
      for (std::size_t v = 0; v < st.values.size(); ++v) csv << "," << num(st.frequency(k, node, v));
      csv << "\n";
    }
    run.write("histogram_node" + std::to_string(node + 1) + ".csv", csv.str());
  }
}

void gossip_mc(Run& run) {
  const Graph g = run.graph();
  const auto& cfg = run.config();
  const Algorithm algorithm = parse_algorithm(cfg.get("algorithm"));
  const long trials = cfg.integer("trials");
  if (trials < 1) throw ValidationError("trials must be at least 1");
  const long horizon = cfg.integer("horizon");
  if (horizon < 0 || horizon > 1000000) throw ValidationError("horizon must be in [0, 1000000]");
  const GossipConfig gossip(g, cfg.number("beta"), static_cast<std::uint64_t>(cfg.integer("seed")),
                            static_cast<int>(horizon));

  MonteCarloStats st;
  if (is_quantum(algorithm)) {
    if (!cfg.get("x0").empty()) throw ValidationError("x0 applies to classical algorithms; use ket");
    const std::string& ket = cfg.get("ket");
    if (ket.empty()) throw ValidationError("ket is required for " + std::string(algorithm_name(algorithm)));
    if (g.node_count() > kMaxCliQubits)
      throw ValidationError("quantum gossip supports at most " + std::to_string(kMaxCliQubits) + " nodes");
    if (static_cast<int>(parse_kets(ket).size()) != g.node_count())
      throw ValidationError("ket length does not match the graph size");
    st = run_monte_carlo(gossip, algorithm, qstate_from_kets(ket), trials);
  } else {
    if (!cfg.get("ket").empty()) throw ValidationError("ket applies to AQ1 and AQ2; use x0");
    st = run_monte_carlo(gossip, algorithm, initial_values(run, g), trials);
  }

  json out;
  out["algorithm"] = std::string(algorithm_name(algorithm));
  out["seed"] = st.seed;
  out["trials"] = st.trials;
  out["horizon"] = st.horizon;
  json per_k = json::array();
  for (int k = 0; k <= st.horizon; ++k) {
    json row;
    row["k"] = k;
    if (!st.mean_state.empty()) {
      row["mean_state"] = as_vector(st.mean_state[k]);
      row["mean_disagreement"] = st.mean_disagreement[k];
    }
    if (!st.hit_cdf.empty()) row["consensus_cdf"] = st.hit_cdf[k];
    if (!st.mean_entropy.empty()) {
      row["mean_entropy_bits"] = st.mean_entropy[k];
      row["min_entropy_bits"] = st.min_entropy[k];
      row["max_entropy_bits"] = st.max_entropy[k];
    }
    per_k.push_back(row);
  }
  out["per_k"] = per_k;
  run.write("gossip_mc.json", out.dump(2) + "\n");
  if (!st.counts.empty()) histogram_csvs(run, st);

  if (algorithm == Algorithm::AQ2) {
    const double s0 = st.mean_entropy.front();
    bool constant = true;
    for (int k = 0; k <= st.horizon; ++k)
      constant = constant && std::abs(st.min_entropy[k] - s0) <= 1e-10 &&
                 std::abs(st.max_entropy[k] - s0) <= 1e-10;
    run.check(constant, "AQ2 entropy constant along every path");
  }
  if (algorithm == Algorithm::AQ1) {
    bool monotone = true;
    for (int k = 1; k <= st.horizon; ++k)
      monotone = monotone && st.mean_entropy[k] >= st.mean_entropy[k - 1] - 1e-10;
    run.check(monotone, "AQ1 mean entropy non-decreasing");
  }
}

void gossip_exact(Run& run) {
  const Graph g = run.graph();
  const auto& cfg = run.config();
  const long horizon = cfg.integer("horizon");
  if (horizon < 0 || horizon > 100000) throw ValidationError("horizon must be in [0, 100000]");
  const GossipConfig gossip(g, cfg.number("beta"), 0, static_cast<int>(horizon));
  const VecX x0 = initial_values(run, g);
  const int n = g.node_count();

  const auto values = distinct_values(x0);
  std::vector<DiscreteDist> m0;
  for (int i = 0; i < n; ++i) {
    std::vector<double> p(values.size(), 0.0);
    p[static_cast<std::size_t>(std::find(values.begin(), values.end(), x0(i)) - values.begin())] = 1.0;
    m0.emplace_back(p);
  }
  const auto chain = single_particle_matrix(gossip);

  JointPmf f = JointPmf::point_mass(g, x0);
  std::ostringstream summary;
  summary << "k,H_joint_bits,max_marginal_gap\n";
  std::vector<std::ostringstream> marginals(static_cast<std::size_t>(n));
  for (auto& m : marginals) {
    m << "k";
    for (double v : values) m << "," << num(v);
    m << "\n";
  }
  double worst_gap = 0.0;
  bool monotone = true;
  double prev = -1.0;
  MatX pk = MatX::Identity(n, n);
  for (long k = 0; k <= horizon; ++k) {
    if (k > 0) {
      f = joint_pmf_operator_step(f, gossip);
      pk = pk * chain.P;
    }
    const auto joint = f.node_marginals(values);
    double gap = 0.0;
    for (int i = 0; i < n; ++i) {
      for (std::size_t v = 0; v < values.size(); ++v) {
        double mixed = 0.0;
        for (int s = 0; s < n; ++s) mixed += pk(s, i) * m0[s][v];
        gap = std::max(gap, std::abs(joint[i][v] - mixed));
      }
    }
    worst_gap = std::max(worst_gap, gap);
    const double h = shannon(f.distribution()).value();
    if (k > 0 && h < prev - 1e-12) monotone = false;
    prev = h;
    summary << k << "," << num(h) << "," << num(gap) << "\n";
    for (int i = 0; i < n; ++i) {
      marginals[i] << k;
      for (std::size_t v = 0; v < values.size(); ++v) marginals[i] << "," << num(joint[i][v]);
      marginals[i] << "\n";
    }
  }
  run.write("gossip_exact.csv", summary.str());
  for (int i = 0; i < n; ++i) run.write("marginal_node" + std::to_string(i + 1) + ".csv", marginals[i].str());
  run.write("gossip_exact.gp", gnuplot_script("gossip_exact.csv", "k", {"2"}));
  run.check(monotone, "joint Shannon entropy non-decreasing");
  run.check(worst_gap <= 1e-12, "joint and single-particle marginals agree");
}

void ergodicity(Run& run) {
  const Graph g = run.graph();
  const auto& cfg = run.config();
  const long horizon = cfg.integer("horizon");
  if (horizon < 1 || horizon > 100000) throw ValidationError("horizon must be in [1, 100000]");
  const GossipConfig gossip(g, cfg.number("beta"));
  const auto report = ergodicity_report(single_particle_matrix(gossip), static_cast<int>(horizon));

  std::ostringstream csv;
  csv << "k,distance,bound\n";
  for (std::size_t k = 0; k < report.distances.size(); ++k)
    csv << k << "," << num(report.distances[k]) << ","
        << num(report.fitted_constant * std::pow(report.slem, static_cast<double>(k))) << "\n";
  run.write("ergodicity.csv", csv.str());
  run.write("ergodicity.gp", gnuplot_script("ergodicity.csv", "k", {"2", "3"}) );

  json out;
  out["slem"] = report.slem;
  out["fitted_constant"] = report.fitted_constant;
  out["tail_rate"] = report.tail_rate;
  out["log_slem"] = std::log(report.slem);
  out["bound_holds"] = report.bound_holds;
  out["symmetric"] = report.symmetric;
  out["doubly_stochastic"] = report.doubly_stochastic;
  out["nonnegative"] = report.nonnegative;
  run.write("ergodicity.json", out.dump(2) + "\n");
  run.check(report.symmetric && report.doubly_stochastic && report.nonnegative,
            "P symmetric, doubly stochastic and nonnegative");
  run.check(report.slem < 1.0, "spectral gap (slem < 1)");
  run.check(report.bound_holds, "d_k <= C slem^k");
}

}  // namespace

void write_atomic(const fs::path& path, const std::string& contents) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << contents;
    if (!out.flush()) throw std::runtime_error("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

fs::path resolve_output_dir(const ExperimentConfig& cfg) {
  if (const char* env = std::getenv("NETENT_OUTPUT_DIR"); env != nullptr && *env != '\0') return env;
  fs::path dir = cfg.get("output_dir");
  if (dir.is_relative()) dir = cfg.base_dir / dir;
  return dir;
}

RunResult run_experiment(const ExperimentConfig& cfg, const fs::path& out_dir) {
  Run run(cfg, out_dir);
  run.resolve("output_dir", fs::absolute(out_dir).lexically_normal().string());
  if (cfg.experiment == "classical-flow") classical_flow(run);
  else if (cfg.experiment == "quantum-flow") quantum_flow(run);
  else if (cfg.experiment == "bernoulli-report") bernoulli_report(run);
  else if (cfg.experiment == "gossip-mc") gossip_mc(run);
  else if (cfg.experiment == "gossip-exact") gossip_exact(run);
  else if (cfg.experiment == "ergodicity") ergodicity(run);
  else throw ValidationError("unknown experiment " + cfg.experiment);
  return run.finish();
}

}  // namespace netent::cli
