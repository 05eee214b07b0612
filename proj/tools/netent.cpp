#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "config.hpp"
#include "experiments.hpp"
#include "netent/acceptance.hpp"
#include "netent/errors.hpp"
#include "netent/gossip.hpp"
#include "netent/graph.hpp"
#include "netent/linalg.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInput = 2;

int run_command(const std::string& config_path) {
  const auto cfg = netent::cli::load_config(config_path);
  const auto out_dir = netent::cli::resolve_output_dir(cfg);
  const auto result = netent::cli::run_experiment(cfg, out_dir);
  for (const auto& file : result.files) std::cout << (out_dir / file).string() << "\n";
  for (const auto& v : result.violations) std::cerr << "invariant violated: " << v << "\n";
  return result.violations.empty() ? kExitOk : kExitFailure;
}

int verify_command(bool perturb_chain, int only) {
  netent::AcceptanceOptions options;
  options.perturb_chain = perturb_chain;
  int failures = 0;
  int ran = 0;
  for (int id = 1; id <= netent::kCriterionCount; ++id) {
    if (only != 0 && id != only) continue;
    const auto r = netent::run_criterion(id, options);
    std::cout << netent::format_result(r) << std::endl;
    ++ran;
    if (!r.passed) ++failures;
  }
  std::cout << ran - failures << "/" << ran << " criteria passed\n";
  return failures == 0 ? kExitOk : kExitFailure;
}

int graph_info_command(const std::string& path) {
  if (!std::filesystem::exists(path)) throw netent::ValidationError("graph file not found: " + path);
  const netent::Graph g = netent::read_edge_list(path);
  const netent::MatX l = netent::laplacian(g);
  const auto eig = netent::eig_sym(l);
  std::printf("nodes        %d\n", g.node_count());
  std::printf("edges        %ld\n", static_cast<long>(g.edge_count()));
  std::printf("connected    %s\n", g.is_connected() ? "yes" : "no");
  std::printf("degrees     ");
  for (int i = 0; i < g.node_count(); ++i) std::printf(" %d", g.degree(i));
  std::printf("\ntrace(L)     %.17g\n", l.trace());
  if (g.node_count() > 1) std::printf("lambda_2     %.17g\n", eig.values(1));
  std::printf("spectrum    ");
  for (netent::Index i = 0; i < eig.values.size(); ++i) std::printf(" %.6g", eig.values(i));
  std::printf("\n");
  if (g.is_connected() && g.edge_count() > 0) {
    const netent::GossipConfig cfg(g);
    std::printf("pair probabilities\n");
    for (std::size_t e = 0; e < g.edges().size(); ++e)
      std::printf("  %d-%d  %.17g\n", g.edges()[e].first + 1, g.edges()[e].second + 1,
                  cfg.pairs().probs[e]);
    const auto report = netent::ergodicity_report(netent::single_particle_matrix(cfg), 1);
    std::printf("slem(beta=0.5) %.17g\n", report.slem);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropy and consensus experiments on networks"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run an experiment described by a key=value config or a manifest.json");
  run->add_option("config", config_path, "Config file")->required();

  bool perturb_chain = false;
  int only = 0;
  auto* verify = app.add_subcommand("verify", "Run the acceptance criteria and print a pass/fail table");
  verify->add_flag("--perturb-chain", perturb_chain, "Negative control: perturb the single-particle chain");
  verify->add_option("--criterion", only, "Run only this criterion")->check(CLI::Range(1, netent::kCriterionCount));

  std::string edge_list;
  auto* info = app.add_subcommand("graph-info", "Summarize an edge-list file");
  info->add_option("edgelist", edge_list, "Edge-list file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*run) return run_command(config_path);
    if (*verify) return verify_command(perturb_chain, only);
    if (*info) return graph_info_command(edge_list);
  } catch (const netent::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const netent::NumericalError& e) {
    std::cerr << "invariant violated: " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitInput;
}
