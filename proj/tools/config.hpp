#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace netent::cli {

// Flat key=value experiment description. Blank lines and '#' comments are
// ignored. Keys not in the schema of the chosen experiment are errors.
//
//   experiment  classical-flow | quantum-flow | bernoulli-report |
//               gossip-mc | gossip-exact | ergodicity           (required)
//   graph       edge-list path relative to the config, or "default"
//   output_dir  where artifacts go; NETENT_OUTPUT_DIR overrides it
//
// Per experiment (defaults in brackets):
//   classical-flow    sigma2 [1] grid_step [0.1] horizon [5]
//   quantum-flow      ket [01+-] grid_step [0.1] horizon [5] rk4_step [0.01]
//   bernoulli-report  p [0.5] nodes [1,2,4,10,100,1000]
//   gossip-mc         algorithm [A2] beta [0.5] seed [0] horizon [50]
//                     trials [10000] x0 [0,1,...,N-1] (classical) ket (quantum)
//   gossip-exact      beta [0.5] horizon [50] x0 [0,1,...,N-1]
//   ergodicity        beta [0.5] horizon [100]
struct ExperimentConfig {
  std::string experiment;
  std::map<std::string, std::string> values;  // every key, defaults filled in
  std::filesystem::path base_dir;             // for relative graph paths

  const std::string& get(const std::string& key) const { return values.at(key); }
  double number(const std::string& key) const;
  long integer(const std::string& key) const;
  std::vector<double> number_list(const std::string& key) const;
};

inline const std::vector<std::string> kExperiments = {
    "classical-flow", "quantum-flow", "bernoulli-report", "gossip-mc", "gossip-exact", "ergodicity"};

// Throws ParseError with the offending line.
ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {});
// Reads key=value text, or the "config" object of a manifest.json written
// by a previous run.
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace netent::cli
