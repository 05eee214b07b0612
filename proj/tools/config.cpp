#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "netent/errors.hpp"

namespace netent::cli {
namespace {

enum class Kind { Text, Number, Integer, NumberList };

struct Key {
  const char* name;
  Kind kind;
  const char* fallback;
};

const std::map<std::string, std::vector<Key>>& schemas() {
  static const std::map<std::string, std::vector<Key>> table = {
      {"classical-flow",
       {{"sigma2", Kind::Number, "1"}, {"grid_step", Kind::Number, "0.1"}, {"horizon", Kind::Number, "5"}}},
      {"quantum-flow",
       {{"ket", Kind::Text, "01+-"},
        {"grid_step", Kind::Number, "0.1"},
        {"horizon", Kind::Number, "5"},
        {"rk4_step", Kind::Number, "0.01"}}},
      {"bernoulli-report", {{"p", Kind::Number, "0.5"}, {"nodes", Kind::NumberList, "1,2,4,10,100,1000"}}},
      {"gossip-mc",
       {{"algorithm", Kind::Text, "A2"},
        {"beta", Kind::Number, "0.5"},
        {"seed", Kind::Integer, "0"},
        {"horizon", Kind::Integer, "50"},
        {"trials", Kind::Integer, "10000"},
        {"x0", Kind::NumberList, ""},
        {"ket", Kind::Text, ""}}},
      {"gossip-exact",
       {{"beta", Kind::Number, "0.5"}, {"horizon", Kind::Integer, "50"}, {"x0", Kind::NumberList, ""}}},
      {"ergodicity", {{"beta", Kind::Number, "0.5"}, {"horizon", Kind::Integer, "100"}}},
  };
  return table;
}

const std::vector<Key> kCommonKeys = {{"graph", Kind::Text, "default"},
                                      {"output_dir", Kind::Text, "netent-out"}};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

bool parse_double(std::string_view text, double& out) {
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end;
}

bool parse_long(std::string_view text, long& out) {
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) items.push_back(trim(item));
  return items;
}

void check_kind(const Key& key, const std::string& value, int line) {
  switch (key.kind) {
    case Kind::Text:
      return;
    case Kind::Number: {
      double v;
      if (!parse_double(value, v)) throw ParseError(line, std::string(key.name) + " must be a number");
      return;
    }
    case Kind::Integer: {
      long v;
      if (!parse_long(value, v)) throw ParseError(line, std::string(key.name) + " must be an integer");
      return;
    }
    case Kind::NumberList: {
      for (const auto& item : split_list(value)) {
        double v;
        if (!parse_double(item, v))
          throw ParseError(line, std::string(key.name) + " must be a comma-separated list of numbers");
      }
      return;
    }
  }
}

const Key* find_key(const std::vector<Key>& keys, const std::string& name) {
  const auto it = std::find_if(keys.begin(), keys.end(), [&](const Key& k) { return name == k.name; });
  return it == keys.end() ? nullptr : &*it;
}

}  // namespace

double ExperimentConfig::number(const std::string& key) const {
  double v = 0.0;
  if (!parse_double(get(key), v)) throw ValidationError(key + " must be a number");
  return v;
}

long ExperimentConfig::integer(const std::string& key) const {
  long v = 0;
  if (!parse_long(get(key), v)) throw ValidationError(key + " must be an integer");
  return v;
}

std::vector<double> ExperimentConfig::number_list(const std::string& key) const {
  std::vector<double> out;
  if (get(key).empty()) return out;
  for (const auto& item : split_list(get(key))) {
    double v = 0.0;
    if (!parse_double(item, v)) throw ValidationError(key + " must be a list of numbers");
    out.push_back(v);
  }
  return out;
}

ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::vector<int> lines;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ParseError(line, "expected key = value");
    std::string key = trim(text.substr(0, eq));
    std::string value = trim(text.substr(eq + 1));
    if (key.empty()) throw ParseError(line, "missing key");
    for (std::size_t j = 0; j < entries.size(); ++j) {
      if (entries[j].first == key)
        throw ParseError(line, "duplicate key '" + key + "' (first set on line " +
                                   std::to_string(lines[j]) + ")");
    }
    entries.emplace_back(std::move(key), std::move(value));
    lines.push_back(line);
  }

  ExperimentConfig cfg;
  cfg.base_dir = base_dir;
  const auto kind = std::find_if(entries.begin(), entries.end(),
                                 [](const auto& e) { return e.first == "experiment"; });
  if (kind == entries.end()) throw ParseError(line == 0 ? 1 : line, "missing 'experiment' key");
  const int kind_line = lines[static_cast<std::size_t>(kind - entries.begin())];
  if (!schemas().contains(kind->second)) {
    std::string known;
    for (const auto& name : kExperiments) known += (known.empty() ? "" : ", ") + name;
    throw ParseError(kind_line, "unknown experiment '" + kind->second + "' (expected one of " + known + ")");
  }
  cfg.experiment = kind->second;
  const auto& keys = schemas().at(cfg.experiment);

  for (const Key& k : kCommonKeys) cfg.values[k.name] = k.fallback;
  for (const Key& k : keys) cfg.values[k.name] = k.fallback;
  for (std::size_t j = 0; j < entries.size(); ++j) {
    const auto& [key, value] = entries[j];
    if (key == "experiment") continue;
    const Key* spec = find_key(keys, key);
    if (spec == nullptr) spec = find_key(kCommonKeys, key);
    if (spec == nullptr)
      throw ParseError(lines[j], "unknown key '" + key + "' for experiment " + cfg.experiment);
    check_kind(*spec, value, lines[j]);
    cfg.values[key] = value;
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config " + path.string());
  const auto base = path.parent_path();
  if (path.extension() != ".json") return parse_config(in, base);

  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  if (!manifest.contains("config") || !manifest["config"].is_object())
    throw ValidationError(path.string() + ": manifest has no config object");
  std::ostringstream text;
  for (const auto& [key, value] : manifest["config"].items()) {
    if (!value.is_string()) throw ValidationError(path.string() + ": config." + key + " must be a string");
    text << key << " = " << value.get<std::string>() << "\n";
  }
  std::istringstream replay(text.str());
  return parse_config(replay, base);
}

}  // namespace netent::cli
