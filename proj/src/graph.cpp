#include "netent/graph.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

#include "netent/errors.hpp"

namespace netent {

namespace {

std::string pair_name(int i, int j) {
  return "{" + std::to_string(i) + "," + std::to_string(j) + "}";
}

bool bfs_connected(int n, const std::vector<std::vector<int>>& adjacency) {
  std::vector<bool> seen(n, false);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = true;
  int visited = 1;
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop();
    for (int v : adjacency[u]) {
      if (!seen[v]) {
        seen[v] = true;
        ++visited;
        frontier.push(v);
      }
    }
  }
  return visited == n;
}

}  // namespace

int Graph::edge_index(int a, int b) const {
  const Edge key{std::min(a, b), std::max(a, b)};
  const auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
  if (it == edges_.end() || *it != key) return -1;
  return static_cast<int>(it - edges_.begin());
}

Graph build_graph(int n, const std::vector<std::pair<int, int>>& edges_one_based) {
  if (n < 1) throw ValidationError("graph must have at least one node, got " + std::to_string(n));
  Graph g;
  g.n_ = n;
  g.adjacency_.assign(n, {});
  for (const auto& [i, j] : edges_one_based) {
    if (i < 1 || i > n || j < 1 || j > n) {
      throw ValidationError("edge " + pair_name(i, j) + " references a node outside 1.." +
                            std::to_string(n));
    }
    if (i == j) throw ValidationError("edge " + pair_name(i, j) + " is a self-loop");
    g.edges_.push_back({std::min(i, j) - 1, std::max(i, j) - 1});
  }
  std::sort(g.edges_.begin(), g.edges_.end());
  const auto dup = std::adjacent_find(g.edges_.begin(), g.edges_.end());
  if (dup != g.edges_.end()) {
    throw ValidationError("edge " + pair_name(dup->first + 1, dup->second + 1) + " is duplicated");
  }
  for (const Edge& e : g.edges_) {
    g.adjacency_[e.first].push_back(e.second);
    g.adjacency_[e.second].push_back(e.first);
  }
  for (auto& nbrs : g.adjacency_) std::sort(nbrs.begin(), nbrs.end());
  g.connected_ = bfs_connected(n, g.adjacency_);
  return g;
}

MatX laplacian(const Graph& g) {
  const int n = g.node_count();
  MatX l = MatX::Zero(n, n);
  for (const Edge& e : g.edges()) {
    l(e.first, e.second) = -1.0;
    l(e.second, e.first) = -1.0;
    l(e.first, e.first) += 1.0;
    l(e.second, e.second) += 1.0;
  }
  return l;
}

PairDistribution pair_distribution(const Graph& g) {
  const int n = g.node_count();
  for (int i = 0; i < n; ++i) {
    if (g.degree(i) == 0) {
      throw ValidationError("node " + std::to_string(i + 1) +
                            " is isolated; pair selection is undefined");
    }
  }
  PairDistribution d;
  d.probs.reserve(g.edges().size());
  for (const Edge& e : g.edges()) {
    d.probs.push_back((1.0 / g.degree(e.first) + 1.0 / g.degree(e.second)) / n);
  }
  return d;
}

Graph parse_edge_list(std::istream& in) {
  std::string line;
  int line_no = 0;
  int n = -1;
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> pair_lines;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    for (std::string tok; fields >> tok;) tokens.push_back(tok);
    if (tokens.empty()) continue;

    auto to_int = [&](const std::string& tok) {
      std::size_t used = 0;
      int value = 0;
      try {
        value = std::stoi(tok, &used);
      } catch (const std::exception&) {
        throw ParseError(line_no, "expected an integer, got '" + tok + "'");
      }
      if (used != tok.size()) throw ParseError(line_no, "expected an integer, got '" + tok + "'");
      return value;
    };

    if (n < 0) {
      if (tokens.size() != 1) throw ParseError(line_no, "expected node count 'N'");
      n = to_int(tokens[0]);
      if (n < 1) throw ParseError(line_no, "node count must be at least 1");
      continue;
    }
    if (tokens.size() != 2) throw ParseError(line_no, "expected an edge 'i j'");
    pairs.emplace_back(to_int(tokens[0]), to_int(tokens[1]));
    pair_lines.push_back(line_no);
  }
  if (n < 0) throw ParseError(line_no + 1, "missing node count");

  std::set<std::pair<int, int>> seen;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [i, j] = pairs[k];
    if (i < 1 || i > n || j < 1 || j > n) {
      throw ParseError(pair_lines[k], "edge " + pair_name(i, j) + " references a node outside 1.." +
                                          std::to_string(n));
    }
    if (i == j) throw ParseError(pair_lines[k], "edge " + pair_name(i, j) + " is a self-loop");
    if (!seen.emplace(std::min(i, j), std::max(i, j)).second) {
      throw ParseError(pair_lines[k], "edge " + pair_name(i, j) + " is duplicated");
    }
  }
  return build_graph(n, pairs);
}

Graph read_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open edge list '" + path + "'");
  return parse_edge_list(in);
}

std::string format_edge_list(const Graph& g) {
  std::ostringstream out;
  out << g.node_count() << '\n';
  for (const Edge& e : g.edges()) out << e.first + 1 << ' ' << e.second + 1 << '\n';
  return out.str();
}

Graph default_graph() { return build_graph(4, {{1, 2}, {2, 3}, {3, 4}, {1, 4}, {1, 3}}); }

Graph complete_graph(int n) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) pairs.emplace_back(i, j);
  return build_graph(n, pairs);
}

Graph cycle_graph(int n) {
  if (n < 3) throw ValidationError("cycle graph needs at least 3 nodes");
  std::vector<std::pair<int, int>> pairs;
  for (int i = 1; i <= n; ++i) pairs.emplace_back(i, i % n + 1);
  return build_graph(n, pairs);
}

Graph path_graph(int n) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 1; i < n; ++i) pairs.emplace_back(i, i + 1);
  return build_graph(n, pairs);
}

Graph star_graph(int leaves) {
  std::vector<std::pair<int, int>> pairs;
  for (int j = 2; j <= leaves + 1; ++j) pairs.emplace_back(1, j);
  return build_graph(leaves + 1, pairs);
}

Graph random_connected_graph(int n, double extra, Rng& rng) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 1);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::pair<int, int>> pairs;
  std::vector<std::vector<bool>> used(n + 1, std::vector<bool>(n + 1, false));
  for (int k = 1; k < n; ++k) {
    std::uniform_int_distribution<int> pick(0, k - 1);
    const int a = order[k];
    const int b = order[pick(rng)];
    pairs.emplace_back(a, b);
    used[a][b] = used[b][a] = true;
  }
  std::bernoulli_distribution coin(extra);
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      if (!used[i][j] && coin(rng)) pairs.emplace_back(i, j);
    }
  }
  return build_graph(n, pairs);
}

}  // namespace netent
