#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "netent/rng.hpp"
#include "netent/types.hpp"

namespace netent {

// Undirected edge between 0-based nodes, stored with first < second.
struct Edge {
  int first = 0;
  int second = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Immutable undirected simple graph. Nodes are 0-based internally and
// 1-based in every text format.
class Graph {
 public:
  int node_count() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  Index edge_count() const { return static_cast<Index>(edges_.size()); }
  int degree(int node) const { return static_cast<int>(adjacency_.at(node).size()); }
  const std::vector<int>& neighbors(int node) const { return adjacency_.at(node); }
  bool is_connected() const { return connected_; }

  // Index of edge {a, b} in edges(), or -1.
  int edge_index(int a, int b) const;

 private:
  friend Graph build_graph(int, const std::vector<std::pair<int, int>>&);

  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adjacency_;
  bool connected_ = false;
};

// Validates a 1-based edge list. Throws ValidationError naming the offending
// pair on out-of-range nodes, self-loops, or duplicate edges.
Graph build_graph(int n, const std::vector<std::pair<int, int>>& edges_one_based);

// Graph Laplacian: degree on the diagonal, -1 for each edge.
MatX laplacian(const Graph& g);

// Probability that the two-stage draw (uniform node, then uniform neighbor)
// selects each edge: q_ij = (1/deg(i) + 1/deg(j)) / N. Aligned with
// Graph::edges().
struct PairDistribution {
  std::vector<double> probs;
};

// Throws ValidationError when any node is isolated.
PairDistribution pair_distribution(const Graph& g);

// Edge-list text format: first non-comment line "N", then one "i j" pair per
// line, 1-based. '#' starts a comment. Errors are ParseError with the line.
Graph parse_edge_list(std::istream& in);
Graph read_edge_list(const std::string& path);
std::string format_edge_list(const Graph& g);

// The documented 4-node connected default: edges 1-2, 2-3, 3-4, 1-4, 1-3.
Graph default_graph();

Graph complete_graph(int n);
Graph cycle_graph(int n);
Graph path_graph(int n);
// Node 1 is the center.
Graph star_graph(int leaves);
// Random spanning tree plus each remaining pair with probability `extra`.
Graph random_connected_graph(int n, double extra, Rng& rng);

}  // namespace netent
