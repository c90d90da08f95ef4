#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "valid/types.hpp"

namespace valid {

/// Undirected, simple, connected graph on nodes 0..n-1.
///
/// Every undirected edge {u, v} yields two directed edges u->v and v->u.
/// Directed edges are numbered 0..2|E|-1 in (source, neighbor) order.
class Graph {
 public:
  using Edge = std::pair<AgentId, AgentId>;

  /// Throws InvalidParameter on self-loops, duplicates, out-of-range ids or
  /// a disconnected result.
  Graph(size_t n, std::vector<Edge> edges);

  size_t size() const { return adjacency_.size(); }
  size_t edge_count() const { return edges_.size(); }
  size_t directed_edge_count() const { return 2 * edges_.size(); }
  /// Undirected edges with first < second, sorted.
  const std::vector<Edge>& edges() const { return edges_; }
  /// Sorted neighbor list.
  const std::vector<AgentId>& neighbors(AgentId v) const { return adjacency_.at(v); }
  size_t degree(AgentId v) const { return adjacency_.at(v).size(); }
  size_t max_degree() const;
  bool has_edge(AgentId u, AgentId v) const;

  /// Index of directed edge u->v; throws if absent.
  size_t directed_index(AgentId u, AgentId v) const;
  Edge directed_edge(size_t index) const { return directed_.at(index); }
  /// First directed index with source v; v's out-edges are contiguous.
  size_t out_offset(AgentId v) const { return offsets_.at(v); }

  bool operator==(const Graph& other) const { return edges_ == other.edges_ && size() == other.size(); }

 private:
  std::vector<Edge> edges_;
  std::vector<std::vector<AgentId>> adjacency_;
  std::vector<size_t> offsets_;
  std::vector<Edge> directed_;
};

/// True iff the subgraph induced on the nodes not in `removed` is connected
/// (an empty remainder counts as connected).
bool connected_without(size_t n, const std::vector<Graph::Edge>& edges, const AgentSet& removed);

/// Honest nodes induce a connected subgraph.
bool check_source_component(const Graph& g, const AgentSet& byzantine);

Graph complete_graph(size_t n);
Graph ring_graph(size_t n);
/// Two 10-cliques (0-9, 10-19) joined by two distinct uniformly drawn bridges.
Graph two_clique_bridge(uint64_t seed);
/// G(n, p), resampled until connected; GenerationFailed after max_attempts.
Graph erdos_renyi(size_t n, double p, uint64_t seed, int max_attempts = 1000);

struct GraphSpec {
  enum class Family { kTwoCliqueBridge, kRing, kComplete, kErdosRenyi, kEdgeList };
  Family family = Family::kTwoCliqueBridge;
  size_t n = 20;
  double p = 0.5;
  std::string path;  // edge-list file for kEdgeList
};

const char* to_string(GraphSpec::Family family);
Graph make_graph(const GraphSpec& spec, uint64_t seed);

/// Edge-list text: first line n, then one "u v" pair per line.
void write_edge_list(std::ostream& out, const Graph& g);
Graph read_edge_list(std::istream& in);

}  // namespace valid
