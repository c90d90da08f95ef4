#include "valid/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "valid/errors.hpp"
#include "valid/rng.hpp"

namespace valid {

Graph::Graph(size_t n, std::vector<Edge> edges) : adjacency_(n) {
  if (n == 0) throw InvalidParameter("graph needs at least one node");
  for (auto& [u, v] : edges) {
    if (u >= n || v >= n) throw InvalidParameter("edge endpoint out of range");
    if (u == v) throw InvalidParameter("self-loop on node " + std::to_string(u));
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
    throw InvalidParameter("duplicate edge");
  }
  if (!connected_without(n, edges, {})) throw InvalidParameter("graph is not connected");
  edges_ = std::move(edges);
  for (const auto& [u, v] : edges_) {
    adjacency_[u].push_back(v);
    adjacency_[v].push_back(u);
  }
  offsets_.resize(n);
  for (AgentId v = 0; v < n; ++v) {
    std::sort(adjacency_[v].begin(), adjacency_[v].end());
    offsets_[v] = directed_.size();
    for (AgentId u : adjacency_[v]) directed_.emplace_back(v, u);
  }
}

size_t Graph::max_degree() const {
  size_t best = 0;
  for (const auto& adj : adjacency_) best = std::max(best, adj.size());
  return best;
}

bool Graph::has_edge(AgentId u, AgentId v) const {
  if (u >= size()) return false;
  const auto& adj = adjacency_[u];
  return std::binary_search(adj.begin(), adj.end(), v);
}

size_t Graph::directed_index(AgentId u, AgentId v) const {
  const auto& adj = adjacency_.at(u);
  const auto it = std::lower_bound(adj.begin(), adj.end(), v);
  if (it == adj.end() || *it != v) {
    throw InvalidParameter("no edge " + std::to_string(u) + "->" + std::to_string(v));
  }
  return offsets_[u] + static_cast<size_t>(it - adj.begin());
}

bool connected_without(size_t n, const std::vector<Graph::Edge>& edges, const AgentSet& removed) {
  std::vector<bool> gone(n, false);
  for (AgentId b : removed) {
    if (b < n) gone[b] = true;
  }
  std::vector<size_t> parent(n);
  std::iota(parent.begin(), parent.end(), size_t{0});
  auto find = [&](size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& [u, v] : edges) {
    if (gone[u] || gone[v]) continue;
    parent[find(u)] = find(v);
  }
  size_t roots = 0;
  for (size_t v = 0; v < n; ++v) {
    if (!gone[v] && find(v) == v) ++roots;
  }
  return roots <= 1;
}

bool check_source_component(const Graph& g, const AgentSet& byzantine) {
  for (AgentId b : byzantine) {
    if (b >= g.size()) throw InvalidParameter("byzantine id out of range");
  }
  return connected_without(g.size(), g.edges(), byzantine);
}

Graph complete_graph(size_t n) {
  std::vector<Graph::Edge> edges;
  for (AgentId u = 0; u < n; ++u) {
    for (AgentId v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  }
  return Graph(n, std::move(edges));
}

Graph ring_graph(size_t n) {
  if (n < 3) throw InvalidParameter("ring needs n >= 3");
  std::vector<Graph::Edge> edges;
  for (AgentId u = 0; u < n; ++u) edges.emplace_back(u, (u + 1) % n);
  return Graph(n, std::move(edges));
}

Graph two_clique_bridge(uint64_t seed) {
  constexpr size_t kHalf = 10;
  std::vector<Graph::Edge> edges;
  for (size_t base : {size_t{0}, kHalf}) {
    for (AgentId u = 0; u < kHalf; ++u) {
      for (AgentId v = u + 1; v < kHalf; ++v) edges.emplace_back(base + u, base + v);
    }
  }
  CounterRng rng(seed, 0, 0, StreamPurpose::kGraph);
  const uint64_t first = rng.uniform_below(kHalf * kHalf);
  uint64_t second = rng.uniform_below(kHalf * kHalf - 1);
  if (second >= first) ++second;
  for (uint64_t pair : {first, second}) {
    edges.emplace_back(pair / kHalf, kHalf + pair % kHalf);
  }
  return Graph(2 * kHalf, std::move(edges));
}

Graph erdos_renyi(size_t n, double p, uint64_t seed, int max_attempts) {
  if (n == 0) throw InvalidParameter("erdos_renyi needs n >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidParameter("erdos_renyi needs p in [0, 1]");
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    CounterRng rng(seed, 0, static_cast<uint64_t>(attempt), StreamPurpose::kGraph);
    std::vector<Graph::Edge> edges;
    for (AgentId u = 0; u < n; ++u) {
      for (AgentId v = u + 1; v < n; ++v) {
        if (rng.uniform01() < p) edges.emplace_back(u, v);
      }
    }
    if (connected_without(n, edges, {})) return Graph(n, std::move(edges));
  }
  throw GenerationFailed("erdos_renyi: no connected sample after " +
                         std::to_string(max_attempts) + " attempts");
}

const char* to_string(GraphSpec::Family family) {
  switch (family) {
    case GraphSpec::Family::kTwoCliqueBridge: return "two_clique_bridge";
    case GraphSpec::Family::kRing: return "ring";
    case GraphSpec::Family::kComplete: return "complete";
    case GraphSpec::Family::kErdosRenyi: return "erdos_renyi";
    case GraphSpec::Family::kEdgeList: return "edge_list";
  }
  return "unknown";
}

Graph make_graph(const GraphSpec& spec, uint64_t seed) {
  switch (spec.family) {
    case GraphSpec::Family::kTwoCliqueBridge: return two_clique_bridge(seed);
    case GraphSpec::Family::kRing: return ring_graph(spec.n);
    case GraphSpec::Family::kComplete: return complete_graph(spec.n);
    case GraphSpec::Family::kErdosRenyi: return erdos_renyi(spec.n, spec.p, seed);
    case GraphSpec::Family::kEdgeList: {
      std::ifstream in(spec.path);
      if (!in) throw InvalidParameter("cannot open edge list " + spec.path);
      return read_edge_list(in);
    }
  }
  throw InvalidParameter("unknown graph family");
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << g.size() << '\n';
  for (const auto& [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

Graph read_edge_list(std::istream& in) {
  std::string line;
  size_t n = 0;
  if (!std::getline(in, line) || !(std::istringstream(line) >> n)) {
    throw InvalidParameter("edge list: missing node count");
  }
  std::vector<Graph::Edge> edges;
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    long long u = -1;
    long long v = -1;
    if (!(ls >> u >> v) || u < 0 || v < 0) {
      throw InvalidParameter("edge list line " + std::to_string(lineno) + ": expected 'u v'");
    }
    edges.emplace_back(static_cast<AgentId>(u), static_cast<AgentId>(v));
  }
  return Graph(n, std::move(edges));
}

}  // namespace valid
