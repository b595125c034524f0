#pragma once

// Undirected simple graphs in CSR form, the generators used by the
// experiments, and the plain-text edge-list format.
//
// Node ids are dense 0-based ints. Messages travel over directed instances of
// undirected edges; directed counts are derived where a bound needs them.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <queue>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gossip/rng.hpp"

namespace gossip {

class Graph {
 public:
  /// Builds a graph from undirected edges. Rejects self-loops, duplicate
  /// edges (in either orientation) and out-of-range endpoints.
  static Graph from_edges(int n, std::vector<std::pair<int, int>> edges) {
    if (n < 1) throw std::invalid_argument("graph must have at least one node");
    for (auto& [u, v] : edges) {
      if (u < 0 || u >= n || v < 0 || v >= n)
        throw std::invalid_argument("edge endpoint out of range");
      if (u == v) throw std::invalid_argument("self-loops are not allowed");
      if (u > v) std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
      throw std::invalid_argument("duplicate edge");

    Graph g;
    g.n_ = n;
    g.m_ = static_cast<std::int64_t>(edges.size());
    std::vector<std::int64_t> deg(n, 0);
    for (auto [u, v] : edges) {
      ++deg[u];
      ++deg[v];
    }
    g.offsets_.assign(n + 1, 0);
    for (int u = 0; u < n; ++u) g.offsets_[u + 1] = g.offsets_[u] + deg[u];
    g.adjacency_.resize(2 * g.m_);
    std::vector<std::int64_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    for (auto [u, v] : edges) {
      g.adjacency_[cursor[u]++] = v;
      g.adjacency_[cursor[v]++] = u;
    }
    for (int u = 0; u < n; ++u)
      std::sort(g.adjacency_.begin() + g.offsets_[u], g.adjacency_.begin() + g.offsets_[u + 1]);
    return g;
  }

  int node_count() const { return n_; }
  std::int64_t edge_count() const { return m_; }
  std::int64_t directed_edge_count() const { return 2 * m_; }

  int degree(int u) const { return static_cast<int>(offsets_[u + 1] - offsets_[u]); }

  std::span<const int> neighbors(int u) const {
    return {adjacency_.data() + offsets_[u], adjacency_.data() + offsets_[u + 1]};
  }

  bool has_edge(int u, int v) const {
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  /// CSR offsets; offsets()[u] is also the index of u's first directed edge,
  /// which is what the edge-uniform sampler exploits.
  const std::vector<std::int64_t>& offsets() const { return offsets_; }
  const std::vector<int>& adjacency() const { return adjacency_; }

  bool is_connected() const {
    if (n_ == 0) return false;
    std::vector<char> seen(n_, 0);
    std::queue<int> queue;
    queue.push(0);
    seen[0] = 1;
    int visited = 1;
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop();
      for (int v : neighbors(u)) {
        if (!seen[v]) {
          seen[v] = 1;
          ++visited;
          queue.push(v);
        }
      }
    }
    return visited == n_;
  }

  /// Undirected edges in canonical order (u < v, lexicographic).
  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(m_);
    for (int u = 0; u < n_; ++u)
      for (int v : neighbors(u))
        if (u < v) out.emplace_back(u, v);
    return out;
  }

  friend bool operator==(const Graph& a, const Graph& b) = default;

 private:
  int n_ = 0;
  std::int64_t m_ = 0;
  std::vector<std::int64_t> offsets_;
  std::vector<int> adjacency_;
};

inline Graph gen_complete(int n) {
  if (n < 1) throw std::invalid_argument("gen_complete: n must be >= 1");
  std::vector<std::pair<int, int>> edges;
  edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  return Graph::from_edges(n, std::move(edges));
}

inline Graph gen_chain(int n) {
  if (n < 1) throw std::invalid_argument("gen_chain: n must be >= 1");
  std::vector<std::pair<int, int>> edges;
  edges.reserve(n - 1);
  for (int u = 0; u + 1 < n; ++u) edges.emplace_back(u, u + 1);
  return Graph::from_edges(n, std::move(edges));
}

/// Preferential attachment: the seed component is a complete graph on
/// attach+1 nodes (keeps the result connected), then every new node attaches
/// to `attach` distinct existing nodes chosen proportional to degree.
inline Graph gen_barabasi_albert(int n, int attach, std::uint64_t seed) {
  if (attach < 1) throw std::invalid_argument("gen_barabasi_albert: attach must be >= 1");
  if (n <= attach) throw std::invalid_argument("gen_barabasi_albert: need n > attach");

  std::vector<std::pair<int, int>> edges;
  // Endpoint multiset: drawing uniformly from it is degree-proportional.
  std::vector<int> endpoints;
  Rng rng(seed);

  const int seed_nodes = attach + 1;
  for (int u = 0; u < seed_nodes; ++u)
    for (int v = u + 1; v < seed_nodes; ++v) {
      edges.emplace_back(u, v);
      endpoints.push_back(u);
      endpoints.push_back(v);
    }

  std::vector<char> chosen(n, 0);
  for (int node = seed_nodes; node < n; ++node) {
    std::vector<int> targets;
    targets.reserve(attach);
    while (static_cast<int>(targets.size()) < attach) {
      int candidate = endpoints[rng.bounded(endpoints.size())];
      if (!chosen[candidate]) {
        chosen[candidate] = 1;
        targets.push_back(candidate);
      }
    }
    for (int t : targets) {
      chosen[t] = 0;
      edges.emplace_back(t, node);
      endpoints.push_back(t);
      endpoints.push_back(node);
    }
  }
  return Graph::from_edges(n, std::move(edges));
}

/// Parse failure, with the 1-based line it happened on.
struct EdgeListError : std::runtime_error {
  EdgeListError(int line_number, const std::string& what)
      : std::runtime_error("edge list, line " + std::to_string(line_number) + ": " + what),
        line(line_number) {}
  int line;
};

// Format: first line "N M", then M lines "u v" with 0 <= u < v < N.
// UTF-8, LF line endings, no comments.

inline void save_edgelist(const Graph& g, std::ostream& out) {
  out << g.node_count() << ' ' << g.edge_count() << '\n';
  for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

inline void save_edgelist(const Graph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  save_edgelist(g, out);
}

inline Graph load_edgelist(std::istream& in) {
  std::string line;
  int line_number = 0;

  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_number;
      return true;
    }
    return false;
  };

  if (!next_line()) throw EdgeListError(1, "missing header");
  std::int64_t n = 0, m = 0;
  {
    std::istringstream header(line);
    std::string extra;
    if (!(header >> n >> m) || (header >> extra))
      throw EdgeListError(line_number, "expected header \"N M\"");
    if (n < 1) throw EdgeListError(line_number, "node count must be >= 1");
    if (m < 0) throw EdgeListError(line_number, "negative edge count");
  }

  std::vector<std::pair<int, int>> edges;
  edges.reserve(m);
  for (std::int64_t i = 0; i < m; ++i) {
    if (!next_line()) throw EdgeListError(line_number + 1, "unexpected end of file");
    std::istringstream row(line);
    std::int64_t u = 0, v = 0;
    std::string extra;
    if (!(row >> u >> v) || (row >> extra))
      throw EdgeListError(line_number, "expected edge \"u v\"");
    if (u < 0 || v < 0 || u >= n || v >= n)
      throw EdgeListError(line_number, "node id out of range");
    if (u == v) throw EdgeListError(line_number, "self-loop");
    if (u > v) throw EdgeListError(line_number, "endpoints must satisfy u < v");
    edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
  }
  while (next_line())
    if (!line.empty()) throw EdgeListError(line_number, "trailing content after edge list");

  try {
    return Graph::from_edges(static_cast<int>(n), std::move(edges));
  } catch (const std::invalid_argument& e) {
    throw EdgeListError(line_number, e.what());  // duplicate edges land here
  }
}

inline Graph load_edgelist(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return load_edgelist(in);
}

}  // namespace gossip
