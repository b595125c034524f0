#pragma once

// The two message distributions of the protocol. NodeUniform is the protocol
// as defined (sender uniform over nodes, receiver uniform over its
// neighbors); EdgeUniform draws an ordered pair uniformly over all 2m
// directed edges, which is the distribution the Cheeger-based bounds assume.
// On regular graphs the two coincide.

#include <algorithm>
#include <stdexcept>
#include <string>

#include "gossip/graph.hpp"
#include "gossip/rng.hpp"

namespace gossip {

enum class SamplingMode { NodeUniform, EdgeUniform };

inline const char* to_string(SamplingMode mode) {
  return mode == SamplingMode::NodeUniform ? "node-uniform" : "edge-uniform";
}

inline SamplingMode parse_sampling_mode(const std::string& text) {
  if (text == "node-uniform") return SamplingMode::NodeUniform;
  if (text == "edge-uniform") return SamplingMode::EdgeUniform;
  throw std::invalid_argument("unknown sampling mode: " + text);
}

struct MessageEvent {
  int sender;
  int receiver;
};

inline MessageEvent sample_event(const Graph& g, SamplingMode mode, Rng& rng) {
  const int n = g.node_count();
  if (n < 2) throw std::invalid_argument("sample_event: need at least two nodes");
  if (mode == SamplingMode::NodeUniform) {
    const int sender = static_cast<int>(rng.bounded(n));
    const int deg = g.degree(sender);
    if (deg == 0)
      throw std::runtime_error("sample_event: node " + std::to_string(sender) +
                               " has no neighbors");
    const int receiver = g.neighbors(sender)[rng.bounded(deg)];
    return {sender, receiver};
  }
  const std::int64_t directed = g.directed_edge_count();
  if (directed == 0) throw std::runtime_error("sample_event: graph has no edges");
  const std::int64_t e = static_cast<std::int64_t>(rng.bounded(directed));
  const auto& offsets = g.offsets();
  // offsets[u] <= e < offsets[u+1] identifies the sender row.
  const int sender =
      static_cast<int>(std::upper_bound(offsets.begin(), offsets.end(), e) - offsets.begin()) - 1;
  return {sender, g.adjacency()[e]};
}

/// Exact probability of the directed event (sender, receiver) under a mode.
/// Zero if the pair is not an edge.
inline double event_probability(const Graph& g, SamplingMode mode, int sender, int receiver) {
  if (!g.has_edge(sender, receiver)) return 0.0;
  if (mode == SamplingMode::NodeUniform)
    return 1.0 / (static_cast<double>(g.node_count()) * g.degree(sender));
  return 1.0 / static_cast<double>(g.directed_edge_count());
}

}  // namespace gossip
