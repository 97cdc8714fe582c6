#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "roadjoin/graph.hpp"
#include "roadjoin/partition.hpp"
#include "roadjoin/result.hpp"

namespace roadjoin::testing {

// a-b-c-... with the given weights.
RoadNetwork path_graph(const std::vector<double>& weights);

// Unit-weight width x height lattice; vertex (x, y) has id y * width + x.
RoadNetwork unit_grid(std::size_t width, std::size_t height);

// Plain O(V^2) Dijkstra over an adjacency matrix built from the edge list.
// Independent of ShortestPathSearch. `keep(eid)` and `inside(v)` restrict
// the graph; unreachable entries are infinity.
template <class KeepEdge, class Inside>
std::vector<double> reference_distances(const RoadNetwork& net, VertexId source, KeepEdge keep,
                                        Inside inside);
std::vector<double> reference_distances(const RoadNetwork& net, VertexId source);

// Floyd-Warshall over the subgraph induced by `inside` (all vertices when
// empty). Entry [u][v] is the confined distance.
std::vector<std::vector<double>> all_pairs(const RoadNetwork& net,
                                           const std::vector<VertexId>& inside = {});

// Bellman-Ford on the graph with `removed` edge ids deleted.
std::vector<double> bellman_ford(const RoadNetwork& net, VertexId source,
                                 const std::vector<EdgeId>& removed);

// Every edge with exactly one endpoint in `vertices`, oriented outward.
std::vector<CrossEdge> scan_cross_edges(const RoadNetwork& net,
                                        const std::vector<VertexId>& vertices);

// All (r, s, d) from an all-pairs table, canonical order, d <= theta.
std::vector<MatchPair> exhaustive_pairs(const std::vector<std::vector<double>>& table,
                                        const QuerySets& q, double theta = kInfinity);

std::vector<double> distances_of(const std::vector<MatchPair>& pairs);

bool close_relative(double a, double b, double tol = 1e-9);

template <class KeepEdge, class Inside>
std::vector<double> reference_distances(const RoadNetwork& net, VertexId source, KeepEdge keep,
                                        Inside inside) {
  const std::size_t n = net.vertexCount();
  std::vector<std::vector<double>> w(n, std::vector<double>(n, kInfinity));
  for (const Edge& e : net.edges()) {
    if (!keep(e.eid) || !inside(e.a) || !inside(e.b)) continue;
    w[e.a][e.b] = std::min(w[e.a][e.b], e.weight);
    w[e.b][e.a] = std::min(w[e.b][e.a], e.weight);
  }
  std::vector<double> dist(n, kInfinity);
  std::vector<char> done(n, 0);
  if (!inside(source)) return dist;
  dist[source] = 0.0;
  for (std::size_t round = 0; round < n; ++round) {
    std::size_t u = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (!done[v] && dist[v] < kInfinity && (u == n || dist[v] < dist[u])) u = v;
    }
    if (u == n) break;
    done[u] = 1;
    for (std::size_t v = 0; v < n; ++v) {
      if (w[u][v] < kInfinity && dist[u] + w[u][v] < dist[v]) dist[v] = dist[u] + w[u][v];
    }
  }
  return dist;
}

}  // namespace roadjoin::testing
