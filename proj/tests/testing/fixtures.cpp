#include "testing/fixtures.hpp"

#include <algorithm>
#include <cmath>

namespace roadjoin::testing {

RoadNetwork path_graph(const std::vector<double>& weights) {
  std::vector<RawEdge> edges;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    edges.push_back({static_cast<VertexId>(i), static_cast<VertexId>(i + 1), weights[i]});
  }
  return RoadNetwork::fromEdges(weights.size() + 1, edges);
}

RoadNetwork unit_grid(std::size_t width, std::size_t height) {
  std::vector<RawEdge> edges;
  const auto at = [&](std::size_t x, std::size_t y) { return static_cast<VertexId>(y * width + x); };
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      if (x + 1 < width) edges.push_back({at(x, y), at(x + 1, y), 1.0});
      if (y + 1 < height) edges.push_back({at(x, y), at(x, y + 1), 1.0});
    }
  }
  return RoadNetwork::fromEdges(width * height, edges);
}

std::vector<double> reference_distances(const RoadNetwork& net, VertexId source) {
  return reference_distances(
      net, source, [](EdgeId) { return true; }, [](VertexId) { return true; });
}

std::vector<std::vector<double>> all_pairs(const RoadNetwork& net,
                                           const std::vector<VertexId>& inside) {
  const std::size_t n = net.vertexCount();
  std::vector<char> member(n, inside.empty() ? 1 : 0);
  for (VertexId v : inside) member[v] = 1;
  std::vector<std::vector<double>> d(n, std::vector<double>(n, kInfinity));
  for (std::size_t v = 0; v < n; ++v) {
    if (member[v]) d[v][v] = 0.0;
  }
  for (const Edge& e : net.edges()) {
    if (!member[e.a] || !member[e.b]) continue;
    d[e.a][e.b] = std::min(d[e.a][e.b], e.weight);
    d[e.b][e.a] = std::min(d[e.b][e.a], e.weight);
  }
  for (std::size_t m = 0; m < n; ++m) {
    if (!member[m]) continue;
    for (std::size_t i = 0; i < n; ++i) {
      if (d[i][m] == kInfinity) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (d[i][m] + d[m][j] < d[i][j]) d[i][j] = d[i][m] + d[m][j];
      }
    }
  }
  return d;
}

std::vector<double> bellman_ford(const RoadNetwork& net, VertexId source,
                                 const std::vector<EdgeId>& removed) {
  std::vector<double> dist(net.vertexCount(), kInfinity);
  dist[source] = 0.0;
  for (std::size_t round = 0; round + 1 < net.vertexCount(); ++round) {
    bool changed = false;
    for (const Edge& e : net.edges()) {
      if (std::find(removed.begin(), removed.end(), e.eid) != removed.end()) continue;
      if (dist[e.a] + e.weight < dist[e.b]) {
        dist[e.b] = dist[e.a] + e.weight;
        changed = true;
      }
      if (dist[e.b] + e.weight < dist[e.a]) {
        dist[e.a] = dist[e.b] + e.weight;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return dist;
}

std::vector<CrossEdge> scan_cross_edges(const RoadNetwork& net,
                                        const std::vector<VertexId>& vertices) {
  std::vector<char> member(net.vertexCount(), 0);
  for (VertexId v : vertices) member[v] = 1;
  std::vector<CrossEdge> out;
  for (const Edge& e : net.edges()) {
    if (member[e.a] && !member[e.b]) out.push_back({e.eid, e.a, e.b, e.weight});
    if (member[e.b] && !member[e.a]) out.push_back({e.eid, e.b, e.a, e.weight});
  }
  std::sort(out.begin(), out.end(), CrossEdgeOrder{});
  return out;
}

std::vector<MatchPair> exhaustive_pairs(const std::vector<std::vector<double>>& table,
                                        const QuerySets& q, double theta) {
  std::vector<MatchPair> out;
  for (VertexId r : q.r()) {
    for (VertexId s : q.s()) {
      if (table[r][s] <= theta) out.push_back({r, s, table[r][s]});
    }
  }
  std::sort(out.begin(), out.end(), PairOrder{});
  return out;
}

std::vector<double> distances_of(const std::vector<MatchPair>& pairs) {
  std::vector<double> out;
  out.reserve(pairs.size());
  for (const MatchPair& p : pairs) out.push_back(p.dist);
  std::sort(out.begin(), out.end());
  return out;
}

bool close_relative(double a, double b, double tol) {
  if (a == b) return true;
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

}  // namespace roadjoin::testing
