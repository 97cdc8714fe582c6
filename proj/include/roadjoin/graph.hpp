#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "roadjoin/error.hpp"

namespace roadjoin {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;
using ExternalId = std::int64_t;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct Edge {
  EdgeId eid = 0;
  VertexId a = 0;
  VertexId b = 0;
  double weight = 0.0;

  VertexId other(VertexId v) const noexcept { return v == a ? b : a; }
  friend bool operator==(const Edge&, const Edge&) = default;
};

// One direction of an undirected edge as seen from its tail.
struct Arc {
  VertexId head = 0;
  EdgeId eid = 0;
  double weight = 0.0;
};

struct VertexRecord {
  ExternalId external = 0;
  double x = 0.0;
  double y = 0.0;
};

struct RawEdge {
  VertexId a = 0;
  VertexId b = 0;
  double weight = 0.0;
};

// Undirected weighted graph with compressed adjacency. Immutable once built.
// Coordinates are carried for output only; distances come from edge weights.
class RoadNetwork {
 public:
  RoadNetwork() = default;

  // Vertices are indexed densely in the order given. Self-loops are dropped,
  // parallel edges kept. Throws IntegrityError for an endpoint out of range
  // and DomainError for a negative or non-finite weight.
  RoadNetwork(std::vector<VertexRecord> vertices, std::span<const RawEdge> edges);

  // Test and synthetic-data convenience: external id == dense index.
  static RoadNetwork fromEdges(std::size_t vertexCount, std::span<const RawEdge> edges);

  std::size_t vertexCount() const noexcept { return vertices_.size(); }
  std::size_t edgeCount() const noexcept { return edges_.size(); }

  std::span<const Arc> neighbors(VertexId v) const noexcept {
    return {arcs_.data() + offsets_[v], arcs_.data() + offsets_[v + 1]};
  }
  const Edge& edge(EdgeId e) const noexcept { return edges_[e]; }
  std::span<const Edge> edges() const noexcept { return edges_; }

  ExternalId externalId(VertexId v) const noexcept { return vertices_[v].external; }
  const VertexRecord& vertex(VertexId v) const noexcept { return vertices_[v]; }
  std::optional<VertexId> findVertex(ExternalId external) const;

 private:
  std::vector<VertexRecord> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<Arc> arcs_;
  std::unordered_map<ExternalId, VertexId> byExternal_;
};

// Reads `<id> <x> <y>` node lines and `<eid> <a> <b> <weight>` edge lines.
// Blank lines and `#` comments are skipped. Node ids are re-densified in
// ascending external-id order so that dense order matches external order.
RoadNetwork load_network(const std::filesystem::path& nodeFile,
                         const std::filesystem::path& edgeFile);

// Vertex membership predicate. The default region is the whole graph.
// A region is either an owned mask or a window [lo, hi) over shared keys.
class Region {
 public:
  Region() = default;
  Region(std::shared_ptr<const std::vector<std::uint32_t>> keys, std::uint32_t lo,
         std::uint32_t hi)
      : keys_(std::move(keys)), lo_(lo), hi_(hi) {}

  static Region of(std::size_t vertexCount, std::span<const VertexId> members);

  bool contains(VertexId v) const noexcept {
    if (!keys_) return true;
    const auto k = (*keys_)[v];
    return k >= lo_ && k < hi_;
  }
  bool isWhole() const noexcept { return !keys_; }

 private:
  std::shared_ptr<const std::vector<std::uint32_t>> keys_;
  std::uint32_t lo_ = 0;
  std::uint32_t hi_ = 0;
};

using EdgeSet = std::unordered_set<EdgeId>;

struct SearchLimits {
  double radius = kInfinity;
  const EdgeSet* forbidden = nullptr;
  const Region* region = nullptr;
};

// Reusable single-source search state. One instance per thread; all mutable
// state lives here so searches over a shared network never interfere.
class ShortestPathSearch {
 public:
  explicit ShortestPathSearch(const RoadNetwork& net)
      : net_(&net), dist_(net.vertexCount(), kInfinity), settled_(net.vertexCount(), 0) {}

  // Settles vertices in non-decreasing distance order starting from
  // `source` at `initialCost`. `onSettle(v, d)` returns false to stop.
  // Returns the number of settled vertices.
  template <class OnSettle>
  std::size_t run(VertexId source, double initialCost, const SearchLimits& limits,
                  OnSettle&& onSettle);

 private:
  void reset() {
    for (VertexId v : touched_) {
      dist_[v] = kInfinity;
      settled_[v] = 0;
    }
    touched_.clear();
  }

  const RoadNetwork* net_;
  std::vector<double> dist_;
  std::vector<char> settled_;
  std::vector<VertexId> touched_;
};

template <class OnSettle>
std::size_t ShortestPathSearch::run(VertexId source, double initialCost,
                                    const SearchLimits& limits, OnSettle&& onSettle) {
  using Entry = std::pair<double, VertexId>;
  reset();
  if (initialCost > limits.radius) return 0;
  if (limits.region && !limits.region->contains(source)) return 0;

  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  dist_[source] = initialCost;
  touched_.push_back(source);
  queue.emplace(initialCost, source);
  std::size_t count = 0;

  while (!queue.empty()) {
    const auto [d, v] = queue.top();
    queue.pop();
    if (settled_[v] || d > dist_[v]) continue;
    settled_[v] = 1;
    ++count;
    if (!onSettle(v, d)) break;
    for (const Arc& arc : net_->neighbors(v)) {
      if (settled_[arc.head]) continue;
      if (limits.forbidden && limits.forbidden->contains(arc.eid)) continue;
      if (limits.region && !limits.region->contains(arc.head)) continue;
      const double nd = d + arc.weight;
      if (nd > limits.radius || nd >= dist_[arc.head]) continue;
      if (dist_[arc.head] == kInfinity) touched_.push_back(arc.head);
      dist_[arc.head] = nd;
      queue.emplace(nd, arc.head);
    }
  }
  return count;
}

using DistanceMap = std::map<VertexId, double>;

// Exact distances d(source, v) <= radius avoiding forbidden edges and never
// leaving region. Throws DomainError if source is not a vertex of net.
DistanceMap bounded_dijkstra(const RoadNetwork& net, VertexId source, double radius,
                             const EdgeSet* forbidden = nullptr, const Region* region = nullptr);

// Two disjoint vertex sets with O(1) membership.
class QuerySets {
 public:
  QuerySets() = default;
  // Throws DomainError when a vertex is out of range or the sets overlap.
  QuerySets(std::size_t vertexCount, std::vector<VertexId> r, std::vector<VertexId> s);

  std::span<const VertexId> r() const noexcept { return r_; }
  std::span<const VertexId> s() const noexcept { return s_; }
  bool inR(VertexId v) const noexcept { return role_[v] == kRoleR; }
  bool inS(VertexId v) const noexcept { return role_[v] == kRoleS; }

 private:
  static constexpr std::uint8_t kRoleR = 1;
  static constexpr std::uint8_t kRoleS = 2;
  std::vector<VertexId> r_;
  std::vector<VertexId> s_;
  std::vector<std::uint8_t> role_;
};

// Uniform sampling without replacement: R first, then S from the remainder.
// |R| = round(rPct * |V| / 100), likewise for S. Deterministic per seed.
QuerySets sample_sets(const RoadNetwork& net, double rPct, double sPct, std::uint64_t seed);

}  // namespace roadjoin
