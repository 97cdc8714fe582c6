#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <mutex>
#include <span>
#include <vector>

#include "roadjoin/graph.hpp"
#include "roadjoin/partition.hpp"
#include "roadjoin/result.hpp"
#include "roadjoin/threshold.hpp"

namespace roadjoin {

struct QueryParams {
  std::size_t k = 80;
  double theta = kInfinity;

  bool distanceJoin() const noexcept { return k == kUnboundedK && theta < kInfinity; }
};

// Distance from an R member to a border vertex, confined to one partition.
struct RouteEntry {
  VertexId r = 0;
  double dist = 0.0;

  friend bool operator==(const RouteEntry&, const RouteEntry&) = default;
};

// Border vertex -> routes, each list ascending by (dist, r).
using InsideRoutes = std::map<VertexId, std::vector<RouteEntry>>;

struct PartialResult {
  NodeId node = kNoNode;
  ResultHeap pairs;
  InsideRoutes routes;
};

// One sibling-boundary edge looked at while merging two children.
struct EdgeExamination {
  NodeId parent = kNoNode;
  int side = 0;  // 0: edge leaves the left child, 1: the right child
  EdgeId eid = 0;
  double weight = 0.0;
  double breakBound = kInfinity;  // admission bound of the merged result at that moment
  bool expanded = false;          // false: the early break fired on this edge
};

struct TaskEvent {
  NodeId node = kNoNode;
  bool merge = false;
  bool finished = false;
};

// Counters and optional traces gathered during one query.
struct QueryProbe {
  std::atomic<std::uint64_t> expandedCrossEdges{0};
  std::atomic<std::uint64_t> settledVertices{0};
  std::atomic<std::uint64_t> thresholdUpdates{0};
  std::atomic<std::size_t> peakConcurrency{0};

  bool recordEdges = false;
  bool recordTasks = false;
  bool recordThreshold = false;

  mutable std::mutex mutex;
  std::vector<EdgeExamination> examinations;
  std::vector<TaskEvent> events;  // in real-time order
  std::vector<double> thresholdTrace;

  void examine(const EdgeExamination& e) {
    if (!recordEdges) return;
    std::lock_guard lock(mutex);
    examinations.push_back(e);
  }
  void event(const TaskEvent& e) {
    if (!recordTasks) return;
    std::lock_guard lock(mutex);
    events.push_back(e);
  }
};

struct QueryContext {
  const RoadNetwork& net;
  const QuerySets& q;
  QueryParams params;
  QueryProbe* probe = nullptr;
};

// Best-first search from every r in R inside the leaf, confined to the
// leaf's region. Collects the best pairs and, for every border node
// reached, the confined distance from each r.
PartialResult local_pairs(const QueryContext& ctx, const PartitionNode& leaf, const Region& region,
                          GlobalThreshold& threshold);
PartialResult local_pairs(const QueryContext& ctx, const PartitionNode& leaf,
                          GlobalThreshold& threshold);

// Expands from the front end of `crossEdge` (starting at its weight),
// confined to `region`, and pairs every reached S vertex with the inside
// routes recorded at the back end. Returns at most k pairs within
// localTheta in canonical order.
std::vector<MatchPair> expand_cross_edge(const RoadNetwork& net, const Region& region,
                                         const CrossEdge& crossEdge,
                                         std::span<const RouteEntry> routesAtBack,
                                         const QuerySets& q, std::size_t k, double localTheta,
                                         QueryProbe* probe = nullptr);

// Merges the completed results of `parent`'s two children, expands the
// sibling-boundary edges that can still improve the result, and computes
// the parent's own inside routes.
PartialResult combine_pairs(const QueryContext& ctx, const PartitionHierarchy& h, NodeId parent,
                            PartialResult left, PartialResult right, GlobalThreshold& threshold);

}  // namespace roadjoin
