#pragma once

#include <vector>

#include "roadjoin/graph.hpp"
#include "roadjoin/partition.hpp"
#include "roadjoin/query.hpp"
#include "roadjoin/result.hpp"

namespace roadjoin {

enum class ThresholdMode {
  kGlobal,  // one bound shared by every task
  kLocal,   // each task prunes with its own bound only
};

struct SchedulerConfig {
  std::size_t parallelism = 8;
  std::size_t granularityFactor = 2;
  ThresholdMode thresholdMode = ThresholdMode::kGlobal;
};

// Antichain of hierarchy nodes covering every vertex at which local work
// runs. Starting from the root, the most populous splittable node is
// replaced by its children until the frontier holds c * P nodes or only
// true leaves remain. Returned in ascending id order.
std::vector<NodeId> choose_granularity(const PartitionHierarchy& h, const SchedulerConfig& cfg);

// Runs local work on the frontier and merges bottom-up on a pool of P
// workers, lowest tasks first. The result is independent of P and of the
// interleaving.
ResultHeap closest_pairs_parallel(const RoadNetwork& net, const PartitionHierarchy& h,
                                  const QuerySets& q, const QueryParams& params,
                                  const SchedulerConfig& cfg, QueryProbe* probe = nullptr);

// Every (r, s) with network distance <= theta, canonical order.
std::vector<MatchPair> distance_join(const RoadNetwork& net, const PartitionHierarchy& h,
                                     const QuerySets& q, double theta,
                                     const SchedulerConfig& cfg = {}, QueryProbe* probe = nullptr);

}  // namespace roadjoin
