#pragma once

#include <vector>

#include "roadjoin/graph.hpp"
#include "roadjoin/result.hpp"

namespace roadjoin {

// Brute force: one radius-theta search per r over the whole graph. Returns
// the k smallest pairs in canonical order; every pair when k is unbounded.
std::vector<MatchPair> oracle_closest_pairs(const RoadNetwork& net, const QuerySets& q,
                                            std::size_t k, double theta = kInfinity);

}  // namespace roadjoin
