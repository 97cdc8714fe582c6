#include "roadjoin/oracle.hpp"

#include <algorithm>

namespace roadjoin {

std::vector<MatchPair> oracle_closest_pairs(const RoadNetwork& net, const QuerySets& q,
                                            std::size_t k, double theta) {
  if (!(theta >= 0.0)) throw DomainError("theta must be non-negative");
  std::vector<MatchPair> all;
  if (k == 0) return all;
  ShortestPathSearch search(net);
  for (VertexId r : q.r()) {
    search.run(r, 0.0, {theta, nullptr, nullptr}, [&](VertexId v, double d) {
      if (q.inS(v)) all.push_back({r, v, d});
      return true;
    });
  }
  if (k < all.size()) {
    std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end(),
                      PairOrder{});
    all.resize(k);
  } else {
    std::sort(all.begin(), all.end(), PairOrder{});
  }
  return all;
}

}  // namespace roadjoin
