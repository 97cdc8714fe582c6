#include "roadjoin/query.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace roadjoin {

namespace {

void tightenFrom(const ResultHeap& heap, GlobalThreshold& threshold, QueryProbe* probe) {
  if (!heap.full() || heap.empty()) return;
  const double before = threshold.read();
  if (threshold.tighten(heap.worstDistance()) < before && probe) {
    probe->thresholdUpdates.fetch_add(1, std::memory_order_relaxed);
  }
}

void sortRoutes(InsideRoutes& routes) {
  for (auto& [border, list] : routes) {
    std::sort(list.begin(), list.end(), [](const RouteEntry& a, const RouteEntry& b) {
      return a.dist != b.dist ? a.dist < b.dist : a.r < b.r;
    });
  }
}

void countSettled(QueryProbe* probe, std::size_t n) {
  if (probe) probe->settledVertices.fetch_add(n, std::memory_order_relaxed);
}

}  // namespace

PartialResult local_pairs(const QueryContext& ctx, const PartitionNode& leaf, const Region& region,
                          GlobalThreshold& threshold) {
  const QueryParams& p = ctx.params;
  PartialResult out{leaf.id, ResultHeap(p.k, p.theta), {}};
  if (p.k == 0) return out;

  ShortestPathSearch search(ctx.net);
  const auto isBorder = [&](VertexId v) {
    return std::binary_search(leaf.borderNodes.begin(), leaf.borderNodes.end(), v);
  };
  for (VertexId r : ctx.q.r()) {
    if (!region.contains(r)) continue;
    const double radius = std::min(p.theta, threshold.read());
    const std::size_t settled =
        search.run(r, 0.0, {radius, nullptr, &region}, [&](VertexId v, double d) {
          if (ctx.q.inS(v)) out.pairs.insert({r, v, d});
          if (isBorder(v)) out.routes[v].push_back({r, d});
          return true;
        });
    countSettled(ctx.probe, settled);
    tightenFrom(out.pairs, threshold, ctx.probe);
  }
  sortRoutes(out.routes);
  return out;
}

PartialResult local_pairs(const QueryContext& ctx, const PartitionNode& leaf,
                          GlobalThreshold& threshold) {
  return local_pairs(ctx, leaf, Region::of(ctx.net.vertexCount(), leaf.vertices), threshold);
}

namespace {

std::vector<MatchPair> expandWith(ShortestPathSearch& search, const Region& region,
                                  const CrossEdge& crossEdge,
                                  std::span<const RouteEntry> routesAtBack, const QuerySets& q,
                                  std::size_t k, double localTheta, QueryProbe* probe) {
  if (routesAtBack.empty() || k == 0) return {};
  const double nearest = routesAtBack.front().dist;
  ResultHeap found(k, localTheta);
  if (nearest + crossEdge.weight > localTheta) return {};

  const std::size_t settled = search.run(
      crossEdge.front, crossEdge.weight, {std::nextafter(localTheta - nearest, kInfinity), nullptr, &region},
      [&](VertexId v, double cost) {
        if (nearest + cost > found.admissionBound()) return false;
        if (!q.inS(v)) return true;
        for (const RouteEntry& route : routesAtBack) {
          const double total = route.dist + cost;
          if (total > found.admissionBound()) break;
          found.insert({route.r, v, total});
        }
        return true;
      });
  countSettled(probe, settled);
  return found.sorted();
}

}  // namespace

std::vector<MatchPair> expand_cross_edge(const RoadNetwork& net, const Region& region,
                                         const CrossEdge& crossEdge,
                                         std::span<const RouteEntry> routesAtBack,
                                         const QuerySets& q, std::size_t k, double localTheta,
                                         QueryProbe* probe) {
  ShortestPathSearch search(net);
  return expandWith(search, region, crossEdge, routesAtBack, q, k, localTheta, probe);
}

PartialResult combine_pairs(const QueryContext& ctx, const PartitionHierarchy& h, NodeId parentId,
                            PartialResult left, PartialResult right, GlobalThreshold& threshold) {
  const PartitionNode& parent = h.node(parentId);
  if (parent.isLeaf() || left.node != parent.left || right.node != parent.right) {
    throw InternalError("combine_pairs: children do not belong to node " +
                        std::to_string(parentId));
  }
  const QueryParams& p = ctx.params;
  PartialResult out{parentId, ResultHeap(p.k, p.theta), {}};
  out.pairs.absorb(left.pairs);
  out.pairs.absorb(right.pairs);
  tightenFrom(out.pairs, threshold, ctx.probe);

  const Region region = h.region(parentId);
  ShortestPathSearch search(ctx.net);
  const PartialResult* sides[2] = {&left, &right};
  const NodeId childIds[2] = {parent.left, parent.right};
  for (int side = 0; side < 2; ++side) {
    const PartitionNode& child = h.node(childIds[side]);
    const NodeId sibling = childIds[1 - side];
    const InsideRoutes& routes = sides[side]->routes;
    for (const CrossEdge& ce : child.crossEdges) {
      if (!h.contains(sibling, ce.front)) continue;
      const double bound = out.pairs.admissionBound();
      if (ce.weight > bound) {
        if (ctx.probe) ctx.probe->examine({parentId, side, ce.eid, ce.weight, bound, false});
        break;
      }
      if (ctx.probe) ctx.probe->examine({parentId, side, ce.eid, ce.weight, bound, true});
      const auto it = routes.find(ce.back);
      if (it == routes.end()) continue;
      if (ctx.probe) ctx.probe->expandedCrossEdges.fetch_add(1, std::memory_order_relaxed);
      const double localTheta = std::min(bound, threshold.read());
      for (const MatchPair& m : expandWith(search, region, ce, it->second, ctx.q, p.k, localTheta,
                                           ctx.probe)) {
        out.pairs.insert(m);
      }
      tightenFrom(out.pairs, threshold, ctx.probe);
    }
  }

  if (!parent.borderNodes.empty() && p.k > 0) {
    for (VertexId border : parent.borderNodes) {
      const double radius = std::min(p.theta, threshold.read());
      const std::size_t settled =
          search.run(border, 0.0, {radius, nullptr, &region}, [&](VertexId v, double d) {
            if (ctx.q.inR(v)) out.routes[border].push_back({v, d});
            return true;
          });
      countSettled(ctx.probe, settled);
    }
    sortRoutes(out.routes);
  }
  return out;
}

}  // namespace roadjoin
