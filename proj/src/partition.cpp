#include "roadjoin/partition.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>
#include <string>

namespace roadjoin {

std::pair<double, double> smoothed_weights(double w1, double w2, std::size_t pop1,
                                           std::size_t pop2, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in [0,1]");
  if (pop1 == 0 || pop2 == 0) throw DomainError("cluster populations must be positive");
  const double p1 = static_cast<double>(pop1);
  const double p2 = static_cast<double>(pop2);
  return {p1 / (p1 + alpha * p2) * w1, p2 / (alpha * p1 + p2) * w2};
}

namespace {

constexpr std::uint8_t kOutside = 0;
constexpr std::uint8_t kFree = 1;
constexpr std::uint8_t kLeft = 2;
constexpr std::uint8_t kRight = 3;

struct FrontierEdge {
  double weight;
  EdgeId eid;
  VertexId front;
};

struct FrontierAfter {
  bool operator()(const FrontierEdge& a, const FrontierEdge& b) const noexcept {
    if (a.weight != b.weight) return a.weight > b.weight;
    return a.eid > b.eid;
  }
};

using Frontier = std::priority_queue<FrontierEdge, std::vector<FrontierEdge>, FrontierAfter>;

// Scratch state shared by seed selection and bisection across the many
// splits of one hierarchy build. Labels are reset after every call.
class Bisector {
 public:
  explicit Bisector(const RoadNetwork& net)
      : net_(net),
        label_(net.vertexCount(), kOutside),
        keys_(std::make_shared<std::vector<std::uint32_t>>(net.vertexCount(), 0)),
        search_(net) {}

  std::pair<VertexId, VertexId> seeds(std::span<const VertexId> region);
  std::pair<PartitionNode, PartitionNode> split(const PartitionNode& parent, VertexId leftSeed,
                                                VertexId rightSeed, double alpha);

 private:
  std::pair<VertexId, double> farthest(VertexId source, const Region& region);
  void claim(VertexId v, std::uint8_t side, Frontier& frontier, std::vector<EdgeId>& boundary);

  const RoadNetwork& net_;
  std::vector<std::uint8_t> label_;
  std::shared_ptr<std::vector<std::uint32_t>> keys_;
  std::uint32_t stamp_ = 0;
  ShortestPathSearch search_;
};

std::pair<VertexId, double> Bisector::farthest(VertexId source, const Region& region) {
  VertexId best = source;
  double bestDist = -1.0;
  search_.run(source, 0.0, {kInfinity, nullptr, &region}, [&](VertexId v, double d) {
    if (v != source && (d > bestDist || (d == bestDist && v < best))) {
      best = v;
      bestDist = d;
    }
    return true;
  });
  return {best, bestDist};
}

std::pair<VertexId, VertexId> Bisector::seeds(std::span<const VertexId> region) {
  if (region.size() < 2) throw DomainError("seed selection needs at least two vertices");
  std::vector<VertexId> sorted(region.begin(), region.end());
  std::sort(sorted.begin(), sorted.end());

  // Fresh stamp per call so the window [stamp, stamp + 1) selects exactly
  // this region without clearing the shared key array.
  if (stamp_ == std::numeric_limits<std::uint32_t>::max() - 1) {
    std::fill(keys_->begin(), keys_->end(), 0);
    stamp_ = 0;
  }
  const std::uint32_t mark = ++stamp_;
  for (VertexId v : sorted) (*keys_)[v] = mark;
  Region inside(keys_, mark, mark + 1);

  // Components of the induced subgraph, discovered in ascending id order.
  std::vector<VertexId> bestComponent;
  {
    std::vector<VertexId> seen;
    std::size_t covered = 0;
    for (VertexId start : sorted) {
      if (label_[start] != kOutside) continue;
      std::vector<VertexId> component{start};
      label_[start] = kFree;
      for (std::size_t i = 0; i < component.size(); ++i) {
        for (const Arc& arc : net_.neighbors(component[i])) {
          if (inside.contains(arc.head) && label_[arc.head] == kOutside) {
            label_[arc.head] = kFree;
            component.push_back(arc.head);
          }
        }
      }
      covered += component.size();
      seen.insert(seen.end(), component.begin(), component.end());
      if (component.size() > bestComponent.size()) bestComponent = std::move(component);
      if (bestComponent.size() * 2 > sorted.size() || covered == sorted.size()) break;
    }
    for (VertexId v : seen) label_[v] = kOutside;
  }

  if (bestComponent.size() < 2) return {sorted[0], sorted[1]};
  const VertexId lowest = *std::min_element(bestComponent.begin(), bestComponent.end());
  const VertexId a = farthest(lowest, inside).first;
  const VertexId b = farthest(a, inside).first;
  return {a, b};
}

void Bisector::claim(VertexId v, std::uint8_t side, Frontier& frontier,
                     std::vector<EdgeId>& boundary) {
  label_[v] = side;
  const std::uint8_t opposite = side == kLeft ? kRight : kLeft;
  for (const Arc& arc : net_.neighbors(v)) {
    const std::uint8_t other = label_[arc.head];
    if (other == kFree) {
      frontier.push({arc.weight, arc.eid, arc.head});
    } else if (other == opposite) {
      boundary.push_back(arc.eid);
    }
    // kOutside: an inherited cross-edge of the parent, never traversed.
  }
}

std::pair<PartitionNode, PartitionNode> Bisector::split(const PartitionNode& parent,
                                                        VertexId leftSeed, VertexId rightSeed,
                                                        double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in [0,1]");
  for (VertexId v : parent.vertices) label_[v] = kFree;
  const auto clearLabels = [&] {
    for (VertexId v : parent.vertices) label_[v] = kOutside;
  };
  const auto inParent = [&](VertexId v) { return v < label_.size() && label_[v] == kFree; };
  if (!inParent(leftSeed) || !inParent(rightSeed) || leftSeed == rightSeed) {
    clearLabels();
    throw DomainError("seeds must be two distinct vertices of the parent partition");
  }

  Frontier leftFrontier;
  Frontier rightFrontier;
  std::vector<EdgeId> boundary;
  std::size_t leftPop = 1;
  std::size_t rightPop = 1;
  label_[leftSeed] = kLeft;
  label_[rightSeed] = kRight;
  claim(leftSeed, kLeft, leftFrontier, boundary);
  claim(rightSeed, kRight, rightFrontier, boundary);

  while (!leftFrontier.empty() || !rightFrontier.empty()) {
    bool growLeft = rightFrontier.empty();
    if (!growLeft && !leftFrontier.empty()) {
      const auto [wl, wr] = smoothed_weights(leftFrontier.top().weight, rightFrontier.top().weight,
                                             leftPop, rightPop, alpha);
      growLeft = wl <= wr;
    }
    Frontier& frontier = growLeft ? leftFrontier : rightFrontier;
    const VertexId front = frontier.top().front;
    frontier.pop();
    if (label_[front] != kFree) continue;
    if (growLeft) {
      claim(front, kLeft, leftFrontier, boundary);
      ++leftPop;
    } else {
      claim(front, kRight, rightFrontier, boundary);
      ++rightPop;
    }
  }

  // Unreached components go whole to the currently smaller cluster.
  for (VertexId start : parent.vertices) {
    if (label_[start] != kFree) continue;
    const std::uint8_t side = leftPop <= rightPop ? kLeft : kRight;
    std::vector<VertexId> stack{start};
    label_[start] = side;
    std::size_t count = 0;
    while (!stack.empty()) {
      const VertexId v = stack.back();
      stack.pop_back();
      ++count;
      for (const Arc& arc : net_.neighbors(v)) {
        if (label_[arc.head] == kFree) {
          label_[arc.head] = side;
          stack.push_back(arc.head);
        }
      }
    }
    (side == kLeft ? leftPop : rightPop) += count;
  }

  PartitionNode left;
  PartitionNode right;
  left.parent = right.parent = parent.id;
  left.vertices.reserve(leftPop);
  right.vertices.reserve(rightPop);
  for (VertexId v : parent.vertices) {
    (label_[v] == kLeft ? left : right).vertices.push_back(v);
  }

  std::sort(boundary.begin(), boundary.end());
  boundary.erase(std::unique(boundary.begin(), boundary.end()), boundary.end());
  double separation = kInfinity;
  for (EdgeId eid : boundary) {
    const Edge& e = net_.edge(eid);
    const VertexId inLeft = label_[e.a] == kLeft ? e.a : e.b;
    const VertexId inRight = e.other(inLeft);
    left.crossEdges.push_back({eid, inLeft, inRight, e.weight});
    right.crossEdges.push_back({eid, inRight, inLeft, e.weight});
    separation = std::min(separation, e.weight);
  }
  for (const CrossEdge& inherited : parent.crossEdges) {
    (label_[inherited.back] == kLeft ? left : right).crossEdges.push_back(inherited);
  }
  clearLabels();

  for (PartitionNode* child : {&left, &right}) {
    child->separationDegree = separation;
    std::sort(child->crossEdges.begin(), child->crossEdges.end(), CrossEdgeOrder{});
    for (const CrossEdge& ce : child->crossEdges) child->borderNodes.push_back(ce.back);
    std::sort(child->borderNodes.begin(), child->borderNodes.end());
    child->borderNodes.erase(std::unique(child->borderNodes.begin(), child->borderNodes.end()),
                             child->borderNodes.end());
  }
  return {std::move(left), std::move(right)};
}

}  // namespace

std::pair<VertexId, VertexId> select_seeds(const RoadNetwork& net,
                                           std::span<const VertexId> region) {
  for (VertexId v : region) {
    if (v >= net.vertexCount()) throw DomainError("region vertex out of range");
  }
  Bisector bisector(net);
  return bisector.seeds(region);
}

std::pair<PartitionNode, PartitionNode> bisect(const RoadNetwork& net, const PartitionNode& parent,
                                               VertexId leftSeed, VertexId rightSeed,
                                               SmoothingConfig cfg) {
  for (VertexId v : parent.vertices) {
    if (v >= net.vertexCount()) throw DomainError("partition vertex out of range");
  }
  Bisector bisector(net);
  return bisector.split(parent, leftSeed, rightSeed, cfg.alpha);
}

PartitionHierarchy::PartitionHierarchy(std::vector<PartitionNode> nodes, std::size_t vertexCount,
                                       std::size_t leafSizeLimit, double alpha)
    : nodes_(std::move(nodes)),
      vertexCount_(vertexCount),
      leafSizeLimit_(leafSizeLimit),
      alpha_(alpha) {
  if (nodes_.empty()) throw FormatError("hierarchy has no nodes");
  const std::size_t n = nodes_.size();
  for (NodeId id = 0; id < n; ++id) {
    const PartitionNode& node = nodes_[id];
    if (node.id != id) throw FormatError("node ids must be dense and ordered");
    if ((node.left == kNoNode) != (node.right == kNoNode)) {
      throw FormatError("node " + std::to_string(id) + " has exactly one child");
    }
    if (id == 0 ? node.parent != kNoNode : (node.parent >= id)) {
      throw FormatError("node " + std::to_string(id) + " has an invalid parent link");
    }
    if (!node.isLeaf()) {
      for (NodeId child : {node.left, node.right}) {
        if (child <= id || child >= n || nodes_[child].parent != id) {
          throw FormatError("node " + std::to_string(id) + " has an invalid child link");
        }
      }
    }
  }

  // Leaves numbered in depth-first order give every node a contiguous
  // window of leaf ranks.
  auto rank = std::make_shared<std::vector<std::uint32_t>>(vertexCount, kNoNode);
  windows_.assign(n, {0, 0});
  std::uint32_t nextLeaf = 0;
  std::vector<std::pair<NodeId, bool>> stack{{0, false}};
  std::size_t covered = 0;
  while (!stack.empty()) {
    auto [id, expanded] = stack.back();
    stack.pop_back();
    const PartitionNode& node = nodes_[id];
    if (node.isLeaf()) {
      windows_[id] = {nextLeaf, nextLeaf + 1};
      for (VertexId v : node.vertices) {
        if (v >= vertexCount || (*rank)[v] != kNoNode) {
          throw FormatError("vertex " + std::to_string(v) + " missing or repeated in leaves");
        }
        (*rank)[v] = nextLeaf;
      }
      covered += node.vertices.size();
      ++nextLeaf;
    } else if (!expanded) {
      windows_[id].first = nextLeaf;
      stack.push_back({id, true});
      stack.push_back({node.right, false});
      stack.push_back({node.left, false});
    } else {
      windows_[id].second = nextLeaf;
      const auto& l = nodes_[node.left].vertices;
      const auto& r = nodes_[node.right].vertices;
      if (l.size() + r.size() != node.vertices.size()) {
        throw FormatError("children of node " + std::to_string(id) + " do not cover it");
      }
    }
  }
  if (covered != vertexCount) throw FormatError("leaves do not cover every vertex");
  for (const PartitionNode& node : nodes_) {
    for (VertexId v : node.vertices) {
      const auto k = (*rank)[v];
      if (k < windows_[node.id].first || k >= windows_[node.id].second) {
        throw FormatError("vertex " + std::to_string(v) + " outside its node's subtree");
      }
    }
  }
  leafRank_ = std::move(rank);
}

std::size_t PartitionHierarchy::leafCount() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const auto& n) { return n.isLeaf(); }));
}

PartitionHierarchy build_hierarchy(const RoadNetwork& net, std::size_t leafSizeLimit,
                                   SmoothingConfig cfg) {
  if (leafSizeLimit < 1) throw DomainError("leaf size limit must be at least 1");
  if (!(cfg.alpha >= 0.0 && cfg.alpha <= 1.0)) throw DomainError("alpha must lie in [0,1]");

  std::vector<PartitionNode> nodes(1);
  nodes[0].vertices.resize(net.vertexCount());
  for (VertexId v = 0; v < net.vertexCount(); ++v) nodes[0].vertices[v] = v;

  Bisector bisector(net);
  std::deque<NodeId> pending{0};
  while (!pending.empty()) {
    const NodeId id = pending.front();
    pending.pop_front();
    if (nodes[id].population() <= leafSizeLimit || nodes[id].population() < 2) continue;
    const auto [a, b] = bisector.seeds(nodes[id].vertices);
    auto [left, right] = bisector.split(nodes[id], a, b, cfg.alpha);
    const auto leftId = static_cast<NodeId>(nodes.size());
    left.id = leftId;
    right.id = leftId + 1;
    nodes[id].left = leftId;
    nodes[id].right = leftId + 1;
    nodes.push_back(std::move(left));
    nodes.push_back(std::move(right));
    pending.push_back(leftId);
    pending.push_back(leftId + 1);
  }
  return PartitionHierarchy(std::move(nodes), net.vertexCount(), leafSizeLimit, cfg.alpha);
}

}  // namespace roadjoin
