#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "roadjoin/graph.hpp"

namespace roadjoin {

struct SmoothingConfig {
  double alpha = 0.0;  // in [0, 1]
};

// Population-aware edge weights used to pick which cluster grows next:
//   w1' = pop1 / (pop1 + alpha * pop2) * w1
//   w2' = pop2 / (alpha * pop1 + pop2) * w2
std::pair<double, double> smoothed_weights(double w1, double w2, std::size_t pop1,
                                           std::size_t pop2, double alpha);

// An edge leaving a partition: `back` lies inside, `front` outside.
struct CrossEdge {
  EdgeId eid = 0;
  VertexId back = 0;
  VertexId front = 0;
  double weight = 0.0;

  friend bool operator==(const CrossEdge&, const CrossEdge&) = default;
};

// Ascending weight, then edge id, then back end.
struct CrossEdgeOrder {
  bool operator()(const CrossEdge& a, const CrossEdge& b) const noexcept {
    if (a.weight != b.weight) return a.weight < b.weight;
    if (a.eid != b.eid) return a.eid < b.eid;
    return a.back < b.back;
  }
};

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

struct PartitionNode {
  NodeId id = 0;
  NodeId parent = kNoNode;
  NodeId left = kNoNode;
  NodeId right = kNoNode;
  std::vector<VertexId> vertices;     // ascending
  std::vector<CrossEdge> crossEdges;  // CrossEdgeOrder
  std::vector<VertexId> borderNodes;  // ascending, distinct back ends
  // Minimum weight over the edges separating this node from its sibling.
  double separationDegree = kInfinity;

  bool isLeaf() const noexcept { return left == kNoNode; }
  std::size_t population() const noexcept { return vertices.size(); }

  friend bool operator==(const PartitionNode&, const PartitionNode&) = default;
};

// Double-sweep pseudo-diameter over the subgraph induced by `region`.
// On a disconnected region the sweep runs inside the largest component;
// when every component is a single vertex the two lowest ids are returned.
std::pair<VertexId, VertexId> select_seeds(const RoadNetwork& net,
                                           std::span<const VertexId> region);

// Splits `parent` into two clusters grown best-first from the seeds. The
// returned nodes carry vertices, cross-edges, border nodes and separation
// degree; ids and tree links are left for the caller to assign.
std::pair<PartitionNode, PartitionNode> bisect(const RoadNetwork& net, const PartitionNode& parent,
                                               VertexId leftSeed, VertexId rightSeed,
                                               SmoothingConfig cfg);

// Where the network the hierarchy was built from lives on disk.
struct NetworkSource {
  std::string nodes;
  std::string edges;

  friend bool operator==(const NetworkSource&, const NetworkSource&) = default;
};

// Binary tree of vertex regions. Node 0 is the root; children always have
// larger ids than their parent. Immutable once constructed.
class PartitionHierarchy {
 public:
  PartitionHierarchy() = default;
  // Validates the tree shape and the partition property. Throws FormatError.
  PartitionHierarchy(std::vector<PartitionNode> nodes, std::size_t vertexCount,
                     std::size_t leafSizeLimit, double alpha);

  const PartitionNode& root() const noexcept { return nodes_.front(); }
  const PartitionNode& node(NodeId id) const noexcept { return nodes_[id]; }
  std::span<const PartitionNode> nodes() const noexcept { return nodes_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  std::size_t vertexCount() const noexcept { return vertexCount_; }
  std::size_t leafSizeLimit() const noexcept { return leafSizeLimit_; }
  double alpha() const noexcept { return alpha_; }
  std::size_t leafCount() const noexcept;

  // O(1) membership view of a node's vertex set.
  Region region(NodeId id) const {
    return Region(leafRank_, windows_[id].first, windows_[id].second);
  }
  bool contains(NodeId id, VertexId v) const noexcept {
    const auto k = (*leafRank_)[v];
    return k >= windows_[id].first && k < windows_[id].second;
  }

  const std::optional<NetworkSource>& source() const noexcept { return source_; }
  void setSource(NetworkSource src) { source_ = std::move(src); }

  // Structural equality: node ids, links, vertex sets, cross-edges,
  // separation degrees and build parameters.
  friend bool operator==(const PartitionHierarchy& a, const PartitionHierarchy& b) {
    return a.vertexCount_ == b.vertexCount_ && a.leafSizeLimit_ == b.leafSizeLimit_ &&
           a.alpha_ == b.alpha_ && a.nodes_ == b.nodes_;
  }

 private:
  std::vector<PartitionNode> nodes_;
  std::size_t vertexCount_ = 0;
  std::size_t leafSizeLimit_ = 0;
  double alpha_ = 0.0;
  std::shared_ptr<const std::vector<std::uint32_t>> leafRank_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> windows_;
  std::optional<NetworkSource> source_;
};

// Recursive bisection until every leaf holds at most leafSizeLimit vertices.
PartitionHierarchy build_hierarchy(const RoadNetwork& net, std::size_t leafSizeLimit,
                                   SmoothingConfig cfg);

inline constexpr int kHierarchyFormatVersion = 1;

void save_hierarchy(const PartitionHierarchy& h, const std::filesystem::path& path);
PartitionHierarchy load_hierarchy(const std::filesystem::path& path);

}  // namespace roadjoin
