#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

#include "gtest/gtest.h"
#include "roadjoin/partition.hpp"
#include "roadjoin/synthetic.hpp"
#include "testing/fixtures.hpp"

namespace roadjoin {
namespace {

using testing::path_graph;
using testing::unit_grid;

PartitionNode whole(const RoadNetwork& net) {
  PartitionNode root;
  for (VertexId v = 0; v < net.vertexCount(); ++v) root.vertices.push_back(v);
  return root;
}

std::vector<CrossEdge> siblingBoundary(const PartitionNode& child, const PartitionNode& sibling) {
  std::vector<CrossEdge> out;
  for (const CrossEdge& ce : child.crossEdges) {
    if (std::binary_search(sibling.vertices.begin(), sibling.vertices.end(), ce.front)) {
      out.push_back(ce);
    }
  }
  return out;
}

TEST(SmoothedWeights, Examples) {
  EXPECT_EQ(smoothed_weights(7, 3, 5, 11, 0.0), std::make_pair(7.0, 3.0));
  EXPECT_EQ(smoothed_weights(4, 6, 10, 10, 1.0), std::make_pair(2.0, 3.0));
  const auto [a, b] = smoothed_weights(4, 4, 3, 1, 0.5);
  EXPECT_DOUBLE_EQ(a, 24.0 / 7.0);
  EXPECT_DOUBLE_EQ(b, 8.0 / 5.0);
}

TEST(SmoothedWeights, RejectsBadAlphaAndEmptyClusters) {
  EXPECT_THROW(smoothed_weights(1, 1, 1, 1, 1.5), DomainError);
  EXPECT_THROW(smoothed_weights(1, 1, 1, 1, -0.1), DomainError);
  EXPECT_THROW(smoothed_weights(1, 1, 0, 1, 0.5), DomainError);
}

TEST(SmoothedWeights, AlphaZeroIsIdentity) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> w(0.0, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double w1 = w(rng);
    const double w2 = w(rng);
    const auto got = smoothed_weights(w1, w2, 1 + rng() % 100000, 1 + rng() % 100000, 0.0);
    EXPECT_EQ(got, std::make_pair(w1, w2));
  }
}

TEST(SelectSeeds, PathEndpoints) {
  const RoadNetwork net = path_graph({1, 1, 1});
  const auto [a, b] = select_seeds(net, whole(net).vertices);
  EXPECT_EQ(std::minmax(a, b), std::minmax(VertexId{0}, VertexId{3}));
}

TEST(SelectSeeds, TwoVertices) {
  const RoadNetwork net = path_graph({2.5});
  const auto [a, b] = select_seeds(net, whole(net).vertices);
  EXPECT_EQ(std::minmax(a, b), std::minmax(VertexId{0}, VertexId{1}));
}

TEST(SelectSeeds, GridPairIsNearDiameter) {
  const RoadNetwork net = unit_grid(6, 6);
  const auto table = testing::all_pairs(net);
  double diameter = 0.0;
  for (const auto& row : table) diameter = std::max(diameter, *std::max_element(row.begin(), row.end()));
  const auto [a, b] = select_seeds(net, whole(net).vertices);
  EXPECT_NE(a, b);
  EXPECT_GE(table[a][b], 0.8 * diameter);
}

TEST(SelectSeeds, RejectsTinyRegion) {
  const RoadNetwork net = path_graph({1});
  const std::vector<VertexId> one{0};
  EXPECT_THROW(select_seeds(net, one), DomainError);
}

TEST(SelectSeeds, DisconnectedRegionUsesLargestComponent) {
  const std::vector<RawEdge> edges{{1, 2, 1.0}, {2, 3, 1.0}, {3, 4, 1.0}};
  const RoadNetwork net = RoadNetwork::fromEdges(6, edges);
  const auto [a, b] = select_seeds(net, whole(net).vertices);
  EXPECT_EQ(std::minmax(a, b), std::minmax(VertexId{1}, VertexId{4}));
  const RoadNetwork isolated = RoadNetwork::fromEdges(3, std::vector<RawEdge>{});
  EXPECT_EQ(select_seeds(isolated, whole(isolated).vertices), std::make_pair(VertexId{0}, VertexId{1}));
}

TEST(Bisect, HeavyMiddleEdgeSeparatesPath) {
  const RoadNetwork net = path_graph({1, 9, 1});
  const auto [left, right] = bisect(net, whole(net), 0, 3, {0.0});
  EXPECT_EQ(left.vertices, (std::vector<VertexId>{0, 1}));
  EXPECT_EQ(right.vertices, (std::vector<VertexId>{2, 3}));
  ASSERT_EQ(left.crossEdges.size(), 1u);
  EXPECT_EQ(left.crossEdges[0], (CrossEdge{1, 1, 2, 9.0}));
  EXPECT_EQ(right.crossEdges[0], (CrossEdge{1, 2, 1, 9.0}));
  EXPECT_EQ(left.separationDegree, 9.0);
  EXPECT_EQ(right.separationDegree, 9.0);
  EXPECT_EQ(left.borderNodes, (std::vector<VertexId>{1}));
}

TEST(Bisect, SingleEdge) {
  const RoadNetwork net = path_graph({4});
  const auto [left, right] = bisect(net, whole(net), 1, 0, {0.5});
  EXPECT_EQ(left.vertices, (std::vector<VertexId>{1}));
  EXPECT_EQ(right.vertices, (std::vector<VertexId>{0}));
  ASSERT_EQ(left.crossEdges.size(), 1u);
  EXPECT_EQ(left.crossEdges[0].weight, 4.0);
}

TEST(Bisect, CycleCutsBothHeavyEdges) {
  // 0-1 (1), 1-2 (1), 2-3 (5), 3-0 (5)
  const std::vector<RawEdge> edges{{0, 1, 1}, {1, 2, 1}, {2, 3, 5}, {3, 0, 5}};
  const RoadNetwork net = RoadNetwork::fromEdges(4, edges);
  const auto [left, right] = bisect(net, whole(net), 1, 3, {0.0});
  EXPECT_EQ(left.vertices, (std::vector<VertexId>{0, 1, 2}));
  EXPECT_EQ(right.vertices, (std::vector<VertexId>{3}));
  ASSERT_EQ(left.crossEdges.size(), 2u);
  for (const CrossEdge& ce : left.crossEdges) EXPECT_EQ(ce.weight, 5.0);
  EXPECT_EQ(left.separationDegree, 5.0);
}

TEST(Bisect, RejectsBadSeeds) {
  const RoadNetwork net = path_graph({1, 1});
  PartitionNode part;
  part.vertices = {0, 1};
  EXPECT_THROW(bisect(net, part, 0, 2, {0.0}), DomainError);
  EXPECT_THROW(bisect(net, part, 1, 1, {0.0}), DomainError);
}

TEST(Bisect, DisconnectedLeftoversJoinSmallerCluster) {
  // Component {0,1,2} holds the seeds; {3,4} and {5} are unreachable.
  const std::vector<RawEdge> edges{{0, 1, 1}, {1, 2, 1}, {3, 4, 1}};
  const RoadNetwork net = RoadNetwork::fromEdges(6, edges);
  const auto [left, right] = bisect(net, whole(net), 0, 2, {0.0});
  EXPECT_EQ(left.population() + right.population(), 6u);
  // Left grows to {0,1}; {3,4} goes to the smaller right, then {5} to left.
  EXPECT_EQ(left.vertices, (std::vector<VertexId>{0, 1, 5}));
  EXPECT_EQ(right.vertices, (std::vector<VertexId>{2, 3, 4}));
}

TEST(Bisect, PathMaximalityOnRandomPaths) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t edges = 2 + rng() % 30;
    std::vector<double> weights;
    while (weights.size() < edges) {
      const double w = dyadic_weight(rng(), 10.0);
      if (std::find(weights.begin(), weights.end(), w) == weights.end()) weights.push_back(w);
    }
    const RoadNetwork net = path_graph(weights);
    const auto [a, b] = select_seeds(net, whole(net).vertices);
    const auto [left, right] = bisect(net, whole(net), a, b, {0.0});
    const auto boundary = siblingBoundary(left, right);
    ASSERT_EQ(boundary.size(), 1u);
    EXPECT_EQ(boundary[0].weight, *std::max_element(weights.begin(), weights.end()));
  }
}

TEST(Bisect, SmoothingReducesImbalance) {
  // Heavier edge near one end: alpha = 0 stops at it, alpha = 1 crosses it.
  std::vector<double> weights(21, 1.0);
  weights[3] = 3.0;
  const RoadNetwork net = path_graph(weights);
  const auto imbalance = [&](double alpha) {
    const auto [l, r] = bisect(net, whole(net), 0, 21, {alpha});
    const auto a = l.population();
    const auto b = r.population();
    return a > b ? a - b : b - a;
  };
  EXPECT_LT(imbalance(1.0), imbalance(0.0));
}

TEST(BuildHierarchy, SmallGraphIsSingleLeaf) {
  const RoadNetwork net = make_random_network(10, 3, 1);
  const auto h = build_hierarchy(net, 10, {0.0});
  EXPECT_EQ(h.size(), 1u);
  EXPECT_TRUE(h.root().isLeaf());
  EXPECT_EQ(h.root().population(), 10u);
  EXPECT_TRUE(h.root().crossEdges.empty());
  EXPECT_EQ(h.root().separationDegree, kInfinity);
}

TEST(BuildHierarchy, EightPathBalancedAtAlphaOne) {
  const RoadNetwork net = path_graph(std::vector<double>(7, 1.0));
  const auto h = build_hierarchy(net, 2, {1.0});
  ASSERT_EQ(h.size(), 7u);
  EXPECT_EQ(h.leafCount(), 4u);
  for (const PartitionNode& n : h.nodes()) {
    if (n.isLeaf()) {
      EXPECT_EQ(n.population(), 2u);
      EXPECT_GE(n.id, 3u);  // depth 2
    }
  }
  const auto halves = std::minmax(h.node(1).vertices, h.node(2).vertices);
  EXPECT_EQ(halves.first, (std::vector<VertexId>{0, 1, 2, 3}));
  EXPECT_EQ(halves.second, (std::vector<VertexId>{4, 5, 6, 7}));
}

TEST(BuildHierarchy, RejectsBadArguments) {
  const RoadNetwork net = path_graph({1});
  EXPECT_THROW(build_hierarchy(net, 0, {0.0}), DomainError);
  EXPECT_THROW(build_hierarchy(net, 1, {2.0}), DomainError);
}

void checkInvariants(const RoadNetwork& net, const PartitionHierarchy& h) {
  std::vector<int> leafHits(net.vertexCount(), 0);
  for (const PartitionNode& n : h.nodes()) {
    EXPECT_EQ(n.crossEdges, testing::scan_cross_edges(net, n.vertices)) << "node " << n.id;
    for (VertexId b : n.borderNodes) {
      EXPECT_TRUE(std::binary_search(n.vertices.begin(), n.vertices.end(), b));
    }
    for (VertexId v : n.vertices) EXPECT_TRUE(h.contains(n.id, v));
    if (n.isLeaf()) {
      EXPECT_LE(n.population(), h.leafSizeLimit());
      for (VertexId v : n.vertices) ++leafHits[v];
      continue;
    }
    const auto& l = h.node(n.left);
    const auto& r = h.node(n.right);
    std::vector<VertexId> both;
    std::set_intersection(l.vertices.begin(), l.vertices.end(), r.vertices.begin(),
                          r.vertices.end(), std::back_inserter(both));
    EXPECT_TRUE(both.empty());
    std::vector<VertexId> unite;
    std::set_union(l.vertices.begin(), l.vertices.end(), r.vertices.begin(), r.vertices.end(),
                   std::back_inserter(unite));
    EXPECT_EQ(unite, n.vertices);
    const auto boundary = siblingBoundary(l, r);
    double minWeight = kInfinity;
    for (const CrossEdge& ce : boundary) minWeight = std::min(minWeight, ce.weight);
    EXPECT_EQ(l.separationDegree, minWeight);
    EXPECT_EQ(r.separationDegree, minWeight);
  }
  for (int hits : leafHits) EXPECT_EQ(hits, 1);
}

TEST(BuildHierarchy, InvariantsOnRandomGraphs) {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const RoadNetwork net = seed % 2 ? make_random_network(150 + 20 * seed, 60, seed)
                                     : make_grid_network(8 + seed, 9, seed);
    for (double alpha : {0.0, 0.5, 1.0}) {
      for (std::size_t leaf : {4u, 16u, 64u}) {
        checkInvariants(net, build_hierarchy(net, leaf, {alpha}));
      }
    }
  }
}

TEST(BuildHierarchy, DisconnectedGraph) {
  const std::vector<RawEdge> edges{{0, 1, 1}, {1, 2, 1}, {3, 4, 2}, {5, 6, 1}, {6, 7, 3}};
  const RoadNetwork net = RoadNetwork::fromEdges(9, edges);
  checkInvariants(net, build_hierarchy(net, 1, {0.25}));
}

std::vector<std::vector<VertexId>> assignments(const PartitionHierarchy& h) {
  std::vector<std::vector<VertexId>> out;
  for (const PartitionNode& n : h.nodes()) out.push_back(n.vertices);
  return out;
}

RoadNetwork scaled(const RoadNetwork& net, double factor) {
  std::vector<RawEdge> edges;
  for (const Edge& e : net.edges()) edges.push_back({e.a, e.b, e.weight * factor});
  return RoadNetwork::fromEdges(net.vertexCount(), edges);
}

TEST(BuildHierarchy, WeightScalingLeavesAssignmentsUnchanged) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const RoadNetwork net = make_random_network(200, 80, seed);
    for (double alpha : {0.0, 0.3, 1.0}) {
      const auto base = assignments(build_hierarchy(net, 16, {alpha}));
      for (double c : {0.5, 2.0, 8.0}) {
        EXPECT_EQ(assignments(build_hierarchy(scaled(net, c), 16, {alpha})), base)
            << "seed " << seed << " alpha " << alpha << " c " << c;
      }
    }
  }
  // Integer weights stay exact under any integer factor.
  std::mt19937_64 rng(5);
  std::vector<RawEdge> edges;
  for (VertexId v = 1; v < 120; ++v) {
    edges.push_back({static_cast<VertexId>(rng() % v), v, static_cast<double>(1 + rng() % 20)});
  }
  const RoadNetwork ints = RoadNetwork::fromEdges(120, edges);
  const auto base = assignments(build_hierarchy(ints, 8, {0.5}));
  EXPECT_EQ(assignments(build_hierarchy(scaled(ints, 3.0), 8, {0.5})), base);
}

class HierarchyFile : public ::testing::Test {
 protected:
  void SetUp() override {
    path_ = std::filesystem::temp_directory_path() /
            ("roadjoin_h_" + std::to_string(std::random_device{}()) + ".json");
  }
  void TearDown() override { std::filesystem::remove(path_); }
  std::filesystem::path path_;
};

TEST_F(HierarchyFile, RoundTrip) {
  const RoadNetwork net = path_graph(std::vector<double>(7, 1.0));
  auto h = build_hierarchy(net, 2, {1.0});
  h.setSource({"nodes.txt", "edges.txt"});
  save_hierarchy(h, path_);
  const auto back = load_hierarchy(path_);
  EXPECT_EQ(back, h);
  ASSERT_TRUE(back.source().has_value());
  EXPECT_EQ(back.source()->edges, "edges.txt");

  const RoadNetwork big = make_random_network(300, 120, 17);
  const auto hb = build_hierarchy(big, 20, {0.4});
  save_hierarchy(hb, path_);
  EXPECT_EQ(load_hierarchy(path_), hb);
}

TEST_F(HierarchyFile, RejectsEmptyAndWrongVersion) {
  std::ofstream(path_) << "";
  EXPECT_THROW(load_hierarchy(path_), FormatError);
  std::ofstream(path_) << R"({"version": 99, "vertexCount": 1, "leafSizeLimit": 1, "alpha": 0, "nodes": []})";
  EXPECT_THROW(load_hierarchy(path_), FormatError);
  std::ofstream(path_) << R"({"version": 1, "vertexCount": 2, "leafSizeLimit": 1, "alpha": 0,
    "nodes": [{"id": 0, "parent": null, "left": null, "right": null,
               "separationDegree": null, "vertices": [0], "crossEdges": []}]})";
  EXPECT_THROW(load_hierarchy(path_), FormatError);  // vertex 1 uncovered
  std::ofstream(path_) << R"({"version": 1, "nodes": "x"})";
  EXPECT_THROW(load_hierarchy(path_), FormatError);
}

}  // namespace
}  // namespace roadjoin
