#include "roadjoin/synthetic.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace roadjoin {

double dyadic_weight(std::uint64_t bits, double maxWeight) {
  constexpr double kScale = 1048576.0;  // 2^20
  const auto steps = static_cast<std::uint64_t>(std::floor(maxWeight * kScale));
  return static_cast<double>(1 + bits % steps) / kScale;
}

RoadNetwork make_grid_network(std::size_t width, std::size_t height, std::uint64_t seed,
                              double maxWeight) {
  std::mt19937_64 rng(seed);
  std::vector<VertexRecord> vertices;
  vertices.reserve(width * height);
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      vertices.push_back({static_cast<ExternalId>(y * width + x), static_cast<double>(x),
                          static_cast<double>(y)});
    }
  }
  std::vector<RawEdge> edges;
  const auto at = [&](std::size_t x, std::size_t y) { return static_cast<VertexId>(y * width + x); };
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      if (x + 1 < width) edges.push_back({at(x, y), at(x + 1, y), dyadic_weight(rng(), maxWeight)});
      if (y + 1 < height) edges.push_back({at(x, y), at(x, y + 1), dyadic_weight(rng(), maxWeight)});
    }
  }
  return RoadNetwork(std::move(vertices), edges);
}

RoadNetwork make_random_network(std::size_t n, std::size_t extraEdges, std::uint64_t seed,
                                double maxWeight) {
  std::mt19937_64 rng(seed);
  std::vector<RawEdge> edges;
  for (std::size_t v = 1; v < n; ++v) {
    edges.push_back({static_cast<VertexId>(rng() % v), static_cast<VertexId>(v),
                     dyadic_weight(rng(), maxWeight)});
  }
  for (std::size_t i = 0; i < extraEdges && n > 1; ++i) {
    const auto a = static_cast<VertexId>(rng() % n);
    const auto b = static_cast<VertexId>(rng() % n);
    if (a != b) edges.push_back({a, b, dyadic_weight(rng(), maxWeight)});
  }
  return RoadNetwork::fromEdges(n, edges);
}

}  // namespace roadjoin
