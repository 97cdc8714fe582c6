#pragma once

#include <cstdint>

#include "roadjoin/graph.hpp"

namespace roadjoin {

// Weights are drawn uniformly from the dyadic grid {j / 2^20} within
// (0, maxWeight], so every path sum is exact in double precision no matter
// how it is associated.
double dyadic_weight(std::uint64_t bits, double maxWeight);

// width x height lattice, 4-neighbour edges, random weights in (0, maxWeight].
// Coordinates are the lattice positions.
RoadNetwork make_grid_network(std::size_t width, std::size_t height, std::uint64_t seed,
                              double maxWeight = 10.0);

// Random spanning tree over n vertices plus `extraEdges` random chords.
// Always connected.
RoadNetwork make_random_network(std::size_t n, std::size_t extraEdges, std::uint64_t seed,
                                double maxWeight = 10.0);

}  // namespace roadjoin
