"""Parallel k-closest-pairs and distance joins over partitioned road networks."""

from ._roadjoin import (
    DomainError,
    PartitionHierarchy,
    QuerySets,
    RoadJoinError,
    RoadNetwork,
    bounded_dijkstra,
    build_hierarchy,
    closest_pairs,
    distance_join,
    load_hierarchy,
    load_network,
    oracle_closest_pairs,
    sample_sets,
    save_hierarchy,
    smoothed_weights,
)

__all__ = [
    "DomainError",
    "PartitionHierarchy",
    "QuerySets",
    "RoadJoinError",
    "RoadNetwork",
    "bounded_dijkstra",
    "build_hierarchy",
    "closest_pairs",
    "distance_join",
    "load_hierarchy",
    "load_network",
    "oracle_closest_pairs",
    "sample_sets",
    "save_hierarchy",
    "smoothed_weights",
]
