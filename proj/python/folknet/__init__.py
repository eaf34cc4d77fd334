"""Tag correlation trees and user diversity for folksonomy data."""

from ._core import (
    CorrelationMatrix,
    DataError,
    IslandTree,
    Network,
    activity_color,
    build_network,
    build_tree,
    entropy,
    generate_planted,
    rand_index,
    read_network,
    read_triples,
)

__all__ = [
    "CorrelationMatrix",
    "DataError",
    "IslandTree",
    "Network",
    "activity_color",
    "build_network",
    "build_tree",
    "entropy",
    "generate_planted",
    "rand_index",
    "read_network",
    "read_triples",
]
