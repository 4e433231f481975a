"""Named covers used as fixtures and as comparison targets by the locus classifiers."""

from __future__ import annotations

from dataclasses import dataclass

from .graph import WeightedGraph, dumbbell_graph, from_edge_list, theta_graph
from .pcover import PCover, make_cover


@dataclass(frozen=True, slots=True)
class LoopSide:
    """One end of a dumbbell: a free vertex with a loop gain, or a dilated vertex with a loop flow."""

    dilated: bool
    value: int


def free_side(gain: int) -> LoopSide:
    return LoopSide(dilated=False, value=gain)


def dilated_side(flow: int) -> LoopSide:
    return LoopSide(dilated=True, value=flow)


# --------------------------------------------------------------------- #
# One-edge covers
# --------------------------------------------------------------------- #
def ring(g: int, p: int, i: int) -> PCover:
    return make_cover(p, from_edge_list([g - 1], [(0, 0)]), dilated_vertices=[0], dilated_flows={0: i})


def butterfly(g: int, p: int) -> PCover:
    return make_cover(p, from_edge_list([g - 1], [(0, 0)]), dilated_vertices=[0])


def spiral(g: int, p: int, a: int) -> PCover:
    return make_cover(p, from_edge_list([g - 1], [(0, 0)]), gains={0: a})


def equivariant_bridge(g: int, p: int, h: int) -> PCover:
    """Equivariant h-bridge: dilated end of genus g-h, free end of genus h, free edge."""
    return make_cover(p, from_edge_list([g - h, h], [(0, 1)]), dilated_vertices=[0])


def parallel_bridge(g: int, p: int, h: int) -> PCover:
    """Parallel h-bridge: both ends dilated (genera g-h and h), free edge with p parallel lifts."""
    return make_cover(p, from_edge_list([g - h, h], [(0, 1)]), dilated_vertices=[0, 1])


# --------------------------------------------------------------------- #
# Genus-2 maximal covers
# --------------------------------------------------------------------- #
def free_theta(p: int, i: int, j: int, k: int) -> PCover:
    return make_cover(p, theta_graph(), gains={0: i, 1: j, 2: k})


def dilated_theta(p: int, i: int, j: int, k: int) -> PCover:
    return make_cover(p, theta_graph(), dilated_vertices=[0, 1], dilated_flows={0: i, 1: j, 2: k})


def mixed_theta(p: int, i: int) -> PCover:
    """Two dilated edges with flows i and -i plus one free edge."""
    return make_cover(p, theta_graph(), dilated_vertices=[0, 1], dilated_flows={0: i, 1: -i})


def dumbbell(p: int, left: LoopSide, right: LoopSide) -> PCover:
    graph = dumbbell_graph()
    dilated = [v for v, side in ((0, left), (1, right)) if side.dilated]
    flows = {e: side.value for e, side in ((0, left), (2, right)) if side.dilated}
    gains = {e: side.value for e, side in ((0, left), (2, right)) if not side.dilated}
    if not dilated:
        gains[1] = 0
    return make_cover(p, graph, dilated_vertices=dilated, dilated_flows=flows, gains=gains)


# --------------------------------------------------------------------- #
# Genus-3 two-edge targets
# --------------------------------------------------------------------- #
def genus3_two_edge_targets() -> list[WeightedGraph]:
    """The five stable genus-3 graphs with two edges."""
    return [
        from_edge_list([1], [(0, 0), (0, 0)]),
        from_edge_list([1, 1], [(0, 0), (0, 1)]),
        from_edge_list([0, 2], [(0, 0), (0, 1)]),
        from_edge_list([1, 1, 1], [(0, 1), (1, 2)]),
        from_edge_list([1, 1], [(0, 1), (0, 1)]),
    ]


def distinguished_one_cells(p: int) -> list[PCover]:
    """Genus-3 two-edge covers outside the bridge locus whose edges are swapped by an automorphism."""
    path, parallel = genus3_two_edge_targets()[3:]
    return [
        make_cover(p, path, dilated_vertices=[0, 1, 2]),
        make_cover(p, parallel, dilated_vertices=[0, 1]),
    ]
