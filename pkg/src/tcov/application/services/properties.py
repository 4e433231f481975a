"""Independent re-derivations used to cross-check canonical forms and covers."""

from __future__ import annotations

import itertools
import random
from collections.abc import Sequence

from ...domain.errors import PrimeMismatchError
from ...domain.graph import WeightedGraph
from ...domain.pcover import PCover, build_source, switch


def relabel_cover(cover: PCover, permutation: Sequence[int]) -> PCover:
    """Rename every cell ``x`` of the target to ``permutation[x]``."""
    graph = cover.target
    size = graph.num_cells
    involution = [0] * size
    root = [0] * size
    for x in range(size):
        involution[permutation[x]] = permutation[graph.involution[x]]
        root[permutation[x]] = permutation[graph.root[x]]
    renamed = WeightedGraph(
        involution=tuple(involution),
        root=tuple(root),
        vertex_genus={permutation[v]: graph.genus_of(v) for v in graph.vertices},
    )
    return PCover(
        p=cover.p,
        target=renamed,
        dilated_vertices=frozenset(permutation[v] for v in cover.dilated_vertices),
        dilated_edges=frozenset(
            renamed.edge_of(permutation[graph.edge(e)[0]]) for e in cover.dilated_edges
        ),
        flow={permutation[h]: value for h, value in cover.flow.items()},
        gains={permutation[h]: value for h, value in cover.gains.items()},
    )


def random_relabel(cover: PCover, rng: random.Random) -> PCover:
    permutation = list(range(cover.target.num_cells))
    rng.shuffle(permutation)
    return relabel_cover(cover, permutation)


def random_switch(cover: PCover, rng: random.Random) -> PCover:
    for v in cover.target.vertices:
        if not cover.is_dilated_vertex(v):
            cover = switch(cover, v, rng.randrange(cover.p))
    return cover


def _descriptor(cover: PCover, h: int, vertex_image: dict[int, int]) -> tuple:
    graph = cover.target
    e = graph.edge_of(h)
    k = graph.involution[h]
    if cover.is_dilated_edge(e):
        data: tuple = ("flow", cover.flow[h])
    elif cover.carries_gain(e):
        data = ("gain", cover.gain_along(h))
    else:
        data = ("free",)
    return (vertex_image[graph.root[h]], vertex_image[graph.root[k]], data)


def _edge_multiset(cover: PCover, vertex_image: dict[int, int]) -> list[tuple]:
    graph = cover.target
    return sorted(
        min(_descriptor(cover, h, vertex_image), _descriptor(cover, k, vertex_image))
        for h, k in graph.edges
    )


def brute_force_isomorphic(a: PCover, b: PCover) -> bool:
    """Search vertex bijections and switchings for an isomorphism of covers."""
    if a.p != b.p:
        raise PrimeMismatchError(f"cannot compare covers over Z/{a.p} and Z/{b.p}")
    ga, gb = a.target, b.target
    if len(ga.vertices) != len(gb.vertices) or ga.num_edges != gb.num_edges:
        return False
    target = _edge_multiset(b, {v: v for v in gb.vertices})
    free = [v for v in ga.vertices if not a.is_dilated_vertex(v)]
    for images in itertools.permutations(gb.vertices):
        image = dict(zip(ga.vertices, images))
        if any(
            ga.genus_of(v) != gb.genus_of(image[v])
            or a.is_dilated_vertex(v) != b.is_dilated_vertex(image[v])
            for v in ga.vertices
        ):
            continue
        for shifts in itertools.product(range(a.p), repeat=len(free)):
            switched = a
            for v, s in zip(free, shifts):
                if s:
                    switched = switch(switched, v, s)
            if _edge_multiset(switched, image) == target:
                return True
    return False


def riemann_hurwitz_holds(cover: PCover) -> bool:
    """Local condition at every source vertex and the global genus p(g - 1) + 1."""
    lifted = build_source(cover)
    if not lifted.local_riemann_hurwitz_holds(cover):
        return False
    if not (lifted.action_is_automorphism(cover.p) and lifted.quotient_matches(cover)):
        return False
    return lifted.source.genus() == cover.p * (cover.target.genus() - 1) + 1
