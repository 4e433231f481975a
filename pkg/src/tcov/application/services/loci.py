from __future__ import annotations

import itertools
import logging
from collections.abc import Iterable

import networkx as nx

from ...domain.errors import AscentLawError, AssumptionViolatedError, DilatedCoverError
from ...domain.families import equivariant_bridge
from ...domain.graph import WeightedGraph
from ...domain.models import BridgeArticulation, CellLoci, DeltaComplex, LociReport
from ...domain.pcover import (
    PCover,
    build_source,
    canonical_cover,
    canonical_form,
    contract,
    contract_all_except,
    cover_cell_automorphisms,
    preimage_components,
)
from .delta_complex import subcomplex_closure

logger = logging.getLogger("tcov.loci")

LOCI = ("w", "lw", "br", "scon", "par")


# --------------------------------------------------------------------- #
# Weight locus
# --------------------------------------------------------------------- #
def fiber_genus(cover: PCover, v: int) -> int:
    """Total genus of the preimage of ``v``."""
    if cover.is_dilated_vertex(v):
        return cover.source_vertex_genus(v)
    return cover.p * cover.target.genus_of(v)


def weight_vertices_direct(cover: PCover) -> list[int]:
    return [v for v in cover.target.vertices if fiber_genus(cover, v) >= cover.p]


def weight_vertices_by_cases(cover: PCover) -> list[int]:
    p = cover.p
    found = []
    for v in cover.target.vertices:
        g = cover.target.genus_of(v)
        if not cover.is_dilated_vertex(v):
            hit = g >= 1
        else:
            d = cover.dilation_count(v)
            hit = (g == 0 and d * (p - 1) >= 2 * (2 * p - 1)) or (d >= 2 and g >= 1) or g >= 2
        if hit:
            found.append(v)
    return found


def in_weight_locus(cover: PCover, route: str = "direct") -> bool:
    if route == "cases":
        return bool(weight_vertices_by_cases(cover))
    return bool(weight_vertices_direct(cover))


# --------------------------------------------------------------------- #
# Loops and bridges
# --------------------------------------------------------------------- #
def equivariant_loop_edges(cover: PCover) -> set[int]:
    """Free loops whose preimage is p loops."""
    graph = cover.target
    found = set()
    for e in graph.classify_edges().loops:
        if cover.is_dilated_edge(e):
            continue
        v = graph.endpoints(e)[0]
        if cover.is_dilated_vertex(v) or cover.gain_along(graph.edge(e)[0]) == 0:
            found.add(e)
    return found


def _lifts_are_bridges(cover: PCover, e: int) -> bool:
    lifted = build_source(cover, check=False)
    source = lifted.source
    lifts = [f for f, (h, _) in enumerate(source.edges) if cover.target.edge_of(lifted.projection[h]) == e]
    return all(source.is_bridge(f) for f in lifts)


def lifted_bridge_edges(cover: PCover) -> set[int]:
    """Free bridges all of whose p lifts are bridges of the source."""
    graph = cover.target
    return {
        e
        for e in graph.classify_edges().bridges
        if not cover.is_dilated_edge(e) and _lifts_are_bridges(cover, e)
    }


def equivariant_h_bridges(cover: PCover) -> dict[int, int]:
    """Bridges whose complement contraction is the equivariant h-bridge, with their h."""
    g = cover.target.genus()
    found: dict[int, int] = {}
    for e in sorted(cover.target.classify_edges().bridges):
        reduced = contract_all_except(cover, [e])
        key = canonical_form(reduced).key_bytes
        for h in range(1, g):
            if key == canonical_form(equivariant_bridge(g, cover.p, h)).key_bytes:
                found[e] = h
                break
    return found


def equivariant_loops_at(cover: PCover, v: int) -> int:
    graph = cover.target
    return sum(1 for e in equivariant_loop_edges(cover) if graph.endpoints(e)[0] == v)


def max_1bridge_uncontractions(cover: PCover, v: int) -> int:
    graph = cover.target
    if graph.stability_excess(v) == 1:
        return 0
    return min(graph.genus_of(v), fiber_genus(cover, v) // cover.p) + equivariant_loops_at(cover, v)


# --------------------------------------------------------------------- #
# Cut components and articulation points
# --------------------------------------------------------------------- #
def has_trivial_preimage_away(cover: PCover, v: int, edges: frozenset[int]) -> bool:
    """Preimage of the cut component is p disjoint copies, or p copies glued at ``v``."""
    graph = cover.target
    vertices = {x for e in edges for x in graph.endpoints(e)} | {v}
    if any(cover.is_dilated_edge(e) for e in edges):
        return False
    if any(cover.is_dilated_vertex(x) for x in vertices if x != v):
        return False
    if not cover.is_dilated_vertex(v):
        return preimage_components(cover, edges, vertices) == cover.p
    lifted = build_source(cover, check=False)
    source = lifted.source
    hub = next(x for x in source.vertices if lifted.projection[x] == v)
    chosen = [
        f for f, (h, _) in enumerate(source.edges) if graph.edge_of(lifted.projection[h]) in edges
    ]
    # Split the hub so that copies meeting only at the lift of v stay apart.
    split = nx.Graph()
    for f in chosen:
        split.add_node(("edge", f))
        for x in source.endpoints(f):
            if x != hub:
                split.add_edge(("edge", f), ("vertex", x))
    return nx.number_connected_components(split) == cover.p


def subgraph_genus(graph: WeightedGraph, edges: frozenset[int], v: int) -> int:
    sub, _ = graph.edge_subgraph(edges, extra_vertices=(v,))
    return sub.genus()


def valence_in(graph: WeightedGraph, edges: frozenset[int], v: int) -> int:
    return sum(1 for h in graph.half_edges_at(v) if graph.edge_of(h) in edges)


def bridge_articulation_points(cover: PCover, h: int) -> BridgeArticulation:
    """Per-vertex count of equivariant h-bridge uncontractions and the articulation points."""
    if h >= 2:
        _check_bridge_assumption(cover, h)
    graph = cover.target
    counts: dict[int, int] = {}
    points: list[int] = []
    for v in graph.vertices:
        g_v = graph.genus_of(v)
        trivial = [
            edges
            for edges in graph.cut_component_edges(v)
            if has_trivial_preimage_away(cover, v, edges)
            and subgraph_genus(graph, edges, v) == h + g_v
        ]
        if trivial:
            points.append(v)
        qualifying = [edges for edges in trivial if valence_in(graph, edges, v) >= 2]
        r = len(qualifying)
        rest = graph.valence(v) - sum(valence_in(graph, edges, v) for edges in qualifying)
        count = r - 1 if 2 * g_v - 2 + r + rest <= 0 else r
        counts[v] = max(count, 0)
    return BridgeArticulation(h=h, counts=counts, articulation_points=points)


def _check_bridge_assumption(cover: PCover, h: int) -> None:
    bridges = equivariant_h_bridges(cover)
    if any(k < h for k in bridges.values()):
        raise AssumptionViolatedError(f"cover has an equivariant bridge of type below {h}")
    if any(max_1bridge_uncontractions(cover, v) for v in cover.target.vertices):
        raise AssumptionViolatedError("an equivariant 1-bridge can be uncontracted")
    for lower in range(2, h):
        if any(bridge_articulation_points(cover, lower).counts.values()):
            raise AssumptionViolatedError(f"an equivariant {lower}-bridge can be uncontracted")


# --------------------------------------------------------------------- #
# Spirals
# --------------------------------------------------------------------- #
def normalized_ascent(a: int, p: int) -> int:
    a %= p
    return min(a, p - a)


def spiral_edges(cover: PCover) -> dict[int, int]:
    """Edges whose complement contraction is a spiral, with the normalized ascent."""
    found: dict[int, int] = {}
    for e in range(cover.target.num_edges):
        reduced = contract_all_except(cover, [e])
        graph = reduced.target
        if reduced.dilated_vertices or not graph.is_loop(0):
            continue
        a = reduced.gain_along(graph.edge(0)[0])
        if a:
            found[e] = normalized_ascent(a, cover.p)
    return found


def _potentials(cover: PCover, edges: Iterable[int], nodes: Iterable[int]) -> dict[int, int] | None:
    """Switching that zeroes every gain on ``edges``; None when some cycle has non-zero ascent."""
    graph = cover.target
    adjacency: dict[int, list[tuple[int, int]]] = {x: [] for x in nodes}
    for e in edges:
        h, k = graph.edge(e)
        adjacency[graph.root[h]].append((h, graph.root[k]))
        adjacency[graph.root[k]].append((k, graph.root[h]))
    potentials: dict[int, int] = {}
    for start in adjacency:
        if start in potentials:
            continue
        potentials[start] = 0
        queue = [start]
        while queue:
            u = queue.pop(0)
            for h, w in adjacency[u]:
                value = (potentials[u] - cover.gain_along(h)) % cover.p
                if w not in potentials:
                    potentials[w] = value
                    queue.append(w)
                elif potentials[w] != value:
                    return None
    return potentials


def spiral_component_ascents(cover: PCover, v: int, edges: frozenset[int]) -> set[int]:
    """Ascents a for which the cut component is a spiral cut component of ascent a."""
    graph = cover.target
    nodes = {x for e in edges for x in graph.endpoints(e)} | {v}
    at_v = [h for h in graph.half_edges_at(v) if graph.edge_of(h) in edges]
    ascents: set[int] = set()
    for size in range(1, len(at_v) + 1):
        for chosen in itertools.combinations(at_v, size):
            removed = {graph.edge_of(h) for h in chosen}
            remaining = edges - removed
            sub = graph.to_networkx(remaining).subgraph(nodes)
            if not nx.is_connected(sub):
                continue
            potentials = _potentials(cover, remaining, nodes)
            if potentials is None:
                continue
            values = set()
            for h in chosen:
                k = graph.involution[h]
                shift = potentials[graph.root[h]] - potentials[graph.root[k]]
                values.add((cover.gain_along(k) + shift) % cover.p)
            if len(values) == 1:
                ascents |= values
    return ascents


def spiral_point_ascents(cover: PCover) -> dict[int, set[int]]:
    """Normalized ascents each vertex admits as a spiral articulation point."""
    if not cover.is_free():
        raise DilatedCoverError("spiral articulation points are defined for free covers")
    graph = cover.target
    found: dict[int, set[int]] = {}
    for v in graph.vertices:
        common: set[int] | None = None
        for edges in graph.cut_component_edges(v):
            ascents = {a for a in spiral_component_ascents(cover, v, edges) if a}
            closed = ascents | {(-a) % cover.p for a in ascents}
            common = closed if common is None else common & closed
        if common:
            found[v] = {normalized_ascent(a, cover.p) for a in common}
    return found


def spiral_articulation_points(cover: PCover) -> dict[int, int]:
    """Spiral articulation points mapped to their common normalized ascent."""
    candidates = spiral_point_ascents(cover)
    if not candidates:
        return {}
    shared = set.intersection(*candidates.values())
    if not shared:
        raise AscentLawError(
            "spiral articulation points disagree on the ascent: "
            + ", ".join(f"{v}: {sorted(a)}" for v, a in sorted(candidates.items()))
        )
    ascent = min(shared)
    return {v: ascent for v in sorted(candidates)}


def spiral_uncontraction_groups(covers: Iterable[PCover]) -> dict[tuple[bytes, int], set[bytes]]:
    """Group covers with a single spiral edge by what contracting it yields.

    The group key is the canonical key of the contraction together with the
    orbit of the vertex the spiral edge collapses to; the value is the set of
    keys of the uncontracted covers.
    """
    groups: dict[tuple[bytes, int], set[bytes]] = {}
    for cover in covers:
        spirals = spiral_edges(cover)
        if len(spirals) != 1:
            continue
        (e,) = spirals
        contracted = contract(cover, e)
        if not contracted.is_free():
            continue
        v = cover.target.root[cover.target.edge(e)[0]]
        _, index = cover.target.contract_with_map(e)
        image = index[v]
        if image not in spiral_articulation_points(contracted):
            continue
        form = canonical_form(contracted)
        position = form.cell_map()[image]
        orbit = min(sigma[position] for sigma in cover_cell_automorphisms(canonical_cover(form)))
        groups.setdefault((form.key_bytes, orbit), set()).add(canonical_form(cover).key_bytes)
    return groups


# --------------------------------------------------------------------- #
# Sparse connection and parallel pairs
# --------------------------------------------------------------------- #
def sparse_connection_witness(cover: PCover) -> tuple[int, frozenset[int]] | None:
    """An edge and a component of its complement whose preimage is disconnected."""
    graph = cover.target
    for e in range(graph.num_edges):
        rest = graph.to_networkx(f for f in range(graph.num_edges) if f != e)
        for nodes in sorted(nx.connected_components(rest), key=min):
            component = frozenset(
                f for f in range(graph.num_edges) if f != e and graph.endpoints(f)[0] in nodes
            )
            if preimage_components(cover, component, nodes) > 1:
                return e, component
    return None


def equivariant_parallel_pairs(cover: PCover) -> list[tuple[int, int]]:
    """Parallel free edges whose 2-cycle lifts to p separate 2-cycles."""
    graph = cover.target
    found = []
    for group in graph.classify_edges().parallel_classes:
        for e1, e2 in itertools.combinations(sorted(group), 2):
            if cover.is_dilated_edge(e1) or cover.is_dilated_edge(e2):
                continue
            if not cover.carries_gain(e1):
                found.append((e1, e2))
                continue
            h1, _ = graph.edge(e1)
            u = graph.root[h1]
            h2 = next(h for h in graph.edge(e2) if graph.root[h] == u)
            if cover.gain_along(h1) == cover.gain_along(h2):
                found.append((e1, e2))
    return found


# --------------------------------------------------------------------- #
# Locus generators and subcomplexes
# --------------------------------------------------------------------- #
def generator_flags(cover: PCover) -> CellLoci:
    flags = CellLoci()
    weight = weight_vertices_direct(cover)
    if weight:
        flags.w = True
        flags.witness = f"weight vertex {weight[0]}"
    loops = equivariant_loop_edges(cover)
    bridges = equivariant_h_bridges(cover)
    b1 = [e for e, h in bridges.items() if h == 1]
    if loops or b1:
        flags.lw = True
        flags.witness = flags.witness or (
            f"equivariant loop {min(loops)}" if loops else f"equivariant 1-bridge {b1[0]}"
        )
    if bridges:
        e = min(bridges)
        flags.br = True
        flags.witness = flags.witness or f"equivariant {bridges[e]}-bridge {e}"
    sparse = sparse_connection_witness(cover)
    if sparse is not None:
        flags.scon = True
        flags.witness = flags.witness or f"edge {sparse[0]} splits off {sorted(sparse[1])}"
    pairs = equivariant_parallel_pairs(cover)
    if pairs:
        flags.par = True
        flags.witness = flags.witness or f"parallel pair {pairs[0]}"
    return flags


def classify(complex_: DeltaComplex) -> LociReport:
    """Generators and closed memberships of all five nested loci."""
    generators = {
        (n, i): generator_flags(cell.representative)
        for n, level in enumerate(complex_.levels)
        for i, cell in enumerate(level)
    }
    membership = {cell: CellLoci(witness=flags.witness) for cell, flags in generators.items()}
    marked: list[tuple[int, int]] = []
    for locus in LOCI:
        marked.extend(cell for cell, flags in generators.items() if getattr(flags, locus))
        closure = subcomplex_closure(complex_, marked)
        for n, origins in enumerate(closure.origin):
            for index in origins:
                setattr(membership[(n, index)], locus, True)
        logger.info("locus %s: %s cells", locus, closure.cell_count())
    return LociReport(genus=complex_.genus, p=complex_.p, generators=generators, membership=membership)


def locus_subcomplex(complex_: DeltaComplex, which: str, report: LociReport | None = None) -> DeltaComplex:
    if which not in LOCI:
        raise ValueError(f"unknown locus {which!r}; expected one of {', '.join(LOCI)}")
    report = report or classify(complex_)
    return subcomplex_closure(complex_, report.cells_in(which))
