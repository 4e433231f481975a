from __future__ import annotations

import random
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any

import networkx as nx
from sympy import isprime

from .canonical import DecoratedGraphLabeler, Labeling, key_bytes
from .errors import (
    DilatedVertexSwitchError,
    InvalidCoverError,
    OpenWalkError,
    PrimeMismatchError,
    UnknownEdgeError,
    UnknownVertexError,
    WalkThroughDilatedCellError,
)
from .graph import WeightedGraph, build_graph, from_edge_list


@dataclass(frozen=True, slots=True, eq=False)
class PCover:
    """A Z/p-cover described on its target graph.

    ``flow`` maps every half-edge of a dilated edge to a value in ``1..p-1``.
    ``gains`` maps the tail half-edge of every edge with two free endpoints to
    the residue by which crossing the edge from its tail shifts a fibre.
    """

    p: int
    target: WeightedGraph
    dilated_vertices: frozenset[int] = frozenset()
    dilated_edges: frozenset[int] = frozenset()
    flow: Mapping[int, int] = field(default_factory=dict)
    gains: Mapping[int, int] = field(default_factory=dict)

    # ------------------------------------------------------------------ #
    # Cell predicates
    # ------------------------------------------------------------------ #
    def is_dilated_vertex(self, v: int) -> bool:
        return v in self.dilated_vertices

    def is_dilated_edge(self, e: int) -> bool:
        return e in self.dilated_edges

    def is_free(self) -> bool:
        return not self.dilated_vertices

    def carries_gain(self, e: int) -> bool:
        u, w = self.target.endpoints(e)
        return u not in self.dilated_vertices and w not in self.dilated_vertices

    def dilated_half_edges_at(self, v: int) -> tuple[int, ...]:
        return tuple(h for h in self.target.half_edges_at(v) if h in self.flow)

    def dilation_count(self, v: int) -> int:
        return len(self.dilated_half_edges_at(v))

    def gain_along(self, h: int) -> int:
        """Gain picked up when crossing the edge of ``h`` starting at ``root(h)``."""
        if h in self.gains:
            return self.gains[h] % self.p
        k = self.target.involution[h]
        if k in self.gains:
            return (-self.gains[k]) % self.p
        raise UnknownEdgeError(f"half-edge {h} does not lie on an edge with a gain")

    def source_vertex_genus(self, v: int) -> int:
        return source_vertex_genus(self, v)

    # ------------------------------------------------------------------ #
    # Serialisation
    # ------------------------------------------------------------------ #
    def to_spec(self) -> dict[str, Any]:
        spec = self.target.to_spec()
        spec["p"] = self.p
        spec["dilated_vertices"] = sorted(self.dilated_vertices)
        spec["dilated_edges"] = sorted(self.dilated_edges)
        spec["flow"] = {str(h): value for h, value in sorted(self.flow.items())}
        gains: dict[str, dict[str, int]] = {}
        for tail, value in sorted(self.gains.items()):
            gains[str(self.target.edge_of(tail))] = {"tail": tail, "value": value % self.p}
        spec["gains"] = gains
        return spec


@dataclass(frozen=True, slots=True)
class Violation:
    code: str
    message: str


@dataclass(frozen=True, slots=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def codes(self) -> set[str]:
        return {v.code for v in self.violations}

    def raise_for_violations(self) -> None:
        if self.violations:
            raise InvalidCoverError([v.message for v in self.violations])


@dataclass(frozen=True, slots=True, eq=False)
class SourceCover:
    """Explicit source graph with the Z/p action and the projection to the target."""

    source: WeightedGraph
    action: tuple[int, ...]
    projection: tuple[int, ...]

    def fiber(self, target_cell: int) -> list[int]:
        return [x for x, y in enumerate(self.projection) if y == target_cell]

    def fiber_sizes(self) -> dict[int, int]:
        sizes: dict[int, int] = {}
        for y in self.projection:
            sizes[y] = sizes.get(y, 0) + 1
        return sizes

    def action_is_automorphism(self, p: int) -> bool:
        src = self.source
        for x in range(src.num_cells):
            a = self.action[x]
            if self.action[src.involution[x]] != src.involution[a]:
                return False
            if self.action[src.root[x]] != src.root[a]:
                return False
        for v in src.vertices:
            if src.genus_of(self.action[v]) != src.genus_of(v):
                return False
        power = list(range(src.num_cells))
        for _ in range(p):
            power = [self.action[x] for x in power]
        return power == list(range(src.num_cells))

    def quotient_matches(self, cover: PCover) -> bool:
        """True when the action orbits are exactly the fibres with sizes 1 (dilated) or p (free)."""
        for x in range(self.source.num_cells):
            if self.projection[self.action[x]] != self.projection[x]:
                return False
        orbits: dict[int, set[int]] = {}
        seen: set[int] = set()
        for x in range(self.source.num_cells):
            if x in seen:
                continue
            orbit = {x}
            y = self.action[x]
            while y != x:
                orbit.add(y)
                y = self.action[y]
            seen |= orbit
            orbits.setdefault(self.projection[x], set()).add(min(orbit))
        if set(orbits) != set(range(cover.target.num_cells)):
            return False
        sizes = self.fiber_sizes()
        for cell, reps in orbits.items():
            if len(reps) != 1:
                return False
            if sizes[cell] != (1 if _is_dilated_cell(cover, cell) else cover.p):
                return False
        return True

    def local_riemann_hurwitz_holds(self, cover: PCover) -> bool:
        src = self.source
        for w in src.vertices:
            v = self.projection[w]
            d_vertex = cover.p if cover.is_dilated_vertex(v) else 1
            ramification = sum(
                cover.p - 1 for h in src.half_edges_at(w) if self.projection[h] in cover.flow
            )
            lhs = 2 * src.genus_of(w) - 2
            rhs = d_vertex * (2 * cover.target.genus_of(v) - 2) + ramification
            if lhs != rhs:
                return False
        return True


@dataclass(frozen=True, slots=True)
class ClosedWalk:
    """Oriented closed walk; each half-edge is crossed from its root to the opposite end."""

    half_edges: tuple[int, ...]


@dataclass(frozen=True, slots=True, eq=False)
class CoverForm:
    p: int
    labeling: Labeling
    edge_map: tuple[int, ...]

    @property
    def key(self) -> tuple[Any, ...]:
        return (self.p, self.labeling.key)

    @property
    def key_bytes(self) -> bytes:
        return key_bytes(self.key)

    def cell_map(self) -> dict[int, int]:
        return self.labeling.cell_map()


@dataclass(frozen=True, slots=True, eq=False)
class LabeledCover:
    """A cover with a bijective edge labelling; ``labels[e]`` is the label of edge ``e``."""

    cover: PCover
    labels: tuple[int, ...]


def _is_dilated_cell(cover: PCover, cell: int) -> bool:
    graph = cover.target
    if graph.involution[cell] == cell:
        return cell in cover.dilated_vertices
    return graph.edge_of(cell) in cover.dilated_edges


# --------------------------------------------------------------------- #
# Construction helpers
# --------------------------------------------------------------------- #
def make_cover(
    p: int,
    target: WeightedGraph,
    dilated_vertices: Iterable[int] = (),
    dilated_flows: Mapping[int, int] | None = None,
    gains: Mapping[int, int] | None = None,
) -> PCover:
    """Build a cover from edge-level data.

    ``dilated_flows`` maps a dilated edge to the flow on its first half-edge;
    ``gains`` maps a free edge to the gain read from its first half-edge.
    """
    flow: dict[int, int] = {}
    for e, value in (dilated_flows or {}).items():
        h, k = target.edge(e)
        flow[h] = value % p
        flow[k] = (-value) % p
    return PCover(
        p=p,
        target=target,
        dilated_vertices=frozenset(dilated_vertices),
        dilated_edges=frozenset((dilated_flows or {}).keys()),
        flow=flow,
        gains={target.edge(e)[0]: value % p for e, value in (gains or {}).items()},
    )


def cover_from_spec(spec: Mapping[str, Any]) -> PCover:
    target = build_graph(spec)
    gains: dict[int, int] = {}
    for _, entry in dict(spec.get("gains", {})).items():
        gains[int(entry["tail"])] = int(entry["value"])
    return PCover(
        p=int(spec["p"]),
        target=target,
        dilated_vertices=frozenset(int(v) for v in spec.get("dilated_vertices", [])),
        dilated_edges=frozenset(int(e) for e in spec.get("dilated_edges", [])),
        flow={int(h): int(value) for h, value in dict(spec.get("flow", {})).items()},
        gains=gains,
    )


# --------------------------------------------------------------------- #
# Validation and the source graph
# --------------------------------------------------------------------- #
def source_vertex_genus(cover: PCover, v: int) -> int:
    g = cover.target.genus_of(v)
    if v not in cover.dilated_vertices:
        return g
    d = cover.dilation_count(v)
    return cover.p * (g - 1) + 1 + d * (cover.p - 1) // 2


def validate(cover: PCover) -> ValidationReport:
    """Check every cover condition and collect all violations."""
    p = cover.p
    graph = cover.target
    found: list[Violation] = []

    def add(code: str, message: str) -> None:
        found.append(Violation(code, message))

    if not isprime(p):
        add("not_prime", f"{p} is not a prime number")
        return ValidationReport(tuple(found))
    vertices = set(graph.vertices)
    for v in sorted(cover.dilated_vertices - vertices):
        add("unknown_vertex", f"dilated cell {v} is not a vertex")
    for e in sorted(cover.dilated_edges):
        if not 0 <= e < graph.num_edges:
            add("unknown_edge", f"dilated edge {e} is not an edge")
            continue
        u, w = graph.endpoints(e)
        if u not in cover.dilated_vertices or w not in cover.dilated_vertices:
            add("dilated_edge_endpoint", f"dilated edge {e} has a free endpoint")
    dilated_halves = {
        h for e in cover.dilated_edges if 0 <= e < graph.num_edges for h in graph.edge(e)
    }
    if set(cover.flow) != dilated_halves:
        add("flow_support", "flow must be given exactly on the half-edges of dilated edges")
    for h, value in sorted(cover.flow.items()):
        if not 1 <= value <= p - 1:
            add("flow_range", f"flow {value} on half-edge {h} is not in 1..{p - 1}")
        k = graph.involution[h]
        if k in cover.flow and (cover.flow[k] + value) % p != 0:
            add("flow_antisymmetry", f"flow on half-edge {h} is not opposite to its partner")
    for v in sorted(cover.dilated_vertices & vertices):
        total = sum(cover.flow.get(h, 0) for h in graph.half_edges_at(v))
        if total % p != 0:
            add("balancing", f"flows at dilated vertex {v} sum to {total % p}, not 0")
        if cover.dilation_count(v) == 1:
            add("single_dilated_half_edge", f"dilated vertex {v} has one dilated half-edge")
    expected_gain_edges = {
        e
        for e in range(graph.num_edges)
        if not set(graph.endpoints(e)) & cover.dilated_vertices
    }
    gain_edges = [graph.edge_of(h) for h in cover.gains if h in graph.half_edges]
    if len(gain_edges) != len(cover.gains) or len(set(gain_edges)) != len(gain_edges):
        add("gain_support", "gains must sit on one half-edge per edge")
    elif set(gain_edges) != expected_gain_edges:
        add("gain_support", "gains must be given exactly on edges with two free endpoints")
    for h, value in sorted(cover.gains.items()):
        if not 0 <= value < p:
            add("gain_range", f"gain {value} on half-edge {h} is not in 0..{p - 1}")
    if not graph.is_connected():
        add("target_disconnected", "target graph is disconnected")
    if not graph.is_stable():
        add("target_unstable", "target graph is not stable")
    if found:
        return ValidationReport(tuple(found))
    for v in sorted(cover.dilated_vertices):
        genus = source_vertex_genus(cover, v)
        if genus < 0:
            add("negative_source_genus", f"vertex {v} lifts to negative genus {genus}")
    if found:
        return ValidationReport(tuple(found))
    source = build_source(cover, check=False).source
    if not source.is_connected():
        add("source_disconnected", "source graph is disconnected")
    elif not source.is_stable():
        add("source_unstable", "source graph is not stable")
    return ValidationReport(tuple(found))


def build_source(cover: PCover, check: bool = True) -> SourceCover:
    """Construct the source graph: one lift of each dilated cell and p of each free cell."""
    if check:
        validate(cover).raise_for_violations()
    p = cover.p
    graph = cover.target
    index: dict[tuple[int, int], int] = {}
    projection: list[int] = []

    def lifts(cell: int) -> int:
        return 1 if _is_dilated_cell(cover, cell) else p

    for x in range(graph.num_cells):
        for i in range(lifts(x)):
            index[(x, i)] = len(projection)
            projection.append(x)

    def vertex_lift(v: int, i: int) -> int:
        return index[(v, 0 if v in cover.dilated_vertices else i % p)]

    involution = [0] * len(projection)
    root = [0] * len(projection)
    action = [0] * len(projection)
    genera: dict[int, int] = {}
    for v in graph.vertices:
        for i in range(lifts(v)):
            x = index[(v, i)]
            involution[x] = x
            root[x] = x
            action[x] = index[(v, (i + 1) % lifts(v))]
            genera[x] = source_vertex_genus(cover, v)
    for e, (h, k) in enumerate(graph.edges):
        u, w = graph.root[h], graph.root[k]
        shift = cover.gain_along(h) if cover.carries_gain(e) else 0
        for i in range(lifts(h)):
            a, b = index[(h, i)], index[(k, i)]
            involution[a], involution[b] = b, a
            root[a] = vertex_lift(u, i)
            root[b] = vertex_lift(w, i + shift)
            action[a] = index[(h, (i + 1) % lifts(h))]
            action[b] = index[(k, (i + 1) % lifts(k))]
    source = WeightedGraph(involution=tuple(involution), root=tuple(root), vertex_genus=genera)
    return SourceCover(source=source, action=tuple(action), projection=tuple(projection))


def preimage_components(cover: PCover, edges: Iterable[int], vertices: Iterable[int] = ()) -> int:
    """Number of connected components of the preimage of a subgraph of the target."""
    lifted = build_source(cover, check=False)
    edge_set = set(edges)
    vertex_set = set(vertices)
    for e in edge_set:
        vertex_set.update(cover.target.endpoints(e))
    source = lifted.source
    nodes = [w for w in source.vertices if lifted.projection[w] in vertex_set]
    chosen = [
        f for f, (h, _) in enumerate(source.edges) if cover.target.edge_of(lifted.projection[h]) in edge_set
    ]
    subgraph = source.to_networkx(chosen).subgraph(nodes)
    return nx.number_connected_components(subgraph)


# --------------------------------------------------------------------- #
# Contraction and switching
# --------------------------------------------------------------------- #
def switch(cover: PCover, v: int, amount: int) -> PCover:
    """Re-identify the fibre over free vertex ``v`` by adding ``amount``."""
    if v in cover.dilated_vertices:
        raise DilatedVertexSwitchError(f"vertex {v} is dilated and cannot be switched")
    graph = cover.target
    if v not in graph.vertices:
        raise UnknownVertexError(f"cell {v} is not a vertex of the target")
    gains: dict[int, int] = {}
    for tail, value in cover.gains.items():
        head = graph.involution[tail]
        if graph.root[head] == v:
            value += amount
        if graph.root[tail] == v:
            value -= amount
        gains[tail] = value % cover.p
    return PCover(
        p=cover.p,
        target=graph,
        dilated_vertices=cover.dilated_vertices,
        dilated_edges=cover.dilated_edges,
        flow=dict(cover.flow),
        gains=gains,
    )


def contract(cover: PCover, e: int) -> PCover:
    """Contract edge ``e`` and update dilation and gain data so local Riemann-Hurwitz still holds."""
    graph = cover.target
    h, k = graph.edge(e)
    u, w = graph.root[h], graph.root[k]
    dilated = set(cover.dilated_vertices)
    if cover.carries_gain(e) and u != w:
        cover = switch(cover, w, -cover.gain_along(h))
    new_graph, index = graph.contract_with_map(e)
    if e not in cover.dilated_edges:
        if u == w:
            if u not in dilated and cover.gain_along(h) != 0:
                dilated.add(u)
        elif u in dilated or w in dilated:
            dilated.update((u, w))
    new_dilated = frozenset(index[v] for v in dilated)
    flow = {index[x]: value for x, value in cover.flow.items() if x not in (h, k)}
    dilated_edges = frozenset(new_graph.edge_of(index[graph.edges[f][0]]) for f in cover.dilated_edges if f != e)
    gains: dict[int, int] = {}
    for tail, value in cover.gains.items():
        if tail in (h, k):
            continue
        new_tail = index[tail]
        ends = {new_graph.root[new_tail], new_graph.root[new_graph.involution[new_tail]]}
        if not ends & new_dilated:
            gains[new_tail] = value % cover.p
    return PCover(
        p=cover.p,
        target=new_graph,
        dilated_vertices=new_dilated,
        dilated_edges=dilated_edges,
        flow=flow,
        gains=gains,
    )


def contract_edges(cover: PCover, edges: Iterable[int]) -> PCover:
    """Contract several edges; the survivors keep their relative order."""
    for e in sorted(set(edges), reverse=True):
        cover = contract(cover, e)
    return cover


def contract_all_except(cover: PCover, keep: Iterable[int]) -> PCover:
    kept = set(keep)
    return contract_edges(cover, (e for e in range(cover.target.num_edges) if e not in kept))


def cycle_ascent(cover: PCover, walk: ClosedWalk | Sequence[int]) -> int:
    """Sum of the gains picked up along a closed walk through free cells."""
    half_edges = walk.half_edges if isinstance(walk, ClosedWalk) else tuple(walk)
    graph = cover.target
    if not half_edges:
        return 0
    for position, h in enumerate(half_edges):
        nxt = half_edges[(position + 1) % len(half_edges)]
        if graph.root[graph.involution[h]] != graph.root[nxt]:
            raise OpenWalkError(f"walk is not closed at half-edge {h}")
        e = graph.edge_of(h)
        if not cover.carries_gain(e):
            raise WalkThroughDilatedCellError(f"edge {e} touches a dilated vertex")
    return sum(cover.gain_along(h) for h in half_edges) % cover.p


# --------------------------------------------------------------------- #
# Canonical forms
# --------------------------------------------------------------------- #
def cover_labeler(cover: PCover) -> DecoratedGraphLabeler:
    graph = cover.target
    return DecoratedGraphLabeler(
        graph,
        vertex_colors={
            v: (graph.genus_of(v), int(v in cover.dilated_vertices)) for v in graph.vertices
        },
        half_colors=dict(cover.flow),
        gains=cover.gains,
        modulus=cover.p,
        switchable=frozenset(v for v in graph.vertices if v not in cover.dilated_vertices),
    )


def canonical_form(cover: PCover, tie_break: random.Random | None = None) -> CoverForm:
    labeling = cover_labeler(cover).canonical(tie_break=tie_break)
    return CoverForm(p=cover.p, labeling=labeling, edge_map=labeling.edge_positions(cover.target))


def canonical_cover(form: CoverForm) -> PCover:
    """Rebuild the representative whose vertex ``i`` and edge ``j`` sit at canonical positions."""
    vertex_key, records = form.labeling.key
    genera = [colors[0] for colors in vertex_key]
    dilated = frozenset(i for i, colors in enumerate(vertex_key) if colors[1])
    graph = from_edge_list(genera, [(record[0], record[1]) for record in records])
    n = len(genera)
    flow: dict[int, int] = {}
    gains: dict[int, int] = {}
    dilated_edges: set[int] = set()
    for j, (_, _, tail_flow, head_flow, gain) in enumerate(records):
        if tail_flow:
            dilated_edges.add(j)
            flow[n + 2 * j] = tail_flow
            flow[n + 2 * j + 1] = head_flow
        elif gain >= 0:
            gains[n + 2 * j] = gain
    return PCover(
        p=form.p,
        target=graph,
        dilated_vertices=dilated,
        dilated_edges=frozenset(dilated_edges),
        flow=flow,
        gains=gains,
    )


def canonicalize(cover: PCover) -> tuple[PCover, CoverForm]:
    form = canonical_form(cover)
    return canonical_cover(form), form


def isomorphic(a: PCover, b: PCover) -> bool:
    if a.p != b.p:
        raise PrimeMismatchError(f"cannot compare covers over Z/{a.p} and Z/{b.p}")
    if a.target.num_edges != b.target.num_edges or len(a.target.vertices) != len(b.target.vertices):
        return False
    return canonical_form(a).key_bytes == canonical_form(b).key_bytes


def automorphism_edge_group(cover: PCover) -> set[tuple[int, ...]]:
    """Edge permutations induced by cover automorphisms; ``sigma[e]`` is the image of ``e``."""
    return cover_labeler(cover).edge_automorphisms()


def cover_cell_automorphisms(cover: PCover) -> set[tuple[int, ...]]:
    return cover_labeler(cover).cell_automorphisms()
