from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any

import networkx as nx

from .errors import (
    DisconnectedGraphError,
    FixedPointMismatchError,
    InvalidInvolutionError,
    InvalidRootError,
    NegativeGenusError,
    UnknownEdgeError,
    UnknownVertexError,
)


@dataclass(frozen=True, slots=True)
class EdgeClassification:
    loops: frozenset[int]
    bridges: frozenset[int]
    parallel_classes: tuple[frozenset[int], ...]


@dataclass(frozen=True, slots=True, eq=False)
class WeightedGraph:
    """Half-edge graph (X, iota, r) with a genus on every vertex.

    Cells are the integers ``0 .. len(involution) - 1``. Vertices are the fixed
    points of the involution, half-edges the rest. Edges are indexed by the
    order of their smaller half-edge, so removing cells never reorders them.
    """

    involution: tuple[int, ...]
    root: tuple[int, ...]
    vertex_genus: Mapping[int, int]
    vertices: tuple[int, ...] = field(init=False)
    half_edges: tuple[int, ...] = field(init=False)
    edges: tuple[tuple[int, int], ...] = field(init=False)
    _edge_of: dict[int, int] = field(init=False, repr=False)
    _star: dict[int, tuple[int, ...]] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        vertices = tuple(x for x in range(len(self.involution)) if self.involution[x] == x)
        half_edges = tuple(x for x in range(len(self.involution)) if self.involution[x] != x)
        edges = tuple((h, self.involution[h]) for h in half_edges if h < self.involution[h])
        edge_of: dict[int, int] = {}
        for index, (h, k) in enumerate(edges):
            edge_of[h] = index
            edge_of[k] = index
        star: dict[int, list[int]] = {v: [] for v in vertices}
        for h in half_edges:
            star[self.root[h]].append(h)
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "half_edges", half_edges)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "_edge_of", edge_of)
        object.__setattr__(self, "_star", {v: tuple(hs) for v, hs in star.items()})

    # ------------------------------------------------------------------ #
    # Incidence
    # ------------------------------------------------------------------ #
    @property
    def num_cells(self) -> int:
        return len(self.involution)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def genus_of(self, v: int) -> int:
        self._require_vertex(v)
        return self.vertex_genus.get(v, 0)

    def edge_of(self, h: int) -> int:
        return self._edge_of[h]

    def half_edges_at(self, v: int) -> tuple[int, ...]:
        self._require_vertex(v)
        return self._star[v]

    def valence(self, v: int) -> int:
        return len(self.half_edges_at(v))

    def endpoints(self, e: int) -> tuple[int, int]:
        h, k = self.edge(e)
        return self.root[h], self.root[k]

    def edge(self, e: int) -> tuple[int, int]:
        if not 0 <= e < len(self.edges):
            raise UnknownEdgeError(f"edge {e} is not in a graph with {len(self.edges)} edges")
        return self.edges[e]

    def is_loop(self, e: int) -> bool:
        u, w = self.endpoints(e)
        return u == w

    def loops_at(self, v: int) -> tuple[int, ...]:
        return tuple(
            e for e in sorted({self._edge_of[h] for h in self.half_edges_at(v)}) if self.is_loop(e)
        )

    def _require_vertex(self, v: int) -> None:
        if not (0 <= v < len(self.involution)) or self.involution[v] != v:
            raise UnknownVertexError(f"cell {v} is not a vertex")

    # ------------------------------------------------------------------ #
    # Global invariants
    # ------------------------------------------------------------------ #
    def to_networkx(self, edges: Iterable[int] | None = None) -> nx.MultiGraph:
        graph = nx.MultiGraph()
        graph.add_nodes_from(self.vertices)
        chosen = range(len(self.edges)) if edges is None else edges
        for e in chosen:
            u, w = self.endpoints(e)
            graph.add_edge(u, w, key=e)
        return graph

    def is_connected(self) -> bool:
        return bool(self.vertices) and nx.is_connected(self.to_networkx())

    def genus(self) -> int:
        if not self.is_connected():
            raise DisconnectedGraphError("genus is only defined for connected graphs")
        return len(self.edges) - len(self.vertices) + 1 + sum(self.vertex_genus.values())

    def stability_excess(self, v: int) -> int:
        return 2 * self.genus_of(v) - 2 + self.valence(v)

    def is_stable_at(self, v: int) -> bool:
        return self.stability_excess(v) > 0

    def is_stable(self) -> bool:
        return all(self.is_stable_at(v) for v in self.vertices)

    # ------------------------------------------------------------------ #
    # Structural queries
    # ------------------------------------------------------------------ #
    def classify_edges(self) -> EdgeClassification:
        loops = frozenset(e for e in range(len(self.edges)) if self.is_loop(e))
        bridges = frozenset(
            e for e in range(len(self.edges)) if e not in loops and self.is_bridge(e)
        )
        classes: dict[tuple[int, int], set[int]] = {}
        for e in range(len(self.edges)):
            if e in loops:
                continue
            u, w = self.endpoints(e)
            classes.setdefault((min(u, w), max(u, w)), set()).add(e)
        parallel = tuple(frozenset(classes[key]) for key in sorted(classes))
        return EdgeClassification(loops=loops, bridges=bridges, parallel_classes=parallel)

    def is_bridge(self, e: int) -> bool:
        u, w = self.endpoints(e)
        if u == w:
            return False
        rest = self.to_networkx(x for x in range(len(self.edges)) if x != e)
        return not nx.has_path(rest, u, w)

    def cut_component_edges(self, v: int) -> list[frozenset[int]]:
        """Edge sets of the maximal decomposition of the graph as a wedge at ``v``."""
        self._require_vertex(v)
        incident = sorted({self._edge_of[h] for h in self._star[v]})
        if not incident:
            return [frozenset(range(len(self.edges)))]
        components: list[frozenset[int]] = [frozenset({e}) for e in incident if self.is_loop(e)]
        rest = self.to_networkx(e for e in range(len(self.edges)) if not self.is_loop(e) or e not in incident)
        rest.remove_node(v)
        for nodes in sorted(nx.connected_components(rest), key=min):
            edges = frozenset(
                e
                for e in range(len(self.edges))
                if not (self.is_loop(e) and v in self.endpoints(e))
                and set(self.endpoints(e)) - {v} <= nodes
                and set(self.endpoints(e)) & nodes
            )
            components.append(edges)
        return components

    def cut_components(self, v: int) -> list[WeightedGraph]:
        return [self.edge_subgraph(edges, extra_vertices=(v,))[0] for edges in self.cut_component_edges(v)]

    def edge_subgraph(
        self, edges: Iterable[int], extra_vertices: Iterable[int] = ()
    ) -> tuple[WeightedGraph, dict[int, int]]:
        """Subgraph spanned by ``edges`` (plus ``extra_vertices``) and the old-to-new cell map."""
        chosen = sorted(set(edges))
        keep_vertices = set(extra_vertices)
        keep_halves: set[int] = set()
        for e in chosen:
            h, k = self.edge(e)
            keep_halves.update((h, k))
            keep_vertices.update((self.root[h], self.root[k]))
        survivors = sorted(keep_vertices | keep_halves)
        index = {x: i for i, x in enumerate(survivors)}
        graph = WeightedGraph(
            involution=tuple(index[self.involution[x]] for x in survivors),
            root=tuple(index[self.root[x]] for x in survivors),
            vertex_genus={index[v]: self.vertex_genus.get(v, 0) for v in keep_vertices},
        )
        return graph, index

    # ------------------------------------------------------------------ #
    # Contraction
    # ------------------------------------------------------------------ #
    def contract_edge(self, e: int) -> WeightedGraph:
        return self.contract_with_map(e)[0]

    def contract_with_map(self, e: int) -> tuple[WeightedGraph, dict[int, int]]:
        """Contract edge ``e``; also return the map from surviving old cells to new cells.

        A merged vertex keeps the smaller of the two vertex cells.
        """
        h, k = self.edge(e)
        u, w = self.root[h], self.root[k]
        genera = dict(self.vertex_genus)
        removed = {h, k}
        keep, drop = min(u, w), max(u, w)
        if u == w:
            genera[u] = genera.get(u, 0) + 1
        else:
            genera[keep] = genera.get(keep, 0) + genera.pop(drop, 0)
            removed.add(drop)
        survivors = [x for x in range(len(self.involution)) if x not in removed]
        index = {x: i for i, x in enumerate(survivors)}

        def merged(x: int) -> int:
            return keep if x == drop else x

        graph = WeightedGraph(
            involution=tuple(index[self.involution[x]] for x in survivors),
            root=tuple(index[merged(self.root[x])] for x in survivors),
            vertex_genus={index[v]: g for v, g in genera.items()},
        )
        if u != w:
            index[drop] = index[keep]
        return graph, index

    # ------------------------------------------------------------------ #
    # Serialisation
    # ------------------------------------------------------------------ #
    def to_spec(self) -> dict[str, Any]:
        return {
            "half_edges": len(self.involution),
            "involution": list(self.involution),
            "root": list(self.root),
            "vertex_genus": {str(v): self.vertex_genus.get(v, 0) for v in self.vertices},
        }


def build_graph(spec: Mapping[str, Any]) -> WeightedGraph:
    """Validate raw ``(X, iota, r, genus)`` tables and build the graph."""
    size = int(spec.get("half_edges", len(spec["involution"])))
    involution = tuple(int(x) for x in spec["involution"])
    root = tuple(int(x) for x in spec["root"])
    if len(involution) != size or any(not 0 <= x < size for x in involution):
        raise InvalidInvolutionError("involution table must be a map on all cells")
    for x in range(size):
        if involution[involution[x]] != x:
            raise InvalidInvolutionError(f"involution does not square to identity at cell {x}")
    if len(root) != size or any(not 0 <= x < size for x in root):
        raise InvalidRootError("root table must be a map on all cells")
    for x in range(size):
        if root[root[x]] != root[x]:
            raise InvalidRootError(f"root is not idempotent at cell {x}")
        if involution[root[x]] != root[x]:
            raise InvalidRootError(f"root of cell {x} is not fixed by the involution")
    fixed = {x for x in range(size) if involution[x] == x}
    if fixed != set(root):
        raise FixedPointMismatchError(
            f"fixed points {sorted(fixed)} differ from root image {sorted(set(root))}"
        )
    genera: dict[int, int] = {v: 0 for v in fixed}
    for key, value in dict(spec.get("vertex_genus", {})).items():
        v = int(key)
        if v not in fixed:
            raise UnknownVertexError(f"genus given for non-vertex cell {v}")
        if int(value) < 0:
            raise NegativeGenusError(f"vertex {v} has negative genus {value}")
        genera[v] = int(value)
    return WeightedGraph(involution=involution, root=root, vertex_genus=genera)


def from_edge_list(genera: Sequence[int], edges: Sequence[tuple[int, int]]) -> WeightedGraph:
    """Graph with vertices ``0..n-1`` and edge ``i`` made of cells ``n+2i`` (at the first
    endpoint) and ``n+2i+1`` (at the second)."""
    n = len(genera)
    involution = list(range(n))
    root = list(range(n))
    for i, (u, w) in enumerate(edges):
        if not (0 <= u < n and 0 <= w < n):
            raise UnknownVertexError(f"edge {i} references a missing vertex")
        involution.extend((n + 2 * i + 1, n + 2 * i))
        root.extend((u, w))
    return build_graph(
        {
            "half_edges": len(involution),
            "involution": involution,
            "root": root,
            "vertex_genus": {str(v): g for v, g in enumerate(genera)},
        }
    )


def theta_graph() -> WeightedGraph:
    return from_edge_list([0, 0], [(0, 1), (0, 1), (0, 1)])


def dumbbell_graph(left_genus: int = 0, right_genus: int = 0) -> WeightedGraph:
    return from_edge_list([left_genus, right_genus], [(0, 0), (0, 1), (1, 1)])


def figure_eight_graph() -> WeightedGraph:
    return from_edge_list([0], [(0, 0), (0, 0)])
