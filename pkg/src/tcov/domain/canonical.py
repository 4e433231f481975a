from __future__ import annotations

import itertools
import json
import random
from collections.abc import Iterator, Mapping
from dataclasses import dataclass

from .graph import WeightedGraph

NO_GAIN = -1

Record = tuple[int, int, int, int, int]
Key = tuple[tuple[tuple[int, ...], ...], tuple[Record, ...]]


@dataclass(frozen=True, slots=True)
class Labeling:
    """One relabeling of a decorated graph onto canonical positions.

    ``vertex_order[i]`` is the input vertex placed at position ``i`` and
    ``slots[j]`` the oriented input half-edge pair placed at edge position ``j``.
    """

    key: Key
    vertex_order: tuple[int, ...]
    slots: tuple[tuple[int, int], ...]
    potentials: Mapping[int, int]

    def cell_map(self) -> dict[int, int]:
        n = len(self.vertex_order)
        mapping = {v: i for i, v in enumerate(self.vertex_order)}
        for j, (tail, head) in enumerate(self.slots):
            mapping[tail] = n + 2 * j
            mapping[head] = n + 2 * j + 1
        return mapping

    def edge_positions(self, graph: WeightedGraph) -> tuple[int, ...]:
        positions = [0] * len(self.slots)
        for j, (tail, _) in enumerate(self.slots):
            positions[graph.edge_of(tail)] = j
        return tuple(positions)


def key_bytes(key: object) -> bytes:
    return json.dumps(key, separators=(",", ":")).encode("ascii")


@dataclass(slots=True)
class _Context:
    graph: WeightedGraph
    vertex_colors: Mapping[int, tuple[int, ...]]
    half_colors: Mapping[int, int]
    gains: Mapping[int, int]
    modulus: int
    switchable: frozenset[int]
    gain_edges: frozenset[int]

    def along(self, h: int) -> int:
        if h in self.gains:
            return self.gains[h] % self.modulus
        return (-self.gains[self.graph.involution[h]]) % self.modulus


class DecoratedGraphLabeler:
    """Exhaustive canonical labeling of a graph with vertex/half-edge colors and Z/p gains.

    Gains are only meaningful up to switching at the ``switchable`` vertices;
    for every vertex order the switching is fixed on a breadth-first spanning
    forest of the gain edges, trying every parallel edge as the tree edge.
    """

    def __init__(
        self,
        graph: WeightedGraph,
        vertex_colors: Mapping[int, tuple[int, ...]],
        half_colors: Mapping[int, int] | None = None,
        gains: Mapping[int, int] | None = None,
        modulus: int = 1,
        switchable: frozenset[int] = frozenset(),
    ) -> None:
        gains = dict(gains or {})
        gain_edges = frozenset(graph.edge_of(h) for h in gains)
        self._ctx = _Context(
            graph=graph,
            vertex_colors=vertex_colors,
            half_colors=dict(half_colors or {}),
            gains=gains,
            modulus=max(modulus, 1),
            switchable=switchable,
            gain_edges=gain_edges,
        )

    # ------------------------------------------------------------------ #
    # Public API
    # ------------------------------------------------------------------ #
    def canonical(self, tie_break: random.Random | None = None) -> Labeling:
        best: Labeling | None = None
        for labeling in self._labelings(all_variants=False, tie_break=tie_break):
            if best is None or labeling.key < best.key:
                best = labeling
        assert best is not None
        return best

    def optimal_labelings(self) -> list[Labeling]:
        best_key: Key | None = None
        optimal: list[Labeling] = []
        for labeling in self._labelings(all_variants=True, tie_break=None):
            if best_key is None or labeling.key < best_key:
                best_key = labeling.key
                optimal = [labeling]
            elif labeling.key == best_key:
                optimal.append(labeling)
        return optimal

    def cell_automorphisms(self) -> set[tuple[int, ...]]:
        """All decoration-preserving cell permutations (gains up to switching)."""
        graph = self._ctx.graph
        optimal = self.optimal_labelings()
        reference = optimal[0]
        reference_cells = reference.cell_map()
        inverse_reference = {pos: cell for cell, pos in reference_cells.items()}
        groups = _tie_groups(reference.key[1])
        found: set[tuple[int, ...]] = set()
        for labeling in optimal:
            for shuffle in _group_permutations(groups):
                image = [0] * graph.num_cells
                for pos, v in enumerate(labeling.vertex_order):
                    image[v] = reference.vertex_order[pos]
                n = len(labeling.vertex_order)
                for j, (tail, head) in enumerate(labeling.slots):
                    target = shuffle[j]
                    image[tail] = inverse_reference[n + 2 * target]
                    image[head] = inverse_reference[n + 2 * target + 1]
                found.add(tuple(image))
        return found

    def edge_automorphisms(self) -> set[tuple[int, ...]]:
        graph = self._ctx.graph
        return {
            tuple(graph.edge_of(cells[graph.edges[e][0]]) for e in range(graph.num_edges))
            for cells in self.cell_automorphisms()
        }

    # ------------------------------------------------------------------ #
    # Enumeration
    # ------------------------------------------------------------------ #
    def _labelings(self, all_variants: bool, tie_break: random.Random | None) -> Iterator[Labeling]:
        for order in self._vertex_orders():
            position = {v: i for i, v in enumerate(order)}
            for potentials in self._gauges(position):
                yield from self._records(order, position, potentials, all_variants, tie_break)

    def _vertex_orders(self) -> Iterator[tuple[int, ...]]:
        classes = _refined_classes(self._ctx)
        for parts in itertools.product(*(itertools.permutations(c) for c in classes)):
            yield tuple(v for part in parts for v in part)

    def _gauges(self, position: Mapping[int, int]) -> Iterator[dict[int, int]]:
        ctx = self._ctx
        graph = ctx.graph
        if not ctx.gain_edges:
            yield {}
            return
        adjacency: dict[int, dict[int, list[int]]] = {v: {} for v in ctx.switchable}
        for e in sorted(ctx.gain_edges):
            u, w = graph.endpoints(e)
            if u == w:
                continue
            adjacency[u].setdefault(w, []).append(e)
            adjacency[w].setdefault(u, []).append(e)
        visited: set[int] = set()
        roots: list[int] = []
        tree: list[tuple[int, int, list[int]]] = []
        for start in sorted(ctx.switchable, key=position.__getitem__):
            if start in visited:
                continue
            visited.add(start)
            roots.append(start)
            queue = [start]
            while queue:
                u = queue.pop(0)
                for w in sorted(adjacency[u], key=position.__getitem__):
                    if w not in visited:
                        visited.add(w)
                        queue.append(w)
                        tree.append((u, w, adjacency[u][w]))
        for choice in itertools.product(*(candidates for _, _, candidates in tree)):
            potentials = {r: 0 for r in roots}
            for (u, w, _), e in zip(tree, choice):
                h, k = graph.edges[e]
                from_u = h if graph.root[h] == u else k
                potentials[w] = (potentials[u] - ctx.along(from_u)) % ctx.modulus
            yield potentials

    def _records(
        self,
        order: tuple[int, ...],
        position: Mapping[int, int],
        potentials: Mapping[int, int],
        all_variants: bool,
        tie_break: random.Random | None,
    ) -> Iterator[Labeling]:
        ctx = self._ctx
        graph = ctx.graph
        options: list[list[tuple[Record, tuple[int, int]]]] = []
        for e, (h, k) in enumerate(graph.edges):
            candidates = []
            for tail, head in ((h, k), (k, h)):
                pt, ph = position[graph.root[tail]], position[graph.root[head]]
                if pt > ph:
                    continue
                gain = NO_GAIN
                if e in ctx.gain_edges:
                    shift = potentials.get(graph.root[head], 0) - potentials.get(graph.root[tail], 0)
                    gain = (ctx.along(tail) + shift) % ctx.modulus
                record = (
                    pt,
                    ph,
                    ctx.half_colors.get(tail, 0),
                    ctx.half_colors.get(head, 0),
                    gain,
                )
                candidates.append((record, (tail, head)))
            low = min(record for record, _ in candidates)
            best = [c for c in candidates if c[0] == low]
            options.append(best if all_variants else best[:1])
        vertex_key = tuple(tuple(ctx.vertex_colors[v]) for v in order)
        for picked in itertools.product(*options):
            indices = list(range(len(picked)))
            if tie_break is not None:
                tie_break.shuffle(indices)
            indices.sort(key=lambda i: picked[i][0])
            records = tuple(picked[i][0] for i in indices)
            slots = tuple(picked[i][1] for i in indices)
            yield Labeling(
                key=(vertex_key, records),
                vertex_order=order,
                slots=slots,
                potentials=dict(potentials),
            )


def _refined_classes(ctx: _Context) -> list[list[int]]:
    graph = ctx.graph
    colors: dict[int, object] = {}
    for v in graph.vertices:
        star = graph.half_edges_at(v)
        colors[v] = (
            tuple(ctx.vertex_colors[v]),
            len(star),
            len(graph.loops_at(v)),
            tuple(sorted(ctx.half_colors.get(h, 0) for h in star)),
        )
    colors = _ranked(colors)
    while True:
        signature = {
            v: (
                colors[v],
                tuple(
                    sorted(
                        (
                            colors[graph.root[graph.involution[h]]],
                            ctx.half_colors.get(h, 0),
                            ctx.half_colors.get(graph.involution[h], 0),
                            int(graph.edge_of(h) in ctx.gain_edges),
                        )
                        for h in graph.half_edges_at(v)
                    )
                ),
            )
            for v in graph.vertices
        }
        refined = _ranked(signature)
        if len(set(refined.values())) == len(set(colors.values())):
            break
        colors = refined
    classes: dict[int, list[int]] = {}
    for v in graph.vertices:
        classes.setdefault(colors[v], []).append(v)
    return [classes[c] for c in sorted(classes)]


def _ranked(values: Mapping[int, object]) -> dict[int, int]:
    distinct = sorted(set(values.values()))  # type: ignore[type-var]
    rank = {value: i for i, value in enumerate(distinct)}
    return {v: rank[value] for v, value in values.items()}


def _tie_groups(records: tuple[Record, ...]) -> list[list[int]]:
    groups: list[list[int]] = []
    for j, record in enumerate(records):
        if groups and records[groups[-1][0]] == record:
            groups[-1].append(j)
        else:
            groups.append([j])
    return groups


def _group_permutations(groups: list[list[int]]) -> Iterator[list[int]]:
    total = sum(len(g) for g in groups)
    for parts in itertools.product(*(itertools.permutations(g) for g in groups)):
        shuffle = [0] * total
        for group, permuted in zip(groups, parts):
            for source, target in zip(group, permuted):
                shuffle[source] = target
        yield shuffle


def graph_labeler(graph: WeightedGraph, colors: Mapping[int, int] | None = None) -> DecoratedGraphLabeler:
    colors = colors or {}
    return DecoratedGraphLabeler(
        graph,
        vertex_colors={v: (graph.genus_of(v), colors.get(v, 0)) for v in graph.vertices},
        half_colors={h: colors.get(h, 0) for h in graph.half_edges},
    )


def canonical_labeling(
    graph: WeightedGraph, colors: Mapping[int, int] | None = None
) -> tuple[bytes, dict[int, int]]:
    """Canonical key of a colored graph and the map from input cells to canonical positions."""
    labeling = graph_labeler(graph, colors).canonical()
    return key_bytes(labeling.key), labeling.cell_map()


def automorphisms(graph: WeightedGraph, colors: Mapping[int, int] | None = None) -> list[tuple[int, ...]]:
    return sorted(graph_labeler(graph, colors).cell_automorphisms())
