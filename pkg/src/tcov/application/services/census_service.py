from __future__ import annotations

import itertools
import logging
import multiprocessing
import time
from collections.abc import Iterator, Sequence

from networkx.utils import UnionFind
from sympy import isprime

from ...domain.canonical import canonical_labeling
from ...domain.errors import NotPrimeError, ResourceBudgetExceededError
from ...domain.graph import WeightedGraph, from_edge_list
from ...domain.models import CensusLevel
from ...domain.pcover import PCover, canonicalize, make_cover, validate

logger = logging.getLogger("tcov.census")


def require_prime(p: int) -> None:
    if not isprime(p):
        raise NotPrimeError(p)


def stable_weighted_graphs(g: int, k: int) -> list[WeightedGraph]:
    """All connected stable graphs of genus ``g`` with exactly ``k`` edges, one per class."""
    found: dict[bytes, WeightedGraph] = {}
    for n in range(1, max(1, min(k + 1, 2 * g - 2)) + 1):
        excess = g - (k - n + 1)
        if excess < 0:
            continue
        pairs = [(u, w) for u in range(n) for w in range(u, n)]
        for edges in itertools.combinations_with_replacement(pairs, k):
            skeleton = from_edge_list([0] * n, edges)
            if not skeleton.is_connected():
                continue
            for genera in _compositions(excess, n):
                graph = from_edge_list(genera, edges)
                if not graph.is_stable():
                    continue
                key, _ = canonical_labeling(graph)
                found.setdefault(key, graph)
    return [found[key] for key in sorted(found)]


def _compositions(total: int, parts: int) -> Iterator[list[int]]:
    if parts == 1:
        yield [total]
        return
    for head in range(total + 1):
        for tail in _compositions(total - head, parts - 1):
            yield [head, *tail]


def _subsets(items: Sequence[int]) -> Iterator[tuple[int, ...]]:
    for size in range(len(items) + 1):
        yield from itertools.combinations(items, size)


def _balanced_flows(
    graph: WeightedGraph, dilated_edges: Sequence[int], p: int
) -> Iterator[dict[int, int]]:
    """Nowhere-zero flows on ``dilated_edges`` summing to zero at every vertex, by backtracking."""
    last_touch: dict[int, int] = {}
    for position, e in enumerate(dilated_edges):
        for v in graph.endpoints(e):
            last_touch[v] = position
    closing: dict[int, list[int]] = {}
    for v, position in last_touch.items():
        closing.setdefault(position, []).append(v)
    totals = {v: 0 for v in last_touch}
    chosen: dict[int, int] = {}

    def extend(position: int) -> Iterator[dict[int, int]]:
        if position == len(dilated_edges):
            yield dict(chosen)
            return
        e = dilated_edges[position]
        u, w = graph.endpoints(e)
        for value in range(1, p):
            totals[u] += value
            totals[w] -= value
            chosen[e] = value
            if all(totals[v] % p == 0 for v in closing.get(position, ())):
                yield from extend(position + 1)
            totals[u] -= value
            totals[w] += value
        chosen.pop(e, None)

    yield from extend(0)


def _gain_choices(graph: WeightedGraph, free_edges: Sequence[int], p: int) -> Iterator[dict[int, int]]:
    """Gains gauge-fixed to zero on a spanning forest of the free part."""
    forest = UnionFind()
    tree: list[int] = []
    rest: list[int] = []
    for e in free_edges:
        u, w = graph.endpoints(e)
        if u != w and forest[u] != forest[w]:
            forest.union(u, w)
            tree.append(e)
        else:
            rest.append(e)
    for values in itertools.product(range(p), repeat=len(rest)):
        gains = {e: 0 for e in tree}
        gains.update(zip(rest, values))
        yield gains


def covers_of(graph: WeightedGraph, p: int) -> list[PCover]:
    """All classes of valid p-covers of ``graph``, as canonical representatives sorted by key."""
    return [cover for _, cover in keyed_covers_of(graph, p)]


def keyed_covers_of(graph: WeightedGraph, p: int) -> list[tuple[bytes, PCover]]:
    require_prime(p)
    found: dict[bytes, PCover] = {}
    for dilated in _subsets(graph.vertices):
        for key, cover in keyed_covers_with_dilation(graph, p, dilated):
            found.setdefault(key, cover)
    return [(key, found[key]) for key in sorted(found)]


def keyed_covers_with_dilation(
    graph: WeightedGraph, p: int, dilated: Sequence[int]
) -> list[tuple[bytes, PCover]]:
    """Classes of valid covers of ``graph`` whose dilated vertices are exactly ``dilated``."""
    dilated_set = set(dilated)
    inside = [e for e in range(graph.num_edges) if set(graph.endpoints(e)) <= dilated_set]
    free_edges = [e for e in range(graph.num_edges) if not set(graph.endpoints(e)) & dilated_set]
    found: dict[bytes, PCover] = {}
    for dilated_edges in _subsets(inside):
        if not _dilation_counts_possible(graph, dilated, dilated_edges):
            continue
        for flows in _balanced_flows(graph, dilated_edges, p):
            for gains in _gain_choices(graph, free_edges, p):
                cover = make_cover(p, graph, dilated, flows, gains)
                if not validate(cover).ok:
                    continue
                representative, form = canonicalize(cover)
                found.setdefault(form.key_bytes, representative)
    return sorted(found.items())


def _dilation_counts_possible(
    graph: WeightedGraph, dilated: Sequence[int], dilated_edges: Sequence[int]
) -> bool:
    counts = {v: 0 for v in dilated}
    for e in dilated_edges:
        for v in graph.endpoints(e):
            counts[v] += 1
    return all(count != 1 for count in counts.values())


def _covers_task(args: tuple[WeightedGraph, int, tuple[int, ...]]) -> list[tuple[bytes, PCover]]:
    graph, p, dilated = args
    return keyed_covers_with_dilation(graph, p, dilated)


def target_type(cover: PCover) -> str:
    graph = cover.target
    genera = "".join(str(graph.genus_of(v)) for v in graph.vertices)
    loops = len(graph.classify_edges().loops)
    return f"v{len(graph.vertices)}e{graph.num_edges}l{loops}g{genera}"


class CensusEnumerator:
    """Builds census levels under a cell cap and a wall-clock cap."""

    def __init__(self, cell_cap: int = 20000, time_cap_seconds: float = 900.0, workers: int = 1) -> None:
        self.cell_cap = cell_cap
        self.time_cap_seconds = time_cap_seconds
        self.workers = max(1, workers)
        self._started: float | None = None
        self._cells = 0

    def start(self) -> None:
        self._started = time.monotonic()
        self._cells = 0

    def level(self, g: int, p: int, n: int) -> CensusLevel:
        require_prime(p)
        if self._started is None:
            self.start()
        graphs = stable_weighted_graphs(g, n + 1)
        tasks = [(graph, p, dilated) for graph in graphs for dilated in _subsets(graph.vertices)]
        if self.workers > 1 and len(tasks) > 1:
            with multiprocessing.Pool(self.workers) as pool:
                batches = pool.map(_covers_task, tasks)
        else:
            batches = []
            for task in tasks:
                batches.append(_covers_task(task))
                self._check_time()
        found: dict[bytes, PCover] = {}
        counts: dict[str, int] = {}
        for batch in batches:
            for key, cover in batch:
                if key not in found:
                    found[key] = cover
                    label = target_type(cover)
                    counts[label] = counts.get(label, 0) + 1
        self._cells += len(found)
        if self._cells > self.cell_cap:
            raise ResourceBudgetExceededError("cell", self.cell_cap)
        self._check_time()
        keys = sorted(found)
        logger.info("census g=%s p=%s n=%s: %s cells over %s targets", g, p, n, len(keys), len(graphs))
        return CensusLevel(
            genus=g,
            p=p,
            dimension=n,
            covers=[found[key] for key in keys],
            keys=keys,
            counts_by_target=dict(sorted(counts.items())),
        )

    def all_cells(self, g: int, p: int) -> list[CensusLevel]:
        self.start()
        return [self.level(g, p, n) for n in range(3 * g - 3)]

    def _check_time(self) -> None:
        if self._started is not None and time.monotonic() - self._started > self.time_cap_seconds:
            raise ResourceBudgetExceededError("time", self.time_cap_seconds)


def all_cells(g: int, p: int, cell_cap: int = 20000, time_cap_seconds: float = 900.0) -> list[CensusLevel]:
    return CensusEnumerator(cell_cap=cell_cap, time_cap_seconds=time_cap_seconds).all_cells(g, p)
