from __future__ import annotations

import logging
import random
from collections.abc import Iterable, Sequence

from ...domain.errors import (
    InconsistentEulerError,
    MissingFaceError,
    NotInjectiveError,
    UnknownCellError,
)
from ...domain.linalg import integer_rank, matmul, permutation_sign
from ...domain.models import BettiVector, CensusLevel, DeltaComplex, Face, OrbitCell
from ...domain.pcover import (
    LabeledCover,
    PCover,
    automorphism_edge_group,
    canonical_cover,
    canonical_form,
    contract,
    contract_edges,
)

logger = logging.getLogger("tcov.complex")

CellId = tuple[int, int]


def orbit_cell(cover: PCover, key: bytes, dimension: int) -> OrbitCell:
    stabilizer = sorted(automorphism_edge_group(cover))
    return OrbitCell(
        dimension=dimension,
        key=key,
        representative=cover,
        stabilizer=stabilizer,
        is_alternating=all(permutation_sign(s) == 1 for s in stabilizer),
    )


def face(cell: LabeledCover, theta: Sequence[int]) -> LabeledCover:
    """Pull a labelled cover back along the injection ``theta``: contract every edge whose
    label is not hit, and relabel the rest through the inverse of ``theta``."""
    size = cell.cover.target.num_edges
    if len(set(theta)) != len(theta) or any(not 0 <= t < size for t in theta):
        raise NotInjectiveError(f"{list(theta)} is not an injection into {size} labels")
    preimage = {t: i for i, t in enumerate(theta)}
    dropped = [e for e in range(size) if cell.labels[e] not in preimage]
    survivors = [e for e in range(size) if cell.labels[e] in preimage]
    contracted = contract_edges(cell.cover, dropped)
    return LabeledCover(cover=contracted, labels=tuple(preimage[cell.labels[e]] for e in survivors))


def labeled_orbit_key(cell: LabeledCover) -> tuple[bytes, tuple[int, ...]]:
    """Invariant of a labelled cover up to isomorphism of labelled covers."""
    form = canonical_form(cell.cover)
    by_position = [0] * len(cell.labels)
    for e, position in enumerate(form.edge_map):
        by_position[position] = cell.labels[e]
    stabilizer = automorphism_edge_group(canonical_cover(form))
    best = min(tuple(by_position[sigma[q]] for q in range(len(by_position))) for sigma in stabilizer)
    return form.key_bytes, best


def assemble(levels: Sequence[CensusLevel], tie_break: random.Random | None = None) -> DeltaComplex:
    """Orbit cells for every census level plus the signed face table."""
    if not levels:
        raise MissingFaceError("cannot assemble a complex from an empty census")
    cells = [
        [orbit_cell(cover, key, level.dimension) for key, cover in zip(level.keys, level.covers)]
        for level in levels
    ]
    faces: list[list[list[Face]]] = [[[] for _ in cells[0]]]
    for n in range(1, len(levels)):
        lookup = {key: index for index, key in enumerate(levels[n - 1].keys)}
        table: list[list[Face]] = []
        for cell in cells[n]:
            row: list[Face] = []
            for i in range(n + 1):
                form = canonical_form(contract(cell.representative, i), tie_break=tie_break)
                target = lookup.get(form.key_bytes)
                if target is None:
                    raise MissingFaceError(f"face {i} of a {n}-cell is missing from level {n - 1}")
                alignment = form.edge_map
                row.append(Face(target=target, alignment=alignment, sign=(-1) ** i * permutation_sign(alignment)))
            table.append(row)
        faces.append(table)
    complex_ = DeltaComplex(
        genus=levels[0].genus,
        p=levels[0].p,
        levels=cells,
        faces=faces,
        origin=[list(range(len(level))) for level in cells],
    )
    logger.info(
        "assembled complex g=%s p=%s cells=%s alternating=%s",
        complex_.genus,
        complex_.p,
        [len(level) for level in cells],
        complex_.chain_dimensions(),
    )
    return complex_


def boundary_matrix(complex_: DeltaComplex, n: int) -> list[list[int]]:
    """Matrix of the boundary from alternating n-cells to alternating (n-1)-cells."""
    columns = complex_.alternating(n)
    rows = complex_.alternating(n - 1)
    if n <= 0 or not columns:
        return [[0] * len(columns) for _ in rows]
    row_of = {cell: r for r, cell in enumerate(rows)}
    matrix = [[0] * len(columns) for _ in rows]
    for c, cell in enumerate(columns):
        for item in complex_.faces[n][cell]:
            r = row_of.get(item.target)
            if r is not None:
                matrix[r][c] += item.sign
    logger.debug("boundary %s: %sx%s", n, len(rows), len(columns))
    return matrix


def boundary_squares_vanish(complex_: DeltaComplex) -> bool:
    for n in range(1, complex_.top_dimension):
        product = matmul(boundary_matrix(complex_, n), boundary_matrix(complex_, n + 1))
        if any(any(row) for row in product):
            return False
    return True


def betti(complex_: DeltaComplex) -> BettiVector:
    dims = complex_.chain_dimensions()
    ranks = [0] + [integer_rank(boundary_matrix(complex_, n)) for n in range(1, len(dims))] + [0]
    numbers = [dims[n] - ranks[n] - ranks[n + 1] for n in range(len(dims))]
    return BettiVector(betti=numbers, chain_dimensions=dims, ranks=ranks)


def euler_characteristic(complex_: DeltaComplex, vector: BettiVector | None = None) -> int:
    vector = vector or betti(complex_)
    chains = vector.euler_from_chains
    homology = vector.euler_from_homology
    if chains != homology:
        raise InconsistentEulerError(f"chain Euler characteristic {chains} differs from {homology}")
    return chains


def subcomplex_closure(complex_: DeltaComplex, marked: Iterable[CellId]) -> DeltaComplex:
    """Smallest subcomplex containing the marked cells and all their faces."""
    keep: list[set[int]] = [set() for _ in complex_.levels]
    stack: list[CellId] = []
    for n, index in marked:
        if not (0 <= n < len(complex_.levels) and 0 <= index < len(complex_.levels[n])):
            raise UnknownCellError(f"cell ({n}, {index}) is not in the complex")
        stack.append((n, index))
    while stack:
        n, index = stack.pop()
        if index in keep[n]:
            continue
        keep[n].add(index)
        if n > 0:
            stack.extend((n - 1, item.target) for item in complex_.faces[n][index])
    kept = [sorted(indices) for indices in keep]
    renumber = [{old: new for new, old in enumerate(indices)} for indices in kept]
    levels = [[complex_.levels[n][i] for i in indices] for n, indices in enumerate(kept)]
    faces: list[list[list[Face]]] = []
    for n, indices in enumerate(kept):
        if n == 0:
            faces.append([[] for _ in indices])
            continue
        faces.append(
            [
                [
                    Face(target=renumber[n - 1][item.target], alignment=item.alignment, sign=item.sign)
                    for item in complex_.faces[n][i]
                ]
                for i in indices
            ]
        )
    source_origin = complex_.origin or [list(range(len(level))) for level in complex_.levels]
    origin = [[source_origin[n][i] for i in indices] for n, indices in enumerate(kept)]
    return DeltaComplex(genus=complex_.genus, p=complex_.p, levels=levels, faces=faces, origin=origin)


def vertex_sets(complex_: DeltaComplex) -> list[list[frozenset[int]]]:
    """For every cell, the 0-cells it contains."""
    result: list[list[frozenset[int]]] = [[frozenset({i}) for i in range(len(complex_.levels[0]))]]
    for n in range(1, len(complex_.levels)):
        below = result[n - 1]
        result.append(
            [frozenset().union(*(below[item.target] for item in row)) for row in complex_.faces[n]]
        )
    return result


def star_closure(complex_: DeltaComplex, vertex: int) -> DeltaComplex:
    """Closure of the star of a 0-cell."""
    if not 0 <= vertex < len(complex_.levels[0]):
        raise UnknownCellError(f"cell (0, {vertex}) is not in the complex")
    marked = [
        (n, i)
        for n, level in enumerate(vertex_sets(complex_))
        for i, vertices in enumerate(level)
        if vertex in vertices
    ]
    return subcomplex_closure(complex_, marked)


def star_union_closure(complex_: DeltaComplex, vertices: Iterable[int]) -> DeltaComplex:
    wanted = set(vertices)
    marked = [
        (n, i)
        for n, level in enumerate(vertex_sets(complex_))
        for i, cell_vertices in enumerate(level)
        if cell_vertices & wanted
    ]
    return subcomplex_closure(complex_, marked)


def face_functoriality_holds(
    cover: PCover, first: Sequence[int], second: Sequence[int]
) -> bool:
    """``face(face(c, first), second)`` agrees with ``face(c, first o second)``."""
    cell = LabeledCover(cover=cover, labels=tuple(range(cover.target.num_edges)))
    composite = [first[j] for j in second]
    step = face(face(cell, first), second)
    direct = face(cell, composite)
    return labeled_orbit_key(step) == labeled_orbit_key(direct)


def random_injection(rng: random.Random, m: int, n: int) -> list[int]:
    return rng.sample(range(n), m)

