"""Closed-form counts for genus-2 covers, computed independently of the census."""

from __future__ import annotations

import itertools
import logging
from collections import Counter
from collections.abc import Sequence

from sympy import Poly, Rational, expand, symbols
from sympy.combinatorics.named_groups import DihedralGroup

from ...domain.errors import NotDistinctError, PrimeTooSmallError, UnclassifiableCellError
from ...domain.models import CensusLevel, DilatedThetaCensus, FamilyCensusCheck, Genus2Expectation
from ...domain.pcover import PCover
from .census_service import require_prime

logger = logging.getLogger("tcov.oracles")

DIHEDRAL = "dihedral"
CYCLIC = "cyclic"

MAXIMAL_FAMILIES = (
    "dumbbell_free_trivial",
    "dumbbell_free_equal",
    "dumbbell_mixed",
    "dumbbell_mixed_trivial",
    "dumbbell_dilated_equal",
    "dumbbell_free_distinct",
    "theta_free_repeated",
    "theta_free_symmetric",
    "dumbbell_dilated_distinct",
    "theta_mixed",
    "theta_free_generic",
    "theta_dilated_repeated",
    "theta_dilated_generic",
)


def _require_at_least_five(p: int) -> None:
    require_prime(p)
    if p < 5:
        raise PrimeTooSmallError(f"this count is stated for primes p >= 5, got {p}")


def _half(p: int) -> int:
    return (p - 1) // 2


# --------------------------------------------------------------------- #
# Global counts
# --------------------------------------------------------------------- #
def expected_maximal_cells(p: int) -> int:
    require_prime(p)
    if p == 2:
        return 7
    if p == 3:
        return 9
    return (4 * p * p + 9 * p - 13) // 6


def expected_wedge_count(p: int) -> int:
    """Number of 2-spheres in the wedge the genus-2 complex is homotopic to."""
    require_prime(p)
    if p < 5:
        return 0
    return (p - 1) * (p - 5) // 6 + (p - 3) ** 2 // 4


def expected_betti(p: int) -> list[int]:
    return [1, 0, expected_wedge_count(p)]


def free_dumbbell_count(p: int) -> int:
    m = _half(p)
    return (m + 2) * (m + 1) // 2 - 1


def mixed_dumbbell_count(p: int) -> int:
    m = _half(p)
    return m * (m + 1)


def dilated_dumbbell_count(p: int) -> int:
    m = _half(p)
    return m * (m + 1) // 2


# --------------------------------------------------------------------- #
# Free thetas
# --------------------------------------------------------------------- #
def polya_free_theta_count(p: int) -> int:
    """Coefficient of t^3 in the dihedral cycle index evaluated at 1 + t^k."""
    _require_at_least_five(p)
    t = symbols("t")
    z = [None] + [1 + t**k for k in range(1, p + 1)]
    cycle_index = Rational(1, 2 * p) * (
        z[1] ** p + p * z[1] * z[2] ** ((p - 1) // 2) + (p - 1) * z[p]
    )
    coefficient = Poly(expand(cycle_index), t).coeff_monomial(t**3)
    return int(coefficient)


def bracelet_count(p: int, beads: int = 3) -> int:
    """Orbits of ``beads``-subsets of Z/p under the dihedral group, counted directly."""
    require_prime(p)
    group = list(DihedralGroup(p).generate())
    seen: set[tuple[int, ...]] = set()
    for subset in itertools.combinations(range(p), beads):
        seen.add(
            min(tuple(sorted(perm.array_form[x] for x in subset)) for perm in group)
        )
    return len(seen)


def free_theta_representatives(p: int) -> list[tuple[int, int, int]]:
    _require_at_least_five(p)
    found = []
    i = 1
    while 3 * i < p + 1:
        for j in range(2 * i, (p + i) // 2 + 1):
            found.append((0, i, j))
        i += 1
    return found


def _distinct(p: int, i: int, j: int, k: int) -> None:
    if len({i % p, j % p, k % p}) != 3:
        raise NotDistinctError(f"({i}, {j}, {k}) are not distinct modulo {p}")


def is_midpoint(p: int, i: int, j: int, k: int) -> bool:
    """True when ``k`` is the average of ``i`` and ``j`` modulo ``p``."""
    return (i + j - 2 * k) % p == 0


def theta_aut_class(p: int, i: int, j: int, k: int) -> str:
    """Whether the free theta with gains (i, j, k) has 2p automorphisms or p."""
    require_prime(p)
    _distinct(p, i, j, k)
    total = (i + j + k) % p
    if total in {(3 * i) % p, (3 * j) % p, (3 * k) % p}:
        return DIHEDRAL
    return CYCLIC


# --------------------------------------------------------------------- #
# Dilated thetas
# --------------------------------------------------------------------- #
def dilated_theta_census(p: int) -> DilatedThetaCensus:
    _require_at_least_five(p)
    triples = [
        (i, j, (-i - j) % p)
        for i in range(1, p)
        for j in range(1, p)
        if (-i - j) % p and len({i, j, (-i - j) % p}) == 3
    ]
    classes = set()
    for triple in triples:
        images = [triple, tuple((-x) % p for x in triple)]
        classes.add(min(tuple(sorted(image)) for image in images))
    distinct = len(triples) // 12
    representatives = sorted(classes)
    if len(representatives) != distinct:
        logger.warning("dilated theta classes %s differ from ordered triples / 12 = %s", len(representatives), distinct)
    return DilatedThetaCensus(distinct=distinct, reflection=_half(p), representatives=representatives)


# --------------------------------------------------------------------- #
# Family classification of maximal cells
# --------------------------------------------------------------------- #
def family_counts_expected(p: int) -> dict[str, int]:
    _require_at_least_five(p)
    m = _half(p)
    scalene = (p - 1) * (p - 5) // 12
    counts = (m, m, m * m, m, m, m * (m - 1) // 2, m, m, m * (m - 1) // 2, m, scalene, m, scalene)
    return dict(zip(MAXIMAL_FAMILIES, counts))


def _fold(value: int, p: int) -> int:
    value %= p
    return min(value, p - value)


def _loop_side(cover: PCover, e: int) -> tuple[bool, int]:
    graph = cover.target
    h, _ = graph.edge(e)
    v = graph.root[h]
    if cover.is_dilated_vertex(v):
        if not cover.is_dilated_edge(e):
            raise UnclassifiableCellError(f"free loop {e} at a dilated vertex in a maximal cell")
        return True, _fold(cover.flow[h], cover.p)
    return False, _fold(cover.gain_along(h), cover.p)


def _dumbbell_family(cover: PCover, loops: Sequence[int]) -> str:
    first, second = (_loop_side(cover, e) for e in loops)
    dilated = sorted((first, second), key=lambda side: side[0])
    (left_dilated, a), (right_dilated, b) = dilated
    if not left_dilated and not right_dilated:
        if a == 0 or b == 0:
            return "dumbbell_free_trivial"
        return "dumbbell_free_equal" if a == b else "dumbbell_free_distinct"
    if left_dilated and right_dilated:
        return "dumbbell_dilated_equal" if a == b else "dumbbell_dilated_distinct"
    return "dumbbell_mixed_trivial" if a == 0 else "dumbbell_mixed"


def _theta_family(cover: PCover) -> str:
    graph = cover.target
    anchor = graph.vertices[0]
    halves = [next(h for h in graph.edge(e) if graph.root[h] == anchor) for e in range(3)]
    if cover.is_free():
        gains = [cover.gain_along(h) for h in halves]
        if len(set(gains)) == 2:
            return "theta_free_repeated"
        if len(set(gains)) != 3:
            raise UnclassifiableCellError(f"free theta with gains {gains} is not a valid cell")
        if theta_aut_class(cover.p, *gains) == DIHEDRAL:
            return "theta_free_symmetric"
        return "theta_free_generic"
    if len(cover.dilated_vertices) != 2:
        raise UnclassifiableCellError("theta with exactly one dilated vertex")
    if len(cover.dilated_edges) == 2:
        return "theta_mixed"
    if len(cover.dilated_edges) == 3:
        flows = [cover.flow[h] for h in halves]
        return "theta_dilated_repeated" if len(set(flows)) == 2 else "theta_dilated_generic"
    raise UnclassifiableCellError(f"theta with {len(cover.dilated_edges)} dilated edges")


def maximal_family(cover: PCover) -> str:
    graph = cover.target
    if cover.p < 5:
        raise PrimeTooSmallError(f"maximal families are classified for primes p >= 5, got {cover.p}")
    if graph.genus() != 2 or graph.num_edges != 3 or len(graph.vertices) != 2:
        raise UnclassifiableCellError("not a maximal genus-2 cell")
    loops = sorted(graph.classify_edges().loops)
    if not loops:
        return _theta_family(cover)
    if len(loops) == 2:
        return _dumbbell_family(cover, loops)
    raise UnclassifiableCellError(f"maximal cell with {len(loops)} loops")


def family_census_check(p: int, level: CensusLevel) -> FamilyCensusCheck:
    expected = family_counts_expected(p)
    observed = Counter(maximal_family(cover) for cover in level.covers)
    check = FamilyCensusCheck(
        p=p,
        expected=expected,
        observed={family: observed.get(family, 0) for family in MAXIMAL_FAMILIES},
    )
    logger.info("family census p=%s total=%s ok=%s", p, check.total, check.ok)
    return check


def contractible_generator(cover: PCover) -> bool:
    """Membership among the maximal cells generating the contractible part of the genus-2 complex."""
    family = maximal_family(cover)
    if family in ("dumbbell_dilated_distinct", "dumbbell_free_distinct"):
        return True
    if family != "dumbbell_mixed":
        return False
    loops = sorted(cover.target.classify_edges().loops)
    return any(value == 1 for _, value in (_loop_side(cover, e) for e in loops))


def genus2_expectation(p: int) -> Genus2Expectation:
    rows = family_counts_expected(p) if p >= 5 else {}
    return Genus2Expectation(
        p=p,
        maximal_cells=expected_maximal_cells(p),
        wedge_count=expected_wedge_count(p),
        free_theta_distinct=polya_free_theta_count(p) if p >= 5 else 0,
        dilated_theta_distinct=dilated_theta_census(p).distinct if p >= 5 else 0,
        family_rows=rows,
    )
