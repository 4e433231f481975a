from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import List, Sequence

from ...domain.errors import AscentLawError
from ...domain.families import distinguished_one_cells, equivariant_bridge, free_theta, spiral
from ...domain.interfaces import RunLogger
from ...domain.models import CheckResult, DeltaComplex, LociReport
from ...domain.pcover import (
    canonical_form,
    cover_cell_automorphisms,
    isomorphic,
)
from ..services import genus2_oracles as oracles
from ..services.delta_complex import (
    betti,
    boundary_squares_vanish,
    face_functoriality_holds,
    random_injection,
    star_union_closure,
    subcomplex_closure,
)
from ..services.loci import (
    LOCI,
    classify,
    equivariant_h_bridges,
    in_weight_locus,
    lifted_bridge_edges,
    locus_subcomplex,
    max_1bridge_uncontractions,
    spiral_articulation_points,
    spiral_uncontraction_groups,
)
from ..services.properties import (
    brute_force_isomorphic,
    random_relabel,
    random_switch,
    riemann_hurwitz_holds,
)
from .compute_homology import ComputeHomology, ComputeHomologyInput, ComputeHomologyResult


@dataclass(slots=True)
class VerifySuiteInput:
    primes: Sequence[int]
    genera: Sequence[int] = (2,)
    closed_forms: bool = True
    property_suite: bool = False
    seed: int = 0
    use_cache: bool = True


@dataclass(slots=True)
class VerifySuiteResult:
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks if check.asserted)

    @property
    def failures(self) -> List[CheckResult]:
        return [check for check in self.checks if check.asserted and not check.passed]


class VerifySuite:
    """Runs every closed-form and structural cross-check for the requested (g, p)."""

    def __init__(self, homology: ComputeHomology, logger: RunLogger) -> None:
        self._homology = homology
        self._logger = logger

    def execute(self, command: VerifySuiteInput) -> VerifySuiteResult:
        result = VerifySuiteResult()
        try:
            for g in command.genera:
                for p in command.primes:
                    rng = random.Random(command.seed * 1_000_003 + 97 * g + p)
                    homology = self._homology.execute(
                        ComputeHomologyInput(genus=g, p=p, use_cache=command.use_cache)
                    )
                    report = classify(homology.complex)
                    prefix = f"g{g}.p{p}"
                    if command.closed_forms:
                        checks = self._structural_checks(prefix, homology.complex, report, p)
                        checks += _bridge_star_checks(prefix, homology, report)
                        if g == 2:
                            checks += self._genus2_checks(prefix, homology, p)
                        elif g == 3:
                            checks += self._genus3_checks(prefix, homology, p)
                        self._record(result, checks)
                    if command.property_suite:
                        self._record(result, self._property_checks(prefix, homology.complex, p, rng))
            return result
        except Exception as exc:
            self._logger.log({"event": "run_failed", "command": "verify", "error": str(exc)})
            raise

    def _record(self, result: VerifySuiteResult, checks: List[CheckResult]) -> None:
        for check in checks:
            self._logger.log(
                {
                    "event": "verify_check",
                    "name": check.name,
                    "passed": check.passed,
                    "asserted": check.asserted,
                }
            )
        result.checks.extend(checks)

    # ------------------------------------------------------------------ #
    # Checks shared by every genus
    # ------------------------------------------------------------------ #
    def _structural_checks(
        self, prefix: str, complex_: DeltaComplex, report: LociReport, p: int
    ) -> List[CheckResult]:
        checks = [
            CheckResult(f"{prefix}.boundary_squares_vanish", boundary_squares_vanish(complex_)),
            CheckResult(f"{prefix}.loci_nested", report.is_nested()),
        ]
        covers = [cell.representative for level in complex_.levels for cell in level]
        checks.append(
            CheckResult(
                f"{prefix}.weight_routes_agree",
                all(in_weight_locus(c, "direct") == in_weight_locus(c, "cases") for c in covers),
            )
        )
        checks.append(
            CheckResult(f"{prefix}.weight_locus_closed", _weight_locus_closed(complex_, report))
        )
        checks.append(
            CheckResult(
                f"{prefix}.bridge_routes_agree",
                all(set(equivariant_h_bridges(c)) == lifted_bridge_edges(c) for c in covers),
            )
        )
        for locus in LOCI:
            reduced = betti(locus_subcomplex(complex_, locus, report)).reduced
            checks.append(
                CheckResult(
                    f"{prefix}.locus_{locus}_acyclic",
                    not any(reduced),
                    expected=[0] * len(reduced),
                    observed=reduced,
                    asserted=locus in ("w", "lw", "br") or p % 2 == 1,
                )
            )
        checks.append(_common_ascent_check(prefix, covers))
        groups = spiral_uncontraction_groups(covers)
        largest = max((len(keys) for keys in groups.values()), default=0)
        checks.append(
            CheckResult(
                f"{prefix}.spiral_uncontraction_unique",
                largest <= 1,
                expected=1,
                observed=largest,
                asserted=p % 2 == 1,
            )
        )
        checks.append(_one_bridge_star_check(prefix, complex_))
        return checks

    # ------------------------------------------------------------------ #
    # Genus 2
    # ------------------------------------------------------------------ #
    def _genus2_checks(self, prefix: str, homology: ComputeHomologyResult, p: int) -> List[CheckResult]:
        maximal = homology.census.maximal
        expected_cells = oracles.expected_maximal_cells(p)
        checks = [
            CheckResult(f"{prefix}.maximal_cells", len(maximal) == expected_cells, expected_cells, len(maximal)),
            CheckResult(
                f"{prefix}.betti",
                homology.betti.betti == oracles.expected_betti(p),
                oracles.expected_betti(p),
                homology.betti.betti,
            ),
        ]
        if p < 5:
            return checks
        table = oracles.family_census_check(p, maximal)
        checks.append(CheckResult(f"{prefix}.family_counts", table.ok, table.expected, table.observed))
        expected_free = (p * p - 1) // 12
        census_free = table.observed["theta_free_symmetric"] + table.observed["theta_free_generic"]
        observed_free = [
            oracles.polya_free_theta_count(p),
            oracles.bracelet_count(p),
            len(oracles.free_theta_representatives(p)),
            census_free,
        ]
        checks.append(
            CheckResult(
                f"{prefix}.free_theta_counts",
                all(value == expected_free for value in observed_free),
                expected_free,
                observed_free,
            )
        )
        dilated = oracles.dilated_theta_census(p)
        observed_dilated = [table.observed["theta_dilated_generic"], table.observed["theta_dilated_repeated"]]
        checks.append(
            CheckResult(
                f"{prefix}.dilated_theta_counts",
                observed_dilated == [dilated.distinct, dilated.reflection]
                and len(dilated.representatives) == dilated.distinct,
                [dilated.distinct, dilated.reflection],
                observed_dilated,
            )
        )
        dumbbells = [
            table.observed["dumbbell_free_trivial"] + table.observed["dumbbell_free_equal"] + table.observed["dumbbell_free_distinct"],
            table.observed["dumbbell_mixed"] + table.observed["dumbbell_mixed_trivial"],
            table.observed["dumbbell_dilated_equal"] + table.observed["dumbbell_dilated_distinct"],
        ]
        expected_dumbbells = [
            oracles.free_dumbbell_count(p),
            oracles.mixed_dumbbell_count(p),
            oracles.dilated_dumbbell_count(p),
        ]
        checks.append(
            CheckResult(f"{prefix}.dumbbell_counts", dumbbells == expected_dumbbells, expected_dumbbells, dumbbells)
        )
        wedge = oracles.expected_wedge_count(p)
        checks.append(CheckResult(f"{prefix}.wedge_count", homology.betti.betti[2] == wedge, wedge, homology.betti.betti[2]))
        if p <= 11:
            checks.append(_theta_automorphism_check(prefix, p))
        complex_ = homology.complex
        marked = [(2, i) for i, cell in enumerate(complex_.levels[2]) if oracles.contractible_generator(cell.representative)]
        reduced = betti(subcomplex_closure(complex_, marked)).reduced
        checks.append(
            CheckResult(f"{prefix}.contractible_part_acyclic", not any(reduced), None, reduced, asserted=False)
        )
        return checks

    # ------------------------------------------------------------------ #
    # Genus 3
    # ------------------------------------------------------------------ #
    def _genus3_checks(self, prefix: str, homology: ComputeHomologyResult, p: int) -> List[CheckResult]:
        b1 = homology.betti.betti[1] if len(homology.betti.betti) > 1 else 0
        keys = set(homology.census.levels[1].keys)
        wanted = [canonical_form(cover).key_bytes for cover in distinguished_one_cells(p)]
        return [
            CheckResult(f"{prefix}.b1_vanishes", b1 == 0, 0, b1),
            CheckResult(
                f"{prefix}.distinguished_cells_present",
                all(key in keys for key in wanted),
                len(wanted),
                sum(key in keys for key in wanted),
            ),
        ]

    # ------------------------------------------------------------------ #
    # Property suite
    # ------------------------------------------------------------------ #
    def _property_checks(
        self, prefix: str, complex_: DeltaComplex, p: int, rng: random.Random
    ) -> List[CheckResult]:
        covers = [cell.representative for level in complex_.levels for cell in level]
        small = [c for c in covers if c.target.num_edges <= 3]
        checks = [
            CheckResult(
                f"{prefix}.relabel_invariance",
                all(isomorphic(c, random_relabel(c, rng)) for c in covers),
            ),
            CheckResult(
                f"{prefix}.switching_invariance",
                all(isomorphic(c, random_switch(c, rng)) for c in covers),
            ),
            CheckResult(f"{prefix}.riemann_hurwitz", all(riemann_hurwitz_holds(c) for c in covers)),
        ]
        if p <= 5:
            agree = True
            for a, b in itertools.combinations(small, 2):
                if brute_force_isomorphic(a, b) != isomorphic(a, b):
                    agree = False
                    break
            if agree:
                agree = all(brute_force_isomorphic(c, random_relabel(c, rng)) for c in small)
            checks.append(CheckResult(f"{prefix}.canonical_matches_brute_force", agree))
        functorial = True
        for cell in complex_.levels[-1]:
            size = cell.representative.target.num_edges
            m = rng.randint(1, size)
            first = random_injection(rng, m, size)
            second = random_injection(rng, rng.randint(1, m), m)
            if not face_functoriality_holds(cell.representative, first, second):
                functorial = False
                break
        checks.append(CheckResult(f"{prefix}.face_functoriality", functorial))
        g = complex_.genus
        spirals_ok = all(
            isomorphic(spiral(g, p, a), spiral(g, p, b)) == ((a - b) % p == 0 or (a + b) % p == 0)
            for a in range(1, p)
            for b in range(1, p)
        )
        checks.append(CheckResult(f"{prefix}.spiral_classes", spirals_ok))
        return checks


def _weight_locus_closed(complex_: DeltaComplex, report: LociReport) -> bool:
    for n in range(1, len(complex_.levels)):
        for i in range(len(complex_.levels[n])):
            if not report.generators[(n, i)].w:
                continue
            if any(not report.generators[(n - 1, face.target)].w for face in complex_.faces[n][i]):
                return False
    return True


def _common_ascent_check(prefix: str, covers) -> CheckResult:
    violations = 0
    for cover in covers:
        if not cover.is_free():
            continue
        try:
            spiral_articulation_points(cover)
        except AscentLawError:
            violations += 1
    return CheckResult(f"{prefix}.common_ascent_law", violations == 0, 0, violations)


def _one_bridge_star_check(prefix: str, complex_: DeltaComplex) -> CheckResult:
    """Closure of the cells with a 1-bridge against the local uncontraction count."""
    marked = []
    for n, level in enumerate(complex_.levels):
        for i, cell in enumerate(level):
            if 1 in equivariant_h_bridges(cell.representative).values():
                marked.append((n, i))
    closure = subcomplex_closure(complex_, marked)
    in_closure = {(n, index) for n, origins in enumerate(closure.origin) for index in origins}
    mismatches = 0
    for n, level in enumerate(complex_.levels):
        for i, cell in enumerate(level):
            cover = cell.representative
            local = (n, i) in marked or any(
                max_1bridge_uncontractions(cover, v) > 0 for v in cover.target.vertices
            )
            if local != ((n, i) in in_closure):
                mismatches += 1
    return CheckResult(f"{prefix}.one_bridge_star", mismatches == 0, 0, mismatches, asserted=False)


def _theta_automorphism_check(prefix: str, p: int) -> CheckResult:
    mismatches = []
    for i, j, k in itertools.combinations(range(p), 3):
        cover = free_theta(p, i, j, k)
        order = p * len(cover_cell_automorphisms(cover))
        expected = 2 * p if oracles.theta_aut_class(p, i, j, k) == oracles.DIHEDRAL else p
        if order != expected:
            mismatches.append((i, j, k))
    return CheckResult(f"{prefix}.theta_automorphisms", not mismatches, [], mismatches)



def _bridge_star_checks(prefix: str, homology: ComputeHomologyResult, report: LociReport) -> List[CheckResult]:
    """Compare the lw and br loci with closed stars of the bridge 0-cells."""
    complex_ = homology.complex
    g, p = complex_.genus, complex_.p
    vertices = homology.census.levels[0]
    bridges = [vertices.index_of(canonical_form(equivariant_bridge(g, p, h)).key_bytes) for h in range(1, g)]
    checks = []
    for locus, wanted in (("lw", bridges[:1]), ("br", bridges)):
        present = [index for index in wanted if index is not None]
        star = star_union_closure(complex_, present) if present else None
        star_cells = {(n, i) for n, origins in enumerate(star.origin) for i in origins} if star else set()
        locus_cells = set(report.cells_in(locus))
        mismatches = len(star_cells ^ locus_cells)
        checks.append(
            CheckResult(f"{prefix}.locus_{locus}_bridge_star", mismatches == 0, 0, mismatches, asserted=False)
        )
    return checks
