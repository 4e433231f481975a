from __future__ import annotations

import pytest

from tcov.application.services import genus2_oracles as oracles
from tcov.domain.errors import (
    NotDistinctError,
    NotPrimeError,
    PrimeTooSmallError,
    UnclassifiableCellError,
)
from tcov.domain.families import dilated_theta, free_theta, ring


@pytest.mark.parametrize(("p", "expected"), [(2, 7), (3, 9), (5, 22), (7, 41), (11, 95)])
def test_expected_maximal_cells(p: int, expected: int) -> None:
    assert oracles.expected_maximal_cells(p) == expected


@pytest.mark.parametrize(("p", "expected"), [(2, 0), (3, 0), (5, 1), (7, 6), (11, 26)])
def test_expected_wedge_count(p: int, expected: int) -> None:
    assert oracles.expected_wedge_count(p) == expected


@pytest.mark.parametrize(("p", "expected"), [(5, 2), (7, 4), (11, 10), (13, 14)])
def test_free_theta_counts_agree(p: int, expected: int) -> None:
    assert oracles.polya_free_theta_count(p) == expected
    assert oracles.bracelet_count(p) == expected
    assert len(oracles.free_theta_representatives(p)) == expected


def test_free_theta_representatives_at_seven() -> None:
    representatives = oracles.free_theta_representatives(7)

    assert representatives == [(0, 1, 2), (0, 1, 3), (0, 1, 4), (0, 2, 4)]
    assert all(len({i % 7, j % 7, k % 7}) == 3 for i, j, k in representatives)


def test_closed_forms_need_a_large_prime() -> None:
    with pytest.raises(PrimeTooSmallError):
        oracles.polya_free_theta_count(3)
    with pytest.raises(NotPrimeError):
        oracles.expected_maximal_cells(9)


@pytest.mark.parametrize(
    ("p", "gains", "expected"),
    [
        (5, (0, 1, 2), oracles.DIHEDRAL),
        (7, (0, 1, 3), oracles.CYCLIC),
        (5, (0, 1, 4), oracles.DIHEDRAL),
    ],
)
def test_theta_automorphism_class(p: int, gains: tuple[int, int, int], expected: str) -> None:
    assert oracles.theta_aut_class(p, *gains) == expected


def test_theta_automorphism_class_needs_distinct_gains() -> None:
    with pytest.raises(NotDistinctError):
        oracles.theta_aut_class(5, 0, 0, 1)


def test_midpoint() -> None:
    assert oracles.is_midpoint(5, 0, 2, 1)
    assert not oracles.is_midpoint(7, 0, 1, 3)


def test_dilated_theta_census() -> None:
    at_five = oracles.dilated_theta_census(5)
    at_seven = oracles.dilated_theta_census(7)
    at_eleven = oracles.dilated_theta_census(11)

    assert (at_five.distinct, at_five.reflection, at_five.representatives) == (0, 2, [])
    assert (at_seven.distinct, at_seven.reflection, at_seven.representatives) == (1, 3, [(1, 2, 4)])
    assert (at_eleven.distinct, at_eleven.reflection) == (5, 5)


def test_family_counts_at_five() -> None:
    expected = oracles.family_counts_expected(5)

    assert tuple(expected.values()) == (2, 2, 4, 2, 2, 1, 2, 2, 1, 2, 0, 2, 0)
    assert sum(expected.values()) == 22
    assert sum(oracles.family_counts_expected(7).values()) == 41


def test_dumbbell_subtotals_match_family_counts() -> None:
    for p in (5, 7, 11, 13):
        rows = oracles.family_counts_expected(p)
        free = rows["dumbbell_free_trivial"] + rows["dumbbell_free_equal"] + rows["dumbbell_free_distinct"]
        mixed = rows["dumbbell_mixed"] + rows["dumbbell_mixed_trivial"]
        dilated = rows["dumbbell_dilated_equal"] + rows["dumbbell_dilated_distinct"]
        assert free == oracles.free_dumbbell_count(p)
        assert mixed == oracles.mixed_dumbbell_count(p)
        assert dilated == oracles.dilated_dumbbell_count(p)


def test_maximal_family_of_named_covers() -> None:
    assert oracles.maximal_family(free_theta(7, 0, 1, 3)) == "theta_free_generic"
    assert oracles.maximal_family(free_theta(7, 0, 1, 6)) == "theta_free_symmetric"
    assert oracles.maximal_family(free_theta(7, 0, 0, 2)) == "theta_free_repeated"
    assert oracles.maximal_family(dilated_theta(7, 1, 2, 4)) == "theta_dilated_generic"
    assert oracles.maximal_family(dilated_theta(7, 1, 1, 5)) == "theta_dilated_repeated"


def test_maximal_family_rejects_lower_cells() -> None:
    with pytest.raises(UnclassifiableCellError):
        oracles.maximal_family(ring(2, 5, 1))
    with pytest.raises(PrimeTooSmallError):
        oracles.maximal_family(free_theta(3, 0, 1, 2))


@pytest.mark.parametrize("p", [5, 7])
def test_census_matches_family_counts(genus2_homology, p: int) -> None:
    check = oracles.family_census_check(p, genus2_homology(p).census.maximal)

    assert check.ok, (check.expected, check.observed)
    assert check.total == oracles.expected_maximal_cells(p)


def test_genus2_expectation() -> None:
    expectation = oracles.genus2_expectation(7)

    assert expectation.maximal_cells == 41
    assert expectation.wedge_count == 6
    assert expectation.free_theta_distinct == 4
    assert expectation.dilated_theta_distinct == 1
    assert sum(expectation.family_rows.values()) == 41
