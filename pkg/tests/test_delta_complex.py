from __future__ import annotations

import random

import pytest
from conftest import homology_of
from hypothesis import given, settings
from hypothesis import strategies as st

from tcov.application.services.delta_complex import (
    assemble,
    betti,
    boundary_matrix,
    boundary_squares_vanish,
    euler_characteristic,
    face,
    face_functoriality_holds,
    labeled_orbit_key,
    star_closure,
    subcomplex_closure,
)
from tcov.domain.errors import NotInjectiveError, UnknownCellError
from tcov.domain.families import dilated_theta, free_theta, mixed_theta
from tcov.domain.models import CensusLevel
from tcov.domain.pcover import LabeledCover, canonical_form


def _labeled(cover) -> LabeledCover:
    return LabeledCover(cover=cover, labels=tuple(range(cover.target.num_edges)))


def test_identity_face_is_the_same_cell() -> None:
    cell = _labeled(free_theta(5, 0, 1, 2))

    assert labeled_orbit_key(face(cell, [0, 1, 2])) == labeled_orbit_key(cell)


def test_omitting_a_label_contracts_one_edge() -> None:
    result = face(_labeled(free_theta(5, 0, 1, 2)), [0, 2])

    assert result.cover.target.num_edges == 2
    assert len(result.cover.target.vertices) == 1
    assert sorted(result.labels) == [0, 1]


def test_face_needs_an_injection() -> None:
    with pytest.raises(NotInjectiveError):
        face(_labeled(free_theta(5, 0, 1, 2)), [0, 0])


def _injections(draw, m: int, n: int) -> list[int]:
    return draw(st.permutations(range(n)))[:m]


@st.composite
def composable_injections(draw):
    first_size = draw(st.integers(min_value=1, max_value=3))
    second_size = draw(st.integers(min_value=1, max_value=first_size))
    return _injections(draw, first_size, 3), _injections(draw, second_size, first_size)


@settings(max_examples=25, deadline=None)
@given(
    maps=composable_injections(),
    cover=st.sampled_from(
        [free_theta(7, 0, 1, 3), free_theta(5, 0, 0, 1), mixed_theta(5, 2), dilated_theta(7, 1, 2, 4)]
    ),
)
def test_faces_compose(maps, cover) -> None:
    first, second = maps

    assert face_functoriality_holds(cover, first, second)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_boundary_squares_vanish(genus2_homology, p: int) -> None:
    assert boundary_squares_vanish(genus2_homology(p).complex)


@pytest.mark.parametrize(
    ("p", "expected", "euler"),
    [(2, [1, 0, 0], 1), (3, [1, 0, 0], 1), (5, [1, 0, 1], 2), (7, [1, 0, 6], 7)],
)
def test_genus_two_betti_numbers(genus2_homology, p: int, expected: list[int], euler: int) -> None:
    result = genus2_homology(p)

    assert result.betti.betti == expected
    assert result.euler == euler
    assert euler_characteristic(result.complex) == euler


def test_every_face_of_a_top_cell_is_in_the_census(genus2_homology) -> None:
    complex_ = genus2_homology(3).complex

    for row in complex_.faces[2]:
        assert len(row) == 3
        assert all(0 <= item.target < len(complex_.levels[1]) for item in row)


def test_symmetric_free_theta_is_not_alternating(genus2_homology) -> None:
    complex_ = genus2_homology(5).complex
    key = canonical_form(free_theta(5, 0, 1, 4)).key_bytes
    (cell,) = [cell for cell in complex_.levels[2] if cell.key == key]

    assert not cell.is_alternating
    assert len(complex_.alternating(2)) < len(complex_.levels[2])


def test_boundary_matrix_shape(genus2_homology) -> None:
    complex_ = genus2_homology(5).complex
    matrix = boundary_matrix(complex_, 2)

    assert len(matrix) == len(complex_.alternating(1))
    assert all(len(row) == len(complex_.alternating(2)) for row in matrix)


def test_closure_of_nothing_and_of_everything(genus2_homology) -> None:
    complex_ = genus2_homology(3).complex
    everything = [(n, i) for n, level in enumerate(complex_.levels) for i in range(len(level))]

    assert subcomplex_closure(complex_, []).is_empty()
    full = subcomplex_closure(complex_, everything)
    assert [len(level) for level in full.levels] == [len(level) for level in complex_.levels]
    assert betti(full).betti == betti(complex_).betti


def test_closure_contains_all_faces(genus2_homology) -> None:
    complex_ = genus2_homology(3).complex
    closure = subcomplex_closure(complex_, [(2, 0)])

    assert len(closure.levels[2]) == 1
    assert closure.origin[2] == [0]
    assert set(closure.origin[1]) == {item.target for item in complex_.faces[2][0]}


def test_star_closure_of_a_vertex(genus2_homology) -> None:
    complex_ = genus2_homology(3).complex
    star = star_closure(complex_, 0)

    assert 0 in star.origin[0]
    with pytest.raises(UnknownCellError):
        star_closure(complex_, len(complex_.levels[0]))


def _shuffled(level: CensusLevel, rng: random.Random) -> CensusLevel:
    pairs = list(zip(level.keys, level.covers))
    rng.shuffle(pairs)
    return CensusLevel(
        genus=level.genus,
        p=level.p,
        dimension=level.dimension,
        covers=[cover for _, cover in pairs],
        keys=[key for key, _ in pairs],
        counts_by_target=dict(level.counts_by_target),
    )


@pytest.mark.parametrize("p", [5, 7])
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_homology_ignores_tie_breaks_and_input_order(p: int, seed: int) -> None:
    reference = homology_of(2, p)
    rng = random.Random(seed)
    levels = [_shuffled(level, rng) for level in reference.census.levels]

    complex_ = assemble(levels, tie_break=random.Random(seed + 100))

    assert boundary_squares_vanish(complex_)
    assert betti(complex_).betti == reference.betti.betti
    assert complex_.chain_dimensions() == reference.complex.chain_dimensions()
