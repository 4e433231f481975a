from __future__ import annotations

import random

from hypothesis import given, settings
from hypothesis import strategies as st

from tcov.application.services.properties import (
    brute_force_isomorphic,
    random_relabel,
    random_switch,
    relabel_cover,
    riemann_hurwitz_holds,
)
from tcov.domain.families import (
    butterfly,
    dilated_side,
    dilated_theta,
    dumbbell,
    equivariant_bridge,
    free_side,
    free_theta,
    mixed_theta,
    parallel_bridge,
    ring,
    spiral,
)
from tcov.domain.pcover import isomorphic, validate

SAMPLE_COVERS = [
    ring(2, 5, 2),
    butterfly(2, 5),
    spiral(2, 5, 3),
    equivariant_bridge(2, 5, 1),
    parallel_bridge(2, 5, 1),
    free_theta(5, 0, 1, 2),
    free_theta(7, 0, 1, 3),
    mixed_theta(5, 1),
    dilated_theta(7, 1, 2, 4),
    dumbbell(5, free_side(1), dilated_side(2)),
    dumbbell(7, free_side(2), free_side(3)),
]

covers = st.sampled_from(SAMPLE_COVERS)


@settings(max_examples=40, deadline=None)
@given(cover=covers, seed=st.integers(min_value=0, max_value=10_000))
def test_relabeling_keeps_the_class(cover, seed: int) -> None:
    relabeled = random_relabel(cover, random.Random(seed))

    assert validate(relabeled).ok
    assert isomorphic(cover, relabeled)


@settings(max_examples=40, deadline=None)
@given(cover=covers, seed=st.integers(min_value=0, max_value=10_000))
def test_switching_keeps_the_class(cover, seed: int) -> None:
    assert isomorphic(cover, random_switch(cover, random.Random(seed)))


def test_identity_relabel() -> None:
    cover = free_theta(5, 0, 1, 2)
    same = relabel_cover(cover, list(range(cover.target.num_cells)))

    assert same.gains == cover.gains


def test_riemann_hurwitz_on_sample_covers() -> None:
    assert all(riemann_hurwitz_holds(cover) for cover in SAMPLE_COVERS)


def test_brute_force_agrees_with_canonical_keys() -> None:
    small = [cover for cover in SAMPLE_COVERS if cover.p == 5]

    for a in small:
        for b in small:
            assert brute_force_isomorphic(a, b) == isomorphic(a, b)


def test_brute_force_finds_spiral_flip() -> None:
    assert brute_force_isomorphic(spiral(2, 5, 1), spiral(2, 5, 4))
    assert not brute_force_isomorphic(spiral(2, 5, 1), spiral(2, 5, 2))
    assert brute_force_isomorphic(free_theta(5, 0, 1, 2), free_theta(5, 2, 3, 4))
