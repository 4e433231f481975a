from __future__ import annotations

import pytest
from conftest import homology_of

from tcov.application.services.delta_complex import betti, star_union_closure
from tcov.application.services.loci import (
    LOCI,
    bridge_articulation_points,
    classify,
    equivariant_h_bridges,
    equivariant_loop_edges,
    equivariant_parallel_pairs,
    generator_flags,
    in_weight_locus,
    lifted_bridge_edges,
    locus_subcomplex,
    max_1bridge_uncontractions,
    normalized_ascent,
    sparse_connection_witness,
    spiral_articulation_points,
    spiral_edges,
    spiral_point_ascents,
)
from tcov.domain.errors import AssumptionViolatedError, DilatedCoverError
from tcov.domain.families import (
    butterfly,
    dilated_side,
    dumbbell,
    equivariant_bridge,
    free_side,
    free_theta,
    parallel_bridge,
    ring,
    spiral,
)
from tcov.domain.graph import from_edge_list
from tcov.domain.pcover import canonical_form, make_cover


@pytest.mark.parametrize("route", ["direct", "cases"])
def test_weight_locus_examples(route: str) -> None:
    assert in_weight_locus(ring(2, 5, 1), route)
    assert not in_weight_locus(butterfly(2, 5), route)
    assert in_weight_locus(spiral(2, 5, 2), route)
    assert not in_weight_locus(free_theta(5, 0, 1, 2), route)


def test_weight_routes_agree_on_high_dilation() -> None:
    graph = from_edge_list([0], [(0, 0), (0, 0), (0, 0)])
    cover = make_cover(7, graph, dilated_vertices=[0], dilated_flows={0: 1, 1: 2, 2: 3})

    assert in_weight_locus(cover, "direct") == in_weight_locus(cover, "cases")


def test_equivariant_loops() -> None:
    assert equivariant_loop_edges(butterfly(2, 5)) == {0}
    assert equivariant_loop_edges(spiral(2, 5, 1)) == set()
    assert equivariant_loop_edges(ring(2, 5, 1)) == set()


def test_equivariant_bridges() -> None:
    assert equivariant_h_bridges(equivariant_bridge(2, 5, 1)) == {0: 1}
    assert equivariant_h_bridges(parallel_bridge(2, 5, 1)) == {}
    assert equivariant_h_bridges(dumbbell(5, free_side(1), dilated_side(1))) == {}
    assert equivariant_h_bridges(dumbbell(5, free_side(0), dilated_side(1))) == {1: 1}


@pytest.mark.parametrize(
    "cover",
    [
        equivariant_bridge(2, 5, 1),
        parallel_bridge(2, 5, 1),
        dumbbell(5, free_side(1), dilated_side(1)),
        dumbbell(5, free_side(0), dilated_side(2)),
        dumbbell(5, free_side(1), free_side(2)),
    ],
)
def test_bridge_routes_agree(cover) -> None:
    assert set(equivariant_h_bridges(cover)) == lifted_bridge_edges(cover)


def test_one_bridge_uncontraction_counts() -> None:
    assert max_1bridge_uncontractions(butterfly(2, 5), 0) == 1
    assert max_1bridge_uncontractions(equivariant_bridge(2, 5, 1), 1) == 0
    assert max_1bridge_uncontractions(ring(2, 5, 1), 0) == 1


def test_theta_has_no_bridge_articulation_points() -> None:
    result = bridge_articulation_points(free_theta(5, 0, 1, 2), 1)

    assert result.articulation_points == []
    assert set(result.counts.values()) == {0}
    assert not result.in_star


def test_spiral_edges_and_normalized_ascent() -> None:
    assert normalized_ascent(3, 5) == 2
    assert spiral_edges(spiral(2, 5, 2)) == {0: 2}
    assert spiral_edges(spiral(2, 5, 3)) == {0: 2}
    assert spiral_edges(ring(2, 5, 1)) == {}


def test_spiral_articulation_points() -> None:
    assert spiral_articulation_points(spiral(2, 5, 1)) == {0: 1}
    assert spiral_articulation_points(free_theta(5, 0, 0, 1)) == {0: 1, 1: 1}
    assert spiral_articulation_points(free_theta(7, 0, 1, 3)) == {}


def test_spiral_points_need_a_free_cover() -> None:
    with pytest.raises(DilatedCoverError):
        spiral_point_ascents(ring(2, 5, 1))


def test_parallel_pairs_and_sparse_connection() -> None:
    assert equivariant_parallel_pairs(free_theta(5, 0, 0, 1)) == [(0, 1)]
    assert equivariant_parallel_pairs(free_theta(5, 0, 1, 2)) == []
    assert sparse_connection_witness(free_theta(5, 0, 1, 2)) is None
    assert sparse_connection_witness(equivariant_bridge(2, 5, 1)) is not None


def test_generator_flags() -> None:
    assert generator_flags(ring(2, 5, 1)).w
    loop = generator_flags(butterfly(2, 5))
    assert loop.lw and not loop.w
    bridge = generator_flags(equivariant_bridge(2, 5, 1))
    assert bridge.lw and bridge.br
    assert bridge.witness


@pytest.mark.parametrize("p", [3, 5, 7])
def test_loci_are_nested(genus2_homology, p: int) -> None:
    report = classify(genus2_homology(p).complex)

    assert report.is_nested()
    sizes = [len(report.cells_in(locus)) for locus in LOCI]
    assert sizes == sorted(sizes)


@pytest.mark.parametrize(("p", "locus"), [(5, "br"), (3, "par"), (5, "w"), (7, "par")])
def test_loci_are_acyclic(genus2_homology, p: int, locus: str) -> None:
    complex_ = genus2_homology(p).complex

    assert not any(betti(locus_subcomplex(complex_, locus)).reduced)


def test_unknown_locus_is_rejected(genus2_homology) -> None:
    with pytest.raises(ValueError):
        locus_subcomplex(genus2_homology(2).complex, "xyz")


@pytest.mark.slow
def test_two_bridge_articulation_matches_the_bridge_star() -> None:
    result = homology_of(3, 2)
    complex_ = result.complex
    vertex = result.census.levels[0].index_of(canonical_form(equivariant_bridge(3, 2, 2)).key_bytes)
    assert vertex is not None
    star = star_union_closure(complex_, [vertex])
    top = complex_.top_dimension
    in_star = set(star.origin[top])

    verdicts = {}
    violated = 0
    for index, cell in enumerate(complex_.levels[top]):
        try:
            verdicts[index] = bridge_articulation_points(cell.representative, 2)
        except AssumptionViolatedError:
            violated += 1

    assert violated > 0
    assert any(found.in_star for found in verdicts.values())
    assert any(not found.in_star for found in verdicts.values())
    assert all(found.in_star == (index in in_star) for index, found in verdicts.items())


def test_two_bridge_articulation_needs_its_assumption() -> None:
    cover = equivariant_bridge(3, 2, 1)

    with pytest.raises(AssumptionViolatedError):
        bridge_articulation_points(cover, 2)
