from __future__ import annotations

import pytest

from tcov.domain.canonical import automorphisms, canonical_labeling
from tcov.domain.errors import (
    DisconnectedGraphError,
    FixedPointMismatchError,
    InvalidInvolutionError,
    NegativeGenusError,
)
from tcov.domain.graph import (
    build_graph,
    dumbbell_graph,
    figure_eight_graph,
    from_edge_list,
    theta_graph,
)


def test_single_loop_spec_is_a_genus_two_graph() -> None:
    graph = build_graph({"involution": [0, 2, 1], "root": [0, 0, 0], "vertex_genus": {"0": 1}})

    assert graph.vertices == (0,)
    assert graph.edges == ((1, 2),)
    assert graph.genus() == 2
    assert graph.is_stable()


def test_involution_with_three_cycle_is_rejected() -> None:
    with pytest.raises(InvalidInvolutionError):
        build_graph({"involution": [0, 2, 3, 1], "root": [0, 0, 0, 0]})


def test_root_must_hit_exactly_the_fixed_points() -> None:
    with pytest.raises(FixedPointMismatchError):
        build_graph({"involution": [0, 1, 3, 2], "root": [0, 0, 0, 0]})


def test_negative_vertex_genus_is_rejected() -> None:
    with pytest.raises(NegativeGenusError):
        from_edge_list([-1], [(0, 0), (0, 0)])


def test_theta_and_dumbbell_have_genus_two() -> None:
    theta = theta_graph()
    dumbbell = dumbbell_graph()

    assert len(theta.half_edges) == 6
    assert theta.genus() == 2
    assert dumbbell.genus() == 2
    assert from_edge_list([2], []).genus() == 2


def test_genus_needs_a_connected_graph() -> None:
    with pytest.raises(DisconnectedGraphError):
        from_edge_list([1, 1], []).genus()


def test_stability_per_vertex() -> None:
    graph = from_edge_list([0, 1, 0], [(0, 1), (0, 2), (2, 2), (2, 1)])

    assert graph.stability_excess(0) == 0
    assert not graph.is_stable_at(0)
    assert from_edge_list([1, 1], [(0, 1)]).stability_excess(0) == 1
    assert theta_graph().is_stable_at(0)


def test_contracting_the_dumbbell_bridge_gives_a_figure_eight() -> None:
    contracted = dumbbell_graph().contract_edge(1)

    assert len(contracted.vertices) == 1
    assert contracted.genus_of(contracted.vertices[0]) == 0
    assert len(contracted.classify_edges().loops) == 2


def test_contracting_a_dumbbell_loop_raises_the_vertex_genus() -> None:
    contracted = dumbbell_graph().contract_edge(0)
    genera = sorted(contracted.genus_of(v) for v in contracted.vertices)

    assert genera == [0, 1]
    assert len(contracted.classify_edges().loops) == 1
    assert len(contracted.classify_edges().bridges) == 1


def test_contracting_a_theta_edge_gives_a_figure_eight() -> None:
    contracted = theta_graph().contract_edge(0)

    assert len(contracted.vertices) == 1
    assert contracted.num_edges == 2
    assert contracted.genus_of(contracted.vertices[0]) == 0


@pytest.mark.parametrize("graph", [theta_graph(), dumbbell_graph(), figure_eight_graph()])
def test_contraction_preserves_genus(graph) -> None:
    for e in range(graph.num_edges):
        assert graph.contract_edge(e).genus() == graph.genus()


def test_automorphism_group_orders() -> None:
    assert len(automorphisms(theta_graph())) == 12
    assert len(automorphisms(figure_eight_graph())) == 8
    assert len(automorphisms(dumbbell_graph(1, 0))) == 4


def test_canonical_keys_separate_isomorphism_classes() -> None:
    theta_key, _ = canonical_labeling(theta_graph())
    relabeled = from_edge_list([0, 0], [(1, 0), (0, 1), (1, 0)])
    swapped_key, _ = canonical_labeling(dumbbell_graph(0, 1))

    assert canonical_labeling(relabeled)[0] == theta_key
    assert canonical_labeling(dumbbell_graph())[0] != theta_key
    assert canonical_labeling(dumbbell_graph(1, 0))[0] == swapped_key


def test_cut_components() -> None:
    assert dumbbell_graph().cut_component_edges(0) == [frozenset({0}), frozenset({1, 2})]
    assert theta_graph().cut_component_edges(0) == [frozenset({0, 1, 2})]
    assert len(figure_eight_graph().cut_component_edges(0)) == 2


@pytest.mark.parametrize(
    "graph",
    [dumbbell_graph(1, 0), figure_eight_graph(), theta_graph(), from_edge_list([1, 0, 0], [(0, 1), (0, 2), (1, 2), (0, 0)])],
)
def test_cut_components_reassemble(graph) -> None:
    v = graph.vertices[0]
    parts = graph.cut_components(v)

    assert sum(part.num_edges for part in parts) == graph.num_edges
    assert sum(part.genus() for part in parts) - (len(parts) - 1) * graph.genus_of(v) == graph.genus()


def test_classify_edges() -> None:
    dumbbell = dumbbell_graph().classify_edges()
    theta = theta_graph().classify_edges()

    assert dumbbell.loops == frozenset({0, 2})
    assert dumbbell.bridges == frozenset({1})
    assert not theta.loops and not theta.bridges
    assert theta.parallel_classes == (frozenset({0, 1, 2}),)
    assert from_edge_list([1, 1], [(0, 1)]).classify_edges().bridges == frozenset({0})
