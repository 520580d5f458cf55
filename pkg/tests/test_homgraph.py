from __future__ import annotations

import pytest

from graph_core import FiniteGraph, complete_graph, edgeless_graph, g0_truncation, tree_ball
from homgraph import (
    HomGraphError,
    analyze,
    approx_to_dot,
    build_hom_approx,
    enumerate_ball_homs,
    is_anti_game_labeling,
    shortest_cycle,
)
from solvers import SizeGuardError, SolverLimits, is_homomorphism

G0_PATH_SEQ = [((), 1), ((0,), 2), ((0, 0), 3), ((0, 0, 0), 1), ((0, 0, 0, 0), 2)]


def test_enumerate_ball_homs_is_lexicographic(k3):
    ball = tree_ball(3, 1)
    homs = enumerate_ball_homs(ball, k3, label_preserving=False)
    assert len(homs) == 24
    assert homs == sorted(homs)
    assert all(is_homomorphism(ball.labeled.graph, k3, hom) for hom in homs)
    assert enumerate_ball_homs(ball, k3, False, root_image=2)[0] == (2, 0, 0, 0)


def test_k3_depth_one_approximation(k3):
    approx = build_hom_approx(3, 1, k3, label_preserving=False)
    assert approx.n == 24
    report = analyze(approx)
    assert report.vertex_count == 24
    assert report.root_map_edge_preserving
    assert report.distinct_root_images == 3
    assert report.certificate_depth == 1
    assert all(k3.has_edge(approx.root_map[u], approx.root_map[v]) for u, v, _ in approx.edges)


def test_k2_approximation_has_parallel_edges(k2):
    approx = build_hom_approx(3, 1, k2, label_preserving=False)
    assert approx.homs == ((0, 1, 1, 1), (1, 0, 0, 0))
    assert approx.edges == ((0, 1, 1), (0, 1, 2), (0, 1, 3))
    report = analyze(approx)
    assert report.shortest_cycle == 2
    assert report.degree_histogram == {3: 2}
    assert report.root_map_injective_per_component


def test_labeled_approximation_over_a_tree(labeled_tree):
    approx = build_hom_approx(3, 1, labeled_tree, label_preserving=True)
    assert approx.root_map == (0, 1, 2, 3)
    assert [edge[2] for edge in approx.edges] == [1, 2, 3]
    report = analyze(approx)
    assert report.shortest_cycle is None
    assert report.root_map_injective_per_component
    assert report.non_free_components == 0


def test_labeled_approximation_over_g0_truncation():
    target = g0_truncation(3, 5, G0_PATH_SEQ)
    approx = build_hom_approx(3, 2, target, label_preserving=True)
    assert approx.n > 0
    # only 00000 and 00001 have a rich neighbor for every label
    assert approx.n == 4
    assert set(approx.root_map) == {0, 1}
    report = analyze(approx)
    assert report.shortest_cycle is None or report.shortest_cycle > 4
    assert report.root_map_edge_preserving
    assert report.root_map_injective_per_component


def test_distinct_root_images_shrink_with_depth():
    target = g0_truncation(3, 5, G0_PATH_SEQ)
    limits = SolverLimits(override_guard=True)
    counts = [analyze(build_hom_approx(3, depth, target, True, limits)).distinct_root_images for depth in (1, 2, 3)]
    assert counts == [8, 2, 0]


def test_threads_do_not_change_the_result(k3):
    assert build_hom_approx(3, 1, k3, False, threads=2) == build_hom_approx(3, 1, k3, False)
    assert build_hom_approx(3, 1, k3, False, threads=2).edges == build_hom_approx(3, 1, k3, False).edges


def test_bad_inputs(k3, labeled_tree):
    with pytest.raises(HomGraphError):
        build_hom_approx(3, 1, edgeless_graph(0), False)
    with pytest.raises(HomGraphError):
        build_hom_approx(3, 0, k3, False)
    with pytest.raises(HomGraphError):
        build_hom_approx(3, 1, k3, True)
    with pytest.raises(HomGraphError):
        build_hom_approx(4, 1, labeled_tree, True)


def test_size_guard():
    with pytest.raises(SizeGuardError):
        build_hom_approx(3, 3, complete_graph(5), False, SolverLimits(hom_approx_max_vertices=10))


def test_isolated_target_vertex_has_no_homs():
    approx = build_hom_approx(3, 1, FiniteGraph.from_edges(3, [(0, 1)]), False)
    assert set(approx.root_map) == {0, 1}


def test_anti_game_labeling(k2):
    approx = build_hom_approx(3, 1, k2, label_preserving=False)
    assert is_anti_game_labeling(approx, [1, 2])
    assert not is_anti_game_labeling(approx, [3, 3])


def test_shortest_cycle():
    assert shortest_cycle(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)]) == 3
    assert shortest_cycle(3, [(0, 1, 1), (1, 2, 1)]) is None
    assert shortest_cycle(2, [(0, 1, 1), (0, 1, 2)]) == 2


def test_dot_export(k2):
    text = approx_to_dot(build_hom_approx(3, 1, k2, label_preserving=False))
    assert text.startswith("graph HomApprox {")
    assert '0 [label="h0@0"];' in text
    assert '0 -- 1 [label="a3"];' in text
