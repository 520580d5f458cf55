from __future__ import annotations

import numpy as np
import pytest

from graph_core import (
    EdgeLabeledGraph,
    FiniteGraph,
    GraphError,
    categorical_product,
    complete_graph,
    cycle_graph,
    edgeless_graph,
    g0_truncation,
    h_delta,
    iter_bits,
    named_graph,
    path_graph,
    random_g0_path_seq,
    random_g0_seq,
    random_graph,
    random_regular_edge_colored,
    shift_graph,
    tree_ball,
    tree_ball_size,
)

G0_SEQ = [((), 1), ((0,), 2), ((1, 1), 3)]


def test_from_edges_rejects_loops_and_out_of_range():
    with pytest.raises(GraphError):
        FiniteGraph.from_edges(3, [(1, 1)])
    with pytest.raises(GraphError):
        FiniteGraph.from_edges(3, [(0, 3)])


def test_from_edges_merges_duplicates():
    g = FiniteGraph.from_edges(3, [(0, 1), (1, 0), (1, 2)])
    assert g.edges() == [(0, 1), (1, 2)]
    assert g.neighbors[1] == (0, 2)
    assert list(iter_bits(g.masks[1])) == [0, 2]


def test_small_constructions():
    assert complete_graph(1).n == 1
    assert complete_graph(1).edge_count == 0
    assert complete_graph(4).edge_count == 6
    assert cycle_graph(5).edges() == [(0, 1), (0, 4), (1, 2), (2, 3), (3, 4)]
    assert path_graph(4).is_acyclic()
    assert not cycle_graph(4).is_acyclic()
    assert edgeless_graph(3).max_degree == 0


def test_adjacency_matrix_round_trip(petersen):
    matrix = petersen.adjacency_matrix()
    assert (matrix == matrix.T).all()
    assert FiniteGraph.from_adjacency_matrix(matrix) == petersen


def test_labeled_graph_rejects_conflicting_labels():
    with pytest.raises(GraphError):
        EdgeLabeledGraph.from_labeled_edges(2, 3, [(0, 1, 1), (1, 0, 2)])
    with pytest.raises(GraphError):
        EdgeLabeledGraph.from_labeled_edges(2, 3, [(0, 1, 4)])


def test_tree_ball_sizes_and_order():
    ball = tree_ball(3, 2)
    assert ball.n == 10 == tree_ball_size(3, 2)
    assert tree_ball(3, 0).n == 1
    assert tree_ball(4, 2).n == 1 + 4 + 12
    assert ball.words[:4] == ((), (1,), (2,), (3,))
    assert ball.words[4:6] == ((1, 2), (1, 3))
    assert ball.level(1) == [1, 2, 3]
    assert ball.parent(ball.index[(2, 3)]) == ball.index[(2,)]


def test_tree_ball_shift():
    ball = tree_ball(3, 2)
    assert ball.shift(1, ball.index[(1,)]) == 0
    assert ball.shift(1, ball.index[(2,)]) == ball.index[(1, 2)]
    assert ball.shift(1, ball.index[(2, 3)]) is None


def test_tree_ball_is_labeled_tree():
    labeled = tree_ball(3, 2).labeled
    assert labeled.graph.is_acyclic()
    assert labeled.is_proper_edge_coloring()
    assert labeled.names[:2] == ("1", "a1")


def test_tree_ball_rejects_small_delta():
    with pytest.raises(GraphError):
        tree_ball(2, 1)


def test_categorical_product_k3_k3():
    product = categorical_product(complete_graph(3), complete_graph(3))
    assert product.n == 9
    assert product.edge_count == 18
    # pair (a, b) is vertex 3a + b
    assert product.has_edge(0 * 3 + 1, 1 * 3 + 2)
    assert not product.has_edge(0 * 3 + 1, 0 * 3 + 2)


@pytest.mark.parametrize("delta, n", [(3, 9), (4, 16), (5, 25)])
def test_h_delta_vertex_count(delta, n):
    assert h_delta(delta).graph.n == n


def test_h_delta_layout():
    hd = h_delta(3)
    assert hd.graph.edge_count == 16
    assert hd.dagger == 8
    assert set(hd.graph.neighbors[hd.dagger]) == set(hd.p_vertices)
    assert hd.graph.has_edge(hd.v0[0], hd.p(1, 0))
    assert not hd.graph.has_edge(hd.v0[0], hd.p(0, 1))
    assert hd.roles()["dagger"] == 8
    with pytest.raises(GraphError):
        h_delta(2)


def test_g0_truncation_example():
    g = g0_truncation(3, 3, G0_SEQ)
    assert g.n == 8
    assert g.graph.edge_count == 7
    assert g.graph.is_acyclic()
    assert g.names[0] == "000"
    assert g.label(0, 4) == 1
    assert g.label(6, 7) == 3


def test_g0_truncation_drops_components_missing_labels():
    g = g0_truncation(3, 3, [((), 1), ((0,), 1), ((1, 1), 2)])
    assert g.n == 0


def test_g0_truncation_validates_seq():
    with pytest.raises(GraphError):
        g0_truncation(3, 2, [((0,), 1), ((0,), 2)])
    with pytest.raises(GraphError):
        g0_truncation(3, 1, [((), 4)])
    with pytest.raises(GraphError):
        g0_truncation(3, 2, [((), 1)])


@pytest.mark.parametrize(
    "name, n, m",
    [("grotzsch", 11, 20), ("chvatal", 12, 24), ("petersen", 10, 15), ("cycle(5)", 5, 5), ("k4", 4, 6),
     ("hdelta3", 9, 16)],
)
def test_named_graphs(name, n, m):
    g = named_graph(name)
    assert (g.n, g.edge_count) == (n, m)


def test_named_graph_unknown():
    with pytest.raises(GraphError):
        named_graph("dodecahedron")


def test_shift_graph():
    g = shift_graph(4, 2)
    assert g.n == 6
    assert g.edge_count == 4
    with pytest.raises(GraphError):
        shift_graph(3, 4)


def test_random_graph_is_seeded():
    a = random_graph(8, 0.5, np.random.default_rng(3))
    b = random_graph(8, 0.5, np.random.default_rng(3))
    assert a == b


def test_random_regular_edge_colored(rng):
    g = random_regular_edge_colored(3, 8, rng)
    assert g.is_regular(3)
    assert g.is_proper_edge_coloring()
    with pytest.raises(GraphError):
        random_regular_edge_colored(3, 7, rng)


def test_random_g0_seq_shape(rng):
    seq = random_g0_seq(3, 3, rng)
    assert [len(prefix) for prefix, _ in seq] == [0, 1, 2]
    assert all(1 <= label <= 3 for _, label in seq)


@pytest.mark.parametrize("delta", [3, 4, 5])
@pytest.mark.parametrize("radius", [0, 1, 2, 3, 4])
def test_tree_ball_closed_formula(delta, radius):
    ball = tree_ball(delta, radius)
    assert ball.n == 1 + delta * ((delta - 1) ** radius - 1) // (delta - 2)
    assert ball.labeled.is_proper_edge_coloring()
    assert ball.labeled.graph.edge_count == ball.n - 1


@pytest.mark.parametrize("seed", range(5))
def test_categorical_product_degrees(seed):
    rng = np.random.default_rng(seed)
    g = random_graph(5, 0.5, rng)
    h = random_graph(4, 0.6, rng)
    product = categorical_product(g, h)
    for a in range(g.n):
        for b in range(h.n):
            assert product.degree(a * h.n + b) == g.degree(a) * h.degree(b)


def test_g0_truncation_is_acyclic_for_random_seqs():
    rng = np.random.default_rng(21)
    for _ in range(60):
        depth = int(rng.integers(1, 11))
        delta = int(rng.integers(3, 5))
        g = g0_truncation(delta, depth, random_g0_seq(depth, delta, rng))
        assert g.graph.is_acyclic()


@pytest.mark.parametrize("depth", [5, 6, 8])
def test_random_g0_path_seq(rng, depth):
    seq = random_g0_path_seq(depth, 3, rng)
    word = seq[-1][0]
    assert all(prefix == word[:k] for k, (prefix, _) in enumerate(seq))
    assert {label for _, label in seq[:3]} == {1, 2, 3}
    g = g0_truncation(3, depth, seq)
    assert g.n == 2 ** depth
    assert g.graph.is_acyclic()
