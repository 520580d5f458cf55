from __future__ import annotations

import json

import numpy as np
import pytest

from games import (
    ALICE,
    BOB,
    GameError,
    GameSpec,
    Strategy,
    alice_win_profile,
    bob_vs_bob,
    derived_coloring,
    double_bob_edges,
    oracle_winner,
    payoff_monotone,
    random_labeling_table,
    replay_strategy,
    solve_game,
    stitch_alice,
    trace_play,
    winners_by_depth,
)
from graph_core import FiniteGraph, random_regular_edge_colored, tree_ball
from homgraph import build_hom_approx, is_anti_game_labeling
from solvers import is_homomorphism

ROOT_COLORS = {0: 1, 1: 2, 2: 3}


def root_color(hom):
    return ROOT_COLORS[hom[0]]


def spec(target, x, i, payoff, depth, labeling, delta=3):
    return GameSpec(target, delta, x, i, frozenset(payoff), depth, labeling)


def test_spec_validation(k3):
    with pytest.raises(GameError):
        spec(k3, 3, 1, {1}, 1, root_color)
    with pytest.raises(GameError):
        spec(k3, 0, 4, {1}, 1, root_color)
    with pytest.raises(GameError):
        spec(k3, 0, 1, {1}, 0, root_color)
    with pytest.raises(GameError):
        GameSpec(k3, 3, 0, 1, frozenset({1}), 1, root_color, label_preserving=True)


def test_forced_moves_in_k2(k2):
    labeling = lambda hom: 1 if hom[0] == 0 else 2  # noqa: E731
    result = solve_game(spec(k2, 0, 1, {1}, 1, labeling))
    assert result.winner == BOB
    assert solve_game(spec(k2, 1, 1, {1}, 1, labeling)).winner == ALICE


@pytest.mark.parametrize("x", [0, 1, 2])
@pytest.mark.parametrize("i", [1, 2, 3])
def test_root_labeling_decides_the_winner(k3, x, i):
    expected = ALICE if ROOT_COLORS[x] != i else BOB
    assert solve_game(spec(k3, x, i, {i}, 2, root_color)).winner == expected


def test_minimax_matches_oracle_on_random_tables(k3):
    rng = np.random.default_rng(11)
    for _ in range(10):
        table = random_labeling_table(k3, 3, 1, [1, 2, 3], rng)
        for x in range(3):
            for i in (1, 2, 3):
                game = spec(k3, x, i, {i}, 1, table)
                result = solve_game(game)
                assert result.winner == oracle_winner(game)
                assert replay_strategy(game, result.strategy)


def test_depth_two_against_oracle():
    path = FiniteGraph.from_edges(3, [(0, 1), (1, 2)])
    table = random_labeling_table(path, 3, 2, [1, 2, 3], np.random.default_rng(5))
    game = spec(path, 1, 2, {2}, 2, table)
    assert solve_game(game).winner == oracle_winner(game)


def test_threads_agree(k3):
    table = random_labeling_table(k3, 3, 2, [1, 2, 3], np.random.default_rng(2))
    game = spec(k3, 0, 1, {1}, 2, table)
    assert solve_game(game, threads=2).winner == solve_game(game).winner


def test_random_table_is_total(k3, rng):
    table = random_labeling_table(k3, 3, 1, [1, 2, 3], rng)
    assert len(table) == 24
    assert set(table.values()) <= {1, 2, 3}


def test_partial_table_is_rejected(k3):
    with pytest.raises(GameError):
        solve_game(spec(k3, 0, 1, {1}, 1, {}))


def test_dead_position_is_rejected():
    lonely = FiniteGraph.from_edges(2, [])
    with pytest.raises(GameError):
        solve_game(spec(lonely, 0, 1, {1}, 1, lambda hom: 1))


def test_trace_lists_rounds(k3):
    game = spec(k3, 0, 1, {1}, 2, root_color)
    result = solve_game(game)
    hom, steps = trace_play(game, bob=result.strategy)
    assert [(step.round, step.mover) for step in steps] == [(1, ALICE), (1, BOB), (2, ALICE), (2, BOB)]
    assert steps[0].words == ("a1",)
    assert steps[1].words == ("a2", "a3")
    assert is_homomorphism(tree_ball(3, 2).labeled.graph, k3, hom)


def test_strategy_json(k3):
    result = solve_game(spec(k3, 0, 2, {2}, 1, root_color))
    payload = result.to_dict()
    assert payload["winner"] == ALICE
    assert payload["strategy"]["player"] == ALICE
    assert payload["strategy"]["entries"][0]["position"][0] == 0


def test_strategy_from_dict_restores_the_table(k3):
    game = spec(k3, 0, 1, {1}, 2, root_color)
    strategy = solve_game(game).strategy
    restored = Strategy.from_dict(json.loads(json.dumps(strategy.to_dict())))
    assert restored == strategy
    assert replay_strategy(game, restored)
    with pytest.raises(GameError):
        Strategy.from_dict({"player": "Carol", "entries": []})
    with pytest.raises(GameError):
        Strategy.from_dict({"entries": []})


def test_stitch_alice_with_slack(k2):
    games = [spec(k2, 0, i, {i}, 1, lambda hom: 4) for i in (1, 2, 3)]
    strategies = {}
    for game in games:
        result = solve_game(game)
        assert result.winner == ALICE
        strategies[game.i] = result.strategy
    assert stitch_alice(games, strategies) == (0, 1, 1, 1)


def test_stitch_alice_deeper(k3):
    games = [spec(k3, 0, i, {i}, 2, lambda hom: 4) for i in (1, 2, 3)]
    strategies = {game.i: solve_game(game).strategy for game in games}
    hom = stitch_alice(games, strategies)
    assert hom[0] == 0
    assert is_homomorphism(tree_ball(3, 2).labeled.graph, k3, hom)


def test_stitch_alice_reports_the_failing_index(k3):
    games = [spec(k3, 0, i, {i}, 1, root_color) for i in (1, 2, 3)]
    strategies = {i: Strategy(ALICE) for i in (1, 2, 3)}
    with pytest.raises(GameError, match="Alice's strategy has no move"):
        stitch_alice(games, strategies)
    with pytest.raises(GameError):
        stitch_alice(games[:2], strategies)


def test_bob_vs_bob_with_constant_labeling(k3):
    a = spec(k3, 0, 1, {1}, 2, lambda hom: 1)
    b = spec(k3, 1, 1, {1}, 2, lambda hom: 1)
    h, h_prime = bob_vs_bob(a, b, solve_game(a).strategy, solve_game(b).strategy)
    ball = tree_ball(3, 2)
    assert h[0] == 0 and h_prime[0] == 1
    for u in range(ball.n):
        w = ball.shift(1, u)
        if w is not None:
            assert h_prime[u] == h[w]


def test_bob_vs_bob_with_separate_payoffs(k2):
    labeling = lambda hom: hom[0] + 1  # noqa: E731
    a = spec(k2, 0, 2, {1}, 2, labeling)
    b = spec(k2, 1, 2, {2}, 2, labeling)
    h, h_prime = bob_vs_bob(a, b, solve_game(a).strategy, solve_game(b).strategy)
    assert labeling(h) == 1 and labeling(h_prime) == 2


def test_bob_vs_bob_needs_adjacent_roots():
    path = FiniteGraph.from_edges(3, [(0, 1), (1, 2)])
    a = spec(path, 0, 1, {1}, 1, lambda hom: 1)
    b = spec(path, 2, 1, {1}, 1, lambda hom: 1)
    with pytest.raises(GameError):
        bob_vs_bob(a, b, solve_game(a).strategy, solve_game(b).strategy)


def test_derived_coloring_of_root_labeling(k3):
    assert derived_coloring(k3, 3, 1, root_color) == ROOT_COLORS


def test_derived_coloring_is_total_for_codomain_delta(k3):
    rng = np.random.default_rng(4)
    for _ in range(10):
        table = random_labeling_table(k3, 3, 1, [1, 2, 3], rng)
        coloring = derived_coloring(k3, 3, 1, table)
        assert all(color is not None for color in coloring.values())


def test_derived_coloring_outside_codomain(k3):
    assert derived_coloring(k3, 3, 1, lambda hom: 5) == {0: None, 1: None, 2: None}


def test_alice_win_profile(k2):
    profile = alice_win_profile(k2, 3, 1, lambda hom: 1, [1, 2])
    assert profile[0] == frozenset((i, payoff) for i in (1, 2, 3) for payoff in (frozenset(), frozenset({2})))
    assert payoff_monotone(profile)


def test_profile_is_monotone_on_random_table(k3, rng):
    table = random_labeling_table(k3, 3, 1, [1, 2, 3], rng)
    assert payoff_monotone(alice_win_profile(k3, 3, 1, table, [1, 2, 3]))


def test_winners_by_depth(k3):
    game = spec(k3, 0, 1, {1}, 1, root_color)
    assert winners_by_depth(game, [1, 2]) == {1: BOB, 2: BOB}
    with pytest.raises(GameError):
        winners_by_depth(spec(k3, 0, 1, {1}, 1, {}), [1])


def test_root_coloring_is_anti_game_without_double_bob_edges(k3):
    approx = build_hom_approx(3, 1, k3, label_preserving=False)
    assert is_anti_game_labeling(approx, [root_color(hom) for hom in approx.homs])
    assert double_bob_edges(k3, 3, 1, root_color) == []
    assert double_bob_edges(k3, 3, 2, root_color) == []


def test_constant_labeling_has_double_bob_edges(k3):
    assert double_bob_edges(k3, 3, 1, lambda hom: 1) == [(0, 1, 1), (0, 2, 1), (1, 2, 1)]
    approx = build_hom_approx(3, 1, k3, label_preserving=False)
    assert not is_anti_game_labeling(approx, [1] * approx.n)


def test_double_bob_edges_cross_play_onto_monochromatic_edges(k3):
    rng = np.random.default_rng(8)
    approx = build_hom_approx(3, 1, k3, label_preserving=False)
    for _ in range(10):
        table = random_labeling_table(k3, 3, 1, [1, 2, 3], rng)
        labels = [table[hom] for hom in approx.homs]
        conflicts = double_bob_edges(k3, 3, 1, table)
        if conflicts:
            assert not is_anti_game_labeling(approx, labels)
        for x, x_prime, i in conflicts:
            a, b = spec(k3, x, i, {i}, 1, table), spec(k3, x_prime, i, {i}, 1, table)
            h, h_prime = bob_vs_bob(a, b, solve_game(a).strategy, solve_game(b).strategy)
            u, v = sorted((approx.index(h), approx.index(h_prime)))
            assert (u, v, i) in approx.edges
            assert labels[u] == labels[v] == i


def test_labeled_double_bob_edges_only_use_matching_labels(rng):
    cubic = random_regular_edge_colored(3, 8, rng)
    conflicts = double_bob_edges(cubic, 3, 1, lambda hom: 2, label_preserving=True)
    assert len(conflicts) == 4
    assert all(cubic.label(u, v) == i == 2 for u, v, i in conflicts)
