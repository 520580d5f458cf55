"""Finite-depth Marks games on balls of the Delta-regular tree.

In the game at ``(x, i, R)`` the root of ``tree_ball(delta, depth)`` is mapped to
``x``. In round ``k`` Alice labels the level-``k`` words starting with letter
``i``; Bob then labels the rest of level ``k``. Every newly labeled word must go
to a neighbor of its parent's image (along an edge of the word's last letter in
the label-preserving variant). Alice wins iff ``c(h)`` is not in ``R`` for the
completed homomorphism ``h``.
"""
from __future__ import annotations

import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from graph_core import EdgeLabeledGraph, FiniteGraph, TreeBall, tree_ball
from homgraph import BallHom, enumerate_ball_homs, neighbor_table

logger = logging.getLogger(__name__)

ALICE = "Alice"
BOB = "Bob"

Target = Union[FiniteGraph, EdgeLabeledGraph]
Labeling = Union[Callable[[BallHom], int], Mapping[BallHom, int]]
Position = Tuple[Optional[int], ...]
Move = Tuple[int, ...]


class GameError(RuntimeError):
    """Dead position, partial labeling, or a strategy that does not win."""


@dataclass(frozen=True)
class GameSpec:
    target: Target = field(hash=False)
    delta: int
    x: int
    i: int
    payoff: FrozenSet[int]
    depth: int
    labeling: Labeling = field(hash=False, repr=False)
    label_preserving: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "payoff", frozenset(self.payoff))
        if not 0 <= self.x < self.target.n:
            raise GameError(f"start vertex {self.x} not in target")
        if not 1 <= self.i <= self.delta:
            raise GameError(f"generator {self.i} outside 1..{self.delta}")
        if self.depth < 1:
            raise GameError(f"depth must be at least 1, got {self.depth}")
        if self.label_preserving:
            if not isinstance(self.target, EdgeLabeledGraph):
                raise GameError("label-preserving game needs an edge-labeled target")
            if self.target.delta != self.delta:
                raise GameError(f"target delta {self.target.delta} != {self.delta}")

    def color(self, hom: BallHom) -> int:
        if callable(self.labeling):
            return self.labeling(hom)
        try:
            return self.labeling[hom]
        except KeyError as exc:
            raise GameError(f"labeling is not defined on {hom}") from exc

    def alice_wins(self, hom: BallHom) -> bool:
        return self.color(hom) not in self.payoff

    def to_dict(self) -> Dict[str, object]:
        return {
            "target_n": self.target.n,
            "delta": self.delta,
            "x": self.x,
            "i": self.i,
            "payoff": sorted(self.payoff),
            "depth": self.depth,
            "label_preserving": self.label_preserving,
        }


@dataclass(frozen=True)
class Turn:
    round: int
    mover: str
    vertices: Tuple[int, ...]


@dataclass(frozen=True)
class TraceStep:
    round: int
    mover: str
    words: Tuple[str, ...]
    images: Move

    def to_dict(self) -> Dict[str, object]:
        return {"round": self.round, "mover": self.mover, "words": list(self.words), "images": list(self.images)}


@dataclass
class Strategy:
    """Move table for one player, keyed by the canonical position before the move."""

    player: str
    table: Dict[Position, Move] = field(default_factory=dict)

    def move(self, position: Position) -> Move:
        try:
            return self.table[position]
        except KeyError as exc:
            raise GameError(f"{self.player}'s strategy has no move at {position}") from exc

    def to_dict(self) -> Dict[str, object]:
        entries = sorted(
            ([-1 if image is None else image for image in position], list(move))
            for position, move in self.table.items()
        )
        return {"player": self.player, "entries": [{"position": p, "move": m} for p, m in entries]}

    @classmethod
    def from_dict(cls, payload: Mapping[str, object]) -> "Strategy":
        try:
            player = str(payload["player"])
            entries = list(payload["entries"])  # type: ignore[call-overload]
            table = {
                tuple(None if image == -1 else int(image) for image in entry["position"]): tuple(
                    int(image) for image in entry["move"]
                )
                for entry in entries
            }
        except (KeyError, TypeError, ValueError) as exc:
            raise GameError(f"malformed strategy document: {exc}") from exc
        if player not in (ALICE, BOB):
            raise GameError(f"unknown player {player!r}")
        return cls(player, table)


@dataclass(frozen=True)
class GameResult:
    spec: GameSpec
    winner: str
    strategy: Strategy

    def to_dict(self) -> Dict[str, object]:
        return {"spec": self.spec.to_dict(), "winner": self.winner, "strategy": self.strategy.to_dict()}


class GameBoard:
    """Turn structure and legal moves of one game; positions are level-order partial labelings."""

    def __init__(self, spec: GameSpec) -> None:
        self.spec = spec
        self.ball: TreeBall = tree_ball(spec.delta, spec.depth)
        self._table = neighbor_table(spec.target, spec.label_preserving)
        self._letters = [0] + [
            self.ball.words[v][-1] if spec.label_preserving else 0 for v in range(1, self.ball.n)
        ]
        self.turns: List[Turn] = []
        for k in range(1, spec.depth + 1):
            level = self.ball.level(k)
            self.turns.append(Turn(k, ALICE, tuple(v for v in level if self.ball.words[v][0] == spec.i)))
            self.turns.append(Turn(k, BOB, tuple(v for v in level if self.ball.words[v][0] != spec.i)))

    def initial(self) -> Position:
        return (self.spec.x,) + (None,) * (self.ball.n - 1)

    def candidates(self, position: Position, v: int) -> Tuple[int, ...]:
        parent_image = position[self.ball.parent(v)]
        return self._table[self._letters[v]][parent_image]  # type: ignore[index]

    def moves(self, position: Position, turn: int) -> List[Move]:
        options = []
        for v in self.turns[turn].vertices:
            row = self.candidates(position, v)
            if not row:
                raise GameError(
                    f"dead position: no legal image for {self.ball.labeled.names[v]} "
                    f"below {position[self.ball.parent(v)]}"
                )
            options.append(row)
        return list(itertools.product(*options))

    def is_legal(self, position: Position, turn: int, move: Move) -> bool:
        vertices = self.turns[turn].vertices
        return len(move) == len(vertices) and all(
            image in self.candidates(position, v) for v, image in zip(vertices, move)
        )

    def apply(self, position: Position, turn: int, move: Move) -> Position:
        images = list(position)
        for v, image in zip(self.turns[turn].vertices, move):
            images[v] = image
        return tuple(images)

    def trace_step(self, turn: int, move: Move) -> TraceStep:
        t = self.turns[turn]
        return TraceStep(t.round, t.mover, tuple(self.ball.labeled.names[v] for v in t.vertices), move)


class _Minimax:
    def __init__(self, board: GameBoard) -> None:
        self.board = board
        self.memo: Dict[Position, bool] = {}

    def alice_wins(self, position: Position, turn: int) -> bool:
        if turn == len(self.board.turns):
            return self.board.spec.alice_wins(position)  # type: ignore[arg-type]
        cached = self.memo.get(position)
        if cached is not None:
            return cached
        alice_to_move = self.board.turns[turn].mover == ALICE
        outcomes = (self.alice_wins(self.board.apply(position, turn, m), turn + 1)
                    for m in self.board.moves(position, turn))
        value = any(outcomes) if alice_to_move else all(outcomes)
        self.memo[position] = value
        return value

    def extract(self, winner: str) -> Strategy:
        strategy = Strategy(winner)
        wants = winner == ALICE
        stack = [(self.board.initial(), 0)]
        while stack:
            position, turn = stack.pop()
            if turn == len(self.board.turns):
                continue
            moves = self.board.moves(position, turn)
            if self.board.turns[turn].mover == winner:
                chosen = next(m for m in moves if self.alice_wins(self.board.apply(position, turn, m), turn + 1) == wants)
                strategy.table[position] = chosen
                stack.append((self.board.apply(position, turn, chosen), turn + 1))
            else:
                stack.extend((self.board.apply(position, turn, m), turn + 1) for m in moves)
        return strategy


def solve_game(spec: GameSpec, threads: int = 1) -> GameResult:
    board = GameBoard(spec)
    solver = _Minimax(board)
    root = board.initial()
    if threads > 1:
        first = board.moves(root, 0)

        def evaluate(move: Move) -> Dict[Position, bool]:
            worker = _Minimax(board)
            worker.alice_wins(board.apply(root, 0, move), 1)
            return worker.memo

        with ThreadPoolExecutor(max_workers=threads) as pool:
            for memo in pool.map(evaluate, first):
                solver.memo.update(memo)
    winner = ALICE if solver.alice_wins(root, 0) else BOB
    logger.debug("game x=%d i=%d depth=%d: %s wins (%d positions)", spec.x, spec.i, spec.depth, winner, len(solver.memo))
    return GameResult(spec, winner, solver.extract(winner))


# -- brute-force oracle ----------------------------------------------------------


class Tree:
    def __init__(self, children: List["Tree"]) -> None:
        self.children = children


class Terminal(Tree):
    def __init__(self, value: int) -> None:
        # a terminal state is a tree with no children
        super().__init__([])
        self.value = value


def play_tree(spec: GameSpec) -> Tree:
    """Every complete play as an explicit tree; leaf value 1 when Alice wins."""

    board = GameBoard(spec)

    def build(position: Position, turn: int) -> Tree:
        if turn == len(board.turns):
            return Terminal(1 if spec.alice_wins(position) else 0)  # type: ignore[arg-type]
        return Tree([build(board.apply(position, turn, m), turn + 1) for m in board.moves(position, turn)])

    return build(board.initial(), 0)


def minimax(tree: Tree, maximising_player: bool) -> int:
    if isinstance(tree, Terminal):
        return tree.value
    func = max if maximising_player else min
    return func(minimax(sub, not maximising_player) for sub in tree.children)


def oracle_winner(spec: GameSpec) -> str:
    return ALICE if minimax(play_tree(spec), True) == 1 else BOB


# -- replay and traces -----------------------------------------------------------


def replay_strategy(spec: GameSpec, strategy: Strategy) -> bool:
    """Whether ``strategy`` wins against every sequence of opposing moves."""

    board = GameBoard(spec)
    wants = strategy.player == ALICE

    def wins(position: Position, turn: int) -> bool:
        if turn == len(board.turns):
            return spec.alice_wins(position) == wants  # type: ignore[arg-type]
        if board.turns[turn].mover == strategy.player:
            move = strategy.table.get(position)
            if move is None or not board.is_legal(position, turn, move):
                return False
            return wins(board.apply(position, turn, move), turn + 1)
        return all(wins(board.apply(position, turn, m), turn + 1) for m in board.moves(position, turn))

    return wins(board.initial(), 0)


def trace_play(
    spec: GameSpec, alice: Optional[Strategy] = None, bob: Optional[Strategy] = None
) -> Tuple[BallHom, List[TraceStep]]:
    """Play one game; a player without a strategy takes the first legal move."""

    board = GameBoard(spec)
    position = board.initial()
    steps: List[TraceStep] = []
    for turn, t in enumerate(board.turns):
        strategy = alice if t.mover == ALICE else bob
        move = strategy.move(position) if strategy is not None else board.moves(position, turn)[0]
        if not board.is_legal(position, turn, move):
            raise GameError(f"illegal move {move} for {t.mover} in round {t.round}")
        position = board.apply(position, turn, move)
        steps.append(board.trace_step(turn, move))
    return tuple(position), steps  # type: ignore[return-value]


# -- strategy composition --------------------------------------------------------


def stitch_alice(specs: Sequence[GameSpec], strategies: Mapping[int, Strategy]) -> BallHom:
    """Let Alice's strategy for each ``i`` build the ``a_i`` side of one homomorphism."""

    if not specs:
        raise GameError("no games to stitch")
    first = specs[0]
    by_index = {spec.i: spec for spec in specs}
    if sorted(by_index) != list(range(1, first.delta + 1)):
        raise GameError(f"need one game per generator 1..{first.delta}, got {sorted(by_index)}")
    for spec in specs:
        if (spec.x, spec.depth, spec.delta) != (first.x, first.depth, first.delta):
            raise GameError("stitched games must share root, depth and delta")
    boards = {i: GameBoard(spec) for i, spec in by_index.items()}
    position = boards[1].initial()
    for k in range(1, first.depth + 1):
        before = position
        for i in sorted(by_index):
            strategy = strategies.get(i)
            if strategy is None or strategy.player != ALICE:
                raise GameError(f"no Alice strategy supplied for i={i}")
            turn = 2 * (k - 1)
            move = strategy.move(before)
            if not boards[i].is_legal(before, turn, move):
                raise GameError(f"Alice's strategy for i={i} made an illegal move in round {k}")
            position = boards[i].apply(position, turn, move)
    hom: BallHom = tuple(position)  # type: ignore[assignment]
    for i, spec in sorted(by_index.items()):
        if not spec.alice_wins(hom):
            raise GameError(f"Alice's strategy for i={i} lost: c(h)={spec.color(hom)} in {sorted(spec.payoff)}")
    return hom


def _bob_step(board: GameBoard, strategy: Strategy, position: Position, turn: int) -> Position:
    move = strategy.move(position)
    if not board.is_legal(position, turn, move):
        raise GameError(
            f"Bob's strategy at x={board.spec.x} made an illegal move in round {board.turns[turn].round}"
        )
    return board.apply(position, turn, move)


def bob_vs_bob(
    spec_a: GameSpec, spec_b: GameSpec, strategy_a: Strategy, strategy_b: Strategy
) -> Tuple[BallHom, BallHom]:
    """Cross-play two Bob strategies at adjacent roots; each Alice copies the other Bob.

    Alice at ``x`` answers with ``h(a_i u) = h'(u)`` and Alice at ``x'`` with
    ``h'(a_i u) = h(u)``, so the two results are ``a_i``-shift compatible.
    """

    i = spec_a.i
    if spec_b.i != i or spec_a.depth != spec_b.depth or spec_a.delta != spec_b.delta:
        raise GameError("cross-played games need the same generator, depth and delta")
    if strategy_a.player != BOB or strategy_b.player != BOB:
        raise GameError("cross-play needs a Bob strategy for both games")
    x, x_prime = spec_a.x, spec_b.x
    target_graph = spec_a.target.graph if isinstance(spec_a.target, EdgeLabeledGraph) else spec_a.target
    if not target_graph.has_edge(x, x_prime):
        raise GameError(f"roots {x} and {x_prime} are not adjacent")
    if spec_a.label_preserving and spec_a.target.label(x, x_prime) != i:  # type: ignore[union-attr]
        raise GameError(f"edge ({x}, {x_prime}) does not carry label {i}")

    board_a, board_b = GameBoard(spec_a), GameBoard(spec_b)
    ball = board_a.ball
    pos_a, pos_b = board_a.initial(), board_b.initial()
    for k in range(1, spec_a.depth + 1):
        alice_turn, bob_turn = 2 * (k - 1), 2 * (k - 1) + 1
        copy_a = tuple(pos_b[ball.shift(i, v)] for v in board_a.turns[alice_turn].vertices)  # type: ignore[index]
        copy_b = tuple(pos_a[ball.shift(i, v)] for v in board_b.turns[alice_turn].vertices)  # type: ignore[index]
        if not board_a.is_legal(pos_a, alice_turn, copy_a) or not board_b.is_legal(pos_b, alice_turn, copy_b):
            raise GameError(f"copied Alice move is illegal in round {k}")
        pos_a = board_a.apply(pos_a, alice_turn, copy_a)
        pos_b = board_b.apply(pos_b, alice_turn, copy_b)
        pos_a = _bob_step(board_a, strategy_a, pos_a, bob_turn)
        pos_b = _bob_step(board_b, strategy_b, pos_b, bob_turn)

    h: BallHom = tuple(pos_a)  # type: ignore[assignment]
    h_prime: BallHom = tuple(pos_b)  # type: ignore[assignment]
    for u in range(ball.n):
        w = ball.shift(i, u)
        if w is not None and h_prime[u] != h[w]:
            raise GameError(f"cross-play lost shift compatibility at {ball.labeled.names[u]}")
    if spec_a.alice_wins(h):
        raise GameError(f"Bob's strategy at x={x} lost: c(h)={spec_a.color(h)}")
    if spec_b.alice_wins(h_prime):
        raise GameError(f"Bob's strategy at x={x_prime} lost: c(h')={spec_b.color(h_prime)}")
    return h, h_prime


# -- whole-target views ----------------------------------------------------------


def _codomain(target: Target, delta: int, depth: int, labeling: Labeling, x: int, label_preserving: bool) -> FrozenSet[int]:
    ball = tree_ball(delta, depth)
    sample = GameSpec(target, delta, x, 1, frozenset(), depth, labeling, label_preserving)
    return frozenset(sample.color(hom) for hom in enumerate_ball_homs(ball, target, label_preserving, x))


def derived_coloring(
    target: Target, delta: int, depth: int, labeling: Labeling, label_preserving: bool = False
) -> Dict[int, Optional[int]]:
    """Least ``i`` with Bob winning the game at ``(x, i, {i})``, or None."""

    coloring: Dict[int, Optional[int]] = {}
    for x in range(target.n):
        coloring[x] = None
        for i in range(1, delta + 1):
            spec = GameSpec(target, delta, x, i, frozenset({i}), depth, labeling, label_preserving)
            if solve_game(spec).winner == BOB:
                coloring[x] = i
                break
        if coloring[x] is None and _codomain(target, delta, depth, labeling, x, label_preserving) <= set(range(1, delta + 1)):
            raise GameError(f"Alice wins every game at x={x} although the labeling only uses colors 1..{delta}")
    return coloring


def double_bob_edges(
    target: Target, delta: int, depth: int, labeling: Labeling, label_preserving: bool = False
) -> List[Tuple[int, int, int]]:
    """Target edges ``(x, x', i)`` where Bob wins both ``(x, i, {i})`` and ``(x', i, {i})``.

    Cross-playing the two Bob strategies lands on an ``a_i``-edge of the hom
    approximation with both ends colored ``i``, so a nonempty result rules out
    an anti-game labeling at this depth.
    """

    if label_preserving:
        candidates = list(target.labeled_edges())  # type: ignore[union-attr]
    else:
        plain = target.graph if isinstance(target, EdgeLabeledGraph) else target
        candidates = [(u, v, i) for u, v in plain.edges() for i in range(1, delta + 1)]
    bob_wins: Dict[Tuple[int, int], bool] = {}

    def bob(x: int, i: int) -> bool:
        if (x, i) not in bob_wins:
            spec = GameSpec(target, delta, x, i, frozenset({i}), depth, labeling, label_preserving)
            bob_wins[(x, i)] = solve_game(spec).winner == BOB
        return bob_wins[(x, i)]

    return [(u, v, i) for u, v, i in candidates if bob(u, i) and bob(v, i)]


def alice_win_profile(
    target: Target,
    delta: int,
    depth: int,
    labeling: Labeling,
    codomain: Iterable[int],
    label_preserving: bool = False,
) -> Dict[int, FrozenSet[Tuple[int, FrozenSet[int]]]]:
    """For each ``x`` the pairs ``(i, R)`` with ``R`` a subset of ``codomain`` that Alice wins."""

    colors = sorted(set(codomain))
    subsets = [frozenset(c) for r in range(len(colors) + 1) for c in itertools.combinations(colors, r)]
    profile: Dict[int, FrozenSet[Tuple[int, FrozenSet[int]]]] = {}
    for x in range(target.n):
        wins = set()
        for i in range(1, delta + 1):
            for payoff in subsets:
                spec = GameSpec(target, delta, x, i, payoff, depth, labeling, label_preserving)
                if solve_game(spec).winner == ALICE:
                    wins.add((i, payoff))
        profile[x] = frozenset(wins)
    return profile


def payoff_monotone(profile: Mapping[int, FrozenSet[Tuple[int, FrozenSet[int]]]]) -> bool:
    """Alice winning against ``R'`` implies winning against every subset of ``R'``."""

    for wins in profile.values():
        for i, payoff in wins:
            for r in range(len(payoff)):
                for smaller in itertools.combinations(sorted(payoff), r):
                    if (i, frozenset(smaller)) not in wins:
                        return False
    return True


def winners_by_depth(spec: GameSpec, depths: Iterable[int]) -> Dict[int, str]:
    """Winner at each depth; the labeling must be defined at every depth."""

    return {d: solve_game(replace(spec, depth=d)).winner for d in depths}


def random_labeling_table(
    target: Target,
    delta: int,
    depth: int,
    codomain: Sequence[int],
    rng: np.random.Generator,
    label_preserving: bool = False,
) -> Dict[BallHom, int]:
    homs = enumerate_ball_homs(tree_ball(delta, depth), target, label_preserving)
    picks = rng.integers(0, len(codomain), size=len(homs))
    return {hom: int(codomain[p]) for hom, p in zip(homs, picks)}
