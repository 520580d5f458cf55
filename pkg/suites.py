"""Verification suites run by ``app.py verify``.

Each suite checks a family of claims on seeded corpora and reports every claim
with a short statement of what it asserts. A suite that runs out of its time
budget keeps the claims it finished and is flagged INCOMPLETE.
"""
from __future__ import annotations

import itertools
import logging
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

import numpy as np

from games import (
    BOB,
    GameError,
    GameSpec,
    alice_win_profile,
    bob_vs_bob,
    derived_coloring,
    double_bob_edges,
    oracle_winner,
    payoff_monotone,
    random_labeling_table,
    replay_strategy,
    solve_game,
)
from graph_core import (
    EdgeLabeledGraph,
    FiniteGraph,
    g0_truncation,
    h_delta,
    named_graph,
    random_g0_path_seq,
    random_graph,
    random_regular_edge_colored,
)
from homgraph import HomGraphApprox, HomGraphError, analyze, build_hom_approx, is_anti_game_labeling
from solvers import (
    DEFAULT_LIMITS,
    SizeGuardError,
    SolverError,
    SolverLimits,
    check_anti_game,
    chromatic_number,
    color_with,
    delta_star,
    delta_star_problems,
    edge_grabbing_from_orientation,
    find_hom,
    h_delta_witness,
    hedetniemi_gap,
    is_proper_coloring,
    pullback_witness,
    sandwich_coloring,
    sinkless_orientation,
    theta_hom,
)

logger = logging.getLogger(__name__)

SUITES = ("prop53", "sandwich", "homgraph", "games", "orientation", "hedetniemi")


class BudgetExhausted(RuntimeError):
    """The suite's time limit ran out."""


@dataclass(frozen=True)
class Budget:
    name: str = "small"
    random_graphs: int = 200
    exhaustive_max_vertices: int = 5
    g0_instances: int = 20
    game_tables: int = 100
    game_max_depth: int = 1
    profile_tables: int = 5
    orientation_graphs: int = 50
    hedetniemi_pairs: int = 30
    time_limit_seconds: float = 300.0


def build_budget(config: dict, name: str) -> Budget:
    budgets = config.get("verify", {}).get("budgets", {})
    if name not in budgets:
        raise ValueError(f"unknown budget {name!r}; expected one of {sorted(budgets) or ['small']}")
    return Budget(name=name, **budgets[name])


@dataclass
class ClaimResult:
    name: str
    anchor: str
    passed: bool
    detail: str = ""

    def to_dict(self) -> Dict[str, object]:
        return {"name": self.name, "anchor": self.anchor, "passed": self.passed, "detail": self.detail}


@dataclass
class SuiteReport:
    suite: str
    delta: int
    seed: int
    budget: str
    claims: List[ClaimResult] = field(default_factory=list)
    incomplete: bool = False

    @property
    def passed(self) -> bool:
        return not self.incomplete and all(claim.passed for claim in self.claims)

    @property
    def status(self) -> str:
        if self.incomplete:
            return "INCOMPLETE"
        return "PASS" if self.passed else "FAIL"

    def to_dict(self) -> Dict[str, object]:
        return {
            "suite": self.suite,
            "delta": self.delta,
            "seed": self.seed,
            "budget": self.budget,
            "status": self.status,
            "claims": [claim.to_dict() for claim in self.claims],
        }


class Deadline:
    def __init__(self, seconds: float) -> None:
        self.stop_at = time.monotonic() + seconds

    def check(self) -> None:
        if time.monotonic() > self.stop_at:
            raise BudgetExhausted("time limit reached")


@dataclass
class _Context:
    delta: int
    rng: np.random.Generator
    budget: Budget
    deadline: Deadline
    limits: SolverLimits
    claims: List[ClaimResult]

    def claim(self, name: str, anchor: str, passed: bool, detail: str = "") -> None:
        logger.info("%s: %s (%s)", name, "pass" if passed else "FAIL", detail)
        self.claims.append(ClaimResult(name, anchor, passed, detail))


# -- property delta-(*) and H_delta ----------------------------------------------


def _all_graphs(n: int):
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield FiniteGraph.from_edges(n, (pair for bit, pair in enumerate(pairs) if mask >> bit & 1))


def _prop53(ctx: _Context) -> None:
    delta = ctx.delta
    hd = h_delta(delta)
    chi = chromatic_number(hd.graph, ctx.limits).number
    ctx.claim("h_delta_chromatic", "chi(H_delta) = 2delta-2", chi == 2 * delta - 2, f"chi={chi}, n={hd.graph.n}")

    witness = h_delta_witness(hd)
    problems = delta_star_problems(hd.graph, delta, witness)
    ctx.claim("h_delta_witness", "R0 = V0+apex, R1 = V1+apex is a delta-(*) witness", not problems, "; ".join(problems))

    checked = mismatches = 0
    for n in range(1, ctx.budget.exhaustive_max_vertices + 1):
        for g in _all_graphs(n):
            ctx.deadline.check()
            star = delta_star(g, delta, ctx.limits)
            hom = find_hom(g, hd.graph)
            if (star is None) != (hom is None):
                mismatches += 1
            elif hom is not None:
                pullback_witness(g, hom, hd.graph, witness, delta)
                theta_hom(g, star, delta)
            checked += 1
    ctx.claim(
        "hom_equivalence",
        "delta-(*) holds iff a homomorphism into H_delta exists",
        mismatches == 0,
        f"{checked} graphs on <= {ctx.budget.exhaustive_max_vertices} vertices, {mismatches} mismatches",
    )


def _sandwich(ctx: _Context) -> None:
    delta = ctx.delta
    consistent = 0
    total = ctx.budget.random_graphs
    for _ in range(total):
        ctx.deadline.check()
        n = int(ctx.rng.integers(1, 11))
        g = random_graph(n, float(ctx.rng.uniform(0.2, 0.8)), ctx.rng)
        chi = chromatic_number(g, ctx.limits).number
        witness = delta_star(g, delta, ctx.limits)
        ok = not (chi <= delta and witness is None)
        if witness is not None:
            ok = ok and chi <= 2 * delta - 2
            ok = ok and is_proper_coloring(g, sandwich_coloring(g, witness, delta), 2 * delta - 2)
        consistent += ok
    ctx.claim(
        "sandwich",
        "chi <= delta implies delta-(*) implies chi <= 2delta-2",
        consistent == total,
        f"{consistent}/{total} random graphs consistent",
    )
    if delta == 3:
        for name in ("grotzsch", "chvatal"):
            ctx.deadline.check()
            g = named_graph(name)
            witness = delta_star(g, 3, SolverLimits(override_guard=True))
            passed = witness is not None
            if passed:
                theta_hom(g, witness, 3)
            ctx.claim(f"{name}_delta_star", f"the {name} graph satisfies 3-(*)", passed)


# -- hom graphs ------------------------------------------------------------------


def _g0_instance(ctx: _Context) -> EdgeLabeledGraph:
    # prefixes of one word: below depth 2*delta-1 no vertex carries a depth-2 ball
    depth = int(ctx.rng.integers(2 * ctx.delta - 1, 2 * ctx.delta + 1))
    return g0_truncation(ctx.delta, depth, random_g0_path_seq(depth, ctx.delta, ctx.rng))


def _homgraph(ctx: _Context) -> None:
    violations = 0
    built = nonempty = skipped = edges = 0
    for _ in range(ctx.budget.g0_instances):
        ctx.deadline.check()
        target = _g0_instance(ctx)
        try:
            approx = build_hom_approx(ctx.delta, 2, target, label_preserving=True, limits=ctx.limits)
        except SizeGuardError as exc:
            logger.info("skipping g0 instance on %d vertices: %s", target.n, exc)
            skipped += 1
            continue
        except HomGraphError as exc:
            logger.info("approximation invariant broken: %s", exc)
            violations += 1
            continue
        report = analyze(approx)
        built += 1
        nonempty += approx.n > 0
        edges += report.edge_count
        short_cycle = report.shortest_cycle is not None and report.shortest_cycle <= 4
        if short_cycle or not report.root_map_edge_preserving or not report.root_map_injective_per_component:
            violations += 1
    if skipped and not built and not violations:
        raise BudgetExhausted(f"size guard refused all {skipped} g0 instances")
    ctx.claim(
        "labeled_hom_graph_acyclic",
        "label-preserving hom graph over an acyclic target has no short cycles and an injective root map",
        violations == 0 and nonempty > 0,
        f"{built} approximations ({nonempty} nonempty, {edges} edges, {skipped} over the size guard), "
        f"{violations} violations",
    )


# -- games -----------------------------------------------------------------------


def _game_targets() -> List[FiniteGraph]:
    """Graphs on at most three vertices without isolated vertices."""

    targets = []
    for n in (2, 3):
        for g in _all_graphs(n):
            if all(g.degree(v) > 0 for v in range(n)):
                targets.append(g)
    return targets


def _root_coloring_is_anti_game(ctx: _Context, target: FiniteGraph, depth: int, approx: HomGraphApprox) -> bool:
    """A proper coloring read off the root gives an anti-game labeling with no double Bob edge."""

    coloring = color_with(target, ctx.delta)
    if coloring is None:
        return True
    labeling = lambda hom: coloring[hom[0]] + 1  # noqa: E731
    anti_game = is_anti_game_labeling(approx, [labeling(hom) for hom in approx.homs])
    return anti_game and not double_bob_edges(target, ctx.delta, depth, labeling)


def _games(ctx: _Context) -> None:
    delta = ctx.delta
    codomain = list(range(1, delta + 1))
    oracle_mismatch = unsound = undefined = not_monotone = cross_fail = dichotomy_fail = 0
    games_solved = cross_plays = 0
    for depth in range(1, ctx.budget.game_max_depth + 1):
        for target in _game_targets():
            approx = build_hom_approx(delta, depth, target, label_preserving=False, limits=ctx.limits)
            approx_edges = set(approx.edges)
            dichotomy_fail += not _root_coloring_is_anti_game(ctx, target, depth, approx)
            for table_idx in range(ctx.budget.game_tables):
                ctx.deadline.check()
                table = random_labeling_table(target, delta, depth, codomain, ctx.rng)
                labels = [table[hom] for hom in approx.homs]
                anti_game = is_anti_game_labeling(approx, labels)
                results = {}
                for x in range(target.n):
                    for i in codomain:
                        spec = GameSpec(target, delta, x, i, frozenset({i}), depth, table)
                        result = solve_game(spec)
                        results[(x, i)] = result
                        games_solved += 1
                        if result.winner != oracle_winner(spec):
                            oracle_mismatch += 1
                        if not replay_strategy(spec, result.strategy):
                            unsound += 1
                try:
                    derived_coloring(target, delta, depth, table)
                except GameError:
                    undefined += 1
                for x, x_prime in target.edges():
                    for i in codomain:
                        a, b = results[(x, i)], results[(x_prime, i)]
                        if a.winner != BOB or b.winner != BOB:
                            continue
                        cross_plays += 1
                        try:
                            h, h_prime = bob_vs_bob(a.spec, b.spec, a.strategy, b.strategy)
                        except GameError as exc:
                            logger.info("cross-play failed: %s", exc)
                            cross_fail += 1
                            continue
                        u, v = sorted((approx.index(h), approx.index(h_prime)))
                        if anti_game or (u, v, i) not in approx_edges:
                            dichotomy_fail += 1
                if table_idx < ctx.budget.profile_tables:
                    profile = alice_win_profile(target, delta, depth, table, codomain)
                    not_monotone += not payoff_monotone(profile)
    ctx.claim("minimax_matches_oracle", "minimax winner equals brute-force play enumeration",
              oracle_mismatch == 0, f"{games_solved} games, {oracle_mismatch} mismatches")
    ctx.claim("strategies_sound", "extracted strategies win every play", unsound == 0, f"{unsound} unsound")
    ctx.claim("bob_wins_some_index", "with colors 1..delta Bob wins some game at every vertex",
              undefined == 0, f"{undefined} labelings with an undefined vertex")
    ctx.claim("payoff_monotone", "Alice winning against R implies winning against every subset of R",
              not_monotone == 0, f"{not_monotone} violations")
    ctx.claim("cross_play", "two Bob wins at adjacent roots cross-play to shift-compatible homomorphisms",
              cross_fail == 0, f"{cross_plays} cross-plays, {cross_fail} failures")
    ctx.claim("anti_game_dichotomy",
              "an anti-game labeling of the hom approximation leaves no edge with Bob winning at both ends",
              dichotomy_fail == 0, f"{dichotomy_fail} violations")


# -- orientations and products ---------------------------------------------------


def _orientation(ctx: _Context) -> None:
    delta = ctx.delta
    sizes = [n for n in range(delta + 1, 21) if n % 2 == 0]
    failures = 0
    total = ctx.budget.orientation_graphs
    for _ in range(total):
        ctx.deadline.check()
        g = random_regular_edge_colored(delta, int(ctx.rng.choice(sizes)), ctx.rng)
        orientation = sinkless_orientation(g.graph)
        if orientation is None:
            failures += 1
            continue
        try:
            labels = edge_grabbing_from_orientation(g, orientation)
        except SolverError as exc:
            logger.info("edge grabbing failed: %s", exc)
            failures += 1
            continue
        failures += not check_anti_game(g, labels)
    ctx.claim("edge_grabbing", "a sinkless orientation yields an anti-game labeling by edge grabbing",
              failures == 0, f"{total - failures}/{total} regular graphs")


def _hedetniemi(ctx: _Context) -> None:
    violations = 0
    total = ctx.budget.hedetniemi_pairs
    for _ in range(total):
        ctx.deadline.check()
        g = random_graph(int(ctx.rng.integers(1, 9)), float(ctx.rng.uniform(0.3, 0.9)), ctx.rng)
        h = random_graph(int(ctx.rng.integers(1, 9)), float(ctx.rng.uniform(0.3, 0.9)), ctx.rng)
        try:
            hedetniemi_gap(g, h, ctx.limits)
        except SolverError as exc:
            logger.info("%s", exc)
            violations += 1
    ctx.claim("product_bound", "chi(G x H) <= min(chi(G), chi(H))", violations == 0,
              f"{total - violations}/{total} pairs")


_RUNNERS: Dict[str, Callable[[_Context], None]] = {
    "prop53": _prop53,
    "sandwich": _sandwich,
    "homgraph": _homgraph,
    "games": _games,
    "orientation": _orientation,
    "hedetniemi": _hedetniemi,
}


def run_suite(
    name: str,
    delta: int,
    seed: int,
    budget: Optional[Budget] = None,
    limits: SolverLimits = DEFAULT_LIMITS,
) -> SuiteReport:
    if name not in _RUNNERS:
        raise ValueError(f"unknown suite {name!r}; expected one of {', '.join(SUITES)} or all")
    budget = budget or Budget()
    report = SuiteReport(suite=name, delta=delta, seed=seed, budget=budget.name)
    ctx = _Context(
        delta=delta,
        rng=np.random.default_rng(seed),
        budget=budget,
        deadline=Deadline(budget.time_limit_seconds),
        limits=limits,
        claims=report.claims,
    )
    logger.info("suite %s: delta=%d seed=%d budget=%s", name, delta, seed, budget.name)
    try:
        _RUNNERS[name](ctx)
    except BudgetExhausted:
        logger.info("suite %s ran out of time after %d claims", name, len(report.claims))
        report.incomplete = True
    return report


def run_suites(names: List[str], delta: int, seed: int, budget: Optional[Budget] = None,
               limits: SolverLimits = DEFAULT_LIMITS) -> List[SuiteReport]:
    if names == ["all"]:
        names = list(SUITES)
    return [run_suite(name, delta, seed, budget, limits) for name in names]
