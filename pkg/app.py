"""HomLab command-line application."""
from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import yaml

from games import GameError, GameSpec, random_labeling_table, solve_game, trace_play, winners_by_depth
from graph_core import (
    EdgeLabeledGraph,
    FiniteGraph,
    GraphError,
    categorical_product,
    complete_graph,
    g0_truncation,
    h_delta,
    named_graph,
    random_g0_seq,
    random_graph,
    random_regular_edge_colored,
    shift_graph,
    tree_ball,
)
from graph_io import AnyGraph, GraphFormatError, dumps, load_graph, write_graph
from homgraph import HomGraphError, analyze, approx_to_dot, build_hom_approx
from solvers import (
    SearchStats,
    SizeGuardError,
    SolverError,
    SolverLimits,
    build_solver_limits,
    check_anti_game,
    chromatic_number,
    delta_star,
    edge_grabbing_from_orientation,
    edge_labeled_chromatic_number,
    find_hom,
    find_hom_labeled,
    hedetniemi_gap,
    sandwich_coloring,
    sinkless_orientation,
    theta_hom,
)
from suites import SUITES, build_budget, run_suites

logger = logging.getLogger("homlab")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_GUARD = 2
EXIT_INCOMPLETE = 3

SOLVE_TASKS = ("hom", "chrom", "chromlab", "deltastar", "theta", "antigame", "sinkless", "hedetniemi",
               "homgraph", "game")
GEN_KINDS = ("kn", "hdelta", "product", "treeball", "g0", "named", "shiftgraph", "random", "regular")


@dataclass(frozen=True)
class RuntimeConfig:
    threads: int = 1
    seed: int = 0
    include_timings: bool = False


def build_runtime(config: dict) -> RuntimeConfig:
    runtime_cfg = config.get("runtime", {})
    threads = int(runtime_cfg.get("threads", 1))
    cap = os.environ.get("HOMLAB_THREADS")
    if cap:
        threads = min(threads, int(cap)) if threads > 0 else int(cap)
    return RuntimeConfig(
        threads=max(1, threads),
        seed=int(runtime_cfg.get("seed", 0)),
        include_timings=bool(config.get("solver", {}).get("include_timings", False)),
    )


class HomLabApp:
    def __init__(self, config_path: Path, override_guard: bool = False) -> None:
        self.base_path = config_path.parent
        self.config = self._load_config(config_path)
        self.limits: SolverLimits = build_solver_limits(self.config, override_guard)
        self.runtime = build_runtime(self.config)
        self.output_dir = self.base_path / self.config.get("paths", {}).get("output_dir", "output")
        self._setup_logging()

    def _load_config(self, path: Path) -> dict:
        if not path.exists():
            return {}
        return yaml.safe_load(path.read_text(encoding="utf-8")) or {}

    def _setup_logging(self) -> None:
        logging_cfg = self.config.get("logging", {})
        handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
        log_file = logging_cfg.get("log_file")
        if log_file:
            path = self.base_path / log_file
            path.parent.mkdir(parents=True, exist_ok=True)
            handlers.append(logging.FileHandler(path, encoding="utf-8"))
        logging.basicConfig(
            level=logging_cfg.get("level", "INFO"),
            format="[%(asctime)s] %(message)s",
            datefmt="%H:%M:%S",
            handlers=handlers,
        )

    def log(self, message: str) -> None:
        logger.info(message)

    def _load(self, spec: Optional[str], flag: str) -> AnyGraph:
        if not spec:
            raise GraphFormatError(f"--{flag} is required")
        return load_graph(spec)

    # -- gen -----------------------------------------------------------------

    def handle_gen(self, args: argparse.Namespace) -> int:
        roles: Optional[Dict[str, object]] = None
        kind = args.kind
        rng = np.random.default_rng(args.seed)
        if kind == "kn":
            graph: AnyGraph = complete_graph(args.n)
        elif kind == "hdelta":
            hd = h_delta(args.delta)
            graph, roles = hd.graph, hd.roles()
        elif kind == "product":
            graph = categorical_product(_plain(self._load(args.g, "g")), _plain(self._load(args.h, "h")))
        elif kind == "treeball":
            graph = tree_ball(args.delta, args.r).labeled
        elif kind == "g0":
            seq = random_g0_seq(args.depth, args.delta, rng)
            graph = g0_truncation(args.delta, args.depth, seq)
            roles = {"seq": [[list(prefix), label] for prefix, label in seq]}
        elif kind == "named":
            graph = named_graph(args.name)
        elif kind == "shiftgraph":
            graph = shift_graph(args.n, args.k)
        elif kind == "random":
            graph = random_graph(args.n, args.p, rng)
        else:
            graph = random_regular_edge_colored(args.delta, args.n, rng)
        out = self._output_path(args.out)
        written = write_graph(graph, args.format, out, roles, stream=sys.stdout)
        if written is not None:
            self.log(f"{kind}: {graph.n} vertices written to {written}")
        return EXIT_OK

    def _output_path(self, out: Optional[str]) -> Optional[Path]:
        if not out:
            return None
        path = Path(out)
        if not path.is_absolute() and path.parent == Path("."):
            path = self.output_dir / path
        return path

    # -- solve ---------------------------------------------------------------

    def handle_solve(self, args: argparse.Namespace) -> int:
        stats = SearchStats()
        handler = getattr(self, f"_solve_{args.task}")
        result = handler(args, stats)
        if args.task == "homgraph" and args.format == "dot":
            sys.stdout.write(result)
            return EXIT_OK
        payload = {"task": args.task, "result": result, "stats": stats.to_dict(self.runtime.include_timings)}
        self._emit(payload, args.format)
        return EXIT_OK

    def _solve_hom(self, args: argparse.Namespace, stats: SearchStats) -> object:
        g, h = self._load(args.g, "g"), self._load(args.h, "h")
        if isinstance(g, EdgeLabeledGraph) and isinstance(h, EdgeLabeledGraph):
            hom = find_hom_labeled(g, h, stats=stats)
        else:
            hom = find_hom(_plain(g), _plain(h), stats=stats)
        return "NONE" if hom is None else list(hom.images)

    def _solve_chrom(self, args: argparse.Namespace, stats: SearchStats) -> object:
        found = chromatic_number(_plain(self._load(args.graph, "graph")), self.limits, stats)
        return {"chromatic_number": found.number, "coloring": list(found.coloring), "clique_bound": found.lower_bound}

    def _solve_chromlab(self, args: argparse.Namespace, stats: SearchStats) -> object:
        graph = _labeled(self._load(args.graph, "graph"), "chromlab")
        found = edge_labeled_chromatic_number(graph, self.limits, stats)
        return {"chromatic_number": found.number, "classes": list(found.coloring)}

    def _solve_deltastar(self, args: argparse.Namespace, stats: SearchStats) -> object:
        graph = _plain(self._load(args.graph, "graph"))
        witness = delta_star(graph, args.delta, self.limits, stats)
        if witness is None:
            return "NONE"
        payload = witness.to_dict()
        payload["sandwich_coloring"] = list(sandwich_coloring(graph, witness, args.delta))
        return payload

    def _solve_theta(self, args: argparse.Namespace, stats: SearchStats) -> object:
        graph = _plain(self._load(args.graph, "graph"))
        witness = delta_star(graph, args.delta, self.limits, stats)
        if witness is None:
            return "NONE"
        hom, hd = theta_hom(graph, witness, args.delta)
        return {"images": list(hom.images), "witness": witness.to_dict(), "roles": hd.roles()}

    def _solve_antigame(self, args: argparse.Namespace, stats: SearchStats) -> object:
        graph = _labeled(self._load(args.graph, "graph"), "antigame")
        labels = [int(token) for token in args.labels.split(",")] if args.labels else None
        if labels is None:
            orientation = sinkless_orientation(graph.graph)
            if orientation is None:
                return "NONE"
            labels = list(edge_grabbing_from_orientation(graph, orientation))
        if len(labels) != graph.n:
            raise GraphFormatError(f"expected {graph.n} labels, got {len(labels)}")
        return {"labels": labels, "valid": check_anti_game(graph, labels)}

    def _solve_sinkless(self, args: argparse.Namespace, stats: SearchStats) -> object:
        loaded = self._load(args.graph, "graph")
        orientation = sinkless_orientation(_plain(loaded))
        if orientation is None:
            return "NONE"
        payload: Dict[str, object] = {"arcs": [list(arc) for arc in orientation.arcs]}
        if isinstance(loaded, EdgeLabeledGraph) and loaded.is_regular(loaded.delta) and loaded.is_proper_edge_coloring():
            payload["grabbed_labels"] = list(edge_grabbing_from_orientation(loaded, orientation))
        return payload

    def _solve_hedetniemi(self, args: argparse.Namespace, stats: SearchStats) -> object:
        report = hedetniemi_gap(_plain(self._load(args.g, "g")), _plain(self._load(args.h, "h")), self.limits)
        return {"chi_g": report.chi_g, "chi_h": report.chi_h, "chi_product": report.chi_product,
                "bound_holds": report.bound_holds}

    def _solve_homgraph(self, args: argparse.Namespace, stats: SearchStats) -> object:
        target = self._load(args.graph, "graph")
        approx = build_hom_approx(args.delta, args.depth, target, args.labeled, self.limits, self.runtime.threads)
        if args.format == "dot":
            return approx_to_dot(approx)
        payload = analyze(approx).to_dict()
        payload["root_map"] = list(approx.root_map)
        payload["edges"] = [list(edge) for edge in approx.edges]
        return payload

    def _solve_game(self, args: argparse.Namespace, stats: SearchStats) -> object:
        target = self._load(args.graph, "graph")
        if not args.labeled:
            target = _plain(target)
        rng = np.random.default_rng(args.seed)
        codomain = list(range(1, args.delta + 1))
        extra = sorted({int(token) for token in args.depths.split(",")}) if args.depths else []
        # ball homomorphisms of different depths never collide, so one table serves every depth
        table: Dict[Tuple[int, ...], int] = {}
        for depth in sorted({args.depth, *extra}):
            table.update(random_labeling_table(target, args.delta, depth, codomain, rng, args.labeled))
        payoff = frozenset(int(token) for token in args.payoff.split(",")) if args.payoff else frozenset({args.i})
        spec = GameSpec(target, args.delta, args.x, args.i, payoff, args.depth, table, args.labeled)
        result = solve_game(spec, self.runtime.threads)
        alice = result.strategy if result.winner == "Alice" else None
        bob = result.strategy if result.winner == "Bob" else None
        hom, steps = trace_play(spec, alice, bob)
        payload: Dict[str, object] = {
            "spec": spec.to_dict(),
            "seed": args.seed,
            "winner": result.winner,
            "strategy_size": len(result.strategy.table),
            "trace": [step.to_dict() for step in steps],
            "final": list(hom),
            "color": spec.color(hom),
        }
        if extra:
            payload["winners_by_depth"] = {str(d): w for d, w in winners_by_depth(spec, extra).items()}
        return payload

    # -- verify --------------------------------------------------------------

    def handle_verify(self, args: argparse.Namespace) -> int:
        budget = build_budget(self.config, args.budget)
        self.log(f"verify {args.suite}: delta={args.delta} seed={args.seed} budget={budget.name}")
        reports = run_suites([args.suite], args.delta, args.seed, budget, self.limits)
        payload = {"seed": args.seed, "budget": budget.name, "suites": [report.to_dict() for report in reports]}
        self._emit(payload, args.format)
        if any(report.incomplete for report in reports):
            return EXIT_INCOMPLETE
        return EXIT_OK if all(report.passed for report in reports) else EXIT_FAILED

    def _emit(self, payload: Dict[str, object], fmt: str) -> None:
        if fmt == "json":
            sys.stdout.write(dumps(payload))
            return
        for key, value in payload.items():
            if key == "suites":
                for report in value:  # type: ignore[attr-defined]
                    print(f"[{report['status']}] {report['suite']} (delta={report['delta']})")
                    for claim in report["claims"]:
                        mark = "ok" if claim["passed"] else "FAILED"
                        print(f"  {mark:6} {claim['name']}: {claim['anchor']} {claim['detail']}".rstrip())
            else:
                print(f"{key}: {value}")


def _plain(graph: AnyGraph) -> FiniteGraph:
    return graph.graph if isinstance(graph, EdgeLabeledGraph) else graph


def _labeled(graph: AnyGraph, task: str) -> EdgeLabeledGraph:
    if not isinstance(graph, EdgeLabeledGraph):
        raise GraphFormatError(f"{task} needs an edge-labeled graph (JSON with labeled edges)")
    return graph


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="homlab", description="Finite graph homomorphism workbench.")
    parser.add_argument("--config", type=Path, default=None, help="path to config.yaml")
    parser.add_argument("--override-guard", action="store_true", help="ignore exponential size guards")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="construct a graph")
    gen.add_argument("kind", choices=GEN_KINDS)
    gen.add_argument("--n", type=int, default=3)
    gen.add_argument("--k", type=int, default=2)
    gen.add_argument("--p", type=float, default=0.5)
    gen.add_argument("--delta", type=int, default=3)
    gen.add_argument("--r", type=int, default=2)
    gen.add_argument("--depth", type=int, default=3)
    gen.add_argument("--name", default="petersen")
    gen.add_argument("--g")
    gen.add_argument("--h")
    gen.add_argument("--seed", type=int, default=None)
    gen.add_argument("--format", choices=("text", "json", "dot"), default="text")
    gen.add_argument("--out")

    solve = sub.add_parser("solve", help="run a solver")
    solve.add_argument("task", choices=SOLVE_TASKS)
    solve.add_argument("--graph")
    solve.add_argument("--g")
    solve.add_argument("--h")
    solve.add_argument("--delta", type=int, default=3)
    solve.add_argument("--depth", type=int, default=1)
    solve.add_argument("--depths", help="comma-separated depths to report the game winner at")
    solve.add_argument("--labeled", action="store_true")
    solve.add_argument("--labels", help="comma-separated vertex labels for antigame")
    solve.add_argument("--x", type=int, default=0)
    solve.add_argument("--i", type=int, default=1)
    solve.add_argument("--payoff", help="comma-separated payoff set, default {i}")
    solve.add_argument("--seed", type=int, default=None)
    solve.add_argument("--format", choices=("text", "json", "dot"), default="json")
    solve.add_argument("--override-guard", action="store_true", default=argparse.SUPPRESS)

    verify = sub.add_parser("verify", help="run a verification suite")
    verify.add_argument("suite", choices=SUITES + ("all",))
    verify.add_argument("--delta", type=int, default=3)
    verify.add_argument("--seed", type=int, default=None)
    verify.add_argument("--budget", choices=("small", "medium", "large"), default="small")
    verify.add_argument("--format", choices=("text", "json"), default="text")
    verify.add_argument("--override-guard", action="store_true", default=argparse.SUPPRESS)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    base_path = Path(__file__).resolve().parent
    config_path = args.config or base_path / "config.yaml"
    app = HomLabApp(config_path, override_guard=args.override_guard)
    if getattr(args, "seed", None) is None:
        args.seed = app.runtime.seed
    try:
        if args.command == "gen":
            return app.handle_gen(args)
        if args.command == "solve":
            return app.handle_solve(args)
        return app.handle_verify(args)
    except SizeGuardError as exc:
        app.log(f"size guard: {exc}")
        return EXIT_GUARD
    except (GraphError, GraphFormatError, SolverError, HomGraphError, GameError, ValueError) as exc:
        app.log(f"error: {exc}")
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
