"""Finite-depth approximations of homomorphism graphs from the Delta-regular tree.

A vertex is a homomorphism from ``tree_ball(delta, depth)`` into the target,
stored as the tuple of images in ball order. Two vertices ``h, h'`` are joined
by an ``a_i``-edge when ``h'(w) = h(a_i w)`` on the common part of the balls and
both extend to one homomorphism of the ``(depth+1)``-ball.
"""
from __future__ import annotations

import logging
from collections import Counter, deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import networkx as nx

from graph_core import EdgeLabeledGraph, FiniteGraph, TreeBall, tree_ball
from graph_io import render_dot
from solvers import DEFAULT_LIMITS, SolverLimits, find_hom, find_hom_labeled

logger = logging.getLogger(__name__)

Target = Union[FiniteGraph, EdgeLabeledGraph]
BallHom = Tuple[int, ...]

CERTIFICATE_DEPTH = 1


class HomGraphError(RuntimeError):
    """Bad approximation input or a broken structural invariant."""


@dataclass(frozen=True)
class HomGraphApprox:
    delta: int
    depth: int
    label_preserving: bool
    target: Target = field(hash=False)
    ball: TreeBall = field(hash=False)
    homs: Tuple[BallHom, ...] = field(hash=False)
    edges: Tuple[Tuple[int, int, int], ...] = field(hash=False)

    @property
    def n(self) -> int:
        return len(self.homs)

    @property
    def root_map(self) -> Tuple[int, ...]:
        return tuple(hom[0] for hom in self.homs)

    @property
    def graph(self) -> FiniteGraph:
        return FiniteGraph.from_edges(self.n, ((u, v) for u, v, _ in self.edges))

    @property
    def target_graph(self) -> FiniteGraph:
        return self.target.graph if isinstance(self.target, EdgeLabeledGraph) else self.target

    def index(self, hom: Sequence[int]) -> int:
        return self.homs.index(tuple(hom))


@dataclass(frozen=True)
class AnalysisReport:
    vertex_count: int
    edge_count: int
    degree_histogram: Dict[int, int]
    shortest_cycle: Optional[int]
    root_map_edge_preserving: bool
    root_map_injective_per_component: bool
    non_free_components: int
    distinct_root_images: int
    certificate_depth: int

    def to_dict(self) -> Dict[str, object]:
        return {
            "vertex_count": self.vertex_count,
            "edge_count": self.edge_count,
            "degree_histogram": {str(k): v for k, v in sorted(self.degree_histogram.items())},
            "shortest_cycle": self.shortest_cycle,
            "root_map_edge_preserving": self.root_map_edge_preserving,
            "root_map_injective_per_component": self.root_map_injective_per_component,
            "non_free_components": self.non_free_components,
            "distinct_root_images": self.distinct_root_images,
            "certificate_depth": self.certificate_depth,
        }


def neighbor_table(target: Target, label_preserving: bool) -> Dict[int, Tuple[Tuple[int, ...], ...]]:
    """Candidate images of a child per edge label (label 0 means any edge)."""

    if label_preserving:
        assert isinstance(target, EdgeLabeledGraph)
        table = {}
        for label, row in target.label_masks().items():
            table[label] = tuple(tuple(v for v in range(target.n) if row[x] >> v & 1) for x in range(target.n))
        return table
    graph = target.graph if isinstance(target, EdgeLabeledGraph) else target
    return {0: graph.neighbors}


def enumerate_ball_homs(
    ball: TreeBall, target: Target, label_preserving: bool, root_image: Optional[int] = None
) -> List[BallHom]:
    """All (label-preserving) homomorphisms from ``ball``, lexicographic in ball order."""

    table = neighbor_table(target, label_preserving)
    parents = [0] + [ball.parent(v) for v in range(1, ball.n)]
    letters = [0] + [ball.words[v][-1] if label_preserving else 0 for v in range(1, ball.n)]
    roots = range(target.n) if root_image is None else [root_image]
    found: List[BallHom] = []
    images = [0] * ball.n

    def extend(v: int) -> None:
        if v == ball.n:
            found.append(tuple(images))
            return
        for image in table[letters[v]][images[parents[v]]]:
            images[v] = image
            extend(v + 1)

    for root in roots:
        images[0] = root
        extend(1)
    return found


def _estimate(ball: TreeBall, target: Target, label_preserving: bool) -> int:
    table = neighbor_table(target, label_preserving)
    branching = max((len(row) for rows in table.values() for row in rows), default=0)
    return target.n * branching ** (ball.n - 1)


def build_hom_approx(
    delta: int,
    depth: int,
    target: Target,
    label_preserving: bool,
    limits: SolverLimits = DEFAULT_LIMITS,
    threads: int = 1,
) -> HomGraphApprox:
    if target.n == 0:
        raise HomGraphError("target graph is empty")
    if depth < 1:
        raise HomGraphError(f"depth must be at least 1, got {depth}")
    if label_preserving:
        if not isinstance(target, EdgeLabeledGraph):
            raise HomGraphError("label-preserving approximation needs an edge-labeled target")
        if target.delta != delta:
            raise HomGraphError(f"target delta {target.delta} != {delta}")
    ball = tree_ball(delta, depth)
    limits.check("build_hom_approx", _estimate(ball, target, label_preserving), limits.hom_approx_max_vertices)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(lambda x: enumerate_ball_homs(ball, target, label_preserving, x), range(target.n)))
    else:
        chunks = [enumerate_ball_homs(ball, target, label_preserving, x) for x in range(target.n)]
    homs = tuple(hom for chunk in chunks for hom in chunk)
    logger.debug("depth-%d ball (%d vertices) has %d homomorphisms", depth, ball.n, len(homs))

    acyclic_target = label_preserving and target.graph.is_acyclic()  # type: ignore[union-attr]
    if acyclic_target:
        for hom in homs:
            if len(set(hom)) != len(hom):
                raise HomGraphError(f"label-preserving homomorphism {hom} into a forest is not injective")

    extension = tree_ball(delta, depth + 1)
    edges: List[Tuple[int, int, int]] = []
    for letter in range(1, delta + 1):
        overlap = [w for w in range(ball.n) if ball.shift(letter, w) is not None]
        buckets: Dict[BallHom, List[int]] = {}
        for idx, hom in enumerate(homs):
            buckets.setdefault(tuple(hom[w] for w in overlap), []).append(idx)
        for idx, hom in enumerate(homs):
            key = tuple(hom[ball.shift(letter, w)] for w in overlap)  # type: ignore[index]
            for other in buckets.get(key, ()):
                if other > idx and _extends(extension, ball, letter, hom, homs[other], target, label_preserving):
                    edges.append((idx, other, letter))
    edges.sort()

    approx = HomGraphApprox(
        delta=delta,
        depth=depth,
        label_preserving=label_preserving,
        target=target,
        ball=ball,
        homs=homs,
        edges=tuple(edges),
    )
    if not root_map_preserves_edges(approx):
        raise HomGraphError("root map is not edge-preserving")
    return approx


def _extends(
    extension: TreeBall,
    ball: TreeBall,
    letter: int,
    hom: BallHom,
    shifted: BallHom,
    target: Target,
    label_preserving: bool,
) -> bool:
    """Whether ``hom`` around the root and ``shifted`` around ``a_letter`` glue on the bigger ball."""

    fixed: Dict[int, int] = {}
    for v, word in enumerate(extension.words):
        if word in ball.index:
            fixed[v] = hom[ball.index[word]]
        moved = extension.shift(letter, v)
        if moved is not None and extension.words[moved] in ball.index:
            image = shifted[ball.index[extension.words[moved]]]
            if fixed.setdefault(v, image) != image:
                return False
    if label_preserving:
        return find_hom_labeled(extension.labeled, target, fixed) is not None  # type: ignore[arg-type]
    graph = target.graph if isinstance(target, EdgeLabeledGraph) else target
    return find_hom(extension.labeled.graph, graph, fixed) is not None


def root_map_preserves_edges(approx: HomGraphApprox) -> bool:
    roots = approx.root_map
    target = approx.target
    for u, v, letter in approx.edges:
        if not approx.target_graph.has_edge(roots[u], roots[v]):
            return False
        if approx.label_preserving and target.label(roots[u], roots[v]) != letter:  # type: ignore[union-attr]
            return False
    return True


def shortest_cycle(n: int, edges: Sequence[Tuple[int, int, int]]) -> Optional[int]:
    """Girth of a multigraph; two parallel edges form a cycle of length 2."""

    incident: List[List[Tuple[int, int]]] = [[] for _ in range(n)]
    for edge_id, (u, v, _) in enumerate(edges):
        incident[u].append((v, edge_id))
        incident[v].append((u, edge_id))
    best: Optional[int] = None
    for source in range(n):
        dist = {source: 0}
        via = {source: -1}
        queue = deque([source])
        while queue:
            u = queue.popleft()
            if best is not None and 2 * dist[u] + 1 >= best:
                break
            for v, edge_id in incident[u]:
                if edge_id == via[u]:
                    continue
                if v not in dist:
                    dist[v] = dist[u] + 1
                    via[v] = edge_id
                    queue.append(v)
                else:
                    length = dist[u] + dist[v] + 1
                    if best is None or length < best:
                        best = length
    return best


def analyze(approx: HomGraphApprox) -> AnalysisReport:
    degrees = Counter({v: 0 for v in range(approx.n)})
    for u, v, _ in approx.edges:
        degrees[u] += 1
        degrees[v] += 1
    roots = approx.root_map
    injective = True
    non_free = 0
    for component in nx.connected_components(approx.graph.to_networkx()):
        images = [roots[v] for v in component]
        if len(set(images)) != len(images):
            injective = False
            non_free += 1
    return AnalysisReport(
        vertex_count=approx.n,
        edge_count=len(approx.edges),
        degree_histogram=dict(Counter(degrees.values())),
        shortest_cycle=shortest_cycle(approx.n, approx.edges),
        root_map_edge_preserving=root_map_preserves_edges(approx),
        root_map_injective_per_component=injective,
        non_free_components=non_free,
        distinct_root_images=len(set(roots)),
        certificate_depth=CERTIFICATE_DEPTH,
    )


def is_anti_game_labeling(approx: HomGraphApprox, labeling: Sequence[int]) -> bool:
    """No ``a_i``-edge whose endpoints are both labeled ``i``."""

    return all(not (labeling[u] == letter and labeling[v] == letter) for u, v, letter in approx.edges)


def approx_to_dot(approx: HomGraphApprox) -> str:
    names = [f"h{idx}@{root}" for idx, root in enumerate(approx.root_map)]
    return render_dot(approx.n, approx.edges, names, name="HomApprox")
