"""Homomorphism, coloring and delta-(*) solvers with their verifiers.

Every procedure returns a witness that has already passed its verifier, or
``None`` after exhausting the search.
"""
from __future__ import annotations

import logging
import time
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

import networkx as nx

from graph_core import (
    EdgeLabeledGraph,
    FiniteGraph,
    HDeltaGraph,
    categorical_product,
    complete_graph,
    h_delta,
    iter_bits,
)

logger = logging.getLogger(__name__)


class SolverError(RuntimeError):
    """Precondition violation or failed verification inside a solver."""


class SizeGuardError(SolverError):
    """Instance exceeds the configured limit for an exponential procedure."""


@dataclass(frozen=True)
class SolverLimits:
    chromatic_max_vertices: int = 64
    delta_star_max_vertices: int = 24
    product_max_vertices: int = 64
    hom_approx_max_vertices: int = 200_000
    override_guard: bool = False

    def check(self, what: str, size: int, limit: int) -> None:
        if size > limit and not self.override_guard:
            raise SizeGuardError(f"{what}: size {size} exceeds guard {limit} (use --override-guard)")


DEFAULT_LIMITS = SolverLimits()


def build_solver_limits(config: dict, override_guard: bool = False) -> SolverLimits:
    solver_cfg = config.get("solver", {})
    return SolverLimits(
        chromatic_max_vertices=solver_cfg.get("chromatic_max_vertices", 64),
        delta_star_max_vertices=solver_cfg.get("delta_star_max_vertices", 24),
        product_max_vertices=solver_cfg.get("product_max_vertices", 64),
        hom_approx_max_vertices=solver_cfg.get("hom_approx_max_vertices", 200_000),
        override_guard=override_guard,
    )


@dataclass
class SearchStats:
    nodes_expanded: int = 0
    wall_ms: float = 0.0

    def to_dict(self, include_timings: bool = False) -> Dict[str, object]:
        payload: Dict[str, object] = {"nodes_expanded": self.nodes_expanded}
        if include_timings:
            payload["wall_ms"] = round(self.wall_ms, 3)
        return payload


@dataclass(frozen=True)
class Homomorphism:
    """Total vertex map, ``images[v]`` is the image of ``v``."""

    images: Tuple[int, ...]

    def __getitem__(self, v: int) -> int:
        return self.images[v]

    def __len__(self) -> int:
        return len(self.images)

    def as_dict(self) -> Dict[int, int]:
        return dict(enumerate(self.images))


@dataclass(frozen=True)
class DeltaStarWitness:
    r0: FrozenSet[int]
    r1: FrozenSet[int]
    c0: Mapping[int, int] = field(hash=False)
    c1: Mapping[int, int] = field(hash=False)

    def to_dict(self) -> Dict[str, object]:
        return {
            "r0": sorted(self.r0),
            "r1": sorted(self.r1),
            "c0": {str(v): c for v, c in sorted(self.c0.items())},
            "c1": {str(v): c for v, c in sorted(self.c1.items())},
        }


@dataclass(frozen=True)
class Orientation:
    """Every edge as a ``(tail, head)`` arc."""

    arcs: Tuple[Tuple[int, int], ...]

    def out_degrees(self, n: int) -> List[int]:
        degrees = [0] * n
        for tail, _ in self.arcs:
            degrees[tail] += 1
        return degrees


@dataclass(frozen=True)
class ColoringResult:
    number: int
    coloring: Tuple[int, ...]
    lower_bound: int


@dataclass(frozen=True)
class HedetniemiReport:
    chi_g: int
    chi_h: int
    chi_product: int

    @property
    def bound_holds(self) -> bool:
        return self.chi_product <= min(self.chi_g, self.chi_h)


# -- verifiers -----------------------------------------------------------------


def is_homomorphism(g: FiniteGraph, h: FiniteGraph, images: Sequence[int]) -> bool:
    if len(images) != g.n or any(not 0 <= image < h.n for image in images):
        return False
    return all(h.has_edge(images[u], images[v]) for u, v in g.edges())


def is_labeled_homomorphism(g: EdgeLabeledGraph, h: EdgeLabeledGraph, images: Sequence[int]) -> bool:
    if not is_homomorphism(g.graph, h.graph, images):
        return False
    return all(h.label(images[u], images[v]) == label for u, v, label in g.labeled_edges())


def is_proper_coloring(g: FiniteGraph, coloring: Sequence[int], colors: Optional[int] = None) -> bool:
    if len(coloring) != g.n:
        return False
    if colors is not None and any(not 0 <= c < colors for c in coloring):
        return False
    return all(coloring[u] != coloring[v] for u, v in g.edges())


def _proper_on(g: FiniteGraph, coloring: Mapping[int, int], domain: FrozenSet[int], colors: int) -> bool:
    if set(coloring) != set(domain):
        return False
    if any(not 0 <= c < colors for c in coloring.values()):
        return False
    return all(coloring[u] != coloring[v] for u, v in g.edges() if u in domain and v in domain)


def delta_star_problems(h: FiniteGraph, delta: int, witness: DeltaStarWitness) -> List[str]:
    """Everything wrong with ``witness``; an empty list means it is valid."""

    problems: List[str] = []
    everything = frozenset(range(h.n))
    if not witness.r0 <= everything or not witness.r1 <= everything:
        problems.append("R0/R1 contain unknown vertices")
        return problems
    for u in witness.r0:
        for v in h.neighbors[u]:
            if v in witness.r1:
                problems.append(f"edge {u}-{v} joins R0 and R1")
    if not h.is_independent(witness.r0 & witness.r1):
        problems.append("R0 & R1 is not independent")
    if not _proper_on(h, witness.c0, everything - witness.r0, delta - 1):
        problems.append("c0 is not a proper (delta-1)-coloring of V - R0")
    if not _proper_on(h, witness.c1, everything - witness.r1, delta - 1):
        problems.append("c1 is not a proper (delta-1)-coloring of V - R1")
    return problems


def is_delta_star_witness(h: FiniteGraph, delta: int, witness: DeltaStarWitness) -> bool:
    return not delta_star_problems(h, delta, witness)


def check_anti_game(g: EdgeLabeledGraph, label: Sequence[int]) -> bool:
    """True iff no edge labeled ``i`` has both endpoints labeled ``i``."""

    if len(label) != g.n:
        raise SolverError(f"labeling covers {len(label)} of {g.n} vertices")
    return all(not (label[u] == edge_label and label[v] == edge_label) for u, v, edge_label in g.labeled_edges())


def is_sinkless(g: FiniteGraph, orientation: Orientation) -> bool:
    if sorted(tuple(sorted(arc)) for arc in orientation.arcs) != g.edges():
        return False
    degrees = orientation.out_degrees(g.n)
    return all(degrees[v] >= 1 for v in range(g.n) if g.degree(v) >= 1)


# -- homomorphism search ---------------------------------------------------------


class _HomSearch:
    """Backtracking over source vertices with bitset domains and forward checking.

    The next vertex is the unassigned one with the smallest domain; ties go to
    the static order (descending degree, then index). ``interchangeable`` marks
    target vertices that are mutually symmetric, of which only the lowest unused
    one is ever tried.
    """

    def __init__(
        self,
        source_adj: Sequence[Sequence[Tuple[int, int]]],
        target_masks: Mapping[int, Sequence[int]],
        interchangeable: int = 0,
        stats: Optional[SearchStats] = None,
    ) -> None:
        self.source_adj = source_adj
        self.target_masks = target_masks
        self.interchangeable = interchangeable
        self.stats = stats if stats is not None else SearchStats()
        degrees = [len(nbrs) for nbrs in source_adj]
        order = sorted(range(len(source_adj)), key=lambda v: (-degrees[v], v))
        self.rank = {v: pos for pos, v in enumerate(order)}

    def run(self, domains: List[int]) -> Optional[List[int]]:
        if any(domain == 0 for domain in domains):
            return None
        assignment = [-1] * len(domains)
        return self._extend(assignment, domains, 0, len(domains))

    def _pick(self, assignment: List[int], domains: List[int]) -> int:
        best, best_key = -1, None
        for v, image in enumerate(assignment):
            if image >= 0:
                continue
            key = (domains[v].bit_count(), self.rank[v])
            if best_key is None or key < best_key:
                best, best_key = v, key
        return best

    def _extend(self, assignment: List[int], domains: List[int], used: int, remaining: int) -> Optional[List[int]]:
        if remaining == 0:
            return list(assignment)
        v = self._pick(assignment, domains)
        candidates = domains[v]
        fresh = candidates & self.interchangeable & ~used
        if fresh:
            candidates = (candidates & ~fresh) | (fresh & -fresh)
        for c in iter_bits(candidates):
            self.stats.nodes_expanded += 1
            narrowed = list(domains)
            narrowed[v] = 1 << c
            feasible = True
            for u, label in self.source_adj[v]:
                if assignment[u] >= 0:
                    continue
                domain = narrowed[u] & self.target_masks[label][c]
                if not domain:
                    feasible = False
                    break
                narrowed[u] = domain
            if not feasible:
                continue
            assignment[v] = c
            found = self._extend(assignment, narrowed, used | (1 << c), remaining - 1)
            if found is not None:
                return found
            assignment[v] = -1
        return None


def _plain_adj(g: FiniteGraph) -> List[List[Tuple[int, int]]]:
    return [[(u, 0) for u in g.neighbors[v]] for v in range(g.n)]


def _run_search(
    source_adj: Sequence[Sequence[Tuple[int, int]]],
    target_masks: Mapping[int, Sequence[int]],
    domains: List[int],
    interchangeable: int = 0,
    stats: Optional[SearchStats] = None,
) -> Optional[List[int]]:
    stats = stats if stats is not None else SearchStats()
    started = time.perf_counter()
    found = _HomSearch(source_adj, target_masks, interchangeable, stats).run(domains)
    stats.wall_ms += (time.perf_counter() - started) * 1000
    return found


def find_hom(
    g: FiniteGraph,
    h: FiniteGraph,
    fixed: Optional[Mapping[int, int]] = None,
    stats: Optional[SearchStats] = None,
) -> Optional[Homomorphism]:
    """An edge-preserving map ``g -> h``, or None when none exists."""

    domains = [h.all_mask] * g.n
    for v, image in (fixed or {}).items():
        domains[v] &= 1 << image
    found = _run_search(_plain_adj(g), {0: h.masks}, domains, stats=stats)
    if found is None:
        return None
    if not is_homomorphism(g, h, found):
        raise SolverError("search returned a map that is not a homomorphism")
    return Homomorphism(tuple(found))


def find_hom_labeled(
    g: EdgeLabeledGraph,
    h: EdgeLabeledGraph,
    fixed: Optional[Mapping[int, int]] = None,
    stats: Optional[SearchStats] = None,
) -> Optional[Homomorphism]:
    """A label-preserving homomorphism ``g -> h``, or None."""

    if g.delta != h.delta:
        raise SolverError(f"delta mismatch: {g.delta} != {h.delta}")
    masks = h.label_masks()
    has_label = {label: sum(1 << v for v in range(h.n) if row[v]) for label, row in masks.items()}
    source_adj: List[List[Tuple[int, int]]] = [[] for _ in range(g.n)]
    domains = [h.graph.all_mask] * g.n
    for u, v, label in g.labeled_edges():
        source_adj[u].append((v, label))
        source_adj[v].append((u, label))
        domains[u] &= has_label[label]
        domains[v] &= has_label[label]
    for v, image in (fixed or {}).items():
        domains[v] &= 1 << image
    found = _run_search(source_adj, masks, domains, stats=stats)
    if found is None:
        return None
    if not is_labeled_homomorphism(g, h, found):
        raise SolverError("search returned a map that does not preserve labels")
    return Homomorphism(tuple(found))


# -- coloring ------------------------------------------------------------------


def greedy_clique(g: FiniteGraph) -> List[int]:
    clique: List[int] = []
    common = g.all_mask
    for v in sorted(range(g.n), key=lambda u: (-g.degree(u), u)):
        if common >> v & 1:
            clique.append(v)
            common &= g.masks[v]
    return clique


def color_with(g: FiniteGraph, colors: int, stats: Optional[SearchStats] = None) -> Optional[Tuple[int, ...]]:
    """A proper coloring with ``colors`` colors via ``find_hom(g, K_colors)``.

    A greedy clique is pinned to the first colors; remaining colors are
    interchangeable.
    """

    if g.n == 0:
        return ()
    if colors <= 0:
        return None
    clique = greedy_clique(g)
    if len(clique) > colors:
        return None
    target = complete_graph(colors)
    domains = [target.all_mask] * g.n
    for color, v in enumerate(clique):
        domains[v] = 1 << color
    interchangeable = target.all_mask & ~((1 << len(clique)) - 1)
    found = _run_search(_plain_adj(g), {0: target.masks}, domains, interchangeable, stats)
    if found is None:
        return None
    if not is_proper_coloring(g, found, colors):
        raise SolverError("search returned an improper coloring")
    return tuple(found)


def chromatic_number(
    g: FiniteGraph, limits: SolverLimits = DEFAULT_LIMITS, stats: Optional[SearchStats] = None
) -> ColoringResult:
    limits.check("chromatic_number", g.n, limits.chromatic_max_vertices)
    if g.n == 0:
        return ColoringResult(0, (), 0)
    lower = max(1, len(greedy_clique(g)))
    for colors in range(lower, g.n + 1):
        coloring = color_with(g, colors, stats)
        if coloring is not None:
            logger.debug("chromatic number %d (clique bound %d)", colors, lower)
            return ColoringResult(colors, coloring, lower)
    raise SolverError("no coloring found with n colors")


def edge_labeled_chromatic_number(
    h: EdgeLabeledGraph, limits: SolverLimits = DEFAULT_LIMITS, stats: Optional[SearchStats] = None
) -> ColoringResult:
    """Fewest classes such that no class spans edges of every label ``1..delta``."""

    if h.n == 0:
        raise SolverError("edge-labeled chromatic number needs at least one vertex")
    limits.check("edge_labeled_chromatic_number", h.n, limits.chromatic_max_vertices)
    stats = stats if stats is not None else SearchStats()
    full = (1 << h.delta) - 1
    masks = h.label_masks()
    upper = chromatic_number(h.graph, limits).number
    for classes in range(1, upper + 1):
        found = _split_classes(h.n, h.delta, masks, classes, full, stats)
        if found is not None:
            if not is_edge_label_coloring(h, found):
                raise SolverError("class assignment spans every label")
            return ColoringResult(classes, tuple(found), 1)
    raise SolverError("proper coloring bound violated")


def _split_classes(
    n: int, delta: int, masks: Mapping[int, Sequence[int]], classes: int, full: int, stats: SearchStats
) -> Optional[List[int]]:
    assignment = [-1] * n
    members = [0] * classes
    spanned = [0] * classes

    def extend(v: int, opened: int) -> bool:
        if v == n:
            return True
        for k in range(min(opened + 1, classes)):
            stats.nodes_expanded += 1
            added = 0
            for label in range(1, delta + 1):
                if masks[label][v] & members[k]:
                    added |= 1 << (label - 1)
            if (spanned[k] | added) == full:
                continue
            previous = spanned[k]
            spanned[k] |= added
            members[k] |= 1 << v
            assignment[v] = k
            if extend(v + 1, max(opened, k + 1)):
                return True
            members[k] &= ~(1 << v)
            spanned[k] = previous
        assignment[v] = -1
        return False

    return assignment if extend(0, 0) else None


def is_edge_label_coloring(h: EdgeLabeledGraph, classes: Sequence[int]) -> bool:
    spans: Dict[int, set] = {}
    for u, v, label in h.labeled_edges():
        if classes[u] == classes[v]:
            spans.setdefault(classes[u], set()).add(label)
    return all(len(labels) < h.delta for labels in spans.values())


# -- property delta-(*) ----------------------------------------------------------


def _color_mask(g: FiniteGraph, mask: int, colors: int) -> Optional[Dict[int, int]]:
    """Proper coloring of the vertices in ``mask`` with ``colors`` colors."""

    vertices = sorted(iter_bits(mask), key=lambda v: (-(g.masks[v] & mask).bit_count(), v))
    coloring: Dict[int, int] = {}
    classes = [0] * colors

    def extend(pos: int, opened: int) -> bool:
        if pos == len(vertices):
            return True
        v = vertices[pos]
        for c in range(min(opened + 1, colors)):
            if classes[c] & g.masks[v]:
                continue
            classes[c] |= 1 << v
            coloring[v] = c
            if extend(pos + 1, max(opened, c + 1)):
                return True
            classes[c] &= ~(1 << v)
            del coloring[v]
        return False

    return coloring if extend(0, 0) else None


def _non_neighbors(g: FiniteGraph, mask: int) -> int:
    """Vertices with no neighbor inside ``mask``."""

    return sum(1 << v for v in range(g.n) if not g.masks[v] & mask)


def delta_star(
    h: FiniteGraph, delta: int, limits: SolverLimits = DEFAULT_LIMITS, stats: Optional[SearchStats] = None
) -> Optional[DeltaStarWitness]:
    """A delta-(*) witness, or None.

    ``R1`` is always taken maximal: the vertices with no neighbor in ``R0``.
    Only ``R0`` closed under the same operation are tested.
    """

    if delta < 3:
        raise SolverError(f"delta-(*) is defined for delta >= 3, got {delta}")
    limits.check("delta_star", h.n, limits.delta_star_max_vertices)
    stats = stats if stats is not None else SearchStats()
    started = time.perf_counter()
    try:
        direct = color_with(h, delta, stats)
        if direct is not None:
            first = frozenset(v for v, c in enumerate(direct) if c == 0)
            return _witness(h, delta, first, first)
        if color_with(h, 2 * delta - 2, stats) is None:
            return None
        full = h.all_mask
        cache: Dict[int, bool] = {}

        def colorable_outside(mask: int) -> bool:
            if mask not in cache:
                cache[mask] = _color_mask(h, full & ~mask, delta - 1) is not None
            return cache[mask]

        for r0 in range(full + 1):
            stats.nodes_expanded += 1
            r1 = _non_neighbors(h, r0)
            if _non_neighbors(h, r1) != r0:
                continue
            if colorable_outside(r0) and colorable_outside(r1):
                return _witness(h, delta, frozenset(iter_bits(r0)), frozenset(iter_bits(r1)))
        return None
    finally:
        stats.wall_ms += (time.perf_counter() - started) * 1000


def _witness(h: FiniteGraph, delta: int, r0: FrozenSet[int], r1: FrozenSet[int]) -> DeltaStarWitness:
    full = h.all_mask
    c0 = _color_mask(h, full & ~sum(1 << v for v in r0), delta - 1)
    c1 = _color_mask(h, full & ~sum(1 << v for v in r1), delta - 1)
    if c0 is None or c1 is None:
        raise SolverError("witness sets lost their colorings")
    witness = DeltaStarWitness(r0=r0, r1=r1, c0=c0, c1=c1)
    problems = delta_star_problems(h, delta, witness)
    if problems:
        raise SolverError("invalid delta-(*) witness: " + "; ".join(problems))
    return witness


def h_delta_witness(hd: HDeltaGraph) -> DeltaStarWitness:
    """``R0 = V0 + apex``, ``R1 = V1 + apex``; c0 reads the second coordinate, c1 the first."""

    m = hd.m
    c0: Dict[int, int] = {}
    c1: Dict[int, int] = {}
    for i in range(m):
        for j in range(m):
            c0[hd.p(i, j)] = j
            c1[hd.p(i, j)] = i
    for label in range(m):
        c0[hd.v1[label]] = label
        c1[hd.v0[label]] = label
    return DeltaStarWitness(
        r0=frozenset(hd.v0) | {hd.dagger},
        r1=frozenset(hd.v1) | {hd.dagger},
        c0=c0,
        c1=c1,
    )


def theta_hom(h: FiniteGraph, witness: DeltaStarWitness, delta: int) -> Tuple[Homomorphism, HDeltaGraph]:
    """The explicit map from a delta-(*) graph into H_delta."""

    problems = delta_star_problems(h, delta, witness)
    if problems:
        raise SolverError("invalid delta-(*) witness: " + "; ".join(problems))
    hd = h_delta(delta)
    images: List[int] = []
    for v in range(h.n):
        in0, in1 = v in witness.r0, v in witness.r1
        if in0 and in1:
            images.append(hd.dagger)
        elif in1:
            images.append(hd.v0[witness.c0[v]])
        elif in0:
            images.append(hd.v1[witness.c1[v]])
        else:
            images.append(hd.p(witness.c0[v], witness.c1[v]))
    if not is_homomorphism(h, hd.graph, images):
        raise SolverError("theta map is not a homomorphism")
    return Homomorphism(tuple(images)), hd


def pullback_witness(g: FiniteGraph, hom: Homomorphism, h: FiniteGraph, witness: DeltaStarWitness,
                     delta: int) -> DeltaStarWitness:
    """Witness for ``g`` obtained by pulling back a witness for ``h`` along ``hom``."""

    if not is_homomorphism(g, h, hom.images):
        raise SolverError("pullback needs a homomorphism")
    r0 = frozenset(v for v in range(g.n) if hom[v] in witness.r0)
    r1 = frozenset(v for v in range(g.n) if hom[v] in witness.r1)
    pulled = DeltaStarWitness(
        r0=r0,
        r1=r1,
        c0={v: witness.c0[hom[v]] for v in range(g.n) if v not in r0},
        c1={v: witness.c1[hom[v]] for v in range(g.n) if v not in r1},
    )
    problems = delta_star_problems(g, delta, pulled)
    if problems:
        raise SolverError("pulled-back witness is invalid: " + "; ".join(problems))
    return pulled


def sandwich_coloring(h: FiniteGraph, witness: DeltaStarWitness, delta: int) -> Tuple[int, ...]:
    """A proper (2delta-2)-coloring read off a delta-(*) witness."""

    problems = delta_star_problems(h, delta, witness)
    if problems:
        raise SolverError("invalid delta-(*) witness: " + "; ".join(problems))
    coloring = []
    for v in range(h.n):
        if v not in witness.r0:
            coloring.append(delta - 1 + witness.c0[v])
        elif v in witness.r1:
            coloring.append(0)
        else:
            coloring.append(witness.c1[v])
    if not is_proper_coloring(h, coloring, 2 * delta - 2):
        raise SolverError("sandwich coloring is improper")
    return tuple(coloring)


# -- orientations and edge grabbing ----------------------------------------------


def sinkless_orientation(g: FiniteGraph) -> Optional[Orientation]:
    """Orientation with out-degree >= 1 at every non-isolated vertex, or None.

    A component with edges is oriented around one of its cycles, every other
    vertex pointing along a shortest path toward that cycle. Tree components
    make the problem infeasible.
    """

    graph = g.to_networkx()
    arcs: Dict[Tuple[int, int], Tuple[int, int]] = {}
    for component in sorted(nx.connected_components(graph), key=min):
        sub = graph.subgraph(component)
        if sub.number_of_edges() == 0:
            continue
        if nx.is_tree(sub):
            return None
        cycle = nx.find_cycle(sub, source=min(component))
        on_cycle = set()
        for tail, head in cycle:
            arcs[tuple(sorted((tail, head)))] = (tail, head)
            on_cycle.add(tail)
        queue = deque(sorted(on_cycle))
        seen = set(on_cycle)
        while queue:
            u = queue.popleft()
            for v in g.neighbors[u]:
                if v not in seen:
                    seen.add(v)
                    arcs[tuple(sorted((u, v)))] = (v, u)
                    queue.append(v)
        for u, v in sub.edges():
            arcs.setdefault(tuple(sorted((u, v))), (min(u, v), max(u, v)))
    orientation = Orientation(tuple(arcs[edge] for edge in g.edges()))
    if not is_sinkless(g, orientation):
        raise SolverError("constructed orientation has a sink")
    return orientation


def edge_grabbing_from_orientation(g: EdgeLabeledGraph, orientation: Orientation) -> Tuple[int, ...]:
    """Each vertex grabs its outgoing edge of smallest label; that label is its vertex label."""

    if not g.is_regular(g.delta):
        raise SolverError(f"graph is not {g.delta}-regular")
    if not g.is_proper_edge_coloring():
        raise SolverError("edge labels are not a proper edge coloring")
    if not is_sinkless(g.graph, orientation):
        raise SolverError("orientation is not sinkless")
    grabbed: List[Optional[int]] = [None] * g.n
    for tail, head in orientation.arcs:
        label = g.label(tail, head)
        if grabbed[tail] is None or label < grabbed[tail]:
            grabbed[tail] = label
    labels = tuple(int(label) for label in grabbed)  # type: ignore[arg-type]
    if not check_anti_game(g, labels):
        raise SolverError("edge grabbing produced a forbidden edge")
    return labels


# -- products ------------------------------------------------------------------


def hedetniemi_gap(
    g: FiniteGraph, h: FiniteGraph, limits: SolverLimits = DEFAULT_LIMITS
) -> HedetniemiReport:
    limits.check("hedetniemi_gap", g.n * h.n, limits.product_max_vertices)
    product = categorical_product(g, h)
    report = HedetniemiReport(
        chi_g=chromatic_number(g, limits).number,
        chi_h=chromatic_number(h, limits).number,
        chi_product=chromatic_number(product, limits).number,
    )
    if not report.bound_holds:
        raise SolverError(f"product bound violated: {report}")
    return report
