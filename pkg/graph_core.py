"""Graph types and constructions used across HomLab.

Vertices are always the dense integers ``0..n-1``. Constructions that carry
named vertices publish a role map so callers can address them directly.

Edge labels (generator indices) are 1-based, ``1..delta``. Color and coordinate
indices inside H_delta are 0-based, ``0..delta-2``.
"""
from __future__ import annotations

import itertools
import logging
import re
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]
Word = Tuple[int, ...]

NAMED_PATTERN = re.compile(r"^\s*(?P<name>[a-z]+)\s*(?:\(\s*(?P<arg>\d+)\s*\)|(?P<suffix>\d+))?\s*$")


class GraphError(ValueError):
    """Invalid input to a graph construction."""


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in increasing order."""

    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _edge_key(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class FiniteGraph:
    """Simple undirected loopless graph on ``0..n-1``.

    ``neighbors`` holds sorted neighbor tuples, ``masks`` the same adjacency as
    integer bitsets (bit ``v`` of ``masks[u]`` is set iff ``u ~ v``).
    """

    n: int
    neighbors: Tuple[Tuple[int, ...], ...]
    masks: Tuple[int, ...]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "FiniteGraph":
        if n < 0:
            raise GraphError(f"vertex count must be nonnegative, got {n}")
        adjacency: List[set] = [set() for _ in range(n)]
        for edge in edges:
            u, v = int(edge[0]), int(edge[1])
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            adjacency[u].add(v)
            adjacency[v].add(u)
        neighbors = tuple(tuple(sorted(nbrs)) for nbrs in adjacency)
        masks = tuple(sum(1 << v for v in nbrs) for nbrs in neighbors)
        return cls(n=n, neighbors=neighbors, masks=masks)

    @classmethod
    def from_networkx(cls, graph: nx.Graph) -> "FiniteGraph":
        nodes = sorted(graph.nodes())
        index = {node: idx for idx, node in enumerate(nodes)}
        return cls.from_edges(len(nodes), ((index[u], index[v]) for u, v in graph.edges()))

    @classmethod
    def from_adjacency_matrix(cls, matrix: np.ndarray) -> "FiniteGraph":
        rows, cols = np.nonzero(np.triu(matrix, k=1))
        return cls.from_edges(int(matrix.shape[0]), zip(rows.tolist(), cols.tolist()))

    def edges(self) -> List[Edge]:
        return [(u, v) for u in range(self.n) for v in self.neighbors[u] if u < v]

    @property
    def edge_count(self) -> int:
        return sum(len(nbrs) for nbrs in self.neighbors) // 2

    def degree(self, v: int) -> int:
        return len(self.neighbors[v])

    @property
    def max_degree(self) -> int:
        return max((len(nbrs) for nbrs in self.neighbors), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.masks[u] >> v & 1)

    @property
    def all_mask(self) -> int:
        return (1 << self.n) - 1

    def adjacency_matrix(self) -> np.ndarray:
        matrix = np.zeros((self.n, self.n), dtype=np.int64)
        for u, v in self.edges():
            matrix[u, v] = matrix[v, u] = 1
        return matrix

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.edges())
        return graph

    def is_independent(self, vertices: Iterable[int]) -> bool:
        mask = sum(1 << v for v in set(vertices))
        return all(not (self.masks[v] & mask) for v in iter_bits(mask))

    def is_acyclic(self) -> bool:
        return nx.is_forest(self.to_networkx()) if self.n else True


@dataclass(frozen=True)
class EdgeLabeledGraph:
    """A FiniteGraph with one generator label in ``1..delta`` per edge.

    Labels need not form a proper edge coloring.
    """

    graph: FiniteGraph
    delta: int
    labels: Mapping[Edge, int] = field(hash=False)
    names: Tuple[str, ...] = ()

    @classmethod
    def from_labeled_edges(
        cls, n: int, delta: int, edges: Iterable[Tuple[int, int, int]], names: Sequence[str] = ()
    ) -> "EdgeLabeledGraph":
        if delta < 2:
            raise GraphError(f"delta must be at least 2, got {delta}")
        labels: Dict[Edge, int] = {}
        plain: List[Edge] = []
        for u, v, label in edges:
            if not 1 <= label <= delta:
                raise GraphError(f"label {label} outside 1..{delta}")
            key = _edge_key(int(u), int(v))
            if key in labels and labels[key] != label:
                raise GraphError(f"edge {key} carries two labels")
            labels[key] = int(label)
            plain.append(key)
        return cls(graph=FiniteGraph.from_edges(n, plain), delta=delta, labels=labels, names=tuple(names))

    @property
    def n(self) -> int:
        return self.graph.n

    def label(self, u: int, v: int) -> int:
        return self.labels[_edge_key(u, v)]

    def labeled_edges(self) -> List[Tuple[int, int, int]]:
        return [(u, v, self.labels[(u, v)]) for u, v in self.graph.edges()]

    def label_masks(self) -> Dict[int, Tuple[int, ...]]:
        """Per label, the neighbor bitset of every vertex along edges of that label."""

        masks = {label: [0] * self.n for label in range(1, self.delta + 1)}
        for (u, v), label in self.labels.items():
            masks[label][u] |= 1 << v
            masks[label][v] |= 1 << u
        return {label: tuple(row) for label, row in masks.items()}

    def labels_at(self, v: int) -> FrozenSet[int]:
        return frozenset(self.label(v, u) for u in self.graph.neighbors[v])

    def is_proper_edge_coloring(self) -> bool:
        return all(len(self.labels_at(v)) == self.graph.degree(v) for v in range(self.n))

    def is_regular(self, degree: int) -> bool:
        return all(self.graph.degree(v) == degree for v in range(self.n))


@dataclass(frozen=True)
class TreeBall:
    """Radius-``radius`` ball of the Cayley graph of the free product of ``delta`` involutions.

    Vertices are reduced words (no letter repeated consecutively), listed level by
    level and lexicographically inside a level; index 0 is the empty word.
    """

    delta: int
    radius: int
    words: Tuple[Word, ...]
    index: Mapping[Word, int] = field(hash=False)
    labeled: EdgeLabeledGraph = field(hash=False)

    @property
    def root(self) -> int:
        return 0

    @property
    def n(self) -> int:
        return len(self.words)

    def parent(self, v: int) -> int:
        return self.index[self.words[v][:-1]]

    def level(self, k: int) -> List[int]:
        return [idx for idx, word in enumerate(self.words) if len(word) == k]

    def shift(self, letter: int, v: int) -> Optional[int]:
        """Index of the reduced word ``letter * words[v]``, or None outside the ball."""

        word = self.words[v]
        shifted = word[1:] if word and word[0] == letter else (letter,) + word
        return self.index.get(shifted)


def tree_ball_size(delta: int, radius: int) -> int:
    if radius == 0:
        return 1
    return 1 + delta * sum((delta - 1) ** k for k in range(radius))


def tree_ball(delta: int, radius: int) -> TreeBall:
    if delta < 3:
        raise GraphError(f"tree balls need delta >= 3, got {delta}")
    if radius < 0:
        raise GraphError(f"radius must be nonnegative, got {radius}")
    words: List[Word] = [()]
    frontier: List[Word] = [()]
    for _ in range(radius):
        frontier = [
            word + (letter,)
            for word in frontier
            for letter in range(1, delta + 1)
            if not word or word[-1] != letter
        ]
        words.extend(frontier)
    index = {word: idx for idx, word in enumerate(words)}
    edges = [(index[word[:-1]], idx, word[-1]) for idx, word in enumerate(words) if word]
    names = ["".join(f"a{letter}" for letter in word) or "1" for word in words]
    labeled = EdgeLabeledGraph.from_labeled_edges(len(words), delta, edges, names)
    return TreeBall(delta=delta, radius=radius, words=tuple(words), index=index, labeled=labeled)


def complete_graph(n: int) -> FiniteGraph:
    if n < 1:
        raise GraphError(f"complete graph needs n >= 1, got {n}")
    return FiniteGraph.from_edges(n, itertools.combinations(range(n), 2))


def cycle_graph(n: int) -> FiniteGraph:
    if n < 3:
        raise GraphError(f"cycle needs n >= 3, got {n}")
    return FiniteGraph.from_edges(n, ((v, (v + 1) % n) for v in range(n)))


def path_graph(n: int) -> FiniteGraph:
    return FiniteGraph.from_edges(n, ((v, v + 1) for v in range(n - 1)))


def edgeless_graph(n: int) -> FiniteGraph:
    return FiniteGraph.from_edges(n, ())


def categorical_product(g: FiniteGraph, h: FiniteGraph) -> FiniteGraph:
    """Categorical (tensor) product; pair ``(a, b)`` is vertex ``a * h.n + b``."""

    if g.n == 0 or h.n == 0:
        return edgeless_graph(0)
    return FiniteGraph.from_adjacency_matrix(np.kron(g.adjacency_matrix(), h.adjacency_matrix()))


@dataclass(frozen=True)
class HDeltaGraph:
    """The maximal graph with property delta-(*).

    Vertex layout: ``V0`` is ``0..delta-2``, ``V1`` is ``delta-1..2delta-3``,
    product vertex ``(i, j)`` is ``2(delta-1) + i(delta-1) + j`` and the apex
    is the last vertex.
    """

    delta: int
    graph: FiniteGraph

    @property
    def m(self) -> int:
        return self.delta - 1

    @property
    def v0(self) -> Tuple[int, ...]:
        return tuple(range(self.m))

    @property
    def v1(self) -> Tuple[int, ...]:
        return tuple(range(self.m, 2 * self.m))

    def p(self, i: int, j: int) -> int:
        return 2 * self.m + i * self.m + j

    @property
    def p_vertices(self) -> Tuple[int, ...]:
        return tuple(self.p(i, j) for i in range(self.m) for j in range(self.m))

    @property
    def dagger(self) -> int:
        return 2 * self.m + self.m * self.m

    def roles(self) -> Dict[str, object]:
        return {
            "v0": list(self.v0),
            "v1": list(self.v1),
            "p": {f"{i},{j}": self.p(i, j) for i in range(self.m) for j in range(self.m)},
            "dagger": self.dagger,
        }


def h_delta(delta: int) -> HDeltaGraph:
    if delta < 3:
        raise GraphError(f"H_delta is defined for delta >= 3, got {delta}")
    m = delta - 1
    layout = HDeltaGraph(delta=delta, graph=edgeless_graph(0))
    edges: List[Edge] = []
    edges.extend(itertools.combinations(layout.v0, 2))
    edges.extend(itertools.combinations(layout.v1, 2))
    cells = [(i, j) for i in range(m) for j in range(m)]
    for (i, j), (k, l) in itertools.combinations(cells, 2):
        if i != k and j != l:
            edges.append((layout.p(i, j), layout.p(k, l)))
    for i, j in cells:
        edges.append((layout.dagger, layout.p(i, j)))
        for label in range(m):
            if label != i:
                edges.append((layout.v0[label], layout.p(i, j)))
            if label != j:
                edges.append((layout.v1[label], layout.p(i, j)))
    graph = FiniteGraph.from_edges(layout.dagger + 1, edges)
    return HDeltaGraph(delta=delta, graph=graph)


def _binary(value: int, width: int) -> str:
    return format(value, f"0{width}b") if width else ""


def g0_truncation(delta: int, depth: int, seq: Sequence[Tuple[Sequence[int], int]]) -> EdgeLabeledGraph:
    """Depth-``depth`` truncation of the labeled G_0-style graph.

    ``seq[k] = (s_k, e_k)`` with ``|s_k| = k`` adds the edges
    ``(s_k 0 c, s_k 1 c)`` labeled ``e_k``. Only vertices whose connected
    component carries every label ``1..delta`` are kept; the surviving vertices
    are renumbered in increasing binary order and named by their strings.
    """

    if delta < 3:
        raise GraphError(f"delta must be at least 3, got {delta}")
    if len(seq) != depth:
        raise GraphError(f"seq must have exactly {depth} entries, got {len(seq)}")
    edges: List[Tuple[int, int, int]] = []
    for k, (prefix, label) in enumerate(seq):
        prefix = tuple(int(bit) for bit in prefix)
        if len(prefix) != k:
            raise GraphError(f"seq[{k}] has word length {len(prefix)}, expected {k}")
        if any(bit not in (0, 1) for bit in prefix):
            raise GraphError(f"seq[{k}] is not a binary word")
        if not 1 <= label <= delta:
            raise GraphError(f"seq[{k}] label {label} outside 1..{delta}")
        head = int("".join(map(str, prefix)), 2) if prefix else 0
        tail_width = depth - k - 1
        for tail in range(1 << tail_width):
            u = ((head << 1) << tail_width) | tail
            v = ((head << 1 | 1) << tail_width) | tail
            edges.append((u, v, label))

    full = nx.Graph()
    full.add_nodes_from(range(1 << depth))
    for u, v, label in edges:
        full.add_edge(u, v, label=label)
    kept: List[int] = []
    for component in nx.connected_components(full):
        seen = {data["label"] for _, _, data in full.subgraph(component).edges(data=True)}
        if len(seen) == delta:
            kept.extend(component)
    kept.sort()
    index = {v: idx for idx, v in enumerate(kept)}
    logger.debug("g0 truncation depth %d keeps %d of %d vertices", depth, len(kept), 1 << depth)
    return EdgeLabeledGraph.from_labeled_edges(
        len(kept),
        delta,
        [(index[u], index[v], label) for u, v, label in edges if u in index and v in index],
        names=[_binary(v, depth) for v in kept],
    )


def named_graph(name: str) -> FiniteGraph:
    """Standard graphs in networkx vertex order.

    ``grotzsch`` is the Mycielskian of C5, ``chvatal`` and ``petersen`` follow
    networkx, ``cycle(n)`` is ``0-1-...-(n-1)-0``.
    """

    match = NAMED_PATTERN.match(name.lower())
    if not match:
        raise GraphError(f"unknown graph name: {name}")
    key = match.group("name")
    arg = match.group("arg") or match.group("suffix")
    if key == "grotzsch" and arg is None:
        return FiniteGraph.from_networkx(nx.mycielski_graph(4))
    if key == "chvatal" and arg is None:
        return FiniteGraph.from_networkx(nx.chvatal_graph())
    if key == "petersen" and arg is None:
        return FiniteGraph.from_networkx(nx.petersen_graph())
    if key == "cycle" and arg is not None:
        return cycle_graph(int(arg))
    if key == "k" and arg is not None:
        return complete_graph(int(arg))
    if key == "hdelta" and arg is not None:
        return h_delta(int(arg)).graph
    raise GraphError(f"unknown graph name: {name}")


def shift_graph(n: int, k: int) -> FiniteGraph:
    """Finite shift graph on the k-subsets of ``{1..n}``.

    ``x ~ y`` when ``x`` without its minimum equals ``y`` without its maximum.
    Subsets are numbered in ``itertools.combinations`` order.
    """

    if k < 2 or n < k:
        raise GraphError(f"shift graph needs 2 <= k <= n, got n={n}, k={k}")
    subsets = list(itertools.combinations(range(1, n + 1), k))
    by_head: Dict[Tuple[int, ...], List[int]] = {}
    for idx, subset in enumerate(subsets):
        by_head.setdefault(subset[:-1], []).append(idx)
    edges = [(idx, other) for idx, subset in enumerate(subsets) for other in by_head.get(subset[1:], [])]
    return FiniteGraph.from_edges(len(subsets), edges)


def random_graph(n: int, p: float, rng: np.random.Generator) -> FiniteGraph:
    pairs = list(itertools.combinations(range(n), 2))
    draws = rng.random(len(pairs))
    return FiniteGraph.from_edges(n, (pair for pair, draw in zip(pairs, draws) if draw < p))


def random_regular_edge_colored(
    delta: int, n: int, rng: np.random.Generator, attempts: int = 1000
) -> EdgeLabeledGraph:
    """A delta-regular simple graph whose edges are properly colored by ``1..delta``.

    Built as a union of ``delta`` edge-disjoint random perfect matchings, the
    ``k``-th matching labeled ``k``.
    """

    if n % 2 or n <= delta:
        raise GraphError(f"need even n > delta, got n={n}, delta={delta}")
    for _ in range(attempts):
        used: set = set()
        edges: List[Tuple[int, int, int]] = []
        for label in range(1, delta + 1):
            order = rng.permutation(n).tolist()
            matching = [_edge_key(order[2 * t], order[2 * t + 1]) for t in range(n // 2)]
            if any(edge in used for edge in matching):
                break
            used.update(matching)
            edges.extend((u, v, label) for u, v in matching)
        else:
            return EdgeLabeledGraph.from_labeled_edges(n, delta, edges)
    raise GraphError(f"no {delta}-regular edge coloring found on {n} vertices after {attempts} attempts")


def random_g0_seq(depth: int, delta: int, rng: np.random.Generator) -> List[Tuple[Tuple[int, ...], int]]:
    return [
        (tuple(int(bit) for bit in rng.integers(0, 2, size=k)), int(rng.integers(1, delta + 1)))
        for k in range(depth)
    ]


def random_g0_path_seq(depth: int, delta: int, rng: np.random.Generator) -> List[Tuple[Tuple[int, ...], int]]:
    """Prefixes of one random word with labels cycling through a random permutation.

    From ``depth >= 2 * delta - 1`` on, the word's vertex has for every label an
    edge whose far end again sees all labels, so label-preserving balls of
    radius 2 map into the truncation.
    """

    word = tuple(int(bit) for bit in rng.integers(0, 2, size=depth))
    order = [int(label) + 1 for label in rng.permutation(delta)]
    return [(word[:k], order[k % delta]) for k in range(depth)]
