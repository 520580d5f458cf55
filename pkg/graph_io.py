"""Graph file formats: DIMACS ``.col``, a compact JSON schema and DOT."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, TextIO, Tuple, Union

from graph_core import EdgeLabeledGraph, FiniteGraph, GraphError, named_graph

AnyGraph = Union[FiniteGraph, EdgeLabeledGraph]


class GraphFormatError(ValueError):
    """Raised when a graph file cannot be parsed."""


def parse_dimacs(lines: Iterable[str], source: str = "<input>") -> FiniteGraph:
    n: Optional[int] = None
    declared_edges = 0
    edges: List[Tuple[int, int]] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line[0] == "c":
            continue
        tokens = line.split()
        if tokens[0] == "p":
            if len(tokens) != 4 or tokens[1].lower() not in {"edge", "col"}:
                raise GraphFormatError(f"{source}:{lineno}: bad problem line: {line}")
            n, declared_edges = int(tokens[2]), int(tokens[3])
        elif tokens[0] == "e":
            if n is None:
                raise GraphFormatError(f"{source}:{lineno}: edge before problem line")
            if len(tokens) != 3:
                raise GraphFormatError(f"{source}:{lineno}: bad edge line: {line}")
            edges.append((int(tokens[1]) - 1, int(tokens[2]) - 1))
        else:
            raise GraphFormatError(f"{source}:{lineno}: unknown line format: {line}")
    if n is None:
        raise GraphFormatError(f"{source}: missing problem line")
    try:
        graph = FiniteGraph.from_edges(n, edges)
    except GraphError as exc:
        raise GraphFormatError(f"{source}: {exc}") from exc
    if declared_edges and declared_edges not in (graph.edge_count, len(edges)):
        raise GraphFormatError(f"{source}: declared {declared_edges} edges, found {len(edges)}")
    return graph


def format_dimacs(graph: FiniteGraph, comment: Optional[str] = None) -> str:
    lines = []
    if comment:
        lines.extend(f"c {line}" for line in comment.splitlines())
    lines.append(f"p edge {graph.n} {graph.edge_count}")
    lines.extend(f"e {u + 1} {v + 1}" for u, v in graph.edges())
    return "\n".join(lines) + "\n"


def read_dimacs(path: Path) -> FiniteGraph:
    with path.open("r", encoding="utf-8") as fh:
        return parse_dimacs(fh, source=path.name)


def write_dimacs(graph: FiniteGraph, path: Path, comment: Optional[str] = None) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_dimacs(graph, comment), encoding="utf-8")
    return path


def graph_to_dict(graph: AnyGraph, roles: Optional[Mapping[str, object]] = None) -> Dict[str, object]:
    if isinstance(graph, EdgeLabeledGraph):
        payload: Dict[str, object] = {
            "n": graph.n,
            "delta": graph.delta,
            "edges": [[u, v, label] for u, v, label in graph.labeled_edges()],
        }
        if graph.names:
            payload["names"] = list(graph.names)
    else:
        payload = {"n": graph.n, "edges": [[u, v] for u, v in graph.edges()]}
    if roles:
        payload["roles"] = dict(roles)
    return payload


def graph_from_dict(payload: Mapping[str, object], source: str = "<input>") -> AnyGraph:
    try:
        n = int(payload["n"])  # type: ignore[arg-type]
        edges = [list(edge) for edge in payload.get("edges", [])]  # type: ignore[union-attr]
    except (KeyError, TypeError, ValueError) as exc:
        raise GraphFormatError(f"{source}: malformed graph document: {exc}") from exc
    labeled = any(len(edge) == 3 for edge in edges)
    try:
        if labeled:
            if any(len(edge) != 3 for edge in edges):
                raise GraphFormatError(f"{source}: mixed labeled and unlabeled edges")
            delta = int(payload.get("delta") or max(edge[2] for edge in edges))  # type: ignore[arg-type]
            names = payload.get("names") or ()
            return EdgeLabeledGraph.from_labeled_edges(n, delta, (tuple(edge) for edge in edges), names)  # type: ignore[arg-type]
        return FiniteGraph.from_edges(n, edges)
    except GraphError as exc:
        raise GraphFormatError(f"{source}: {exc}") from exc


def read_json_graph(path: Path) -> AnyGraph:
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"{path.name}: {exc}") from exc
    return graph_from_dict(payload, source=path.name)


def dumps(payload: object) -> str:
    """Canonical JSON: sorted keys, two-space indent, trailing newline."""

    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_json_graph(graph: AnyGraph, path: Path, roles: Optional[Mapping[str, object]] = None) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(graph_to_dict(graph, roles)), encoding="utf-8")
    return path


def render_dot(
    n: int,
    edges: Sequence[Sequence[int]],
    vertex_labels: Optional[Sequence[str]] = None,
    name: str = "G",
) -> str:
    """DOT text for an undirected graph; a third edge entry becomes the edge label."""

    lines = [f"graph {name} {{"]
    for v in range(n):
        if vertex_labels:
            lines.append(f'  {v} [label="{vertex_labels[v]}"];')
        else:
            lines.append(f"  {v};")
    for edge in edges:
        if len(edge) > 2:
            lines.append(f'  {edge[0]} -- {edge[1]} [label="a{edge[2]}"];')
        else:
            lines.append(f"  {edge[0]} -- {edge[1]};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_to_dot(graph: AnyGraph, name: str = "G") -> str:
    if isinstance(graph, EdgeLabeledGraph):
        return render_dot(graph.n, graph.labeled_edges(), list(graph.names) or None, name)
    return render_dot(graph.n, graph.edges(), None, name)


def load_graph(spec: str) -> AnyGraph:
    """Load a graph from a ``.col``/``.json`` file, or build a named graph."""

    path = Path(spec)
    if path.exists():
        if path.suffix.lower() == ".json":
            return read_json_graph(path)
        return read_dimacs(path)
    try:
        return named_graph(spec)
    except GraphError as exc:
        raise GraphFormatError(f"{spec}: not a file and not a known graph name") from exc


def write_graph(graph: AnyGraph, fmt: str, out: Optional[Path], roles: Optional[Mapping[str, object]] = None,
                stream: Optional[TextIO] = None) -> Optional[Path]:
    """Write ``graph`` as ``text`` (DIMACS), ``json`` or ``dot`` to ``out`` or ``stream``."""

    plain = graph.graph if isinstance(graph, EdgeLabeledGraph) else graph
    if fmt not in ("text", "json", "dot"):
        raise GraphFormatError(f"unsupported format: {fmt}")
    if out is not None:
        if fmt == "json":
            return write_json_graph(graph, out, roles)
        if fmt == "text":
            return write_dimacs(plain, out)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(graph_to_dot(graph), encoding="utf-8")
        return out
    if stream is not None:
        if fmt == "json":
            stream.write(dumps(graph_to_dict(graph, roles)))
        elif fmt == "dot":
            stream.write(graph_to_dot(graph))
        else:
            stream.write(format_dimacs(plain))
    return None
