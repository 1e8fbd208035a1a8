"""Plain-text graph files.

A file is a sequence of ``key: value`` header lines and two optional blocks,
``edges:`` and ``action:``, whose data lines follow the block header.
``#`` starts a comment.  See ``docs/graph-format.md`` for the grammar.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .errors import DuplicateEdge, EmptyGraph, GraphFormatError, GraphValidationError, IharaError, SelfLoop
from .graphs import GroupAction, PeriodicGraph, SimpleGraph, canonical_triple

SCALARS = {"type", "name", "vertices", "rank", "cell_size"}
BLOCKS = {"edges", "action"}


@dataclass(frozen=True)
class GraphFile:
    name: str
    action: GroupAction

    @property
    def graph(self) -> SimpleGraph | PeriodicGraph:
        return self.action.graph


def _int(tok: str, lineno: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise GraphFormatError(f"{what} must be an integer, got {tok!r}", lineno) from None


def _with_line(exc: IharaError, lineno: int) -> IharaError:
    return type(exc)(f"line {lineno}: {exc}")


def loads(text: str) -> GraphFile:
    header: dict[str, tuple[str, int]] = {}
    blocks: dict[str, list[tuple[list[str], int]]] = {}
    block_line: dict[str, int] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" in line:
            key, _, value = line.partition(":")
            key, value = key.strip(), value.strip()
            if key in BLOCKS:
                if value:
                    raise GraphFormatError(f"'{key}:' takes no value on the same line", lineno)
                if key in blocks:
                    raise GraphFormatError(f"duplicate block '{key}'", lineno)
                blocks[key] = []
                block_line[key] = lineno
                current = key
            elif key in SCALARS:
                if key in header:
                    raise GraphFormatError(f"duplicate field '{key}'", lineno)
                if not value:
                    raise GraphFormatError(f"field '{key}' needs a value", lineno)
                header[key] = (value, lineno)
                current = None
            else:
                raise GraphFormatError(f"unknown field '{key}'", lineno)
            continue
        if current is None:
            raise GraphFormatError(f"data line outside a block: {line!r}", lineno)
        blocks[current].append((line.split(), lineno))

    if "type" not in header:
        raise GraphFormatError("missing field 'type'", 1)
    kind, kline = header["type"]
    name = header.get("name", ("", 0))[0]
    if kind == "finite":
        for bad in ("rank", "cell_size"):
            if bad in header:
                raise GraphFormatError(f"field '{bad}' is only valid for periodic graphs", header[bad][1])
        action = _finite(header, blocks, block_line)
    elif kind == "periodic":
        for bad in ("vertices",):
            if bad in header:
                raise GraphFormatError(f"field '{bad}' is only valid for finite graphs", header[bad][1])
        if "action" in blocks:
            raise GraphFormatError("periodic graphs carry the translation action implicitly", block_line["action"])
        action = GroupAction.translation(_periodic(header, blocks))
    else:
        raise GraphFormatError(f"type must be 'finite' or 'periodic', got {kind!r}", kline)
    return GraphFile(name, action)


def _finite(header, blocks, block_line) -> GroupAction:
    if "vertices" not in header:
        raise GraphFormatError("missing field 'vertices'", header["type"][1])
    value, vline = header["vertices"]
    n = _int(value, vline, "vertices")
    if n <= 0:
        raise EmptyGraph(f"line {vline}: a graph needs at least one vertex")
    seen: set[tuple[int, int]] = set()
    edges = []
    for toks, lineno in blocks.get("edges", []):
        if len(toks) != 2:
            raise GraphFormatError(f"finite edge needs 2 vertices, got {len(toks)}", lineno)
        a, b = (_int(t, lineno, "vertex") for t in toks)
        for x in (a, b):
            if not 0 <= x < n:
                raise GraphFormatError(f"vertex {x} out of range 0..{n - 1}", lineno)
        if a == b:
            raise SelfLoop(f"line {lineno}: self-loop at vertex {a}")
        e = (min(a, b), max(a, b))
        if e in seen:
            raise DuplicateEdge(f"line {lineno}: repeated edge {e}")
        seen.add(e)
        edges.append(e)
    graph = SimpleGraph.from_edges(n, edges)
    gens = []
    for toks, lineno in blocks.get("action", []):
        if len(toks) != n:
            raise GraphFormatError(f"permutation needs {n} entries, got {len(toks)}", lineno)
        gens.append(tuple(_int(t, lineno, "permutation entry") for t in toks))
    if not gens:
        return GroupAction.trivial(graph)
    try:
        return GroupAction.generated_by(graph, gens)
    except IharaError as exc:
        raise _with_line(exc, block_line["action"]) from None


def _periodic(header, blocks) -> PeriodicGraph:
    for key in ("rank", "cell_size"):
        if key not in header:
            raise GraphFormatError(f"missing field '{key}'", header["type"][1])
    rank = _int(*header["rank"], "rank")
    size = _int(*header["cell_size"], "cell_size")
    if rank < 0:
        raise GraphFormatError("rank must be nonnegative", header["rank"][1])
    if size <= 0:
        raise EmptyGraph(f"line {header['cell_size'][1]}: cell_size must be positive")
    seen = set()
    triples = []
    for toks, lineno in blocks.get("edges", []):
        if len(toks) != 2 + rank:
            raise GraphFormatError(f"periodic edge needs 2 + {rank} integers, got {len(toks)}", lineno)
        i, j, *v = (_int(t, lineno, "edge entry") for t in toks)
        for x in (i, j):
            if not 0 <= x < size:
                raise GraphFormatError(f"cell vertex {x} out of range 0..{size - 1}", lineno)
        if i == j and not any(v):
            raise SelfLoop(f"line {lineno}: self-loop at cell vertex {i}")
        t = canonical_triple(i, j, v)
        if t in seen:
            raise DuplicateEdge(f"line {lineno}: repeated edge {t}")
        seen.add(t)
        triples.append(t)
    try:
        return PeriodicGraph.from_triples(rank, size, triples)
    except GraphValidationError as exc:
        raise GraphFormatError(str(exc), None) from None


def dumps(gf: GraphFile | GroupAction, name: str | None = None) -> str:
    if isinstance(gf, GroupAction):
        gf = GraphFile(name or "", gf)
    action = gf.action
    g = action.graph
    lines = []
    if action.kind == "translation":
        lines.append("type: periodic")
        if gf.name:
            lines.append(f"name: {gf.name}")
        lines += [f"rank: {g.rank}", f"cell_size: {g.cell_size}", "edges:"]
        for i, j, v in sorted(g.cell_edges):
            lines.append("  " + " ".join(str(x) for x in (i, j, *v)))
    else:
        lines.append("type: finite")
        if gf.name:
            lines.append(f"name: {gf.name}")
        lines += [f"vertices: {g.n}", "edges:"]
        lines += [f"  {a} {b}" for a, b in sorted(g.edges)]
        if action.kind == "permutation":
            lines.append("action:")
            # the full element list regenerates the same group
            for p in action.elements[1:]:
                lines.append("  " + " ".join(str(x) for x in p))
    return "\n".join(lines) + "\n"


def load(path: str | Path) -> GraphFile:
    return loads(Path(path).read_text(encoding="utf-8"))


def dump(gf: GraphFile | GroupAction, path: str | Path, name: str | None = None) -> None:
    Path(path).write_text(dumps(gf, name), encoding="utf-8")
