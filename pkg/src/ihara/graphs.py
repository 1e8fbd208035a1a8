"""Simple graphs, Z^d-periodic graphs and free group actions on them.

Everything here is immutable.  Constructors validate their input and raise a
:class:`~ihara.errors.GraphValidationError` subclass on bad data, so any
object that exists is structurally sound; :func:`validate` then reports the
softer properties (degree bound, regularity, isolated or pendant vertices).
"""

from __future__ import annotations

import itertools
import warnings
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from .errors import (
    AsymmetricEdge,
    DuplicateEdge,
    EmptyGraph,
    GraphValidationError,
    NotAnAutomorphism,
    NotFree,
    SelfLoop,
)

Offset = tuple[int, ...]
Perm = tuple[int, ...]


# ---------------------------------------------------------------------------
# Finite simple graphs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SimpleGraph:
    """Finite simple undirected graph on vertices ``0..n-1``.

    ``edges`` holds each geometric edge once as a sorted pair ``(u, v)``,
    ``u < v``.  Use :meth:`from_edges` for unsorted or untrusted input.
    """

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n <= 0:
            raise EmptyGraph("graph has no vertices")
        seen = set()
        for e in self.edges:
            u, v = e
            if u == v:
                raise SelfLoop(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphValidationError(f"edge {e} references a vertex outside 0..{self.n - 1}")
            if u > v:
                raise GraphValidationError(f"edge {e} is not in canonical (u < v) order")
            if e in seen:
                raise DuplicateEdge(f"edge {e} listed twice")
            seen.add(e)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> SimpleGraph:
        canon = []
        seen = set()
        for e in edges:
            u, v = (int(x) for x in e)
            if u == v:
                raise SelfLoop(f"self-loop at vertex {u}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise DuplicateEdge(f"edge {{{u}, {v}}} listed twice")
            seen.add(key)
            canon.append(key)
        return cls(n, tuple(sorted(canon)))

    @classmethod
    def from_adjacency(cls, matrix) -> SimpleGraph:
        a = np.asarray(matrix)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise GraphValidationError("adjacency matrix must be square")
        n = a.shape[0]
        if n == 0:
            raise EmptyGraph("graph has no vertices")
        if np.any(np.diag(a) != 0):
            raise SelfLoop(f"self-loop at vertex {int(np.flatnonzero(np.diag(a))[0])}")
        if not np.array_equal(a, a.T):
            i, j = np.argwhere(a != a.T)[0]
            raise AsymmetricEdge(f"A[{i},{j}] != A[{j},{i}]")
        if np.any((a != 0) & (a != 1)):
            raise DuplicateEdge("adjacency entries must be 0 or 1 (multigraphs are not supported)")
        edges = [(int(i), int(j)) for i, j in zip(*np.nonzero(np.triu(a)))]
        return cls(n, tuple(edges))

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.neighbors)

    @property
    def max_degree(self) -> int:
        return max(self.degrees)

    @property
    def euler_characteristic(self) -> int:
        return self.n - len(self.edges)

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int64)
        for u, v in self.edges:
            a[u, v] = a[v, u] = 1
        return a

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.neighbors[u]


# ---------------------------------------------------------------------------
# Periodic graphs
# ---------------------------------------------------------------------------

def _positive(v: Offset) -> bool:
    for x in v:
        if x:
            return x > 0
    return False


def canonical_triple(i: int, j: int, v: Sequence[int]) -> tuple[int, int, Offset]:
    """Orientation of the edge (i,0)-(j,v) stored in :class:`PeriodicGraph`.

    ``(i, j, v)`` and ``(j, i, -v)`` describe the same edge; the canonical form
    has ``i < j``, or ``i == j`` with ``v`` lexicographically positive.
    """
    v = tuple(int(x) for x in v)
    if i < j or (i == j and _positive(v)):
        return (i, j, v)
    return (j, i, tuple(-x for x in v))


@dataclass(frozen=True)
class PeriodicGraph:
    """Graph on ``F x Z^d`` invariant under translations of the lattice.

    ``cell_edges`` lists canonical triples ``(i, j, v)``: vertex ``(i, x)`` is
    joined to ``(j, x + v)`` for every lattice point ``x``.  Rank 0 is allowed
    and is just a finite graph on the cell.
    """

    rank: int
    cell_size: int
    cell_edges: tuple[tuple[int, int, Offset], ...]

    def __post_init__(self):
        if self.rank < 0:
            raise GraphValidationError("rank must be nonnegative")
        if self.cell_size <= 0:
            raise EmptyGraph("cell has no vertices")
        seen = set()
        for t in self.cell_edges:
            i, j, v = t
            if len(v) != self.rank:
                raise GraphValidationError(f"offset {v} does not have rank {self.rank}")
            if not (0 <= i < self.cell_size and 0 <= j < self.cell_size):
                raise GraphValidationError(f"triple {t} references a cell vertex outside 0..{self.cell_size - 1}")
            if i == j and not any(v):
                raise SelfLoop(f"self-loop at cell vertex {i}")
            if canonical_triple(i, j, v) != t:
                raise GraphValidationError(f"triple {t} is not in canonical orientation")
            if t in seen:
                raise DuplicateEdge(f"edge {t} listed twice")
            seen.add(t)

    @classmethod
    def from_triples(cls, rank: int, cell_size: int,
                     triples: Iterable[tuple[int, int, Sequence[int]]]) -> PeriodicGraph:
        out = []
        seen = set()
        for i, j, v in triples:
            if len(v) != rank:
                raise GraphValidationError(f"offset {tuple(v)} does not have rank {rank}")
            if i == j and not any(v):
                raise SelfLoop(f"self-loop at cell vertex {i}")
            t = canonical_triple(int(i), int(j), v)
            if t in seen:
                raise DuplicateEdge(f"edge {t} listed twice (possibly in both orientations)")
            seen.add(t)
            out.append(t)
        return cls(rank, cell_size, tuple(sorted(out)))

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        deg = [0] * self.cell_size
        for i, j, _ in self.cell_edges:
            deg[i] += 1
            deg[j] += 1
        return tuple(deg)

    @property
    def max_degree(self) -> int:
        return max(self.degrees)

    @property
    def max_offset(self) -> int:
        """Largest sup-norm of an edge offset (0 for rank 0 or no edges)."""
        return max((max((abs(x) for x in v), default=0) for _, _, v in self.cell_edges), default=0)

    @property
    def euler_characteristic(self) -> int:
        return self.cell_size - len(self.cell_edges)

    def shifted(self, shifts: Sequence[Sequence[int]]) -> PeriodicGraph:
        """Same graph with cell vertex ``i`` represented by ``(i, shifts[i])``.

        Used to re-pick the fundamental domain; every traced quantity must be
        unchanged.
        """
        s = [tuple(int(x) for x in sh) for sh in shifts]
        triples = []
        for i, j, v in self.cell_edges:
            triples.append((i, j, tuple(v[a] + s[j][a] - s[i][a] for a in range(self.rank))))
        return PeriodicGraph.from_triples(self.rank, self.cell_size, triples)


# ---------------------------------------------------------------------------
# Validation report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ValidationReport:
    kind: str
    n_vertices: int
    n_edges: int
    max_degree: int
    regular_q: int | None
    isolated: tuple[int, ...] = ()
    pendant: tuple[int, ...] = ()
    warnings: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.isolated

    @property
    def is_regular(self) -> bool:
        return self.regular_q is not None


def validate(graph: SimpleGraph | PeriodicGraph) -> ValidationReport:
    """Report degree bound, regularity and degenerate vertices.

    Structural errors were already raised by the constructors.  Isolated
    vertices make the graph unusable for zeta computations (``ok`` is False);
    pendant vertices are allowed but flagged, since ``Q - I`` then has
    negative entries.
    """
    if isinstance(graph, SimpleGraph):
        kind, nv, ne = "finite", graph.n, len(graph.edges)
    elif isinstance(graph, PeriodicGraph):
        kind, nv, ne = "periodic", graph.cell_size, len(graph.cell_edges)
    else:
        raise TypeError(f"cannot validate {type(graph).__name__}")
    deg = graph.degrees
    isolated = tuple(i for i, d in enumerate(deg) if d == 0)
    pendant = tuple(i for i, d in enumerate(deg) if d == 1)
    notes = []
    if isolated:
        notes.append(f"isolated vertices {list(isolated)}: zeta machinery needs min degree >= 1")
    if pendant:
        notes.append(f"degree-1 vertices {list(pendant)}: Q - I has negative entries")
    q = deg[0] - 1 if len(set(deg)) == 1 and deg[0] >= 1 else None
    return ValidationReport(kind, nv, ne, max(deg), q, isolated, pendant, tuple(notes))


# ---------------------------------------------------------------------------
# Group actions
# ---------------------------------------------------------------------------

def _compose(p: Perm, r: Perm) -> Perm:
    """(p o r)(x) = p[r[x]]."""
    return tuple(p[x] for x in r)


def _closure(gens: Sequence[Perm], n: int) -> tuple[Perm, ...]:
    ident = tuple(range(n))
    elems = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = _compose(s, g)
                if h not in elems:
                    elems.add(h)
                    nxt.append(h)
        frontier = nxt
    return tuple(sorted(elems))


@dataclass(frozen=True)
class GroupAction:
    """A free action of a group on a graph.

    ``kind`` is ``"trivial"`` or ``"permutation"`` for a :class:`SimpleGraph`
    and ``"translation"`` for a :class:`PeriodicGraph`.  Permutation actions
    store the full element list (identity first).  ``domain`` holds the chosen
    fundamental domain; by default the smallest vertex of every orbit.
    """

    graph: SimpleGraph | PeriodicGraph
    kind: str
    elements: tuple[Perm, ...] = ()
    domain: tuple[int, ...] = field(default=())

    @classmethod
    def trivial(cls, graph: SimpleGraph) -> GroupAction:
        return cls(graph, "trivial", (tuple(range(graph.n)),), tuple(range(graph.n)))

    @classmethod
    def translation(cls, graph: PeriodicGraph) -> GroupAction:
        return cls(graph, "translation", (), tuple(range(graph.cell_size)))

    @classmethod
    def generated_by(cls, graph: SimpleGraph, generators: Iterable[Sequence[int]]) -> GroupAction:
        """Close ``generators`` under composition and check the action is free."""
        n = graph.n
        gens = []
        edges = set(graph.edges)
        for g in generators:
            g = tuple(int(x) for x in g)
            if sorted(g) != list(range(n)):
                raise NotAnAutomorphism(f"{list(g)} is not a permutation of 0..{n - 1}")
            for u, v in graph.edges:
                a, b = g[u], g[v]
                if (min(a, b), max(a, b)) not in edges:
                    raise NotAnAutomorphism(f"{list(g)} does not preserve edge ({u}, {v})")
            gens.append(g)
        elems = _closure(gens, n) if gens else (tuple(range(n)),)
        ident = tuple(range(n))
        for g in elems:
            if g != ident and any(g[x] == x for x in range(n)):
                x = next(x for x in range(n) if g[x] == x)
                raise NotFree(f"element {list(g)} fixes vertex {x}")
        elems = (ident,) + tuple(g for g in elems if g != ident)
        orbits = _orbits(elems, n)
        domain = tuple(sorted(min(o) for o in orbits))
        kind = "trivial" if len(elems) == 1 else "permutation"
        return cls(graph, kind, elems, domain)

    def with_domain(self, domain: Sequence[int]) -> GroupAction:
        """Same action with a different choice of orbit representatives."""
        domain = tuple(int(x) for x in domain)
        if self.kind == "translation":
            if sorted(domain) != list(range(self.graph.cell_size)):
                raise ValueError("translation domain is the whole cell; use PeriodicGraph.shifted")
            return self
        orbits = _orbits(self.elements, self.graph.n)
        hit = [sum(1 for x in domain if x in o) for o in orbits]
        if len(domain) != len(orbits) or any(h != 1 for h in hit):
            raise ValueError("domain must contain exactly one vertex of every orbit")
        return GroupAction(self.graph, self.kind, self.elements, domain)

    @property
    def is_finite(self) -> bool:
        return self.kind != "translation"

    @property
    def order(self) -> int | None:
        """|Gamma|, or None for the infinite translation group."""
        return len(self.elements) if self.is_finite else None

    @property
    def rank(self) -> int:
        return self.graph.rank if self.kind == "translation" else 0

    @property
    def max_degree(self) -> int:
        return self.graph.max_degree

    @property
    def domain_degrees(self) -> tuple[int, ...]:
        deg = self.graph.degrees
        return tuple(deg[x] for x in self.domain)

    @property
    def regular_q(self) -> int | None:
        deg = set(self.graph.degrees)
        if len(deg) == 1:
            (d,) = deg
            return d - 1 if d >= 1 else None
        return None

    @property
    def alpha(self) -> float:
        """Growth constant (d + sqrt(d^2 + 4d)) / 2 bounding the proper-path operators."""
        d = self.max_degree
        return (d + (d * d + 4 * d) ** 0.5) / 2

    def orbit_of(self, x: int) -> tuple[int, ...]:
        return tuple(sorted({g[x] for g in self.elements}))

    def label(self) -> str:
        g = self.graph
        if self.kind == "translation":
            return f"periodic(rank={g.rank}, |F|={g.cell_size})"
        if self.kind == "trivial":
            return f"finite(n={g.n})"
        return f"finite(n={g.n}) / group of order {self.order}"


def _orbits(elements: Sequence[Perm], n: int) -> list[frozenset[int]]:
    seen: set[int] = set()
    out = []
    for x in range(n):
        if x in seen:
            continue
        o = frozenset(g[x] for g in elements)
        seen |= o
        out.append(o)
    return out


# ---------------------------------------------------------------------------
# Quotient data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuotientData:
    fundamental_domain: tuple[int, ...]
    n_vertices: int
    n_edges: int
    euler_characteristic: int
    l2_euler_characteristic: Fraction
    edge_inversions: int = 0


def quotient(action: GroupAction) -> QuotientData:
    """Fundamental domain and counts of the quotient graph ``B = X / Gamma``.

    ``l2_euler_characteristic`` is ``-1/2 Tr_Gamma(Q - I)``, computed from the
    degrees of the domain vertices.  It equals ``|VB| - |EB|`` unless some
    group element swaps the two ends of an edge (counted in ``edge_inversions``).
    """
    g = action.graph
    l2 = -Fraction(sum(d - 2 for d in action.domain_degrees), 2)
    if action.kind == "translation":
        nv, ne, inv = g.cell_size, len(g.cell_edges), 0
    else:
        nv = len(_orbits(action.elements, g.n))
        seen: set[tuple[int, int]] = set()
        ne = inv = 0
        for e in g.edges:
            if e in seen:
                continue
            orbit = set()
            for p in action.elements:
                a, b = p[e[0]], p[e[1]]
                orbit.add((min(a, b), max(a, b)))
                if (a, b) == (e[1], e[0]):
                    inv += 1
            seen |= orbit
            ne += 1
        if action.kind == "trivial":
            assert nv == g.n
    return QuotientData(action.domain, nv, ne, nv - ne, l2, inv)


# ---------------------------------------------------------------------------
# Finite windows of periodic graphs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Window:
    """Finite piece of a periodic graph around the central copy of the cell.

    ``coords[x]`` is ``(cell index, lattice vector)`` for window vertex ``x``;
    ``center[i]`` is the window vertex of ``(i, 0)``.
    """

    periodic: PeriodicGraph
    radius: int
    graph: SimpleGraph
    coords: tuple[tuple[int, Offset], ...]
    center: tuple[int, ...]

    @cached_property
    def index(self) -> dict[tuple[int, Offset], int]:
        return {c: x for x, c in enumerate(self.coords)}


def unroll(pg: PeriodicGraph, radius: int) -> Window:
    """Induced subgraph on ``F x {-h..h}^d`` with ``h = radius * max_offset``.

    Every path of length at most ``radius`` that starts in the central cell
    stays inside the window, so path counts of that length rooted in the
    central cell are exact.
    """
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    h = radius * max(pg.max_offset, 1) if pg.rank else 0
    box = list(itertools.product(range(-h, h + 1), repeat=pg.rank))
    coords = [(i, x) for x in box for i in range(pg.cell_size)]
    index = {c: k for k, c in enumerate(coords)}
    edges = []
    for i, j, v in pg.cell_edges:
        for x in box:
            y = tuple(a + b for a, b in zip(x, v))
            k = index.get((j, y))
            if k is not None:
                edges.append((index[(i, x)], k))
    graph = SimpleGraph.from_edges(len(coords), edges)
    zero = (0,) * pg.rank
    center = tuple(index[(i, zero)] for i in range(pg.cell_size))
    return Window(pg, radius, graph, tuple(coords), center)


def warn_degenerate(report: ValidationReport) -> None:
    for note in report.warnings:
        warnings.warn(note, stacklevel=3)
