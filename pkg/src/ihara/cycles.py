"""Ground-truth counting and classification of closed paths.

Nothing here touches the operator recursions in :mod:`ihara.kernels`; the two
are compared against each other in the tests.

Closed paths are tuples ``(v_0, ..., v_{m-1})`` (the closing ``v_m = v_0`` is
implicit).  A closed path is *proper* if it never backtracks at the interior
positions ``1..m-1``, *tailed* if it is proper with ``v_1 = v_{m-1}``, and
*reduced* if it is proper and tail-less.
"""

from __future__ import annotations

import cmath
import math
from collections import deque
from collections.abc import Iterator, Sequence
from dataclasses import dataclass

from .errors import DomainError, RadiusTooSmall, WindowTooSmall
from .graphs import GroupAction, SimpleGraph, Window, unroll


@dataclass(frozen=True)
class PathCounts:
    proper: int
    tailed: int

    @property
    def reduced(self) -> int:
        return self.proper - self.tailed


@dataclass(frozen=True)
class CycleClass:
    """A Gamma-class of reduced cycles.

    ``representative`` is a tuple of vertices (finite actions) or of
    ``(cell, lattice vector)`` pairs translated so the lexicographically least
    rotation starts at lattice vector 0 (translation actions).
    ``domain_count`` is the number of closed paths in the class whose origin
    lies in the fundamental domain; it always equals ``nu``.
    """

    representative: tuple
    length: int
    is_prime: bool
    stabilizer_order: int
    nu: int
    orbit_size: int | None
    domain_count: int


# ---------------------------------------------------------------------------
# Counting by transfer over directed edges
# ---------------------------------------------------------------------------

def path_counts(graph: SimpleGraph, basepoint: int, M: int) -> list[PathCounts]:
    """Proper and tailed closed paths at ``basepoint`` for every length ``0..M``.

    Walks are propagated as counts over directed edges ``(prev, cur)``, one
    sweep per choice of first step ``v_1``, so the tail test ``v_{m-1} = v_1``
    is read off the final directed edge.
    """
    nbrs = graph.neighbors
    proper = [0] * (M + 1)
    tailed = [0] * (M + 1)
    for a in nbrs[basepoint]:
        state = {(basepoint, a): 1}
        for length in range(1, M + 1):
            if length >= 3:
                for b in nbrs[basepoint]:
                    c = state.get((b, basepoint))
                    if c:
                        proper[length] += c
                        if b == a:
                            tailed[length] += c
            if length == M:
                break
            nxt: dict[tuple[int, int], int] = {}
            for (p, c), k in state.items():
                for w in nbrs[c]:
                    if w != p:
                        key = (c, w)
                        nxt[key] = nxt.get(key, 0) + k
            state = nxt
    return [PathCounts(p, t) for p, t in zip(proper, tailed)]


def classify_paths(graph: SimpleGraph, basepoint: int, m: int, method: str = "count") -> PathCounts:
    """Proper / tailed / reduced closed paths of length ``m`` at ``basepoint``.

    ``method="enumerate"`` walks every proper closed path explicitly; the
    default transfer count gives the same numbers much faster.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    if method == "count":
        return path_counts(graph, basepoint, m)[m]
    if method != "enumerate":
        raise ValueError(f"unknown method {method!r}")
    proper = tailed = 0
    for path in iter_closed_paths(graph, basepoint, m, reduced_only=False):
        proper += 1
        if path[1] == path[-1]:
            tailed += 1
    return PathCounts(proper, tailed)


# ---------------------------------------------------------------------------
# Explicit enumeration
# ---------------------------------------------------------------------------

def _distances(graph: SimpleGraph, source: int) -> list[float]:
    dist = [math.inf] * graph.n
    dist[source] = 0
    queue = deque([source])
    while queue:
        x = queue.popleft()
        for y in graph.neighbors[x]:
            if dist[y] == math.inf:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


def iter_closed_paths(graph: SimpleGraph, start: int, m: int, reduced_only: bool = True) -> Iterator[tuple[int, ...]]:
    """Yield every proper (or only every reduced) closed path of length ``m`` at ``start``."""
    if m < 3:
        return
    nbrs = graph.neighbors
    dist = _distances(graph, start)
    path = [start]

    def extend(prev: int, cur: int, length: int):
        remaining = m - length
        if remaining == 1:
            if start in nbrs[cur] and start != prev:
                if not (reduced_only and path[1] == cur):
                    yield tuple(path)
            return
        for w in nbrs[cur]:
            if w == prev or dist[w] > remaining - 1:
                continue
            path.append(w)
            yield from extend(cur, w, length + 1)
            path.pop()

    for a in nbrs[start]:
        path.append(a)
        yield from extend(start, a, 1)
        path.pop()


# ---------------------------------------------------------------------------
# Reduced closed paths rooted in the fundamental domain
# ---------------------------------------------------------------------------

def _rooted_graph(action: GroupAction, m: int, window: Window | None) -> tuple[SimpleGraph, Sequence[int]]:
    if action.kind != "translation":
        return action.graph, action.domain
    if window is None:
        window = unroll(action.graph, m)
    elif window.radius < m:
        raise RadiusTooSmall(f"window radius {window.radius} < path length {m}")
    return window.graph, window.center


def reduced_counts(action: GroupAction, M: int, window: Window | None = None) -> list[int]:
    """``[0, N_1, ..., N_M]``: reduced closed paths of each length with origin in the domain."""
    graph, roots = _rooted_graph(action, M, window)
    total = [0] * (M + 1)
    for x in roots:
        for m, c in enumerate(path_counts(graph, x, M)):
            total[m] += c.reduced
    return total


def count_reduced(action: GroupAction, m: int, window: Window | None = None) -> int:
    """Number of reduced closed paths of length ``m`` starting in the fundamental domain."""
    if m < 1:
        raise ValueError("m must be at least 1")
    return reduced_counts(action, m, window)[m]


def tailed_counts(action: GroupAction, M: int, window: Window | None = None) -> list[int]:
    graph, roots = _rooted_graph(action, M, window)
    total = [0] * (M + 1)
    for x in roots:
        for m, c in enumerate(path_counts(graph, x, M)):
            total[m] += c.tailed
    return total


# ---------------------------------------------------------------------------
# Gamma-classes
# ---------------------------------------------------------------------------

def _period(seq: tuple) -> int:
    m = len(seq)
    for p in range(1, m + 1):
        if m % p == 0 and seq[p:] + seq[:p] == seq:
            return p
    return m


def _rotations(seq: tuple) -> list[tuple]:
    return [seq[k:] + seq[:k] for k in range(len(seq))]


def gamma_classes(action: GroupAction, max_len: int, window: Window | None = None) -> list[CycleClass]:
    """All Gamma-classes of reduced cycles of length ``<= max_len``.

    A cycle and its reversal are different classes.  Classes are returned
    sorted by length, then by representative.
    """
    if action.kind == "translation":
        if window is None:
            window = unroll(action.graph, max_len)
        elif window.radius < max_len:
            raise WindowTooSmall(f"window radius {window.radius} < max_len {max_len}")
        return _translation_classes(window, max_len)
    return _finite_classes(action, max_len)


def _finite_classes(action: GroupAction, max_len: int) -> list[CycleClass]:
    g = action.graph
    elems = action.elements
    out = []
    for m in range(3, max_len + 1):
        found: dict[tuple, int] = {}
        for x in action.domain:
            for path in iter_closed_paths(g, x, m):
                key = min(tuple(p[v] for v in r) for r in _rotations(path) for p in elems)
                found[key] = found.get(key, 0) + 1
        for rep in sorted(found):
            p = _period(rep)
            root = rep[:p]
            rots = set(_rotations(root))
            stab = sum(1 for gamma in elems if tuple(gamma[v] for v in root) in rots)
            out.append(CycleClass(rep, m, p == m, stab, p // stab, len(elems) // stab, found[rep]))
    return out


def _translation_classes(window: Window, max_len: int) -> list[CycleClass]:
    coords = window.coords
    out = []
    for m in range(3, max_len + 1):
        found: dict[tuple, int] = {}
        for x in window.center:
            for path in iter_closed_paths(window.graph, x, m):
                pts = [coords[v] for v in path]
                forms = []
                for k in range(m):
                    base = pts[k][1]
                    forms.append(tuple((c, tuple(a - b for a, b in zip(vec, base)))
                                       for c, vec in pts[k:] + pts[:k]))
                key = min(forms)
                found[key] = found.get(key, 0) + 1
        for rep in sorted(found):
            # a translation carrying a finite cycle onto a rotation of itself is 0,
            # so stabilizers are trivial and nu is the primitive period
            p = _period(rep)
            out.append(CycleClass(rep, m, p == m, 1, p, None, found[rep]))
    return out


def prime_counts(classes: Sequence[CycleClass]) -> dict[int, int]:
    """Number of prime Gamma-classes of each length."""
    out: dict[int, int] = {}
    for c in classes:
        if c.is_prime:
            out[c.length] = out.get(c.length, 0) + 1
    return out


# ---------------------------------------------------------------------------
# Euler product
# ---------------------------------------------------------------------------

def zeta_radius(action: GroupAction) -> float:
    """``1/(d-1)``: the Euler product and the log-series converge for ``|u|`` below it."""
    d = action.max_degree
    return 1.0 / (d - 1) if d >= 2 else math.inf


def euler_product(classes: Sequence[CycleClass], u: complex, max_len: int,
                  radius: float | None = None) -> complex:
    """``prod (1 - u^|C|)^(-1/|Gamma_C|)`` over prime classes of length ``<= max_len``.

    The rational power uses the principal branch; for ``|u| < 1`` the base
    stays in the right half-plane.  ``radius`` (usually :func:`zeta_radius`)
    guards the domain of convergence.
    """
    if radius is not None and abs(u) >= radius:
        raise DomainError(f"|u| = {abs(u):g} is not below 1/(d-1) = {radius:g}")
    if abs(u) >= 1:
        raise DomainError("|u| must be below 1")
    log_total = 0j
    for c in classes:
        if c.is_prime and c.length <= max_len:
            log_total -= cmath.log(1 - u ** c.length) / c.stabilizer_order
    return cmath.exp(log_total)
