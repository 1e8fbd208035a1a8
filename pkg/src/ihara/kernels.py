"""Gamma-equivariant operators with finite support and the proper-path recursions.

A :class:`Kernel` stores an operator commuting with the group action.  For a
finite action it is the full ``n x n`` matrix; for a translation action it is
the family of ``|F| x |F|`` blocks ``K(v)[i, j] = T((i, 0), (j, v))`` over a
box of offsets ``|v|_inf <= radius``.  A finite graph is simply the rank-0
case, so one code path serves both.

Entries are exact Python integers (``dtype=object``) unless converted with
:meth:`Kernel.astype`.
"""

from __future__ import annotations

import itertools
from collections.abc import Sequence
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ActionMismatch
from .graphs import GroupAction, Offset


class Kernel:
    __slots__ = ("data", "radius", "rank", "domain")

    def __init__(self, data: np.ndarray, radius: int, rank: int, domain: tuple[int, ...]):
        if data.ndim != rank + 2 or any(s != 2 * radius + 1 for s in data.shape[:rank]):
            raise ValueError("data shape does not match rank and radius")
        self.data = data
        self.radius = radius
        self.rank = rank
        self.domain = domain

    # -- construction --------------------------------------------------------

    @classmethod
    def from_blocks(cls, blocks: dict[Offset, np.ndarray], size: int, rank: int,
                    domain: Sequence[int], dtype=object) -> Kernel:
        radius = max((max((abs(x) for x in v), default=0) for v in blocks), default=0)
        data = np.zeros((2 * radius + 1,) * rank + (size, size), dtype=dtype)
        for v, b in blocks.items():
            data[tuple(x + radius for x in v)] += np.asarray(b, dtype=dtype)
        return cls(data, radius, rank, tuple(domain))

    def _like(self, data: np.ndarray, radius: int) -> Kernel:
        return Kernel(data, radius, self.rank, self.domain)

    @property
    def size(self) -> int:
        return self.data.shape[-1]

    @property
    def dtype(self):
        return self.data.dtype

    def astype(self, dtype) -> Kernel:
        return self._like(self.data.astype(dtype), self.radius)

    def padded(self, radius: int) -> np.ndarray:
        if radius < self.radius:
            raise ValueError("cannot pad to a smaller radius")
        if radius == self.radius:
            return self.data
        p = radius - self.radius
        out = np.zeros((2 * radius + 1,) * self.rank + (self.size, self.size), dtype=self.dtype)
        out[(slice(p, p + 2 * self.radius + 1),) * self.rank] = self.data
        return out

    def block(self, v: Offset) -> np.ndarray:
        if any(abs(x) > self.radius for x in v):
            return np.zeros((self.size, self.size), dtype=self.dtype)
        return self.data[tuple(x + self.radius for x in v)]

    def offsets(self) -> list[Offset]:
        """Offsets carrying a nonzero block."""
        if self.rank == 0:
            return [()] if np.any(self.data != 0) else []
        nz = np.any(self.data != 0, axis=(-1, -2))
        return [tuple(int(i) - self.radius for i in idx) for idx in zip(*np.nonzero(nz))]

    def blocks(self) -> dict[Offset, np.ndarray]:
        return {v: self.block(v) for v in self.offsets()}

    # -- algebra -------------------------------------------------------------

    def _check(self, other: Kernel) -> None:
        if not isinstance(other, Kernel):
            raise TypeError(f"expected Kernel, got {type(other).__name__}")
        if other.rank != self.rank or other.size != self.size or other.domain != self.domain:
            raise ActionMismatch("kernels belong to different action contexts")

    def __add__(self, other: Kernel) -> Kernel:
        self._check(other)
        r = max(self.radius, other.radius)
        return self._like(self.padded(r) + other.padded(r), r)

    def __sub__(self, other: Kernel) -> Kernel:
        self._check(other)
        r = max(self.radius, other.radius)
        return self._like(self.padded(r) - other.padded(r), r)

    def __neg__(self) -> Kernel:
        return self._like(-self.data, self.radius)

    def __mul__(self, c) -> Kernel:
        return self._like(self.data * c, self.radius)

    __rmul__ = __mul__

    def __matmul__(self, other: Kernel) -> Kernel:
        return compose(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Kernel):
            return NotImplemented
        if other.rank != self.rank or other.size != self.size or other.domain != self.domain:
            return False
        r = max(self.radius, other.radius)
        return bool(np.all(self.padded(r) == other.padded(r)))

    __hash__ = None

    def __repr__(self) -> str:
        return f"Kernel(rank={self.rank}, size={self.size}, radius={self.radius}, offsets={len(self.offsets())})"

    # -- traces and symmetry -------------------------------------------------

    def trace_gamma(self):
        """Sum of the diagonal over the fundamental domain at offset zero."""
        center = self.data[(self.radius,) * self.rank]
        total = 0
        for x in self.domain:
            total = total + center[x, x]
        return total

    def is_symmetric(self) -> bool:
        """``K(v)[i, j] == K(-v)[j, i]`` for every offset."""
        flipped = np.flip(self.data, axis=tuple(range(self.rank))) if self.rank else self.data
        return bool(np.all(self.data == np.swapaxes(flipped, -1, -2)))

    def min_entry(self):
        return self.data.min()

    # -- Bloch symbol --------------------------------------------------------

    def bloch(self, ks: np.ndarray) -> np.ndarray:
        """Matrices ``M(k) = sum_v K(v) exp(i k.v)`` for each row of ``ks``.

        ``ks`` has shape ``(N, rank)``; the result has shape ``(N, s, s)``.
        """
        ks = np.atleast_2d(np.asarray(ks, dtype=float))
        offs = self.offsets()
        s = self.size
        if not offs:
            return np.zeros((len(ks), s, s), dtype=complex)
        blocks = np.array([self.block(v) for v in offs], dtype=complex).reshape(len(offs), s * s)
        if self.rank == 0:
            return np.broadcast_to(blocks.sum(axis=0).reshape(s, s), (len(ks), s, s)).copy()
        phase = np.exp(1j * ks @ np.array(offs, dtype=float).T)
        return (phase @ blocks).reshape(len(ks), s, s)


def compose(S: Kernel, T: Kernel) -> Kernel:
    """Operator product: ``(S T)(v) = sum_w S(w) T(v - w)``."""
    S._check(T)
    r = S.radius + T.radius
    dtype = np.result_type(S.dtype, T.dtype)
    out = np.zeros((2 * r + 1,) * S.rank + (S.size, S.size), dtype=dtype)
    if S.rank == 0:
        out[...] = S.data @ T.data
        return S._like(out, 0)
    # loop over the sparser operand, shifting the denser one as a whole
    if len(S.offsets()) <= len(T.offsets()):
        width = 2 * T.radius + 1
        for w in S.offsets():
            sl = tuple(slice(x - T.radius + r, x - T.radius + r + width) for x in w)
            out[sl] += S.block(w) @ T.data
    else:
        width = 2 * S.radius + 1
        for w in T.offsets():
            sl = tuple(slice(x - S.radius + r, x - S.radius + r + width) for x in w)
            out[sl] += S.data @ T.block(w)
    return S._like(out, r)


def trace_gamma(T: Kernel):
    return T.trace_gamma()


# ---------------------------------------------------------------------------
# Kernels attached to an action
# ---------------------------------------------------------------------------

@lru_cache(maxsize=64)
def identity_kernel(action: GroupAction) -> Kernel:
    s = _size(action)
    return Kernel.from_blocks({(0,) * action.rank: np.eye(s, dtype=int).astype(object)},
                              s, action.rank, action.domain)


@lru_cache(maxsize=64)
def adjacency_kernel(action: GroupAction) -> Kernel:
    g = action.graph
    s = _size(action)
    if action.kind == "translation":
        blocks: dict[Offset, np.ndarray] = {}
        for i, j, v in g.cell_edges:
            mv = tuple(-x for x in v)
            blocks.setdefault(v, np.zeros((s, s), dtype=object))[i, j] += 1
            blocks.setdefault(mv, np.zeros((s, s), dtype=object))[j, i] += 1
        if not blocks:
            blocks[(0,) * g.rank] = np.zeros((s, s), dtype=object)
        return Kernel.from_blocks(blocks, s, g.rank, action.domain)
    return Kernel.from_blocks({(): g.adjacency_matrix().astype(object)}, s, 0, action.domain)


@lru_cache(maxsize=64)
def q_kernel(action: GroupAction) -> Kernel:
    """Diagonal operator ``deg(v) - 1``."""
    s = _size(action)
    q = np.diag([d - 1 for d in action.graph.degrees]).astype(object)
    return Kernel.from_blocks({(0,) * action.rank: q}, s, action.rank, action.domain)


def _size(action: GroupAction) -> int:
    g = action.graph
    return g.cell_size if action.kind == "translation" else g.n


# ---------------------------------------------------------------------------
# Recursions
# ---------------------------------------------------------------------------

def a_sequence(A: Kernel, Q: Kernel, M: int) -> list[Kernel]:
    """Proper-path operators ``A_0 .. A_M``.

    ``A_m(x, y)`` counts paths of length ``m`` from ``x`` to ``y`` without
    backtracking: ``A_0 = I``, ``A_1 = A``, ``A_2 = A^2 - Q - I`` and
    ``A_m = A_{m-1} A - A_{m-2} Q``.
    """
    if M < 0:
        raise ValueError("M must be nonnegative")
    ident = _identity_like(A)
    seq = [ident]
    if M >= 1:
        seq.append(A)
    if M >= 2:
        seq.append(A @ A - Q - ident)
    for m in range(3, M + 1):
        seq.append(seq[m - 1] @ A - seq[m - 2] @ Q)
    return seq


def t_sequence(A_seq: Sequence[Kernel], Q: Kernel, M: int) -> list:
    """Tailed closed-path counts over the domain: ``t_m = Tr((Q-I) A_{m-2}) + t_{m-2}``.

    Index 0 is a placeholder (0).
    """
    if len(A_seq) < M - 1:
        raise ValueError("A_seq too short")
    QmI = Q - _identity_like(Q)
    t = [0] * (M + 1)
    for m in range(3, M + 1):
        t[m] = (QmI @ A_seq[m - 2]).trace_gamma() + t[m - 2]
    return t


def t_closed_form(A_seq: Sequence[Kernel], Q: Kernel, M: int) -> list:
    """Same counts from ``Tr((Q-I) sum_{j=1}^{[(m-1)/2]} A_{m-2j})``."""
    QmI = Q - _identity_like(Q)
    diag = [(QmI @ A_seq[k]).trace_gamma() for k in range(max(M - 1, 0))]
    return [0] + [sum(diag[m - 2 * j] for j in range(1, (m - 1) // 2 + 1)) for m in range(1, M + 1)]


def b_sequence(A_seq: Sequence[Kernel], Q: Kernel, M: int) -> list[Kernel]:
    """``B_m = A_m - (Q - I) sum_{k=1}^{[m/2]} A_{m-2k}``."""
    QmI = Q - _identity_like(Q)
    out = []
    for m in range(M + 1):
        B = A_seq[m]
        if m >= 2:
            acc = A_seq[m - 2]
            for k in range(2, m // 2 + 1):
                acc = acc + A_seq[m - 2 * k]
            B = B - QmI @ acc
        out.append(B)
    return out


def _identity_like(K: Kernel) -> Kernel:
    data = np.zeros((1,) * K.rank + (K.size, K.size), dtype=K.dtype)
    data[(0,) * K.rank] = np.eye(K.size, dtype=int).astype(K.dtype)
    return Kernel(data, 0, K.rank, K.domain)


# ---------------------------------------------------------------------------
# Trace ledger
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TraceLedger:
    """Traces indexed by ``m`` (index 0 unused except ``trA[0] = |VB|``)."""

    trA: tuple[int, ...]
    t: tuple[int, ...]
    N: tuple[int, ...]
    trB: tuple[int, ...]
    tr_q_minus_i: int
    alpha: float

    @property
    def order(self) -> int:
        return len(self.N) - 1


@lru_cache(maxsize=64)
def operator_sequences(action: GroupAction, M: int) -> tuple[list[Kernel], list[Kernel]]:
    A, Q = adjacency_kernel(action), q_kernel(action)
    A_seq = a_sequence(A, Q, M)
    return A_seq, b_sequence(A_seq, Q, M)


@lru_cache(maxsize=64)
def trace_ledger(action: GroupAction, M: int) -> TraceLedger:
    """``Tr A_m``, ``t_m``, ``N_m = Tr A_m - t_m`` and ``Tr B_m`` for ``m <= M``."""
    Q = q_kernel(action)
    A_seq, B_seq = operator_sequences(action, M)
    t = t_sequence(A_seq, Q, M)
    trA = [K.trace_gamma() for K in A_seq]
    N = [0] + [trA[m] - t[m] for m in range(1, M + 1)]
    trB = [K.trace_gamma() for K in B_seq]
    tq = (Q - _identity_like(Q)).trace_gamma()
    return TraceLedger(tuple(trA), tuple(t), tuple(N), tuple(trB), tq, action.alpha)


def n_sequence(action: GroupAction, M: int) -> list[int]:
    """``[0, N_1, ..., N_M]`` from the operator traces."""
    return list(trace_ledger(action, M).N)


# ---------------------------------------------------------------------------
# Generating-function identities, checked coefficientwise
# ---------------------------------------------------------------------------

def resolvent_residuals(A_seq: Sequence[Kernel], A: Kernel, Q: Kernel, cumulative: bool = False) -> list:
    """Largest entry of each coefficient of ``(sum_m S_m u^m)(I - A u + Q u^2) - target``.

    With ``cumulative=False``, ``S_m = A_m`` and the target is ``(1 - u^2) I``;
    with ``cumulative=True``, ``S_m = sum_{k<=m/2} A_{m-2k}`` and the target is
    ``I``.  All entries are exact, so every residual should be 0.
    """
    ident = _identity_like(A)
    if cumulative:
        S = []
        for m in range(len(A_seq)):
            S.append(A_seq[m] + S[m - 2] if m >= 2 else A_seq[m])
    else:
        S = list(A_seq)
    out = []
    for m in range(len(S)):
        c = S[m]
        if m >= 1:
            c = c - S[m - 1] @ A
        if m >= 2:
            c = c + S[m - 2] @ Q
        if m == 0:
            c = c - ident
        elif m == 2 and not cumulative:
            c = c + ident
        out.append(max((abs(x) for x in c.data.ravel()), default=0))
    return out


# ---------------------------------------------------------------------------
# Norm bound
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NormReport:
    alpha: float
    norms: tuple[float, ...]
    bounds: tuple[float, ...]
    recursion_ok: tuple[bool, ...]
    samples: int

    @property
    def ok(self) -> bool:
        return all(n <= b * (1 + 1e-12) for n, b in zip(self.norms, self.bounds)) and all(self.recursion_ok)


def kernel_norm(K: Kernel, samples: int = 32) -> float:
    """Operator 2-norm; for rank > 0 the sup of the Bloch symbol over k.

    A nonnegative kernel has |M(k)| <= M(0) entrywise, so the sup is attained
    at k = 0 and is exact.  Otherwise it is sampled on a ``samples^rank`` grid.
    """
    if K.rank == 0:
        return float(np.linalg.norm(K.data.astype(float), 2))
    if K.min_entry() >= 0:
        ks = np.zeros((1, K.rank))
    else:
        grid = np.arange(samples) * (2 * np.pi / samples)
        ks = np.array(list(itertools.product(grid, repeat=K.rank)))
    return float(np.linalg.norm(K.bloch(ks), 2, axis=(-2, -1)).max())


def norm_certificate(action: GroupAction, A_seq: Sequence[Kernel], samples: int = 32) -> NormReport:
    """Check ``||A_m|| <= alpha^m`` and ``||A_m|| <= d (||A_{m-1}|| + ||A_{m-2}||)``."""
    d = action.max_degree
    a = action.alpha
    norms = [kernel_norm(K, samples) for K in A_seq]
    bounds = [a ** m for m in range(len(A_seq))]
    rec = [True] * len(A_seq)
    for m in range(3, len(A_seq)):
        rec[m] = norms[m] <= d * (norms[m - 1] + norms[m - 2]) * (1 + 1e-12)
    return NormReport(a, tuple(norms), tuple(bounds), tuple(rec), samples)
