"""Analytic determinants, the Gamma-determinant of I - Au + Qu^2, and the determinant formula.

The analytic determinant of a matrix ``A`` whose spectral convex hull avoids 0
is ``exp tau(log A)``, where ``log`` is any branch whose cut misses the hull.
We realize the branch as a rotated principal logarithm

    log_theta(z) = i theta + Log(z e^{-i theta}),

whose cut is the ray ``-e^{i theta} R_+``.  ``theta`` is chosen so that the
hull sits in the open half-plane ``Re(e^{-i theta} z) > 0``.
"""

from __future__ import annotations

import cmath
import itertools
import math
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .cycles import reduced_counts, zeta_radius
from .errors import (BranchObstruction, DomainError, HullContainsZero, IdentityViolation,
                     QuadratureNotConverged, TruncationNotConverged)
from .graphs import GroupAction, PeriodicGraph, quotient
from .kernels import Kernel, adjacency_kernel, identity_kernel, q_kernel, trace_ledger
from .series import Series, zeta_series

HULL_TOL = 1e-9


# ---------------------------------------------------------------------------
# Hull test and branch choice
# ---------------------------------------------------------------------------

def hull_branch(eigs, rel_tol: float = HULL_TOL) -> tuple[float, float]:
    """Return ``(theta0, distance)`` for a finite point set.

    ``distance`` is the Euclidean distance from 0 to the convex hull, and
    ``theta0`` the direction of the nearest hull point, so the hull lies in
    ``Re(e^{-i theta0} z) >= distance``.  Raises :class:`HullContainsZero`
    when the distance does not exceed ``rel_tol`` times the spectral radius.
    """
    z = np.asarray(eigs, dtype=complex).ravel()
    if z.size == 0:
        raise ValueError("empty spectrum")
    r = np.abs(z)
    scale = float(r.max())
    tol = rel_tol * scale
    if scale == 0 or float(r.min()) <= tol:
        raise HullContainsZero("an eigenvalue is (numerically) zero")
    phi = np.sort(np.angle(z))
    gaps = np.diff(phi)
    wrap = 2 * np.pi - (phi[-1] - phi[0])
    k = int(np.argmax(gaps)) if gaps.size else -1
    if gaps.size and gaps[k] > wrap:
        gap, start = float(gaps[k]), float(phi[k + 1])
    else:
        gap, start = float(wrap), float(phi[0])
    if gap <= np.pi:
        raise HullContainsZero("eigenvalue directions are not contained in an open half-plane")
    width = 2 * np.pi - gap
    lo, hi = start + width - np.pi / 2, start + np.pi / 2
    ang = np.angle(z)

    def h(theta: float) -> float:
        return float(np.min(r * np.cos(ang - theta)))

    # h is concave on [lo, hi]; golden-section search for its maximum
    g = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    c, d = b - g * (b - a), a + g * (b - a)
    hc, hd = h(c), h(d)
    for _ in range(80):
        if hc < hd:
            a, c, hc = c, d, hd
            d = a + g * (b - a)
            hd = h(d)
        else:
            b, d, hd = d, c, hc
            c = b - g * (b - a)
            hc = h(c)
        if b - a < 1e-13:
            break
    theta = (a + b) / 2
    dist = h(theta)
    if dist <= tol:
        raise HullContainsZero(f"0 is within {dist:.3g} of the spectral hull (tolerance {tol:.3g})")
    return theta, dist


def log_branch(z, theta: float):
    """``i theta + Log(z e^{-i theta})``: the logarithm cut along ``-e^{i theta} R_+``."""
    return 1j * theta + np.log(np.asarray(z) * np.exp(-1j * theta))


def _admissible(eigs, theta: float, rel_tol: float = HULL_TOL) -> bool:
    z = np.asarray(eigs, dtype=complex).ravel()
    return float(np.min((z * np.exp(-1j * theta)).real)) > rel_tol * float(np.abs(z).max())


def _tau_unit(tau, n: int) -> float:
    if tau == "full":
        return float(n)
    if tau == "normalized":
        return 1.0
    return float(tau)


def analytic_logdet(matrix, tau="normalized", theta: float | None = None) -> complex:
    """``tau(log A)``; ``tau`` is ``"full"``, ``"normalized"`` or the value ``tau(I)``."""
    A = np.atleast_2d(np.asarray(matrix, dtype=complex))
    n = A.shape[0]
    eigs = np.linalg.eigvals(A)
    if theta is None:
        theta, _ = hull_branch(eigs)
    elif not _admissible(eigs, theta):
        raise HullContainsZero(f"branch theta={theta:g} cuts the spectral hull")
    return complex(_tau_unit(tau, n) / n * np.sum(log_branch(eigs, theta)))


def analytic_det(matrix, tau="normalized", theta: float | None = None) -> complex:
    """``det_tau(A) = exp tau(log A)`` for ``0`` outside the convex hull of the spectrum."""
    return cmath.exp(analytic_logdet(matrix, tau, theta))


def scaling_residual(matrix, z: complex, tau="normalized") -> float:
    """``|det_tau(zA) - z^{tau(I)} det_tau(A)|``.

    With ``z = r e^{it}`` the branch for ``zA`` is the branch for ``A`` rotated
    by ``t``, and ``z^{tau(I)} = exp(tau(I) (log r + i t))``.
    """
    A = np.atleast_2d(np.asarray(matrix, dtype=complex))
    n = A.shape[0]
    theta, _ = hull_branch(np.linalg.eigvals(A))
    r, t = abs(z), cmath.phase(z)
    lhs = analytic_det(z * A, tau, theta + t)
    rhs = cmath.exp(_tau_unit(tau, n) * (math.log(r) + 1j * t)) * analytic_det(A, tau, theta)
    return abs(lhs - rhs)


def polar_factors(matrix) -> tuple[np.ndarray, np.ndarray]:
    """``A = U H`` with ``U`` unitary and ``H = sqrt(A* A)``, from the SVD."""
    W, s, Vh = np.linalg.svd(np.asarray(matrix, dtype=complex))
    return W @ Vh, Vh.conj().T @ np.diag(s) @ Vh


def normal_factorization_residual(matrix, tau="normalized") -> float:
    """``|det_tau(A) - det_tau(U) det_tau(H)|`` for normal ``A = UH``."""
    U, H = polar_factors(matrix)
    return abs(analytic_det(matrix, tau) - analytic_det(U, tau) * analytic_det(H, tau))


def fuglede_kadison(matrix, tau="normalized") -> float:
    """``exp tau(log |A|)`` computed from singular values."""
    s = np.linalg.svd(np.asarray(matrix, dtype=complex), compute_uv=False)
    return math.exp(_tau_unit(tau, len(s)) / len(s) * float(np.sum(np.log(s))))


def random_a0_matrix(rng: np.random.Generator, n: int, normal: bool = False) -> np.ndarray:
    """Random matrix whose eigenvalues lie in a random open half-plane through 0."""
    theta = rng.uniform(-np.pi, np.pi)
    phases = theta + rng.uniform(-np.pi / 2 + 0.2, np.pi / 2 - 0.2, n)
    eigs = rng.uniform(0.5, 2.0, n) * np.exp(1j * phases)
    if normal:
        Z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        P, _ = np.linalg.qr(Z)
        return P @ np.diag(eigs) @ P.conj().T
    P = np.eye(n) + 0.3 * (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) / math.sqrt(n)
    return P @ np.diag(eigs) @ np.linalg.inv(P)


# ---------------------------------------------------------------------------
# Exact expansion of Tr_Gamma log(I - Au + Qu^2)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LogDetExpansion:
    """Exact series data built from powers of ``f(u) = Au - Qu^2``.

    ``coeffs[m]`` is the ``u^m`` coefficient of ``Tr log(I - f) = -sum_n Tr f^n / n``;
    ``resolvent_traces[m]`` is ``Tr_Gamma(f'(u) (I - f(u))^{-1})`` at order ``u^m``.
    """

    coeffs: tuple[Fraction, ...]
    resolvent_traces: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def series(self) -> Series:
        return Series(self.coeffs)


@lru_cache(maxsize=32)
def log_det_expansion(action: GroupAction, M: int) -> LogDetExpansion:
    A, Q, I = adjacency_kernel(action), q_kernel(action), identity_kernel(action)
    # P[j] = coefficient of u^j in (A - uQ)^n, kept only while n + j <= M
    P: list[Kernel] = [I]
    R: list[Kernel | None] = [I] + [None] * M  # R[m] = u^m coefficient of (I - f)^{-1}
    coeffs = [Fraction(0)] * (M + 1)
    for n in range(1, M + 1):
        keep = M - n
        nxt = []
        for j in range(min(n, keep) + 1):
            term = P[j] @ A if j < len(P) else None
            if 1 <= j <= len(P):
                qterm = P[j - 1] @ Q
                term = qterm * -1 if term is None else term - qterm
            nxt.append(term)
        P = nxt
        for j, K in enumerate(P):
            m = n + j
            coeffs[m] -= Fraction(K.trace_gamma(), n)
            R[m] = K if R[m] is None else R[m] + K
    res = [0] * (M + 1)
    for m in range(M + 1):
        val = 0
        if R[m] is not None:
            val += (A @ R[m]).trace_gamma()
        if m >= 1 and R[m - 1] is not None:
            val -= 2 * (Q @ R[m - 1]).trace_gamma()
        res[m] = val
    return LogDetExpansion(tuple(coeffs), tuple(res))


def log_det_coefficients(action: GroupAction, M: int) -> Series:
    """Exact series of ``Tr_Gamma log(I - Au + Qu^2)`` through ``u^M``."""
    return log_det_expansion(action, M).series()


def trace_log_derivative_residuals(action: GroupAction, M: int) -> list:
    """``-d/du Tr log(I - f)`` against ``Tr(f' (I - f)^{-1})``, coefficient by coefficient."""
    ex = log_det_expansion(action, M)
    return [-(m + 1) * ex.coeffs[m + 1] - ex.resolvent_traces[m] for m in range(M)]


def b_trace_residuals(action: GroupAction, M: int) -> list:
    """``Tr B_m`` against ``-u d/du Tr log Delta(u)`` at order ``m = 1..M``."""
    ex = log_det_expansion(action, M)
    led = trace_ledger(action, M)
    return [led.trB[m] + m * ex.coeffs[m] for m in range(1, M + 1)]


# ---------------------------------------------------------------------------
# Numerical Gamma-determinants
# ---------------------------------------------------------------------------

def series_radius(action: GroupAction) -> float:
    """Radius of convergence guaranteed for the u-series of ``Tr_Gamma log Delta(u)``."""
    return min(1.0, zeta_radius(action))


def _tail_bound(action: GroupAction, tq: int, x: float, M: int) -> float:
    d = action.max_degree
    F = len(action.domain)
    tail = 0.0
    if d >= 2:
        r = (d - 1) * x
        tail += d * F / (d - 1) * r ** (M + 1) / ((M + 1) * (1 - r))
    tail += abs(tq) * x ** (M + 1) / ((M + 1) * (1 - x))
    return tail


def det_gamma_series(action: GroupAction, u: complex, tol: float = 1e-13, max_order: int = 1024) -> complex:
    """``det_Gamma(I - Au + Qu^2)`` from the u-series of its logarithm.

    The coefficients are ``-Tr B_m / m``, which are bounded by
    ``(d (d-1)^{m-1} |F| + |Tr(Q - I)|)/m``.  The order is raised until that
    tail bound drops below ``tol``.  Valid for ``|u| < min(1, 1/(d-1))``.
    """
    x = abs(u)
    R = series_radius(action)
    if x >= R:
        raise DomainError(f"|u| = {x:g} is not below min(1, 1/(d-1)) = {R:g}")
    if x == 0:
        return 1.0 + 0j
    tq = trace_ledger(action, 0).tr_q_minus_i
    M = 16
    while _tail_bound(action, tq, x, M) > tol:
        M += 16
        if M > max_order:
            raise TruncationNotConverged(f"series for |u| = {x:g} needs more than {max_order} terms")
    trB = trace_ledger(action, M).trB
    s = 0j
    for m in range(M, 0, -1):
        s = (s - trB[m] / m) * u
    return cmath.exp(s)


def _grid(rank: int, n: int) -> np.ndarray:
    axis = 2 * np.pi * np.arange(n) / n
    if rank == 0:
        return np.zeros((1, 0))
    return np.array(list(itertools.product(axis, repeat=rank)))


def _symbol_eigs(action: GroupAction, u: complex, n: int, chunk: int = 1 << 16) -> np.ndarray:
    A = adjacency_kernel(action)
    q = np.array([d - 1 for d in action.graph.degrees], dtype=float)
    ks = _grid(action.rank, n)
    s = A.size
    out = []
    for start in range(0, len(ks), chunk):
        M = -u * A.bloch(ks[start:start + chunk])
        M[:, np.arange(s), np.arange(s)] += 1 + u * u * q
        out.append(M[:, 0, 0] if s == 1 else np.linalg.eigvals(M))
    return np.concatenate(out).ravel()


@dataclass(frozen=True)
class BlochResult:
    value: complex
    n: int
    theta: float
    hull_distance: float
    change: float


def det_gamma_bloch(action: GroupAction | PeriodicGraph, u: complex, n: int | None = None,
                    tol: float = 1e-10, max_n: int = 4096, start: int = 16, info: bool = False):
    """``exp (2 pi)^{-d} int tr log Delta(u, k) dk`` by the trapezoidal rule.

    One branch serves every k-point: it is chosen from the convex hull of the
    union of all sampled eigenvalues.  Without ``n`` the grid is doubled from
    ``start`` until the relative change is below ``tol``.
    """
    if isinstance(action, PeriodicGraph):
        action = GroupAction.translation(action)
    if action.is_finite:
        v = det_gamma_spectral(action, u)
        return BlochResult(v, 1, float("nan"), float("nan"), 0.0) if info else v

    def run(m: int):
        eigs = _symbol_eigs(action, u, m)
        try:
            theta, dist = hull_branch(eigs)
        except HullContainsZero as exc:
            raise BranchObstruction(f"no single log branch at u={u}: {exc}") from None
        npts = len(eigs) // action.graph.cell_size
        return cmath.exp(complex(np.sum(log_branch(eigs, theta))) / npts), theta, dist

    if n is not None:
        v, th, dist = run(n)
        return BlochResult(v, n, th, dist, float("nan")) if info else v
    m = start
    prev, _, _ = run(m)
    while True:
        m *= 2
        if m > max_n:
            raise QuadratureNotConverged(f"no convergence up to n={max_n} per dimension at u={u}")
        v, th, dist = run(m)
        change = abs(v - prev) / max(abs(v), 1e-300)
        if change < tol:
            return BlochResult(v, m, th, dist, change) if info else v
        prev = v


def det_gamma_spectral(action: GroupAction, u: complex) -> complex:
    """Finite actions: eigenvalues of the full matrix ``Delta(u)`` with ``Tr_Gamma = Tr / |Gamma|``."""
    g = action.graph
    A = g.adjacency_matrix().astype(complex)
    D = np.eye(g.n) - u * A + u * u * np.diag([d - 1 for d in g.degrees])
    try:
        return analytic_det(D, tau=len(action.domain))
    except HullContainsZero as exc:
        raise BranchObstruction(f"no single log branch at u={u}: {exc}") from None


def det_gamma(action: GroupAction, u: complex, method: str = "series") -> complex:
    if method == "series":
        return det_gamma_series(action, u)
    if method == "bloch":
        return det_gamma_bloch(action, u)
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# Determinant formula
# ---------------------------------------------------------------------------

def chi_gamma(action: GroupAction) -> Fraction:
    """``-1/2 Tr_Gamma(Q - I)``; equals ``|VB| - |EB|`` without edge inversions."""
    return quotient(action).l2_euler_characteristic


def determinant_formula(action: GroupAction, u: complex | None = None, *, order: int | None = None,
                        method: str = "series"):
    """``1/Z(u) = (1 - u^2)^{-chi} det_Gamma(I - Au + Qu^2)``.

    Value mode (``u``) requires ``|u| < 1/alpha``.  Series mode (``order``)
    returns the exact right-hand side through ``u^order`` and raises
    :class:`IdentityViolation` unless it equals ``1/Z`` built from the
    cycle-count oracle.
    """
    chi = chi_gamma(action)
    if order is not None:
        M = order
        one_minus_u2 = Series.from_polynomial([1, 0, -1], M)
        rhs = one_minus_u2.power(-chi) * log_det_coefficients(action, M).exp()
        lhs = zeta_series(reduced_counts(action, M), M).inverse()
        if lhs != rhs:
            bad = next(m for m in range(M + 1) if lhs[m] != rhs[m])
            raise IdentityViolation(f"determinant formula fails at u^{bad}: {lhs[bad]} != {rhs[bad]}")
        return rhs
    if u is None:
        raise ValueError("give u (value mode) or order (series mode)")
    bound = 1 / action.alpha
    if abs(u) >= bound:
        raise DomainError(f"|u| = {abs(u):g} is not below 1/alpha = {bound:g}")
    return cmath.exp(-float(chi) * cmath.log(1 - u * u)) * det_gamma(action, u, method)


def inverse_zeta_series(action: GroupAction, M: int) -> Series:
    """``1/Z`` through ``u^M`` from the oracle counts."""
    return zeta_series(reduced_counts(action, M), M).inverse()
