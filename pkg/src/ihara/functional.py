"""Completed zeta functions of (q+1)-regular graphs and their functional equations.

For a (q+1)-regular graph ``Delta(u) = (1 + qu^2) I - uA`` and

    Z(u) = (1 - u^2)^chi / det_Gamma(Delta(u)),

which extends off the disc ``|u| < 1/q`` to the open set ``Omega``: the plane
minus the circle ``|u|^2 = 1/q`` and the real segments ``1/q <= |x| <= 1``.

Half-integer powers use the principal branch of each factor separately.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .determinant import det_gamma_bloch, det_gamma_spectral
from .errors import OutsideOmega
from .graphs import GroupAction, quotient

OMEGA_TOL = 1e-9


def omega_contains(u: complex, q: int, tol: float = OMEGA_TOL) -> bool:
    if q < 1:
        raise ValueError("q must be at least 1")
    u = complex(u)
    if abs(abs(u) ** 2 - 1 / q) <= tol:
        return False
    if abs(u.imag) <= tol and 1 / q - tol <= abs(u.real) <= 1 + tol:
        return False
    return True


def omega_distance(u: complex, q: int) -> float:
    """Distance from ``u`` to the excluded circle and segments."""
    u = complex(u)
    d_circle = abs(abs(u) - 1 / math.sqrt(q))
    x = min(max(abs(u.real), 1 / q), 1.0)
    d_seg = math.hypot(abs(u.real) - x, u.imag)
    return min(d_circle, d_seg)


@dataclass(frozen=True)
class RegularZetaContext:
    action: GroupAction
    q: int
    n_vertices: int
    chi: Fraction

    @classmethod
    def from_action(cls, action: GroupAction) -> RegularZetaContext:
        q = action.regular_q
        if q is None or q < 1:
            raise ValueError("functional equations need a (q+1)-regular graph with q >= 1")
        qd = quotient(action)
        chi = qd.l2_euler_characteristic
        if chi != Fraction(qd.n_vertices * (1 - q), 2):
            raise ValueError("chi(B) differs from |VB|(1-q)/2")
        return cls(action, q, qd.n_vertices, chi)

    def det(self, u: complex) -> complex:
        if self.action.is_finite:
            return det_gamma_spectral(self.action, u)
        return det_gamma_bloch(self.action, u)

    def zeta(self, u: complex) -> complex:
        if not omega_contains(u, self.q):
            raise OutsideOmega(f"u = {u} is not in Omega (q = {self.q})")
        return (1 - u * u) ** int(self.chi) / self.det(u)


def _ppow(z: complex, e: Fraction | int) -> complex:
    """Principal power ``z^e``."""
    if z == 0:
        return 0j if e > 0 else complex("inf")
    return cmath.exp(float(e) * cmath.log(z))


@dataclass(frozen=True)
class Completions:
    Lambda: complex
    xi: complex
    Xi: complex


def completions(ctx: RegularZetaContext, u: complex) -> Completions:
    u = complex(u)
    q, V, chi = ctx.q, ctx.n_vertices, ctx.chi
    zu = _ppow(1 - u * u, -chi) * ctx.zeta(u)
    half = Fraction(V, 2)
    lam = _ppow(1 - u * u, half) * _ppow(1 - q * q * u * u, half) * zu
    xi = (1 - u) ** V * (1 - q * u) ** V * zu
    Xi = (1 + q * u * u) ** V * zu
    return Completions(lam, xi, Xi)


@dataclass(frozen=True)
class FunctionalResiduals:
    u: complex
    Lambda: float
    xi: float
    Xi: float
    sign: int

    @property
    def max(self) -> float:
        return max(self.Lambda, self.xi, self.Xi)


def default_lambda_sign(ctx: RegularZetaContext) -> int:
    """``(-1)^{|VB|}``: the sign relating ``Lambda(u)`` and ``Lambda(1/(qu))``.

    For even ``|VB|`` the half-integer powers combine into integer powers and
    the ratio is exactly ``+1``; for odd ``|VB|`` the principal branches give
    ``-1``.
    """
    return -1 if ctx.n_vertices % 2 else 1


def _scaled(a: complex, b: complex) -> float:
    return abs(a - b) / max(1.0, abs(a))


def check_functional_equations(ctx: RegularZetaContext, u: complex, sign: int | None = None) -> FunctionalResiduals:
    """Residuals of ``Lambda(u) = s Lambda(1/qu)``, ``xi(u) = xi(1/qu)``, ``Xi(u) = Xi(1/qu)``.

    Residuals are ``|a - b| / max(1, |a|)``.  ``sign`` defaults to
    :func:`default_lambda_sign`.
    """
    u = complex(u)
    if u == 0:
        raise OutsideOmega("u = 0 has no reflected point")
    v = 1 / (ctx.q * u)
    for p in (u, v):
        if not omega_contains(p, ctx.q):
            raise OutsideOmega(f"u = {p} is not in Omega (q = {ctx.q})")
    s = default_lambda_sign(ctx) if sign is None else sign
    a, b = completions(ctx, u), completions(ctx, v)
    return FunctionalResiduals(u, _scaled(a.Lambda, s * b.Lambda), _scaled(a.xi, b.xi), _scaled(a.Xi, b.Xi), s)


def reflection_residual(ctx: RegularZetaContext, u: complex) -> float:
    """``det(Delta(1/(qu))) (qu^2)^{|VB|}`` against ``det(Delta(u))``, scaled as above."""
    u = complex(u)
    if u == 0 or not omega_contains(u, ctx.q) or not omega_contains(1 / (ctx.q * u), ctx.q):
        raise OutsideOmega(f"u = {u} or its reflection is not in Omega")
    lhs = ctx.det(1 / (ctx.q * u)) * (ctx.q * u * u) ** ctx.n_vertices
    return _scaled(ctx.det(u), lhs)


def sample_omega(q: int, count: int, seed: int, margin: float = 0.05) -> list[complex]:
    """Seeded points ``u`` with ``u`` and ``1/(qu)`` at distance ``> margin`` from the excluded set.

    Moduli are drawn from ``[0.2, 0.85] / sqrt(q)``, inside the reflection circle.
    """
    rng = np.random.default_rng(seed)
    out: list[complex] = []
    lo, hi = 0.2 / math.sqrt(q), 0.85 / math.sqrt(q)
    while len(out) < count:
        u = complex(cmath.rect(rng.uniform(lo, hi), rng.uniform(-math.pi, math.pi)))
        v = 1 / (q * u)
        if omega_distance(u, q) > margin and omega_distance(v, q) > margin:
            out.append(u)
    return out
