"""Truncated power series with exact rational or complex coefficients."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from numbers import Number

from .errors import BadConstantTerm


def _exact(c) -> bool:
    return isinstance(c, (int, Fraction))


class Series:
    """``c_0 + c_1 u + ... + c_M u^M``, arithmetic truncated at order ``M``.

    Coefficients are kept as ``Fraction`` when every input is exact, and as
    ``complex`` otherwise.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable):
        cs = list(coeffs)
        if not cs:
            raise ValueError("a series needs at least one coefficient")
        if all(_exact(c) for c in cs):
            self.coeffs = tuple(Fraction(c) for c in cs)
        else:
            self.coeffs = tuple(complex(c) for c in cs)

    @classmethod
    def constant(cls, c, order: int) -> Series:
        return cls([c] + [0] * order)

    @classmethod
    def variable(cls, order: int) -> Series:
        return cls([0, 1] + [0] * (order - 1)) if order >= 1 else cls([0])

    @classmethod
    def from_polynomial(cls, coeffs: Sequence, order: int) -> Series:
        cs = list(coeffs[: order + 1])
        return cls(cs + [0] * (order + 1 - len(cs)))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def exact(self) -> bool:
        return isinstance(self.coeffs[0], Fraction)

    def __getitem__(self, i):
        return self.coeffs[i]

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __repr__(self) -> str:
        return f"Series({list(self.coeffs)!r})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        return self.coeffs == other.coeffs

    def _align(self, other: Series) -> int:
        return min(self.order, other.order)

    def truncate(self, order: int) -> Series:
        return Series(self.coeffs[: order + 1])

    def __add__(self, other) -> Series:
        if isinstance(other, Number):
            other = Series.constant(other, self.order)
        M = self._align(other)
        return Series(a + b for a, b in zip(self.coeffs[: M + 1], other.coeffs))

    __radd__ = __add__

    def __neg__(self) -> Series:
        return Series(-a for a in self.coeffs)

    def __sub__(self, other) -> Series:
        return self + (-other)

    def __rsub__(self, other) -> Series:
        return (-self) + other

    def __mul__(self, other) -> Series:
        if isinstance(other, Number):
            return Series(a * other for a in self.coeffs)
        M = self._align(other)
        a, b = self.coeffs, other.coeffs
        out = []
        for n in range(M + 1):
            out.append(sum((a[k] * b[n - k] for k in range(n + 1)), start=0 * a[0]))
        return Series(out)

    __rmul__ = __mul__

    def __truediv__(self, other) -> Series:
        if isinstance(other, Number):
            if self.exact and _exact(other):
                return Series(a / Fraction(other) for a in self.coeffs)
            return Series(a / other for a in self.coeffs)
        return self * other.inverse()

    def __pow__(self, k: int) -> Series:
        if not isinstance(k, int) or k < 0:
            return self.power(k)
        out = Series.constant(1, self.order)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def shift(self, k: int = 1) -> Series:
        """Multiply by ``u^k`` (keeping the order)."""
        return Series([0] * k + list(self.coeffs[: len(self.coeffs) - k]))

    def derivative(self) -> Series:
        """Formal derivative; the order drops by one."""
        if self.order == 0:
            return Series([0 * self.coeffs[0]])
        return Series(n * self.coeffs[n] for n in range(1, len(self.coeffs)))

    def integral(self) -> Series:
        zero = Fraction(0) if self.exact else 0j
        return Series([zero] + [self._div(self.coeffs[n], n + 1) for n in range(self.order)])

    def _div(self, a, n: int):
        return a / n if not self.exact else a / Fraction(n)

    def exp(self) -> Series:
        if self.coeffs[0] != 0:
            raise BadConstantTerm("exp needs a zero constant term")
        f = self.coeffs
        g = [f[0] * 0 + 1]
        for n in range(1, len(f)):
            s = sum((k * f[k] * g[n - k] for k in range(1, n + 1)), start=0 * f[0])
            g.append(self._div(s, n))
        return Series(g)

    def log(self) -> Series:
        if self.coeffs[0] != 1:
            raise BadConstantTerm("log needs constant term 1")
        g = self.coeffs
        f = [g[0] * 0]
        for n in range(1, len(g)):
            s = n * g[n] - sum((k * f[k] * g[n - k] for k in range(1, n)), start=0 * g[0])
            f.append(self._div(s, n))
        return Series(f)

    def power(self, r) -> Series:
        """``self ** r`` for a rational (or complex) exponent; constant term must be 1."""
        if self.coeffs[0] != 1:
            raise BadConstantTerm("a non-integer power needs constant term 1")
        if self.exact and _exact(r):
            r = Fraction(r)
        f = self.coeffs
        g = [f[0]]
        for n in range(1, len(f)):
            s = sum(((r * k - (n - k)) * f[k] * g[n - k] for k in range(1, n + 1)), start=0 * f[0])
            g.append(self._div(s, n))
        return Series(g)

    def inverse(self) -> Series:
        c0 = self.coeffs[0]
        if c0 == 0:
            raise BadConstantTerm("cannot invert a series with zero constant term")
        f = self.coeffs
        inv0 = Fraction(1) / c0 if self.exact else 1 / c0
        g = [inv0]
        for n in range(1, len(f)):
            g.append(-inv0 * sum((f[k] * g[n - k] for k in range(1, n + 1)), start=0 * f[0]))
        return Series(g)

    def __call__(self, u: complex) -> complex:
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * u + complex(c)
        return acc

    def to_float(self) -> Series:
        return Series(complex(c) for c in self.coeffs)

    def max_abs_diff(self, other: Series) -> float:
        M = self._align(other)
        return max(abs(complex(a) - complex(b)) for a, b in zip(self.coeffs[: M + 1], other.coeffs))


def zeta_series(N: Sequence[int], M: int) -> Series:
    """``exp(sum_{m<=M} N_m u^m / m)`` with exact coefficients.

    ``N[m]`` is ``N_m``; ``N[0]`` is ignored.
    """
    if len(N) <= M:
        raise ValueError(f"need N_1..N_{M}, got {len(N) - 1}")
    return Series([0] + [Fraction(N[m], m) for m in range(1, M + 1)]).exp()


@dataclass(frozen=True)
class LogDerivativeReport:
    recovered: tuple
    residuals: tuple

    @property
    def ok(self) -> bool:
        return all(r == 0 for r in self.residuals)


def log_derivative_check(Z: Series, N: Sequence[int]) -> LogDerivativeReport:
    """Recover ``N_m`` as the coefficients of ``u Z'/Z`` and compare."""
    M = Z.order
    ld = (Z.derivative() * Z.truncate(M - 1).inverse()).shift(0)
    recovered = tuple([0] + [ld[m - 1] for m in range(1, M + 1)])
    residuals = tuple(recovered[m] - N[m] for m in range(1, M + 1))
    return LogDerivativeReport(recovered, residuals)


def binomial_series(lam: int, r, M: int) -> Series:
    """``(1 - u^lam)^r`` through order ``M`` from the generalized binomial theorem."""
    r = Fraction(r) if _exact(r) else r
    out = [Fraction(0)] * (M + 1) if _exact(r) else [0j] * (M + 1)
    c = Fraction(1) if _exact(r) else 1 + 0j
    k = 0
    while k * lam <= M:
        out[k * lam] = c * (-1) ** k
        c = c * (r - k) / (k + 1)
        k += 1
    return Series(out)
