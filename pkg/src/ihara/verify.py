"""Invariant suite: every cross-check the library knows how to run on one instance."""

from __future__ import annotations

import cmath
import math
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

from . import cycles, determinant, functional, kernels
from .errors import DomainError, IharaError
from .graphs import GroupAction, quotient, unroll, validate
from .series import log_derivative_check, zeta_series


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    residual: float | None = None
    detail: str = ""


# ---------------------------------------------------------------------------
# Three routes to Z(u)
# ---------------------------------------------------------------------------

def zeta_by_series(action: GroupAction, u: complex, tol: float = 1e-13, max_order: int = 1024) -> complex:
    """``exp(sum N_m u^m / m)`` with ``N_m`` from the operator traces, for ``|u| < 1/(d-1)``."""
    R = cycles.zeta_radius(action)
    x = abs(u)
    if x >= R:
        raise DomainError(f"|u| = {x:g} is not below 1/(d-1) = {R:g}")
    d, F = action.max_degree, len(action.domain)
    M = 16
    while d >= 2 and d * F / (d - 1) * ((d - 1) * x) ** (M + 1) / ((M + 1) * (1 - (d - 1) * x)) > tol:
        M += 16
        if M > max_order:
            raise DomainError(f"|u| = {x:g} is too close to 1/(d-1) for {max_order} terms")
    N = kernels.n_sequence(action, M)
    return cmath.exp(sum(N[m] * u ** m / m for m in range(1, M + 1)))


def zeta_by_euler(action: GroupAction, u: complex, max_len: int) -> complex:
    classes = cycles.gamma_classes(action, max_len)
    return cycles.euler_product(classes, u, max_len, cycles.zeta_radius(action))


def zeta_by_det(action: GroupAction, u: complex, method: str = "series") -> complex:
    return 1 / determinant.determinant_formula(action, u, method=method)


def euler_tail(action: GroupAction, u: complex, max_len: int) -> float:
    """Bound on ``|log Z - log(Euler product through max_len)|`` from ``N_m <= d(d-1)^{m-1}|F|``."""
    d, F, x = action.max_degree, len(action.domain), abs(u)
    if d < 2:
        return 0.0
    r = (d - 1) * x
    return d * F / (d - 1) * r ** (max_len + 1) / ((max_len + 1) * (1 - r))


# ---------------------------------------------------------------------------
# Suite
# ---------------------------------------------------------------------------

@dataclass
class Suite:
    action: GroupAction
    order: int
    quadrature: int
    points: int = 10
    seed: int = 0
    results: list[CheckResult] = field(default_factory=list)

    def run(self, name: str, fn: Callable[[], CheckResult | tuple]) -> None:
        try:
            out = fn()
        except IharaError as exc:
            self.results.append(CheckResult(name, False, None, f"{type(exc).__name__}: {exc}"))
            return
        if isinstance(out, CheckResult):
            self.results.append(out)
        else:
            passed, residual, detail = out
            self.results.append(CheckResult(name, bool(passed), residual, detail))


def run_checks(action: GroupAction, order: int, quadrature: int, points: int = 10, seed: int = 0) -> list[CheckResult]:
    """Run the invariant suite; ``order`` caps path lengths and series, ``quadrature`` is the Bloch grid size."""
    if order < 1:
        raise ValueError("order must be at least 1")
    if quadrature < 1:
        raise ValueError("quadrature must be at least 1")
    s = Suite(action, order, quadrature, points, seed)
    M = order
    g = action.graph
    led = kernels.trace_ledger(action, M)
    A, Q = kernels.adjacency_kernel(action), kernels.q_kernel(action)
    A_seq, _ = kernels.operator_sequences(action, M)

    def c_validate():
        rep = validate(g)
        return rep.ok, None, f"d={rep.max_degree}, q={rep.regular_q}" + ("; " + "; ".join(rep.warnings) if rep.warnings else "")

    def c_chi():
        qd = quotient(action)
        want = qd.euler_characteristic if qd.edge_inversions == 0 else qd.l2_euler_characteristic
        return qd.l2_euler_characteristic == want, float(abs(qd.l2_euler_characteristic - want)), \
            f"|VB|={qd.n_vertices}, |EB|={qd.n_edges}, chi={qd.euler_characteristic}, chi2={qd.l2_euler_characteristic}"

    def c_oracle():
        oracle = cycles.reduced_counts(action, M)
        bad = [m for m in range(1, M + 1) if oracle[m] != led.N[m]]
        return not bad, float(len(bad)), f"N_1..N_{M} = {list(oracle[1:])}"

    def c_tails():
        tails = cycles.tailed_counts(action, M)
        bad = [m for m in range(1, M + 1) if tails[m] != led.t[m]]
        return not bad, float(len(bad)), "tailed paths from the oracle vs t_m recursion"

    def c_t_closed():
        closed = kernels.t_closed_form(A_seq, Q, M)
        bad = [m for m in range(1, M + 1) if closed[m] != led.t[m]]
        return not bad, float(len(bad)), "t_m recursion vs closed form"

    def c_trB():
        bad = [m for m in range(1, M + 1)
               if led.trB[m] != led.N[m] - (led.tr_q_minus_i if m % 2 == 0 else 0)]
        return not bad, float(len(bad)), f"Tr(Q-I)={led.tr_q_minus_i}"

    def c_resolvent():
        r1 = kernels.resolvent_residuals(A_seq, A, Q)
        r2 = kernels.resolvent_residuals(A_seq, A, Q, cumulative=True)
        worst = max(max(r1), max(r2))
        return worst == 0, float(worst), "sum A_m u^m (I-Au+Qu^2) = (1-u^2) I and cumulative variant"

    def c_nonneg():
        ok = all(K.min_entry() >= 0 and K.is_symmetric() for K in A_seq)
        return ok, None, "A_m entries nonnegative and symmetric"

    def c_norm():
        rep = kernels.norm_certificate(action, A_seq)
        worst = max(n / b for n, b in zip(rep.norms, rep.bounds))
        return rep.ok, worst, f"max ||A_m|| / alpha^m, alpha={rep.alpha:.6g}"

    def c_nbound():
        d, F = action.max_degree, len(action.domain)
        bad = [m for m in range(1, M + 1) if led.N[m] > d * (d - 1) ** (m - 1) * F]
        return not bad, float(len(bad)), "N_m <= d(d-1)^{m-1}|F|"

    def c_logder():
        rep = log_derivative_check(zeta_series(led.N, M), led.N)
        return rep.ok, float(max((abs(r) for r in rep.residuals), default=0)), "u Z'/Z recovers N_m"

    def c_detformula():
        determinant.determinant_formula(action, order=M)
        return True, 0.0, f"exact through u^{M}"

    def c_log_derivative():
        res = determinant.trace_log_derivative_residuals(action, M)
        return all(r == 0 for r in res), float(max(abs(r) for r in res)), "d/du Tr log vs Tr f'(I-f)^{-1}"

    def c_b_generating():
        res = determinant.b_trace_residuals(action, M)
        return all(r == 0 for r in res), float(max(abs(r) for r in res)), "Tr B_m vs -u d/du Tr log Delta"

    def c_classes():
        L = min(M, 8)
        cl = cycles.gamma_classes(action, L)
        nu_sum = [0] * (L + 1)
        ok = True
        for c in cl:
            nu_sum[c.length] += c.nu
            ok &= c.nu == c.domain_count and c.length % c.stabilizer_order == 0
            if action.kind == "translation":
                ok &= c.stabilizer_order == 1
        ok &= all(nu_sum[m] == led.N[m] for m in range(1, L + 1))
        return ok, None, f"sum of nu over classes = N_m for m <= {L}; pi_n = {cycles.prime_counts(cl)}"

    def c_euler():
        R = cycles.zeta_radius(action)
        L = min(M, 10)
        u = 0.5 * min(R, 1.0) * cmath.exp(0.3j)
        if u == 0 or not math.isfinite(abs(u)):
            u = 0.3 * cmath.exp(0.3j)
        e = zeta_by_euler(action, u, L)
        z = zeta_by_series(action, u)
        tail = euler_tail(action, u, L)
        err = abs(cmath.log(e / z))
        return err <= 2 * tail + 1e-12, err, f"u={u:.4g}, tail bound {tail:.3g}"

    def c_dual():
        rng = np.random.default_rng(s.seed)
        r = 0.9 / action.alpha
        worst = 0.0
        for _ in range(s.points):
            u = r * math.sqrt(rng.uniform()) * cmath.exp(2j * math.pi * rng.uniform())
            a = determinant.det_gamma_series(action, u)
            b = determinant.det_gamma_bloch(action, u, n=s.quadrature)
            worst = max(worst, abs(a - b) / abs(a))
        return worst < 1e-9, worst, f"{s.points} points, |u| < 0.9/alpha, n={s.quadrature}"

    def c_functional():
        ctx = functional.RegularZetaContext.from_action(action)
        worst, worst_refl = 0.0, 0.0
        for u in functional.sample_omega(ctx.q, s.points, s.seed):
            worst = max(worst, functional.check_functional_equations(ctx, u).max)
            worst_refl = max(worst_refl, functional.reflection_residual(ctx, u))
        sign = functional.default_lambda_sign(ctx)
        return worst < 1e-8 and worst_refl < 1e-9, max(worst, worst_refl), \
            f"{s.points} points in Omega, seed {s.seed}, Lambda sign {sign:+d}"

    def c_domain():
        if action.kind == "translation":
            shifts = [[(i % 2) * (1 if a == 0 else 0) for a in range(g.rank)] for i in range(g.cell_size)]
            other = GroupAction.translation(g.shifted(shifts))
        elif action.kind == "permutation":
            other = action.with_domain([max(action.orbit_of(x)) for x in action.domain])
        else:
            return True, 0.0, "trivial action: domain is every vertex"
        same = kernels.trace_ledger(other, M).N == led.N
        return same, None, "traces unchanged under a different fundamental domain"

    s.run("graph validation", c_validate)
    s.run("chi2 = |VB| - |EB|", c_chi)
    s.run("oracle N_m = Tr A_m - t_m", c_oracle)
    s.run("oracle tails = t_m", c_tails)
    s.run("t_m recursion = closed form", c_t_closed)
    s.run("Tr B_m relation", c_trB)
    s.run("resolvent identities", c_resolvent)
    s.run("A_m nonnegative symmetric", c_nonneg)
    s.run("norm bound ||A_m|| <= alpha^m", c_norm)
    s.run("N_m growth bound", c_nbound)
    s.run("log-derivative recovers N_m", c_logder)
    s.run("determinant formula (series)", c_detformula)
    s.run("trace of log-derivative", c_log_derivative)
    s.run("B_m generating function", c_b_generating)
    s.run("cycle classes", c_classes)
    s.run("Euler product vs series", c_euler)
    s.run("fundamental-domain independence", c_domain)
    if action.kind == "translation":
        s.run("det series = Bloch quadrature", c_dual)
    if action.regular_q is not None and action.regular_q >= 1:
        s.run("functional equations", c_functional)
    return s.results
