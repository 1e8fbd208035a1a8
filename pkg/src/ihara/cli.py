"""Command-line interface: ``ihara {cycles,zeta,det-formula,functional-eq,verify}``."""

from __future__ import annotations

import argparse
import cmath
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import cycles, determinant, functional, kernels, verify
from .catalog import named_actions
from .errors import GraphFormatError, IharaError
from .graphs import GroupAction
from .io import load
from .series import zeta_series


# ---------------------------------------------------------------------------
# Record encoding
# ---------------------------------------------------------------------------

def encode(value: Any) -> Any:
    """JSON-safe form that :func:`decode` inverts exactly."""
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, Fraction):
        return {"frac": f"{value.numerator}/{value.denominator}"}
    if isinstance(value, float):
        return value if value == value and abs(value) != float("inf") else {"float": repr(value)}
    if isinstance(value, complex):
        return {"re": encode(value.real), "im": encode(value.imag)}
    if isinstance(value, (list, tuple)):
        return [encode(v) for v in value]
    if isinstance(value, dict):
        return {k: encode(v) for k, v in value.items()}
    raise TypeError(f"cannot encode {type(value).__name__}")


def decode(value: Any) -> Any:
    if isinstance(value, list):
        return [decode(v) for v in value]
    if isinstance(value, dict):
        if set(value) == {"frac"}:
            return Fraction(value["frac"])
        if set(value) == {"float"}:
            return float(value["float"])
        if set(value) == {"re", "im"}:
            return complex(decode(value["re"]), decode(value["im"]))
        return {k: decode(v) for k, v in value.items()}
    return value


def parse_records(text: str) -> list[dict]:
    """Parse line-delimited output of ``--format json``."""
    return [decode(json.loads(line)) for line in text.splitlines() if line.strip()]


class Output:
    def __init__(self, fmt: str, stream=None):
        self.fmt = fmt
        self.stream = stream or sys.stdout

    def record(self, kind: str, **fields) -> None:
        if self.fmt == "json":
            print(json.dumps(encode({"record": kind, **fields})), file=self.stream)

    def text(self, line: str = "") -> None:
        if self.fmt == "text":
            print(line, file=self.stream)


def _fmt(v: Any) -> str:
    if isinstance(v, complex):
        return f"{v.real:.15g}{v.imag:+.15g}i"
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def _table(out: Output, header: list[str], rows: list[list[Any]]) -> None:
    cells = [header] + [[_fmt(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    for r in cells:
        out.text("  ".join(c.rjust(w) for c, w in zip(r, widths)))


# ---------------------------------------------------------------------------
# Inputs
# ---------------------------------------------------------------------------

def parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def positive_int(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return n


def resolve_graph(source: str) -> tuple[str, GroupAction]:
    path = Path(source)
    if path.exists():
        gf = load(path)
        return gf.name or path.stem, gf.action
    builtin = named_actions()
    if source in builtin:
        return source, builtin[source]
    raise GraphFormatError(f"{source!r} is neither a file nor one of {', '.join(builtin)}")


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_cycles(args, name: str, action: GroupAction, out: Output) -> int:
    L = args.max_len
    classes = cycles.gamma_classes(action, L)
    out.record("header", command="cycles", graph=name, action=action.label(), max_len=L)
    out.text(f"# {name}: {action.label()}, reduced cycle classes of length <= {L}")
    rows = []
    for c in classes:
        rows.append([c.length, c.nu, c.stabilizer_order, "yes" if c.is_prime else "no", c.representative])
        out.record("class", length=c.length, nu=c.nu, stabilizer=c.stabilizer_order, prime=c.is_prime,
                   orbit_size=c.orbit_size, representative=_plain(c.representative))
    if rows:
        _table(out, ["length", "nu", "|stab|", "prime", "representative"], rows)
    else:
        out.text("(no reduced cycles)")
    pi = cycles.prime_counts(classes)
    out.record("prime_counts", counts={str(k): v for k, v in sorted(pi.items())})
    out.text(f"# prime classes by length: {dict(sorted(pi.items()))}")
    return 0


def _plain(rep):
    return [list(x) if isinstance(x, tuple) else x for x in
            ([(c, list(v)) for c, v in rep] if rep and isinstance(rep[0], tuple) else rep)]


def cmd_zeta(args, name: str, action: GroupAction, out: Output) -> int:
    if args.series is None and args.at is None:
        raise ValueError("zeta: give --series M and/or --at u")
    out.record("header", command="zeta", graph=name, action=action.label(), series=args.series,
               at=args.at, method=args.method, max_len=args.max_len)
    if args.series is not None:
        M = args.series
        N = kernels.n_sequence(action, M)
        Z = zeta_series(N, M)
        inv = Z.inverse()
        out.text(f"# {name}: Z(u) = exp(sum N_m u^m / m) through u^{M}")
        rows = []
        for m in range(M + 1):
            rows.append([m, N[m] if m else "", Z[m], inv[m]])
            out.record("coefficient", m=m, N=N[m], Z=Z[m], inverse_Z=inv[m])
        _table(out, ["m", "N_m", "Z_m", "(1/Z)_m"], rows)
    if args.at is not None:
        u = args.at
        methods = ["det", "series", "euler"] if args.method == "all" else [args.method]
        values = []
        for m in methods:
            if m == "det":
                v = verify.zeta_by_det(action, u)
            elif m == "series":
                v = verify.zeta_by_series(action, u)
            else:
                v = verify.zeta_by_euler(action, u, args.max_len)
            values.append((m, v))
        out.text(f"# {name}: Z({_fmt(u)})")
        ref = values[0][1]
        rows = []
        for m, v in values:
            rows.append([m, v, abs(v - ref)])
            out.record("value", u=u, method=m, Z=v, delta=abs(v - ref))
        _table(out, ["method", "Z(u)", "|delta|"], rows)
    return 0


def cmd_det_formula(args, name: str, action: GroupAction, out: Output) -> int:
    chi = determinant.chi_gamma(action)
    out.record("header", command="det-formula", graph=name, action=action.label(), chi=chi,
               series=args.series, at=args.at, method=args.method, quadrature=args.quadrature)
    if args.series is not None:
        M = args.series
        rhs = determinant.determinant_formula(action, order=M)
        out.text(f"# {name}: (1-u^2)^(-chi) det(I - Au + Qu^2) = 1/Z, chi = {chi}, exact through u^{M}")
        rows = []
        for m in range(M + 1):
            rows.append([m, rhs[m]])
            out.record("coefficient", m=m, value=rhs[m])
        _table(out, ["m", "(1/Z)_m"], rows)
        out.record("identity", holds=True)
        out.text("# identity holds coefficientwise")
        return 0
    if args.at is None:
        raise ValueError("det-formula: give --at u or --series M")
    u = args.at
    methods = ["series", "bloch"] if args.method == "both" else [args.method]
    bound = 1 / action.alpha
    if abs(u) >= bound:
        raise determinant.DomainError(f"|u| = {abs(u):g} is not below 1/alpha = {bound:g}")
    # |u| < 1/alpha < 1, so the principal power of 1 - u^2 is the continuous one
    pref = cmath.exp(-float(chi) * cmath.log(1 - u * u))
    rows = []
    ref = None
    for m in methods:
        if m == "bloch" and args.quadrature is not None:
            det = determinant.det_gamma_bloch(action, u, n=args.quadrature)
        else:
            det = determinant.det_gamma(action, u, m)
        inv_z = pref * det
        ref = inv_z if ref is None else ref
        rows.append([m, det, inv_z, abs(inv_z - ref)])
        out.record("value", u=u, method=m, det=det, inverse_Z=inv_z, delta=abs(inv_z - ref))
    out.text(f"# {name}: det_Gamma(I - Au + Qu^2) and 1/Z at u = {_fmt(u)}, chi = {chi}")
    _table(out, ["method", "det", "1/Z", "|delta|"], rows)
    return 0


def cmd_functional_eq(args, name: str, action: GroupAction, out: Output) -> int:
    ctx = functional.RegularZetaContext.from_action(action)
    sign = functional.default_lambda_sign(ctx)
    out.record("header", command="functional-eq", graph=name, action=action.label(), q=ctx.q,
               vertices=ctx.n_vertices, chi=ctx.chi, points=args.points, seed=args.seed, lambda_sign=sign)
    out.text(f"# {name}: q = {ctx.q}, |VB| = {ctx.n_vertices}, chi = {ctx.chi}, seed = {args.seed}, "
             f"Lambda(u) = {sign:+d} Lambda(1/qu)")
    rows = []
    ok = True
    for u in functional.sample_omega(ctx.q, args.points, args.seed):
        r = functional.check_functional_equations(ctx, u)
        refl = functional.reflection_residual(ctx, u)
        passed = r.max < args.tol and refl < args.tol
        ok &= passed
        rows.append([u, r.Lambda, r.xi, r.Xi, refl, "ok" if passed else "FAIL"])
        out.record("point", u=u, Lambda=r.Lambda, xi=r.xi, Xi=r.Xi, reflection=refl, passed=passed)
    _table(out, ["u", "Lambda", "xi", "Xi", "reflection", ""], rows)
    out.record("summary", passed=ok)
    return 0 if ok else 1


def cmd_verify(args, name: str, action: GroupAction, out: Output) -> int:
    out.record("header", command="verify", graph=name, action=action.label(), order=args.order,
               quadrature=args.quadrature, points=args.points, seed=args.seed)
    out.text(f"# {name}: {action.label()}, order {args.order}, quadrature {args.quadrature}, "
             f"points {args.points}, seed {args.seed}")
    results = verify.run_checks(action, args.order, args.quadrature, args.points, args.seed)
    rows = []
    for r in results:
        rows.append(["PASS" if r.passed else "FAIL", r.name, "" if r.residual is None else r.residual, r.detail])
        out.record("check", name=r.name, passed=r.passed, residual=r.residual, detail=r.detail)
    _table(out, ["", "check", "residual", "detail"], rows)
    ok = all(r.passed for r in results)
    out.record("summary", passed=ok, checks=len(results), failed=sum(not r.passed for r in results))
    out.text(f"# {sum(r.passed for r in results)}/{len(results)} checks passed")
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ihara", description="Ihara zeta functions of finite and periodic graphs.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("graph", nargs="?", help="graph file or built-in name (K4, Z2, ...)")
        sp.add_argument("--graph", dest="graph_opt", metavar="FILE", help="graph file (alternative to the positional)")
        sp.add_argument("--format", choices=["text", "json"], default="text")

    sp = sub.add_parser("cycles", help="table of reduced cycle classes")
    common(sp)
    sp.add_argument("--max-len", type=positive_int, default=8)
    sp.set_defaults(func=cmd_cycles)

    sp = sub.add_parser("zeta", help="zeta series coefficients or values")
    common(sp)
    sp.add_argument("--series", type=positive_int, metavar="M")
    sp.add_argument("--at", type=parse_complex, metavar="U")
    sp.add_argument("--method", choices=["series", "euler", "det", "all"], default="det")
    sp.add_argument("--max-len", type=positive_int, default=12, help="longest prime cycle in the Euler product")
    sp.set_defaults(func=cmd_zeta)

    sp = sub.add_parser("det-formula", help="determinant formula, value or exact series")
    common(sp)
    sp.add_argument("--series", type=positive_int, metavar="M")
    sp.add_argument("--at", type=parse_complex, metavar="U")
    sp.add_argument("--method", choices=["series", "bloch", "both"], default="series")
    sp.add_argument("--quadrature", type=positive_int, metavar="N", help="fixed Bloch grid size (default: adaptive)")
    sp.set_defaults(func=cmd_det_formula)

    sp = sub.add_parser("functional-eq", help="functional-equation residuals on sampled points")
    common(sp)
    sp.add_argument("--points", type=positive_int, default=10)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--tol", type=float, default=1e-8)
    sp.set_defaults(func=cmd_functional_eq)

    sp = sub.add_parser("verify", help="run the full invariant suite")
    common(sp)
    sp.add_argument("--order", type=positive_int, required=True)
    sp.add_argument("--quadrature", type=positive_int, required=True)
    sp.add_argument("--points", type=positive_int, default=10)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    source = args.graph_opt or args.graph
    if source is None:
        parser.error("a graph file or built-in name is required")
    out = Output(args.format)
    try:
        name, action = resolve_graph(source)
        return args.func(args, name, action, out)
    except (IharaError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        out.record("error", type=type(exc).__name__, message=str(exc))
        return 2


if __name__ == "__main__":
    sys.exit(main())
