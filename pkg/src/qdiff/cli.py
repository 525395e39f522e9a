"""Command-line interface: diff, taylor-diff, interp, verify, table.

Exit codes: 0 success, 1 computation failure / non-convergence / identity
failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction
from math import factorial

from . import identities as ident
from .expression import EvalDomainError, ParseError, evaluate, parse, symbolic_derivative
from .limits import LimitSpec, Side, derivative_estimate, limit_point
from .newton import (
    DegenerateGridError,
    GridKind,
    GridSpec,
    divided_difference_interpolate,
    forward_difference_table,
    literal_q_newton_eval,
    literal_qpower_newton_eval,
    newton_forward_eval,
)
from .operators import (
    DifferenceScheme,
    SchemeKind,
    q_derivative_power_closed_form,
    q_derivative_power_high_order,
    q_difference,
    q_power_difference,
    q_power_difference_power_closed_form,
    xi_q_quotient,
)
from .taylor import OutOfRadiusError, taylor_derivative_via_operator, taylor_from_expr


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# output


def fmt(value):
    """Render one value for output: 17 significant digits, exact rationals as p/q."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    value = float(value)
    if not math.isfinite(value):
        return "nan" if math.isnan(value) else ("inf" if value > 0 else "-inf")
    return float(format(value, ".17g"))


def _csv_cell(value):
    value = fmt(value)
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def write_records(records, fields, fmt_name, out, extra=None):
    """Write records as CSV (fixed column order) or JSON (fixed field names)."""
    if fmt_name == "json":
        payload = [{k: fmt(r[k]) for k in fields} for r in records]
        if extra is not None:
            payload = {**extra, "records": payload}
        out.write(json.dumps(payload, indent=2, allow_nan=False))
        out.write("\n")
        return
    w = csv.writer(out, lineterminator="\n")
    w.writerow(fields)
    for r in records:
        w.writerow([_csv_cell(r[k]) for k in fields])


# --------------------------------------------------------------------------
# config helpers


def _expr(args):
    if not args.expr:
        raise UsageError("--expr is required")
    try:
        return parse(args.expr)
    except ParseError as exc:
        raise UsageError(f"cannot parse --expr: {exc}") from None


def _points(args):
    if not args.at:
        raise UsageError("at least one --at point is required")
    return args.at


def _scheme(args) -> DifferenceScheme:
    kind = SchemeKind(args.scheme)
    try:
        return DifferenceScheme(kind, q=args.q, p=args.p)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _limit_spec(args) -> LimitSpec:
    try:
        return LimitSpec(Side(args.side), args.h0, args.rho, args.max_steps, args.tol)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# --------------------------------------------------------------------------
# subcommands

DIFF_FIELDS = ["x", "scheme", "value", "error_estimate", "steps", "converged", "oracle_value", "oracle_delta"]


def cmd_diff(args, out) -> int:
    f = _expr(args)
    points = _points(args)
    scheme = _scheme(args)
    spec = _limit_spec(args)
    for x in points:
        try:
            scheme.check_point(x)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    df = symbolic_derivative(f)
    records = []
    for x in points:
        res = derivative_estimate(f, x, scheme, spec)
        oracle = evaluate(df, limit_point(x, scheme))
        records.append(dict(x=x, scheme=scheme.kind.value, value=res.value, error_estimate=res.error,
                            steps=res.steps, converged=res.converged, oracle_value=oracle,
                            oracle_delta=res.value - oracle))
    write_records(records, DIFF_FIELDS, args.format, out)
    return 0 if all(r["converged"] for r in records) else 1


TAYLOR_FIELDS = ["x0", "scheme", "value", "error_estimate", "steps", "converged", "xi_route",
                 "terms_used", "oracle_value", "oracle_delta", "warning"]
TAYLOR_CSV_FIELDS = ["center", "order", "radius", "coefficients"] + TAYLOR_FIELDS


def cmd_taylor_diff(args, out) -> int:
    f = _expr(args)
    points = _points(args)
    scheme = _scheme(args)
    spec = _limit_spec(args)
    if args.order is None or args.order < 0:
        raise UsageError("--order must be a non-negative integer")
    if not args.radius > 0:
        raise UsageError("--radius must be positive")
    for x0 in points:
        if not abs(x0 - args.center) < args.radius:
            raise UsageError(f"x0={x0} lies outside the radius {args.radius} around {args.center}")
        try:
            scheme.check_point(x0 - args.center)
        except ValueError as exc:
            raise UsageError(f"displacement x0 - a: {exc}") from None
    try:
        tm = taylor_from_expr(f, args.center, args.order, args.radius, args.smoothness)
    except EvalDomainError as exc:
        raise UsageError(str(exc)) from None
    df = symbolic_derivative(f)
    coefficients = [float(c) for c in tm.coefficients]
    records = []
    for x0 in points:
        try:
            res = taylor_derivative_via_operator(tm, x0, scheme, spec)
        except OutOfRadiusError as exc:
            raise UsageError(str(exc)) from None
        oracle = evaluate(df, limit_point(x0 - tm.center, scheme) + tm.center)
        records.append(dict(x0=x0, scheme=scheme.kind.value, value=res.value, error_estimate=res.error,
                            steps=res.steps, converged=res.converged, xi_route=res.route == "xi",
                            terms_used=res.terms_used, oracle_value=oracle, oracle_delta=res.value - oracle,
                            warning="; ".join(res.warnings)))
    model = dict(center=fmt(tm.center), order=tm.order, radius=fmt(tm.radius),
                 coefficients=[fmt(c) for c in coefficients])
    if args.format == "json":
        write_records(records, TAYLOR_FIELDS, "json", out, extra={"model": model})
    else:
        coef_text = " ".join(_csv_cell(c) for c in coefficients)
        rows = [dict(r, center=tm.center, order=tm.order, radius=tm.radius, coefficients=coef_text) for r in records]
        write_records(rows, TAYLOR_CSV_FIELDS, "csv", out)
    return 0 if all(r["converged"] for r in records) else 1


INTERP_FIELDS = ["x", "value", "f_x", "residual"]
INTERP_LITERAL_FIELDS = INTERP_FIELDS + ["literal_value", "literal_residual_vs_sound"]


def cmd_interp(args, out) -> int:
    f = _expr(args)
    points = _points(args)
    if args.nodes is None or args.nodes < 0:
        raise UsageError("--nodes K must be a non-negative integer")
    grid = GridSpec(GridKind(args.grid), args.grid_a, args.nodes, args.grid_q)
    try:
        nodes = grid.nodes()
    except DegenerateGridError as exc:
        raise UsageError(str(exc)) from None
    records = []
    for x in points:
        value = divided_difference_interpolate(grid, f, x)
        fx = evaluate(f, x)
        rec = dict(x=x, value=value, f_x=fx, residual=value - fx)
        if args.literal:
            if grid.kind is GridKind.UNIFORM:
                table = forward_difference_table([evaluate(f, t) for t in nodes], grid.K)
                lit = newton_forward_eval(table, grid.a, x, grid.K)
                rec.update(literal_value=lit, literal_residual_vs_sound=lit - value)
            else:
                evaluator = literal_q_newton_eval if grid.kind is GridKind.GEOMETRIC else literal_qpower_newton_eval
                lit = evaluator(f, grid.a, x, grid.q, grid.K, experimental=True)
                rec.update(literal_value=lit.value, literal_residual_vs_sound=lit.residual)
        records.append(rec)
    write_records(records, INTERP_LITERAL_FIELDS if args.literal else INTERP_FIELDS, args.format, out)
    return 0


VERIFY_FIELDS = ["identity", "inputs", "expected", "got", "pass"]

# rational parameters of the exact xi and closed-form checks
XI_T_VALUES = (Fraction(0), Fraction(1), Fraction(1, 2), Fraction(3), Fraction(7, 5))
Q_VALUES = (Fraction(1, 2), Fraction(3, 2), Fraction(2))
QPOW_VALUES = (Fraction(2), Fraction(3))


def verify_records(x_range, n_range):
    """Exact identity checks for every (x, n) cell, in a fixed order."""
    records = []

    def rec(identity, inputs, expected, got):
        records.append(dict(identity=identity, inputs=inputs, expected=expected, got=got, **{"pass": expected == got}))

    for x in x_range:
        for n in n_range:
            cell = f"x={x};n={n}"
            for v in ident.SetVariant:
                rec(f"power_expansion_{v.value}", cell, Fraction(x) ** n, ident.power_via_expansion(x, n, v))
            table = ident.power_expansion_terms(x, n, ident.SetVariant.C)
            rec("term_boundary_symmetry", cell, table.terms[0], table.terms[-1])
            rec("term_symmetry", cell, True,
                all(table.terms[k] == table.terms[x - k] for k in range(x + 1)))
            for t in XI_T_VALUES:
                rec("xi", f"{cell};t={fmt(t)}", (x * t) ** n, ident.xi(x, t, n))
            rec("telescoping_corrected", cell, x ** n, ident.telescoping_power_sum(x, n))
            rec("telescoping_literal_deviation", cell, (x + 1) ** n - 1, ident.telescoping_power_sum(x, n, literal=True))
            rec("growth_vs_forward_difference", cell, ident.forward_difference_power(x, n),
                ident.binomial_growth_expansion(x, 1, n))
            rec("forward_difference_power", cell, (x + 1) ** n - x ** n, ident.forward_difference_power(x, n))
            for k in range(1, n + 1):
                kcell = f"{cell};k={k}"
                rec("high_order_q1_corrected", kcell, factorial(n) // factorial(n - k) * x ** (n - k),
                    q_derivative_power_high_order(x, n, k, 1))
                rec("high_order_q1_literal_deviation", kcell,
                    factorial(n + 1) // factorial(n - k + 1) * x ** (n - k),
                    q_derivative_power_high_order(x, n, k, 1, literal=True))
            mono = lambda t, n=n: t ** n  # noqa: E731
            for q in Q_VALUES:
                qcell = f"{cell};q={fmt(q)}"
                closed = q_derivative_power_closed_form(Fraction(x), n, q)
                rec("q_closed_form_vs_quotient", qcell, closed, q_difference(mono, Fraction(x), q))
                rec("xi_quotient_vs_closed_form", qcell, closed, xi_q_quotient(x, n, q))
            if x != 1:
                for q in QPOW_VALUES:
                    rec("qpower_closed_form_vs_quotient", f"{cell};q={fmt(q)}",
                        q_power_difference_power_closed_form(Fraction(x), n, q),
                        q_power_difference(mono, Fraction(x), int(q)))
    return records


def cmd_verify(args, out) -> int:
    if args.x_min < 1 or args.x_max < args.x_min or args.n_min < 1 or args.n_max < args.n_min:
        raise UsageError("sweep ranges need 1 <= min <= max")
    records = verify_records(range(args.x_min, args.x_max + 1), range(args.n_min, args.n_max + 1))
    write_records(records, VERIFY_FIELDS, args.format, out)
    return 0 if all(r["pass"] for r in records) else 1


def cmd_table(args, out) -> int:
    if args.x is None or args.n is None or args.x < 1 or args.n < 1:
        raise UsageError("table needs --x >= 1 and --n >= 1")
    variant = ident.SetVariant(args.variant)
    table = ident.power_expansion_terms(args.x, args.n, variant)
    total = ident.power_via_expansion(args.x, args.n, variant)
    if args.format == "json":
        payload = dict(x=args.x, n=args.n, variant=variant.value,
                       rows=[dict(k=k, term=fmt(t)) for k, t in zip(table.indices, table.terms)], total=fmt(total))
        out.write(json.dumps(payload, indent=2))
        out.write("\n")
    else:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["k", "term"])
        for k, t in zip(table.indices, table.terms):
            w.writerow([k, _csv_cell(t)])
        w.writerow(["TOTAL", _csv_cell(total)])
    return 0


# --------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--out", help="output path (default: standard output)")

    fn = argparse.ArgumentParser(add_help=False)
    fn.add_argument("--expr", help="function of x, e.g. 'x*exp(x)'")
    fn.add_argument("--at", type=float, action="append", help="evaluation point (repeatable)")

    lim = argparse.ArgumentParser(add_help=False)
    lim.add_argument("--scheme", choices=[k.value for k in SchemeKind], default="q+")
    lim.add_argument("--q", type=float, help="q parameter; the fixed base for pq/pqpow (default 1)")
    lim.add_argument("--p", type=float, help="p parameter of a (p,q) scheme")
    lim.add_argument("--side", choices=["above", "below"], default="above",
                     help="approach side for pq/pqpow schemes")
    lim.add_argument("--h0", type=float, default=2.0 ** -4)
    lim.add_argument("--rho", type=float, default=0.5)
    lim.add_argument("--max-steps", type=int, default=24)
    lim.add_argument("--tol", type=float, default=1e-10)

    parser = argparse.ArgumentParser(prog="qdiff", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("diff", parents=[common, fn, lim], help="derivative via a difference-quotient limit")
    p.set_defaults(func=cmd_diff)

    p = sub.add_parser("taylor-diff", parents=[common, fn, lim], help="termwise derivative of a Taylor model")
    p.add_argument("--center", type=float, default=0.0)
    p.add_argument("--order", type=int)
    p.add_argument("--radius", type=float, default=math.inf)
    p.add_argument("--smoothness", type=int, help="finite smoothness class (default: analytic)")
    p.set_defaults(func=cmd_taylor_diff)

    p = sub.add_parser("interp", parents=[common, fn], help="Newton interpolation on a grid")
    p.add_argument("--grid", choices=[g.value for g in GridKind], default="uniform")
    p.add_argument("--grid-a", type=float, default=0.0)
    p.add_argument("--grid-q", type=float, default=2.0)
    p.add_argument("--nodes", type=int, help="order K (K+1 nodes)")
    p.add_argument("--literal", action="store_true", help="also emit the experimental literal series")
    p.set_defaults(func=cmd_interp)

    p = sub.add_parser("verify", parents=[common], help="exact identity sweep")
    p.add_argument("--x-min", type=int, default=1)
    p.add_argument("--x-max", type=int, default=30)
    p.add_argument("--n-min", type=int, default=1)
    p.add_argument("--n-max", type=int, default=8)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("table", parents=[common], help="term table of the power expansion")
    p.add_argument("--x", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--variant", choices=[v.value for v in ident.SetVariant], default="U")
    p.set_defaults(func=cmd_table)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    buf = io.StringIO()
    try:
        status = args.func(args, buf)
    except UsageError as exc:
        print(f"qdiff {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (ArithmeticError, ValueError) as exc:
        print(f"qdiff {args.command}: computation failed: {exc}", file=sys.stderr)
        return 1
    text = buf.getvalue()
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
