"""Command-line front end.

Exit status: 0 success, 2 invalid input, 3 declared slopes contradicted by
the integrand, 4 adaptive refinement out of budget, 5 inconsistent
probability inputs. Errors print one line on stderr::

    certquad: error code=3 kind=slope_consistency message="..."
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time

from . import __version__
from .approx import estimate_slopes, oracle_integral
from .composite import (
    Partition,
    adaptive_partition,
    composite_general,
    composite_midrange,
)
from .core import Interval, Rule, RuleParams, SlopeBounds
from .errors import (
    BudgetExceededError,
    CertQuadError,
    DomainError,
    InconsistentInputsError,
    SlopeConsistencyError,
)
from .expr import Function
from .prob import (
    DensityModel,
    cdf_constraints,
    cdf_envelope,
    cdf_midpoint_check,
    expectation_constraints,
    expectation_envelope,
)
from .rules import FAMILIES, Preset, best_rule, rule_family, rule_lipschitz
from .table import PiecewiseLinear

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_SLOPE = 3
EXIT_BUDGET = 4
EXIT_INCONSISTENT = 5


class UsageError(CertQuadError):
    pass


# -- serialisation -----------------------------------------------------------

def fmt(v) -> str:
    """17 significant digits: enough for any double to round-trip exactly."""
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return format(v, ".17g")
    return str(v)


def to_json(obj, indent: int = 2, _level: int = 0) -> str:
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, float):
        return fmt(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {to_json(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad + to_json(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _csv(rows, header) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(["" if v is None else fmt(v) for v in row])
    return buf.getvalue()


def _meta(started: float, **extra):
    meta = {"tool": "certquad", "version": __version__, "wall_time_s": time.perf_counter() - started}
    meta.update(extra)
    return meta


# -- shared argument handling -------------------------------------------------

def _add_source_args(p):
    src = p.add_argument_group("integrand")
    g = src.add_mutually_exclusive_group(required=True)
    g.add_argument("--function", metavar="EXPR", help="integrand in t, e.g. 't^2 + sin(t)'")
    g.add_argument("--table", metavar="PATH", help="CSV with columns t,f (piecewise-linear)")
    src.add_argument("--a", type=float, help="left endpoint (default: table start)")
    src.add_argument("--b", type=float, help="right endpoint (default: table end)")
    sl = p.add_argument_group("slopes")
    sl.add_argument("--l", type=float, dest="l", help="lower slope bound")
    sl.add_argument("--L", type=float, dest="L", help="upper slope bound (Lipschitz constant for --rule lipschitz)")
    sl.add_argument("--estimate-slopes", type=int, metavar="N", help="estimate slopes from N sampled cells")
    sl.add_argument("--accept-estimated", action="store_true", help="allow estimated (uncertified) slopes")


def _source(args):
    if args.table is not None:
        try:
            f = PiecewiseLinear.read_csv(args.table)
        except OSError as exc:
            raise UsageError(f"cannot read table: {exc}") from None
        a = f.ts[0] if args.a is None else args.a
        b = f.ts[-1] if args.b is None else args.b
        iv = Interval(a, b)
        if iv.a < f.ts[0] or iv.b > f.ts[-1]:
            raise UsageError(f"[{iv.a!r}, {iv.b!r}] extends beyond the table range [{f.ts[0]!r}, {f.ts[-1]!r}]")
        return f, iv, {"table": args.table}
    if args.a is None or args.b is None:
        raise UsageError("--a and --b are required with --function")
    return Function(args.function), Interval(args.a, args.b), {"function": args.function}


def _slopes(args, f, iv, rule: str):
    """Return (SlopeBounds, origin). ``origin`` is declared, table or estimated."""
    declared = args.l is not None or args.L is not None
    if isinstance(f, PiecewiseLinear):
        if declared or args.estimate_slopes is not None:
            raise UsageError("slope flags are not accepted with --table; slopes come from the table")
        s = f.slope_bounds(iv)
        if rule == "lipschitz":
            s = SlopeBounds.from_lipschitz(max(abs(s.l), abs(s.L)))
        return s, "table"
    if args.estimate_slopes is not None:
        if declared:
            raise UsageError("--estimate-slopes conflicts with --l/--L")
        if not args.accept_estimated:
            raise UsageError("estimated slopes are not certified; pass --accept-estimated to use them")
        est = estimate_slopes(f, iv, args.estimate_slopes)
        s = est.as_bounds()
        if rule == "lipschitz":
            s = SlopeBounds.from_lipschitz(max(abs(s.l), abs(s.L)))
        return s, "estimated"
    if rule == "lipschitz":
        if args.l is not None:
            raise UsageError("--rule lipschitz takes only --L")
        if args.L is None:
            raise UsageError("--rule lipschitz needs --L")
        return SlopeBounds.from_lipschitz(args.L), "declared"
    if rule == "lower":
        if args.l is None:
            raise UsageError("--rule lower needs --l")
        return SlopeBounds(args.l, max(args.l, args.L if args.L is not None else args.l)), "declared"
    if rule == "upper":
        if args.L is None:
            raise UsageError("--rule upper needs --L")
        return SlopeBounds(min(args.L, args.l if args.l is not None else args.L), args.L), "declared"
    if args.l is None or args.L is None:
        raise UsageError(f"--rule {rule} needs both --l and --L")
    return SlopeBounds(args.l, args.L), "declared"


def _slope_echo(s, origin, rule):
    out = {"origin": origin}
    if rule in ("midrange", "best", "lower"):
        out["l"] = s.l
    if rule in ("midrange", "best", "upper", "lipschitz"):
        out["L"] = s.L
    return out


def _cell_dict(c):
    return {
        "a": c.interval.a,
        "b": c.interval.b,
        "x": c.params.x,
        "h": c.params.h,
        "rule": c.rule.value,
        "value": c.value,
        "bound": c.bound,
        "secant": c.secant,
    }


# -- integrate -----------------------------------------------------------------

def _h_from_args(args) -> float:
    if args.rule_preset is not None:
        if args.h is not None:
            raise UsageError("--h conflicts with --rule-preset")
        return Preset(args.rule_preset).h
    return 0.5 if args.h is None else args.h


def _single(f, iv, p, s, rule):
    if rule == "best":
        return best_rule(f, iv, p, s)
    if rule == "lipschitz":
        return rule_lipschitz(f, iv, p, s.L)
    return rule_family(Rule(rule), f, iv, p, s)


def _composite(f, part, h, s, rule):
    if rule == "best":
        best = None
        for family in FAMILIES:
            cert = composite_general(f, part, h, s, family)
            if best is None or cert.bound < best.bound:
                best = cert
        return best
    return composite_general(f, part, h, s, Rule(rule))


def run_integrate(args):
    started = time.perf_counter()
    f, iv, source = _source(args)
    rule = args.rule
    s, origin = _slopes(args, f, iv, rule)
    h = _h_from_args(args)
    request = {
        "command": "integrate",
        "source": source,
        "interval": [iv.a, iv.b],
        "rule": rule,
        "h": h,
        "slopes": _slope_echo(s, origin, rule),
    }
    if args.cells is not None and args.tol is not None:
        raise UsageError("--cells and --tol are mutually exclusive")
    if args.cells is not None or args.tol is not None:
        if args.x is not None:
            raise UsageError("--x applies to single-interval rules only; composite cells use their midpoints")
        if args.cells is not None:
            part = Partition.uniform(iv, args.cells)
            cert = _composite(f, part, h, s, rule)
            request["partition"] = {"kind": "uniform", "cells": part.n}
        else:
            if rule not in ("midrange", "best") or h != 0.5:
                raise UsageError("--tol refines the midrange three-point rule; use --rule midrange and h = 0.5")
            part = adaptive_partition(f, iv, s, args.tol, args.max_cells)
            cert = composite_midrange(f, part, s)
            request["partition"] = {"kind": "adaptive", "cells": part.n, "tol": args.tol, "max_cells": args.max_cells}
        value, bound, cells, selected = cert.value, cert.bound, list(cert.cells), cert.family
    else:
        p = RuleParams.for_interval(iv, h, args.x)
        request["x"] = p.x
        est = _single(f, iv, p, s, rule)
        value, bound, cells, selected = est.value, est.bound, [est], est.rule
        request["partition"] = {"kind": "single", "cells": 1}

    oracle = error = None
    if args.verify:
        oracle_value = oracle_integral(f, iv, args.oracle_n) if not iv.degenerate else 0.0
        oracle = {"method": "composite-simpson", "n": args.oracle_n, "value": oracle_value}
        error = abs(value - oracle_value)
    return {
        "request": request,
        "value": value,
        "bound": bound,
        "cells": [_cell_dict(c) for c in cells],
        "oracle": oracle,
        "error": error,
        "meta": _meta(started, selected_rule=selected.value, certified=origin != "estimated"),
    }


def render_integrate(report, form: str) -> str:
    if form == "json":
        return to_json(report) + "\n"
    if form == "csv":
        rows = [
            [f"cell{i}", c["a"], c["b"], c["x"], c["h"], c["rule"], c["value"], c["bound"], c["secant"], None, None]
            for i, c in enumerate(report["cells"])
        ]
        oracle = report["oracle"]["value"] if report["oracle"] else None
        rows.append(["total", *report["request"]["interval"], None, report["request"]["h"],
                     report["meta"]["selected_rule"], report["value"], report["bound"], None, oracle, report["error"]])
        return _csv(rows, ["row", "a", "b", "x", "h", "rule", "value", "bound", "secant", "oracle", "error"])
    req = report["request"]
    lines = [
        f"integral over [{fmt(req['interval'][0])}, {fmt(req['interval'][1])}]",
        f"  rule    {report['meta']['selected_rule']} (h={fmt(req['h'])}, {req['partition']['kind']}, "
        f"{len(report['cells'])} cell{'s' if len(report['cells']) != 1 else ''})",
        f"  value   {report['value']!r}",
        f"  bound   {report['bound']!r}",
    ]
    if report["oracle"] is not None:
        lines.append(f"  oracle  {report['oracle']['value']!r}  (realized error {report['error']!r})")
    if not report["meta"]["certified"]:
        lines.append("  note    slopes were estimated; bound is heuristic, not certified")
    return "\n".join(lines) + "\n"


# -- prob ------------------------------------------------------------------------

def _density(args):
    return DensityModel(Interval(args.a, args.b), args.m, args.M, args.expectation)


def _constraint_dict(c):
    out = {"name": c.name, "lo": c.lo, "hi": c.hi, "center": c.center, "radius": c.radius}
    if c.published_radius is not None:
        out["published_radius"] = c.published_radius
    return out


def run_prob(args):
    started = time.perf_counter()
    dm = _density(args)
    request = {"command": f"prob {args.prob_cmd}", "interval": [args.a, args.b], "m": args.m, "M": args.M,
               "expectation": args.expectation}
    if args.prob_cmd == "cdf":
        x = dm.support.mid if args.x is None else args.x
        request.update(x=x, h=args.h)
        env = cdf_envelope(dm, x, args.h)
        cons = cdf_constraints(dm, x, args.h)
        return {"request": request, "envelope": {"lo": env.lo, "hi": env.hi},
                "constraints": [_constraint_dict(c) for c in cons], "meta": _meta(started)}
    if args.prob_cmd == "expectation":
        env = expectation_envelope(dm)
        cons = expectation_constraints(dm)
        return {"request": request, "envelope": {"lo": env.a, "hi": env.b},
                "constraints": [_constraint_dict(c) for c in cons], "meta": _meta(started)}
    request["pr"] = args.pr
    check = cdf_midpoint_check(dm, args.pr)
    return {"request": request,
            "checks": [{"name": r.name, "lhs": r.lhs, "rhs": r.rhs, "passed": r.passed} for r in check.rows],
            "passed": check.passed, "meta": _meta(started)}


def render_prob(report, form: str) -> str:
    if form == "json":
        return to_json(report) + "\n"
    if "checks" in report:
        rows = [[r["name"], r["lhs"], r["rhs"], r["passed"]] for r in report["checks"]]
        if form == "csv":
            return _csv(rows, ["inequality", "lhs", "rhs", "passed"])
        return "".join(f"{n:<9} |lhs| {lhs!r} <= {rhs!r}  {'ok' if ok else 'FAIL'}\n" for n, lhs, rhs, ok in rows)
    env = report["envelope"]
    if form == "csv":
        rows = [["envelope", env["lo"], env["hi"]]] + [[c["name"], c["lo"], c["hi"]] for c in report["constraints"]]
        return _csv(rows, ["constraint", "lo", "hi"])
    return f"[{env['lo']!r}, {env['hi']!r}]\n"


# -- sweep ---------------------------------------------------------------------

def run_sweep(args):
    f, iv, source = _source(args)
    s, origin = _slopes(args, f, iv, "midrange")
    if args.h_grid < 2 or args.x_grid < 1:
        raise UsageError("--h-grid needs at least 2 points and --x-grid at least 1")
    if iv.degenerate:
        raise UsageError("sweep needs an interval of positive width")
    oracle = oracle_integral(f, iv, args.oracle_n)
    rows = []
    for i in range(args.h_grid):
        h = i / (args.h_grid - 1)
        lo, hi = iv.admissible_range(h)
        if h == 1.0 or args.x_grid == 1:
            xs = [iv.mid]
        else:
            xs = [lo + (hi - lo) * j / (args.x_grid - 1) for j in range(args.x_grid)]
            if args.x_grid % 2:
                xs[args.x_grid // 2] = iv.mid
        for x in dict.fromkeys(xs):
            p = RuleParams.for_interval(iv, h, x)
            for family in FAMILIES:
                est = rule_family(family, f, iv, p, s)
                err = abs(est.value - oracle)
                ratio = est.bound / err if err > 0 else (math.inf if est.bound > 0 else None)
                rows.append(["row", h, x, family.value, est.value, est.bound, oracle, err, ratio])
    mid_bounds = []
    for i in range(args.h_grid):
        h = i / (args.h_grid - 1)
        est = rule_family(Rule.MIDRANGE, f, iv, RuleParams.for_interval(iv, h, iv.mid), s)
        mid_bounds.append((est.bound, h, est))
    best_bound, best_h, best = min(mid_bounds, key=lambda t: t[0])
    rows.append(["summary:min_midrange_bound_h", best_h, iv.mid, "midrange", best.value, best_bound, oracle,
                 abs(best.value - oracle), None])
    return rows, origin


SWEEP_HEADER = ["kind", "h", "x", "family", "value", "bound", "oracle", "error", "ratio"]


# -- entry point ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="certquad", description="Certified quadrature with rigorous error bounds.")
    parser.add_argument("--version", action="version", version=f"certquad {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    pi = sub.add_parser("integrate", help="integrate an expression or table with a certified bound")
    _add_source_args(pi)
    r = pi.add_argument_group("rule")
    r.add_argument("--rule", choices=["midrange", "lower", "upper", "lipschitz", "best"], default="midrange")
    r.add_argument("--h", type=float, help="endpoint weight in [0, 1] (default 0.5)")
    r.add_argument("--rule-preset", choices=[p.value for p in Preset], help="set h by name")
    r.add_argument("--x", type=float, help="evaluation point (default: midpoint)")
    r.add_argument("--cells", type=int, help="uniform composite rule on N cells")
    r.add_argument("--tol", type=float, help="adaptive refinement to this total bound")
    r.add_argument("--max-cells", type=int, default=4096, help="cell budget for --tol (default 4096)")
    pi.add_argument("--verify", action="store_true", help="also report a Simpson oracle and realized error")
    pi.add_argument("--oracle-n", type=int, default=10_000, help="oracle cells (even, default 10000)")
    pi.add_argument("--format", choices=["json", "csv", "text"], default="text")

    pp = sub.add_parser("prob", help="CDF and expectation envelopes for a bounded density")
    psub = pp.add_subparsers(dest="prob_cmd", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--a", type=float, required=True)
    common.add_argument("--b", type=float, required=True)
    common.add_argument("--m", type=float, required=True, help="density floor")
    common.add_argument("--M", type=float, required=True, help="density ceiling")
    common.add_argument("--expectation", type=float, help="E(X)")
    common.add_argument("--format", choices=["json", "csv", "text"], default="text")
    pc = psub.add_parser("cdf", parents=[common], help="envelope for Pr(X <= x)")
    pc.add_argument("--x", type=float)
    pc.add_argument("--h", type=float, default=0.5)
    psub.add_parser("expectation", parents=[common], help="envelope for E(X)")
    pm = psub.add_parser("midpoint-check", parents=[common], help="check a claimed Pr(X <= (a+b)/2)")
    pm.add_argument("--pr", type=float, required=True)

    ps = sub.add_parser("sweep", help="CSV table of bounds and realized errors over an (h, x) grid")
    _add_source_args(ps)
    ps.add_argument("--h-grid", type=int, default=11)
    ps.add_argument("--x-grid", type=int, default=5)
    ps.add_argument("--oracle-n", type=int, default=10_000)
    return parser


def _fail(code: int, kind: str, exc: Exception) -> int:
    print(f"certquad: error code={code} kind={kind} message={json.dumps(str(exc))}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "integrate":
            out = render_integrate(run_integrate(args), args.format)
        elif args.command == "prob":
            out = render_prob(run_prob(args), args.format)
        else:
            rows, _ = run_sweep(args)
            out = _csv(rows, SWEEP_HEADER)
    except SlopeConsistencyError as exc:
        return _fail(EXIT_SLOPE, "slope_consistency", exc)
    except BudgetExceededError as exc:
        return _fail(EXIT_BUDGET, "budget_exceeded", exc)
    except InconsistentInputsError as exc:
        return _fail(EXIT_INCONSISTENT, "inconsistent_inputs", exc)
    except (UsageError, DomainError, CertQuadError) as exc:
        return _fail(EXIT_INVALID, "invalid_input", exc)
    sys.stdout.write(out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
