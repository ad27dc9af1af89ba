"""Command line interface.

Exit codes: 0 success, 2 usage or domain error, 3 a side condition is
violated, 4 a verification failed.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Optional, Sequence

from mpmath import mp

from . import bounds as B
from .errors import (
    DomainError,
    FixtureError,
    IndexOutOfRangeError,
    InfeasibleBoxError,
    PrecisionUnreachableError,
    ZetaBoundsError,
)
from .numerics import CONSTANTS, PRECISION_ENV, CertifiedReal, PrecisionContext, stieltjes_constant, zeta_real
from .report import COLUMNS, FORMATS, render

EXIT_OK, EXIT_USAGE, EXIT_CONDITION, EXIT_VERIFY = 0, 2, 3, 4

OBJECTIVES = ("q_h", "q_rh", "q_one", "y0", "yprime0", "c0_strip", "c3")
PARAM_FLAGS = ("w", "d", "beta", "epsilon1", "sigma1", "eta", "t0", "sigma0", "epsilon", "d1", "kappa")


class UsageError(Exception):
    pass


def _common(p: argparse.ArgumentParser, top: bool) -> None:
    d = {} if top else {"default": argparse.SUPPRESS}
    p.add_argument("--format", choices=FORMATS, **({"default": "csv"} if top else d),
                   help="output format (default csv)")
    p.add_argument("--precision", type=int, **({"default": None} if top else d),
                   help=f"working digits (overrides ${PRECISION_ENV}; default 60)")
    p.add_argument("--seed", type=int, **({"default": 0} if top else d), help="optimizer seed")
    p.add_argument("--fixtures", **({"default": None} if top else d), help="published-table fixture file")
    p.add_argument("--tolerance", type=float, **({"default": 1e-2} if top else d),
                   help="relative tolerance for table checks")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zetabounds", description="Certified bounds for zeta, zeta'/zeta and 1/zeta.")
    _common(parser, True)
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", help="evaluate zeta and related quantities")
    _common(ev, False)
    ev.add_argument("what", choices=("zeta", "zeta-deriv", "zeta-real", "stieltjes"))
    ev.add_argument("--sigma", default=None)
    ev.add_argument("--t", default="0")
    ev.add_argument("--n", type=int, default=None, help="Stieltjes index")

    bd = sub.add_parser("bound", help="evaluate a bound constant at given parameters")
    _common(bd, False)
    bd.add_argument("objective", choices=OBJECTIVES)
    for name in PARAM_FLAGS:
        bd.add_argument(f"--{name.replace('_', '-')}", dest=name, default=None)
    bd.add_argument("--sigma-ge-1", action="store_true", help="reciprocal bounds with an empty ladder (sigma >= 1)")
    bd.add_argument("--ladder", default=None, help="explicit ladder 'W:Q,W:Q,...'")

    op = sub.add_parser("optimize", help="minimize a bound constant over its free parameters")
    _common(op, False)
    op.add_argument("objective", nargs="?", choices=tuple(o for o in OBJECTIVES if o != "c3"))
    op.add_argument("--config", default=None, help="INI problem file")
    op.add_argument("--fix", action="append", default=[], metavar="NAME=VALUE")
    op.add_argument("--box", action="append", default=[], metavar="NAME=LO,HI")
    op.add_argument("--starts", type=int, default=None)

    vf = sub.add_parser("verify", help="run a verification suite")
    _common(vf, False)
    vf.add_argument("suite", choices=("tables", "small-t", "phi", "invariants"))

    tb = sub.add_parser("table", help="reproduce a published table")
    _common(tb, False)
    tb.add_argument("table_id", choices=("Q", "QRH", "Y", "Yprime", "B1", "SIGMA1"))
    tb.add_argument("--optimize", action="store_true", help="also rerun the optimizer for every row")
    tb.add_argument("--starts", type=int, default=None)
    return parser


def _ctx(args) -> PrecisionContext:
    if args.precision is not None:
        return PrecisionContext(args.precision)
    return PrecisionContext.from_env()


def _num(text: str):
    from .tables import parse_value

    if text in ("floor", "from-w"):
        return text
    return parse_value(text)


def _cr(x: CertifiedReal) -> dict:
    return {"mid": x.mid, "rad": x.rad, "lower": x.lower, "upper": x.upper}


# -- eval ---------------------------------------------------------------------


def cmd_eval(args, ctx) -> tuple[list[dict], tuple, int]:
    from .zeta_eval import em_zeta, em_zeta_deriv

    rows = []
    if args.what == "stieltjes":
        if args.n is None:
            raise UsageError("eval stieltjes needs --n")
        rows.append({"quantity": f"gamma_{args.n}", **_cr(stieltjes_constant(args.n, ctx))})
    else:
        if args.sigma is None:
            raise UsageError(f"eval {args.what} needs --sigma")
        sigma, t = _num(args.sigma), _num(args.t)
        if args.what == "zeta-real":
            if t != 0:
                raise UsageError("zeta-real takes no --t")
            rows.append({"quantity": "zeta", **_cr(zeta_real(sigma, ctx))})
        else:
            f = em_zeta if args.what == "zeta" else em_zeta_deriv
            z = f((sigma, t), ctx)
            lo, hi = z.modulus(ctx)
            rows.append({"quantity": "re", **_cr(z.re)})
            rows.append({"quantity": "im", **_cr(z.im)})
            with ctx.working():
                mid, rad = (lo + hi) / 2, (hi - lo) / 2
            rows.append({"quantity": "modulus", "mid": mid, "rad": rad, "lower": lo, "upper": hi})
    return rows, COLUMNS["eval"], EXIT_OK


# -- bound --------------------------------------------------------------------


def _row_defaults(args, table: str, key: Optional[str]) -> dict:
    from .tables import find_row, load_fixture

    if key is None:
        return {}
    row = find_row(table, key, load_fixture(args.fixtures))
    return dict(row.params)


def _params(args, defaults: dict, names: Sequence[str]) -> dict:
    out = {}
    for n in names:
        flag = getattr(args, n, None)
        text = flag if flag is not None else defaults.get(n)
        if text is None:
            raise UsageError(f"missing --{n.replace('_', '-')}")
        out[n] = _num(text)
    return out


def _bound_records(b, extra: Optional[dict] = None) -> list[dict]:
    recs = [
        {"item": "value", "value": b.value.mid, "detail": f"radius {mp.nstr(b.value.rad, 3)}"},
        {"item": "upper", "value": b.value.upper},
        {"item": "form", "value": b.form},
        {"item": "region", "value": b.region.describe()},
    ]
    for k, v in (extra or {}).items():
        recs.append({"item": k, "value": v})
    for i, br in enumerate(b.branches):
        recs.append({"item": f"branch{i + 1}", "value": br.mid, "detail": "selected" if i == b.selected else ""})
    for cnd in b.conditions.items:
        recs.append({"item": f"condition:{cnd.id}", "margin": cnd.margin, "satisfied": cnd.satisfied,
                     "detail": cnd.detail})
    return recs


def _ladder_for(args, w) -> B.LadderTable:
    from .optimizer import _parse_ladder
    from .tables import load_fixture, q_ladder

    if args.sigma_ge_1:
        return B.LadderTable()
    if args.ladder:
        return _parse_ladder(args.ladder)
    if w is None:
        raise UsageError("give --w (ladder from the Q table), --ladder or --sigma-ge-1")
    return q_ladder(load_fixture(args.fixtures)).restrict(w)


def cmd_bound(args, ctx) -> tuple[list[dict], tuple, int]:
    obj = args.objective
    extra = {}
    if obj == "c3":
        t0 = _num(args.t0 or "13")
        v = B.c3(t0, ctx)
        rows = [{"item": "c3", "value": v.mid, "detail": f"radius {mp.nstr(v.rad, 3)}"}]
        return rows, COLUMNS["bound"], EXIT_OK
    if obj == "q_h":
        key = f"W={args.w}" if args.w is not None else None
        try:
            defaults = _row_defaults(args, "Q", key)
        except FixtureError:
            # W off the published grid: beta is solved from W
            defaults = {"d": "1/W0", "t0": "H", "beta": "from-w"}
        p = _params(args, defaults, ("d", "beta", "epsilon1", "sigma1", "eta", "t0"))
        if p["beta"] == "from-w":
            p["beta"] = B.beta_for_w(_num(args.w), p["d"], p["epsilon1"], p["t0"], ctx)
        elif p["beta"] == "floor":
            p["beta"] = B.beta_floor(p["epsilon1"], p["t0"], ctx)
        W, b = B.q_h(B.HParams(**p), ctx)
        extra["W"] = W
    elif obj == "q_rh":
        key = f"sigma0={args.sigma0}" if args.sigma0 is not None else None
        p = _params(args, _row_defaults(args, "QRH", key), ("epsilon", "sigma1", "eta", "t0"))
        if args.sigma0 is None:
            raise UsageError("missing --sigma0")
        b = B.q_rh(B.RhParams.from_sigma0(_num(args.sigma0), **p), ctx)
    elif obj == "q_one":
        defaults = {"d": "1/W0", "t0": "H"}
        p = _params(args, defaults, ("d", "epsilon1", "sigma1", "eta", "t0"))
        b = B.q_one(p["d"], p["epsilon1"], p["sigma1"], p["eta"], p["t0"], ctx)
    elif obj in ("y0", "yprime0"):
        table = "Y" if obj == "y0" else "Yprime"
        if args.sigma_ge_1:
            defaults = _row_defaults(args, "SIGMA1", obj)
        else:
            defaults = _row_defaults(args, table, f"W={args.w}" if args.w is not None else None)
        ladder = _ladder_for(args, _num(args.w) if args.w is not None else None)
        if obj == "y0":
            p = _params(args, defaults, ("d1", "sigma1", "eta", "t0"))
            b = B.y0(B.ReciprocalParams(p["d1"], p["sigma1"], p["eta"], p["t0"], ladder), ctx)
        else:
            p = _params(args, defaults, ("d1", "t0"))
            b = B.yprime0(B.ReciprocalParams(p["d1"], t0=p["t0"], ladder=ladder, asymptotic=True), ctx)
    else:  # c0_strip
        defaults = {"w": "W0", "sigma1": "1"}
        if args.t0 is not None:
            try:
                defaults.update(_row_defaults(args, "B1", f"t0={args.t0}"))
            except FixtureError:
                pass
        p = _params(args, {**defaults, "w": defaults.get("W", defaults["w"])}, ("w", "sigma1", "t0", "eta"))
        sb = B.c0_strip(p["w"], p["sigma1"], p["t0"], p["eta"], ctx)
        rows = [
            {"item": "main", "value": sb.main.mid, "detail": f"radius {mp.nstr(sb.main.rad, 3)}"},
            {"item": "const", "value": sb.const.mid, "detail": f"radius {mp.nstr(sb.const.rad, 3)}"},
        ]
        return rows, COLUMNS["bound"], EXIT_OK
    code = EXIT_OK if b.ok else EXIT_CONDITION
    return _bound_records(b, extra), COLUMNS["bound"], code


# -- optimize -----------------------------------------------------------------


def cmd_optimize(args, ctx) -> tuple[list[dict], tuple, int]:
    from .optimizer import DEFAULT_STARTS, OptimizationProblem, _parse_ladder, describe_params, load_problem, optimize

    if args.config:
        prob = load_problem(args.config, seed=args.seed)
        if args.starts is not None:
            prob = OptimizationProblem(prob.objective_id, prob.fixed, prob.box, prob.constraints, prob.seed, args.starts)
    else:
        if not args.objective:
            raise UsageError("give an objective or --config")
        fixed, box = {}, {}
        for item in args.fix:
            name, _, val = item.partition("=")
            if not val:
                raise UsageError(f"bad --fix {item!r}")
            fixed[name] = _parse_ladder(val) if name == "ladder" else _num(val)
        if args.objective in ("y0", "yprime0") and "ladder" not in fixed and "W" in fixed:
            from .tables import load_fixture, q_ladder

            fixed["ladder"] = q_ladder(load_fixture(args.fixtures)).restrict(fixed.pop("W"))
        for item in args.box:
            name, _, rng = item.partition("=")
            lo, _, hi = rng.partition(",")
            if not hi:
                raise UsageError(f"bad --box {item!r}")
            box[name] = (_num(lo), _num(hi))
        prob = OptimizationProblem(args.objective, fixed, box, None, args.seed, args.starts or DEFAULT_STARTS)
    res = optimize(prob, ctx)
    recs = [{"item": "value", "value": res.value.mid, "detail": f"radius {mp.nstr(res.value.rad, 3)}"},
            {"item": "evaluations", "value": res.evaluations},
            {"item": "doubled_precision_rel_change", "value": res.doubled_rel_change}]
    for k, v in describe_params(res.best).items():
        recs.append({"item": f"param:{k}", "value": v})
    for cnd in res.report.items:
        recs.append({"item": f"condition:{cnd.id}", "margin": cnd.margin, "satisfied": cnd.satisfied, "detail": cnd.detail})
    return recs, COLUMNS["optimize"], EXIT_OK if res.report.all_satisfied else EXIT_CONDITION


# -- verify / table -----------------------------------------------------------


def cmd_verify(args, ctx) -> tuple[list[dict], tuple, int]:
    from .verify import run_suite

    checks = run_suite(args.suite, ctx, args.tolerance, args.fixtures)
    recs = [{"suite": c.suite, "check": c.id, "passed": c.passed, "achieved": c.achieved, "required": c.required,
             "detail": c.detail} for c in checks]
    return recs, COLUMNS["verify"], EXIT_OK if all(c.passed for c in checks) else EXIT_VERIFY


def cmd_table(args, ctx) -> tuple[list[dict], tuple, int]:
    from .tables import reproduce_table

    rep = reproduce_table(args.table_id, ctx, tolerance=args.tolerance, optimize=args.optimize,
                          fixture=args.fixtures, seed=args.seed, starts=args.starts)
    recs = []
    for r in rep.rows:
        recs.append({
            "table": r.table_id, "row": r.key, "published": r.published,
            "recomputed": r.recomputed.mid if r.recomputed is not None else None,
            "rel_diff": r.rel_diff, "tolerance": r.tolerance, "within": r.within, "conditions_ok": r.conditions_ok,
            "optimized": r.optimized.mid if r.optimized is not None else None,
            "improvement": r.improvement,
            "notes": ";".join(f"{k}={v}" for k, v in r.notes.items()),
        })
    return recs, COLUMNS["table"], EXIT_OK if rep.passed else EXIT_VERIFY


COMMANDS = {"eval": cmd_eval, "bound": cmd_bound, "optimize": cmd_optimize, "verify": cmd_verify, "table": cmd_table}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        ctx = _ctx(args)
        recs, cols, code = COMMANDS[args.command](args, ctx)
    except (UsageError, DomainError, FixtureError, IndexOutOfRangeError, PrecisionUnreachableError) as exc:
        print(f"zetabounds: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InfeasibleBoxError as exc:
        print(f"zetabounds: {exc}", file=sys.stderr)
        return EXIT_CONDITION
    except ZetaBoundsError as exc:
        print(f"zetabounds: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    sys.stdout.write(render(recs, cols, args.format))
    if code == EXIT_CONDITION:
        print("zetabounds: side condition violated", file=sys.stderr)
    elif code == EXIT_VERIFY:
        print("zetabounds: verification failed", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
