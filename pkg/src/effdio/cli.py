"""Command-line front end. Every command prints exactly one JSON document."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from . import bounds as B
from .analytic import stable_faltings_height
from .arith import DEFAULT_PREC, PrimeSet, as_rational, format_rational, is_s_unit
from .elliptic import WeierstrassModel, conductor, invariants
from .errors import DomainError, EffdioError, SearchBudgetExceeded
from .parshin import MordellSolution, SUnitSolution, frey_conductor_check, frey_curve, mordell_conductor_check, mordell_curve
from .solvers import DEFAULT_BUDGET, recheck, solve_mordell, solve_sunit, solve_thue

PRECISION_ENV = "EFFDIO_PRECISION"
CHECK_FAILED_EXIT = 1

log = logging.getLogger("effdio")


# ---------------------------------------------------------------- bounds table


def _bounds_table():
    """name -> (callable taking parsed args, argument names, member names)."""
    return {
        "sunit-height": (lambda a, p: B.sunit_height_bound(a.args[0], prec=p), ["S"], ["n_S", "sunit_height", "sunit_exponent"]),
        "sunit-count": (lambda a, p: B.sunit_count_bound(a.args[0]), ["S"], ["sunit_count"]),
        "mordell-height": (lambda a, p: B.mordell_height_bound(a.args[0], a.args[1], prec=p), ["a", "S"], ["r2", "a_S", "mordell_height"]),
        "mordell-count": (lambda a, p: B.mordell_count_bound(a.args[0], a.args[1]), ["a", "S"], ["mordell_count"]),
        "shafarevich": (
            lambda a, p: B.shafarevich_bounds(a.args[0], prec=p),
            ["S"],
            ["nu_S", "shafarevich_model_height", "shafarevich_count", "moduli_height", "moduli_count"],
        ),
        "modular": (
            lambda a, p: B.modular_bounds(_int(a.args[0]), prec=p),
            ["N"],
            [
                "index_d",
                "genus",
                "divisor_degree",
                "l",
                "log_modular_degree",
                "modular_degree_refined",
                "faltings_height_J0",
                "faltings_height_J1",
                "faltings_height_J",
            ],
        ),
        "height-conductor": (
            lambda a, p: B.height_conductor_bound(_int(a.args[0]), prec=p),
            ["N_E"],
            ["faltings_height", "log_discriminant", "faltings_height_polynomial"],
        ),
        "gl2": (
            lambda a, p: B.gl2_bounds(
                _int(a.args[0]),
                a.args[1],
                N_A=_opt_int(a.n_a),
                h_F=a.h_f,
                d=_int(a.d),
                isogeny_degree=_opt_int(a.deg),
                prec=p,
            ),
            ["g", "S"],
            [
                "rho",
                "nu_0",
                "effective_shafarevich",
                "precise_height",
                "semistable_height",
                "isogeny_degree",
                "isogeny_height_difference",
                "isomorphism_classes",
                "isogenous_varieties",
                "isogeny_classes",
                "conductor_divisor",
                "isogeny_class_height_variation",
                "semistable_leading_constant",
                "semistable_leading_constant_good_23",
                "bost_lower_bound",
                "gl2_height",
                "isogeny_height_difference_transcendental",
                "isogeny_degree_height_difference",
            ],
        ),
        "kappa": (
            lambda a, p: B.kappa(_int(a.args[0]), _int(a.args[1]), a.args[2], _int(a.args[3]), prec=p),
            ["D_K", "d", "R_K", "r_K"],
            [],
        ),
        "number-field": (
            lambda a, p: B.number_field_parshin_bounds(*[_int(x) for x in a.args], prec=p),
            ["d", "D_K", "h_K", "N_T", "[N_S]", "[r2]"],
            ["frey_conductor", "legendre_conductor", "mordell_conductor", "mordell_conductor_explicit"],
        ),
        "conductor-exponent": (
            lambda a, p: B.conductor_exponent_value(_int(a.args[0]), _int(a.args[1]), _int(a.args[2])),
            ["g", "p", "e_v"],
            [],
        ),
        "pellarin": (lambda a, p: B.pellarin_bound(a.args[0], prec=p), ["h_F"], []),
        "bost": (lambda a, p: B.bost_lower_bound(_int(a.args[0]) if a.args else 1, prec=p), ["[g]"], []),
    }


def _int(s) -> int:
    try:
        return int(s)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"expected an integer, got {s!r}") from exc


def _opt_int(s):
    return None if s is None else _int(s)


def _run_bounds(a, prec):
    table = _bounds_table()
    name = a.name
    member = None
    if name not in table:
        for group, (_, _, members) in table.items():
            if name in members:
                name, member = group, a.name
                break
        else:
            raise DomainError(f"unknown bound {a.name!r}; known: {', '.join(sorted(table))}")
    fn, argnames, _ = table[name]
    needed = [n for n in argnames if not n.startswith("[")]
    if len(a.args) < len(needed) or len(a.args) > len(argnames):
        raise DomainError(f"{name} expects arguments: {' '.join(argnames)}")
    out = fn(a, prec)
    if member is not None:
        return out[member].to_json()
    return out.to_json()


# ---------------------------------------------------------------- curve commands


def _invariants_json(W) -> dict:
    inv = invariants(W)
    return {k: format_rational(getattr(inv, k)) for k in ("b2", "b4", "b6", "b8", "c4", "c6", "disc", "j")}


def _run_curve(a, prec):
    W = WeierstrassModel.of(a.ainvs)
    want_all = not (a.invariants or a.conductor or a.heights)
    out = {"model": W.to_json()}
    if a.invariants or want_all:
        out["invariants"] = _invariants_json(W)
    if a.conductor or want_all:
        out.update(conductor(W).to_json())
    if a.heights or want_all:
        out["heights"] = stable_faltings_height(W, prec).to_json()
    return out


def _run_frey(a, prec):
    lam = as_rational(a.lam)
    W = frey_curve(lam)
    out = {"lambda": format_rational(lam), "model": W.to_json(), "invariants": _invariants_json(W)}
    out.update(conductor(W).to_json())
    if a.S is not None:
        S = PrimeSet.of(a.S)
        if not (is_s_unit(lam, S) and is_s_unit(1 - lam, S)):
            raise DomainError(f"{format_rational(lam)} and {format_rational(1 - lam)} are not both S-units")
        out["frey_check"] = frey_conductor_check(SUnitSolution(lam, 1 - lam), S).to_json()
    return out


def _run_mordell_curve(a, prec):
    sol = MordellSolution(as_rational(a.x), as_rational(a.y), as_rational(a.a))
    W = mordell_curve(sol)
    out = {"solution": sol.to_json(), "a": format_rational(sol.a), "model": W.to_json(), "invariants": _invariants_json(W)}
    out["mordell_check"] = mordell_conductor_check(sol, PrimeSet.of(a.S)).to_json()
    return out


# ---------------------------------------------------------------- solvers


def _finish_solver(cert, a):
    doc = cert.to_json()
    status = 0
    if a.paper_check:
        ok = recheck(cert)
        doc["paper_check"] = {"passed": ok}
        if not ok:
            status = CHECK_FAILED_EXIT
    log.info("wall time %.3fs", cert.wall_time)
    return doc, status


def _run_sunit(a, prec):
    return _finish_solver(solve_sunit(a.S, a.ceiling, budget=a.budget, jobs=a.jobs), a)


def _run_mordell(a, prec):
    return _finish_solver(solve_mordell(a.a, a.S, a.ceiling, budget=a.budget, jobs=a.jobs), a)


def _run_thue(a, prec):
    coeffs = [_int(t) for t in a.coeffs.strip().strip("[]").split(",")]
    return _finish_solver(solve_thue(coeffs, _int(a.m), a.ceiling, budget=a.budget, jobs=a.jobs), a)


# ---------------------------------------------------------------- parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(2)


def build_parser() -> argparse.ArgumentParser:
    def common(parser, top):
        d = (lambda v: v) if top else (lambda v: argparse.SUPPRESS)
        parser.add_argument("--precision", type=int, default=d(None), help=f"working precision in bits (default ${PRECISION_ENV} or {DEFAULT_PREC})")
        parser.add_argument("--format", choices=["json", "table"], default=d("json"))
        parser.add_argument("--verbose", action="store_true", default=d(False), help="log progress to stderr")

    p = _Parser(prog="effdio", description="Explicit bounds and bounded solvers for S-unit, Mordell and Thue equations.")
    common(p, True)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _add = sub.add_parser

    def add_parser(*args, **kw):
        sp = _add(*args, **kw)
        common(sp, False)
        return sp

    sub.add_parser = add_parser

    b = sub.add_parser("bounds", help="evaluate an explicit bound or a group of bounds")
    b.add_argument("name")
    b.add_argument("args", nargs="*")
    b.add_argument("--N-A", dest="n_a")
    b.add_argument("--h-F", dest="h_f")
    b.add_argument("--d", default="1")
    b.add_argument("--deg")
    b.set_defaults(run=_run_bounds)

    c = sub.add_parser("curve", help="invariants, conductor and heights of a Weierstrass model")
    c.add_argument("ainvs", help="a1,a2,a3,a4,a6 or A,B for y^2 = x^3 + Ax + B")
    c.add_argument("--invariants", action="store_true")
    c.add_argument("--conductor", action="store_true")
    c.add_argument("--heights", action="store_true")
    c.set_defaults(run=_run_curve)

    f = sub.add_parser("frey", help="the Legendre curve y^2 = x(x-1)(x-lambda)")
    f.add_argument("lam", metavar="lambda")
    f.add_argument("--S", default=None, help="run the conductor check for this prime set")
    f.set_defaults(run=_run_frey)

    m = sub.add_parser("mordell-curve", help="the curve attached to a point on y^2 = x^3 + a")
    m.add_argument("x")
    m.add_argument("y")
    m.add_argument("a")
    m.add_argument("--S", default="")
    m.set_defaults(run=_run_mordell_curve)

    def solver_flags(sp, default_ceiling):
        sp.add_argument("--ceiling", default=default_ceiling, help='"paper", a decimal, or log(N)')
        sp.add_argument("--jobs", type=int, default=1)
        sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
        sp.add_argument("--paper-check", action="store_true", help="re-run all conformance checks; exit 1 on violation")

    s = sub.add_parser("sunit", help="solve x + y = 1 in S-units")
    s.add_argument("S")
    solver_flags(s, "paper")
    s.set_defaults(run=_run_sunit)

    mo = sub.add_parser("mordell", help="solve y^2 = x^3 + a in Z[1/N_S]")
    mo.add_argument("a")
    mo.add_argument("S", nargs="?", default="")
    solver_flags(mo, "paper")
    mo.set_defaults(run=_run_mordell)

    t = sub.add_parser("thue", help="solve f(u, v) = m for a cubic form f")
    t.add_argument("coeffs", help="p,q,r,s for p u^3 + q u^2 v + r u v^2 + s v^3")
    t.add_argument("m")
    solver_flags(t, "log(1000)")
    t.set_defaults(run=_run_thue)
    return p


def _precision(a) -> int:
    if a.precision is not None:
        bits = a.precision
    else:
        env = os.environ.get(PRECISION_ENV)
        if env is None:
            return DEFAULT_PREC
        try:
            bits = int(env)
        except ValueError as exc:
            raise DomainError(f"{PRECISION_ENV} must be an integer") from exc
    if bits < 64:
        raise DomainError("precision must be at least 64 bits")
    return bits


def _flatten(doc, prefix=""):
    if isinstance(doc, dict):
        for k, v in doc.items():
            yield from _flatten(v, f"{prefix}{k}.")
    elif isinstance(doc, list):
        for i, v in enumerate(doc):
            yield from _flatten(v, f"{prefix}{i}.")
    else:
        yield prefix[:-1], doc


def _emit(doc, fmt):
    if fmt == "table":
        rows = list(_flatten(doc))
        width = max((len(k) for k, _ in rows), default=0)
        text = "\n".join(f"{k.ljust(width)}  {json.dumps(v) if not isinstance(v, str) else v}" for k, v in rows)
        sys.stdout.write(text + "\n")
    else:
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")


def main(argv=None) -> int:
    parser = build_parser()
    a = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING, stream=sys.stderr, format="%(name)s: %(message)s")
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(0)
    try:
        prec = _precision(a)
        result = a.run(a, prec)
    except SearchBudgetExceeded as exc:
        doc = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        if exc.partial is not None:
            doc["partial"] = exc.partial.to_json()
        _emit(doc, a.format)
        sys.stderr.write(f"effdio: {exc}\n")
        return exc.exit_code
    except EffdioError as exc:
        _emit({"error": {"type": type(exc).__name__, "message": str(exc)}}, a.format)
        sys.stderr.write(f"effdio: {exc}\n")
        return exc.exit_code
    if isinstance(result, tuple):
        doc, status = result
    else:
        doc, status = result, 0
    _emit(doc, a.format)
    return status


if __name__ == "__main__":
    sys.exit(main())
