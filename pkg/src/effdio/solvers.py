"""Bounded enumeration for S-unit, Mordell and cubic Thue equations.

Each solver returns a SolutionCertificate recording the search ceiling, the
explicit height bound that would make the search complete, and the result of
the conductor and conformance checks run on every solution.
"""

from __future__ import annotations

import logging
import math
import re
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import mpmath

from .arith import PrimeSet, as_rational, format_rational, height_int, is_s_unit, strip_primes
from .bounds import (
    BoundValue,
    format_decimal,
    mordell_count_bound,
    mordell_height_bound,
    round_decimal,
    sunit_count_bound,
    sunit_height_bound,
)
from .errors import DomainError, SearchBudgetExceeded
from .parshin import (
    CubicForm,
    MordellSolution,
    SUnitSolution,
    frey_conductor_check,
    integer_roots_cubic,
    mordell_conductor_check,
    thue_target,
    thue_to_mordell,
)

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 10**9
PARTIAL_BUDGET = 10**6
CROSS_CHECK_LIMIT = 10**5
_SIG = 40
# boxes above this ceiling are left out of JSON (thousands of digits)
BOX_JSON_LOG_LIMIT = 2000


# ---------------------------------------------------------------- ceilings


@dataclass(frozen=True)
class Ceiling:
    """A height ceiling C, with the integer box X = floor(exp(C))."""

    label: str
    log_value: Fraction
    exact_box: int | None = None

    @cached_property
    def box(self) -> int:
        if self.exact_box is not None:
            return self.exact_box
        return _floor_exp(self.log_value)

    def to_json(self) -> dict:
        out = {"input": self.label, "log_value": format_decimal(self.log_value)}
        if self.exact_box is not None or self.log_value < BOX_JSON_LOG_LIMIT:
            out["box"] = str(self.box)
        return out


def _floor_exp(C: Fraction) -> int:
    if C < 0:
        return 0
    bits = int(C * 2) + 160
    with mpmath.workprec(bits):
        v = mpmath.exp(mpmath.mpf(C.numerator) / C.denominator)
        n = int(mpmath.nint(v))
        if abs(v - n) <= v * mpmath.mpf(2) ** -100:
            return n
        return int(mpmath.floor(v))


def _log_up(n: int) -> Fraction:
    with mpmath.workprec(200):
        v = mpmath.log(n)
        p, q = mpmath.libmp.to_rational(v._mpf_)
    return round_decimal(Fraction(int(p), int(q)), _SIG)


_LOG_RE = re.compile(r"^\s*log\(\s*(\d+)\s*\)\s*$")


def make_ceiling(requested, paper_bound: BoundValue | None) -> Ceiling:
    """Accepts "paper", "log(N)", a decimal string, an int or a Fraction."""
    if isinstance(requested, Ceiling):
        return requested
    if isinstance(requested, str):
        s = requested.strip()
        if s == "paper":
            if paper_bound is None or paper_bound.value is None:
                raise DomainError("no finite explicit bound is available for this equation")
            return Ceiling("paper", paper_bound.value)
        m = _LOG_RE.match(s)
        if m:
            n = int(m.group(1))
            if n < 1:
                raise DomainError("log(N) needs N >= 1")
            return Ceiling(s, _log_up(n) if n > 1 else Fraction(0), n)
        try:
            value = Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"bad ceiling {requested!r}") from exc
        label = s
    elif isinstance(requested, (int, Fraction)) and not isinstance(requested, bool):
        value = Fraction(requested)
        label = format_rational(value)
    elif isinstance(requested, float):
        value = Fraction(requested)
        label = repr(requested)
    else:
        raise DomainError(f"bad ceiling {requested!r}")
    if value < 0:
        raise DomainError("ceiling must be nonnegative")
    return Ceiling(label, value)


# ---------------------------------------------------------------- certificates


@dataclass
class SolutionCertificate:
    equation: dict
    solutions: list
    mode: str
    ceiling: Ceiling
    paper_bound: BoundValue | None
    count_bound: BoundValue | None
    checks_passed: bool
    checks: dict = field(default_factory=dict)
    details: list = field(default_factory=list)
    candidates: int = 0
    requested_ceiling: Ceiling | None = None
    wall_time: float = 0.0

    def to_json(self) -> dict:
        out = {
            "equation": self.equation,
            "mode": self.mode,
            "ceiling": self.ceiling.to_json(),
            "paper_bound": self.paper_bound.to_json() if self.paper_bound else None,
            "count_bound": self.count_bound.to_json() if self.count_bound else None,
            "solution_count": str(len(self.solutions)),
            "solutions": [s.to_json() if hasattr(s, "to_json") else [str(t) for t in s] for s in self.solutions],
            "checks_passed": self.checks_passed,
            "checks": self.checks,
            "details": self.details,
            "candidates": str(self.candidates),
        }
        if self.requested_ceiling is not None:
            out["requested_ceiling"] = self.requested_ceiling.to_json()
        return out

    def pairs(self) -> set:
        return {(s.x, s.y) for s in self.solutions}


def _within(value_int: int, bound: BoundValue | None) -> bool:
    """log(value_int) <= bound, decided with a safety margin on the log."""
    if bound is None:
        return True
    if bound.value is None:
        return True
    if value_int <= 1:
        return 0 <= bound.value
    with mpmath.workprec(128):
        return mpmath.log(value_int) <= mpmath.mpf(bound.value.numerator) / bound.value.denominator


def _run_chunks(fn, tasks, jobs: int):
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, tasks))


def _split_range(lo: int, hi: int, parts: int):
    n = hi - lo + 1
    parts = max(1, min(parts, n))
    step = -(-n // parts)
    return [(a, min(hi, a + step - 1)) for a in range(lo, hi + 1, step)]


def _largest_box(estimate, limit: int) -> int:
    """Largest integer X >= 1 with estimate(log X) <= limit."""
    lo, hi = 1, 2
    while hi < 10**15 and estimate(math.log(hi)) <= limit:
        lo, hi = hi, hi * 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if estimate(math.log(mid)) <= limit:
            lo = mid
        else:
            hi = mid
    return lo


# ---------------------------------------------------------------- S-unit equations


def _sunit_estimate(primes, C: float) -> float:
    out = 2.0
    for p in primes:
        out *= 2 * math.floor(C / math.log(p)) + 1
    return out


def _sunit_chunk(task):
    primes, X, lo, hi = task
    found = []
    tested = 0

    def rest(i, num, den):
        nonlocal tested
        if i == len(primes):
            for sign in (1, -1):
                tested += 1
                x = Fraction(sign * num, den)
                y = 1 - x
                if y == 0:
                    continue
                if abs(y.numerator) <= X and strip_primes(y.numerator, primes) == 1:
                    found.append(x)
            return
        p = primes[i]
        n = num
        while n <= X:
            rest(i + 1, n, den)
            n *= p
        d = den * p
        while d <= X:
            rest(i + 1, num, d)
            d *= p

    if not primes:
        rest(0, 1, 1)
        return found, tested
    p = primes[0]
    for e in range(lo, hi + 1):
        if e >= 0:
            num, den = p**e, 1
        else:
            num, den = 1, p ** (-e)
        if num <= X and den <= X:
            rest(1, num, den)
    return found, tested


def _sunit_key(s):
    return (height_int(s.x), s.x, s.y)


def solve_sunit(
    S,
    ceiling="paper",
    budget: int = DEFAULT_BUDGET,
    partial_budget: int = PARTIAL_BUDGET,
    jobs: int = 1,
    strict: bool = True,
) -> SolutionCertificate:
    """All ordered S-unit pairs x + y = 1 with h(x), h(y) <= ceiling."""
    t0 = time.perf_counter()
    S = PrimeSet.of(S)
    hb = sunit_height_bound(S)
    paper = hb["sunit_height"]
    count = sunit_count_bound(S)
    C = make_ceiling(ceiling, paper)
    est = _sunit_estimate(S.primes, float(C.log_value))
    if est > budget:
        X2 = _largest_box(lambda c: _sunit_estimate(S.primes, c), partial_budget)
        part = solve_sunit(S, f"log({X2})", budget, partial_budget, jobs)
        part.mode = "bounded"
        part.requested_ceiling = C
        msg = f"search box of about {est:.3g} candidates exceeds the budget {budget}"
        if strict:
            raise SearchBudgetExceeded(msg, part)
        return part
    X = C.box
    primes = S.primes
    if primes:
        E = 0
        while primes[0] ** (E + 1) <= X:
            E += 1
        tasks = [(primes, X, a, b) for a, b in _split_range(-E, E, max(1, jobs) * 4)]
    else:
        tasks = [((), X, 0, 0)]
    results = _run_chunks(_sunit_chunk, tasks, jobs)
    xs = set()
    tested = 0
    for found, n in results:
        xs.update(found)
        tested += n
    sols = sorted((SUnitSolution(x, 1 - x) for x in xs), key=_sunit_key)
    cert = SolutionCertificate(
        equation={"type": "sunit", "S": S.label()},
        solutions=sols,
        mode="certified_complete" if C.log_value >= paper.value else "bounded",
        ceiling=C,
        paper_bound=paper,
        count_bound=count,
        checks_passed=False,
        candidates=tested,
    )
    _check_sunit(cert, S)
    cert.wall_time = time.perf_counter() - t0
    log.info("sunit S=%s: %d solutions in %.2fs", S.label(), len(sols), cert.wall_time)
    return cert


def _check_sunit(cert: SolutionCertificate, S: PrimeSet):
    sols = cert.solutions
    pairs = cert.pairs()
    X = cert.ceiling.box
    checks = {
        "equation": all(s.x + s.y == 1 and is_s_unit(s.x, S) and is_s_unit(s.y, S) for s in sols),
        "within_ceiling": all(height_int(s.x) <= X and height_int(s.y) <= X for s in sols),
        "symmetry": all((y, x) in pairs for x, y in pairs),
        "count_bound": len(sols) <= cert.count_bound.value,
        "paper_bound": all(_within(height_int(s.x), cert.paper_bound) and _within(height_int(s.y), cert.paper_bound) for s in sols),
    }
    cond = []
    if sols:
        if 2 in S:
            for s in sols:
                r = frey_conductor_check(s, S)
                cond.append({"x": format_rational(s.x), **r.to_json()})
            checks["frey_conductor"] = all(c["ok"] for c in cond)
        else:
            checks["frey_conductor"] = False
    cert.checks = checks
    cert.details = cond
    cert.checks_passed = all(checks.values())


# ---------------------------------------------------------------- Mordell equations


def _smooth_numbers(primes, X: int) -> list:
    out = [1]
    for p in primes:
        new = []
        for d in out:
            while d <= X:
                new.append(d)
                d *= p
        out = new
    return sorted(out)


def _smooth_count_estimate(primes, C: float) -> float:
    out = 1.0
    for p in primes:
        out *= math.floor(C / math.log(p)) + 1
    return out


def _mordell_estimate(primes, C: float) -> float:
    if C > 700:
        return math.inf
    return _smooth_count_estimate(primes, C) * (2 * math.exp(C) + 1)


def _fmt_estimate(est: float, C: Ceiling) -> str:
    if math.isinf(est):
        return f"exp({float(C.log_value):.4g})"
    return f"{est:.3g}"


def _is_square(n: int):
    if n < 0:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None


def _mordell_chunk(task):
    a, X, ds = task
    found = []
    tested = 0
    an, ad = a.numerator, a.denominator
    for d in ds:
        d3 = d**3
        for n in range(-X, X + 1):
            if math.gcd(n, d) != 1:
                continue
            tested += 1
            # x^3 + a = (n^3 ad + an d^3) / (d^3 ad)
            num = n**3 * ad + an * d3
            den = d3 * ad
            g = math.gcd(num, den)
            rn = _is_square(num // g)
            if rn is None:
                continue
            rd = _is_square(den // g)
            if rd is None:
                continue
            x = Fraction(n, d)
            y = Fraction(rn, rd)
            found.append((x, y))
            if y:
                found.append((x, -y))
    return found, tested


def _mordell_key(s):
    return (height_int(s.x), s.x, s.y)


def solve_mordell(
    a,
    S="",
    ceiling="paper",
    budget: int = DEFAULT_BUDGET,
    partial_budget: int = PARTIAL_BUDGET,
    jobs: int = 1,
    strict: bool = True,
) -> SolutionCertificate:
    """All (x, y) in Z[1/N_S]^2 with y^2 = x^3 + a and h(x) <= ceiling."""
    t0 = time.perf_counter()
    a = as_rational(a)
    if a == 0:
        raise DomainError("a must be nonzero")
    S = PrimeSet.of(S)
    paper = mordell_height_bound(a, S)["mordell_height"]
    count = mordell_count_bound(a, S)
    C = make_ceiling(ceiling, paper)
    est = _mordell_estimate(S.primes, float(C.log_value))
    if est > budget:
        X2 = _largest_box(lambda c: _mordell_estimate(S.primes, c), partial_budget)
        part = solve_mordell(a, S, f"log({X2})", budget, partial_budget, jobs)
        part.mode = "bounded"
        part.requested_ceiling = C
        msg = f"search box of about {_fmt_estimate(est, C)} candidates exceeds the budget {budget}"
        if strict:
            raise SearchBudgetExceeded(msg, part)
        return part
    X = C.box
    found = []
    tested = 0
    if strip_primes(a.denominator, S.primes) == 1:
        ds = _smooth_numbers(S.primes, X)
        per = max(1, -(-len(ds) // (max(1, jobs) * 4)))
        tasks = [(a, X, ds[i : i + per]) for i in range(0, len(ds), per)]
        for f, n in _run_chunks(_mordell_chunk, tasks, jobs):
            found.extend(f)
            tested += n
    sols = sorted({MordellSolution(x, y, a) for x, y in found}, key=_mordell_key)
    cert = SolutionCertificate(
        equation={"type": "mordell", "a": format_rational(a), "S": S.label()},
        solutions=sols,
        mode="certified_complete" if C.log_value >= paper.value else "bounded",
        ceiling=C,
        paper_bound=paper,
        count_bound=count,
        checks_passed=False,
        candidates=tested,
    )
    _check_mordell(cert, S)
    cert.wall_time = time.perf_counter() - t0
    log.info("mordell a=%s S=%s: %d solutions in %.2fs", a, S.label(), len(sols), cert.wall_time)
    return cert


def _check_mordell(cert: SolutionCertificate, S: PrimeSet):
    sols = cert.solutions
    X = cert.ceiling.box
    checks = {
        "equation": all(s.y * s.y == s.x**3 + s.a for s in sols),
        "ring": all(strip_primes(s.x.denominator, S.primes) == 1 and strip_primes(s.y.denominator, S.primes) == 1 for s in sols),
        "within_ceiling": all(height_int(s.x) <= X for s in sols),
        "count_bound": len(sols) <= cert.count_bound.value,
        "paper_bound": all(_within(height_int(s.x), cert.paper_bound) and _within(height_int(s.y), cert.paper_bound) for s in sols),
    }
    cond = []
    for s in sols:
        r = mordell_conductor_check(s, S)
        cond.append({"x": format_rational(s.x), "y": format_rational(s.y), **r.to_json()})
    checks["mordell_conductor"] = all(c["ok"] for c in cond)
    cert.checks = checks
    cert.details = cond
    cert.checks_passed = all(checks.values())


# ---------------------------------------------------------------- cubic Thue equations


@dataclass(frozen=True)
class ThueSolution:
    u: int
    v: int
    image: MordellSolution

    @property
    def x(self):
        return self.u

    @property
    def y(self):
        return self.v

    def to_json(self):
        return [str(self.u), str(self.v)]


def _thue_chunk(task):
    coeffs, m, lo, hi, B = task
    p, q, r, s = coeffs
    found = []
    for v in range(lo, hi + 1):
        for u in integer_roots_cubic(p, q * v, r * v * v, s * v**3 - m):
            if abs(u) <= B:
                found.append((u, v))
    return found, hi - lo + 1


def solve_thue(
    f,
    m: int,
    ceiling,
    budget: int = DEFAULT_BUDGET,
    jobs: int = 1,
    cross_check_limit: int = CROSS_CHECK_LIMIT,
) -> SolutionCertificate:
    """All (u, v) with max(|u|, |v|) <= exp(ceiling) and f(u, v) = m."""
    t0 = time.perf_counter()
    f = CubicForm.of(f)
    m = int(m)
    if m == 0:
        raise DomainError("m must be nonzero")
    if not f.is_irreducible():
        raise DomainError(f"{list(f.coeffs)} is reducible over Q")
    if isinstance(ceiling, str) and ceiling.strip() == "paper":
        raise DomainError("no closed-form height bound is available for Thue equations")
    C = make_ceiling(ceiling, None)
    if float(C.log_value) > 60 or 2 * C.box + 1 > budget:
        raise SearchBudgetExceeded(f"{2 * C.box + 1 if C.log_value <= 60 else 'too many'} values of v exceed the budget {budget}")
    B = C.box
    tasks = [(f.coeffs, m, a, b, B) for a, b in _split_range(-B, B, max(1, jobs) * 4)]
    pts = []
    tested = 0
    for found, n in _run_chunks(_thue_chunk, tasks, jobs):
        pts.extend(found)
        tested += n
    target = thue_target(f, m)
    sols = sorted(
        (ThueSolution(u, v, thue_to_mordell(f, m, (u, v))) for u, v in set(pts)),
        key=lambda t: (max(abs(t.u), abs(t.v)), t.u, t.v),
    )
    checks = {
        "equation": all(f(t.u, t.v) == m for t in sols),
        "image_on_curve": all(t.image.y**2 == t.image.x**3 + target for t in sols),
    }
    top = max((abs(t.image.x.numerator) for t in sols), default=0)
    if top <= cross_check_limit:
        ref = solve_mordell(target, "", f"log({max(top, 1)})")
        checks["mordell_cross_check"] = all((t.image.x, t.image.y) in ref.pairs() for t in sols)
    cert = SolutionCertificate(
        equation={"type": "thue", "form": f.to_json(), "m": str(m), "mordell_a": str(target)},
        solutions=sols,
        mode="bounded",
        ceiling=C,
        paper_bound=None,
        count_bound=None,
        checks_passed=all(checks.values()),
        checks=checks,
        details=[{"u": str(t.u), "v": str(t.v), "X": format_rational(t.image.x), "Y": format_rational(t.image.y)} for t in sols],
        candidates=tested,
    )
    cert.wall_time = time.perf_counter() - t0
    return cert


def recheck(cert: SolutionCertificate) -> bool:
    """Recompute every conformance check on a finished certificate."""
    kind = cert.equation["type"]
    fresh = SolutionCertificate(**{**cert.__dict__, "checks": {}, "details": []})
    if kind == "sunit":
        _check_sunit(fresh, PrimeSet.of(cert.equation["S"]))
    elif kind == "mordell":
        _check_mordell(fresh, PrimeSet.of(cert.equation["S"]))
    elif kind == "thue":
        f = CubicForm.of([int(c) for c in cert.equation["form"]])
        m = int(cert.equation["m"])
        target = thue_target(f, m)
        B = cert.ceiling.box
        fresh.checks_passed = all(
            f(t.u, t.v) == m
            and max(abs(t.u), abs(t.v)) <= B
            and t.image == thue_to_mordell(f, m, (t.u, t.v))
            and t.image.y**2 == t.image.x**3 + target
            for t in cert.solutions
        )
    else:
        raise DomainError(f"unknown equation type {kind!r}")
    return fresh.checks_passed and cert.checks_passed
