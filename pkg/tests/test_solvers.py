import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from effdio.errors import DomainError, SearchBudgetExceeded
from effdio.parshin import CubicForm
from effdio.solvers import make_ceiling, recheck, solve_mordell, solve_sunit, solve_thue


def smooth(n, primes):
    for p in primes:
        while n % p == 0:
            n //= p
    return n == 1


def brute_sunit(primes, X):
    nums = [n for n in range(1, X + 1) if smooth(n, primes)]
    out = set()
    for a in nums:
        for b in nums:
            if math.gcd(a, b) != 1:
                continue
            for sign in (1, -1):
                x = Fraction(sign * a, b)
                y = 1 - x
                if y != 0 and abs(y.numerator) <= X and smooth(abs(y.numerator), primes):
                    out.add((x, y))
    return out


def brute_mordell(a, primes, X):
    out = set()
    dens = [d for d in range(1, X + 1) if smooth(d, primes)]
    for d in dens:
        for n in range(-X, X + 1):
            if math.gcd(n, d) != 1:
                continue
            x = sympy.Rational(n, d)
            r = sympy.sqrt(x**3 + sympy.Rational(a.numerator, a.denominator))
            if r.is_rational:
                for y in {r, -r}:
                    out.add((Fraction(n, d), Fraction(int(y.p), int(y.q))))
    return out


def test_sunit_single_prime_paper():
    c = solve_sunit("2", "paper")
    assert c.mode == "certified_complete"
    assert c.pairs() == {(Fraction(1, 2), Fraction(1, 2)), (Fraction(2), Fraction(-1)), (Fraction(-1), Fraction(2))}
    assert c.checks_passed and recheck(c)


def test_sunit_empty():
    c = solve_sunit("", "paper")
    assert c.solutions == [] and c.mode == "certified_complete"


@pytest.mark.parametrize("S", ["2,3", "3", "2,7", "3,5", "2,3,7"])
def test_sunit_matches_brute_force(S):
    primes = [int(p) for p in S.split(",")]
    c = solve_sunit(S, "log(300)")
    assert c.pairs() == brute_sunit(primes, 300)
    assert c.mode == "bounded"
    assert c.checks_passed


def test_sunit_decimal_ceiling():
    c = solve_sunit("2,3", 5)
    assert c.ceiling.box == math.floor(math.exp(5))
    assert c.pairs() == brute_sunit([2, 3], c.ceiling.box)
    assert (Fraction(9, 8), Fraction(-1, 8)) in c.pairs()


@settings(max_examples=10, deadline=None)
@given(st.sampled_from(["2", "2,3", "2,5", "2,3,5", "3,7"]), st.integers(2, 400))
def test_sunit_symmetry_and_counts(S, X):
    c = solve_sunit(S, f"log({X})")
    pairs = c.pairs()
    assert all((y, x) in pairs for x, y in pairs)
    assert len(pairs) <= c.count_bound.value
    assert all(x + y == 1 for x, y in pairs)


def test_sunit_budget():
    with pytest.raises(SearchBudgetExceeded) as exc:
        solve_sunit("2,3", "paper")
    part = exc.value.partial
    assert part.mode == "bounded"
    assert part.requested_ceiling.label == "paper"
    assert part.checks_passed
    soft = solve_sunit("2,3", "paper", strict=False)
    assert soft.pairs() == part.pairs()


def test_sunit_jobs_deterministic():
    a = solve_sunit("2,3,5", "log(2000)", jobs=1)
    b = solve_sunit("2,3,5", "log(2000)", jobs=3)
    assert a.to_json() == b.to_json()


def test_mordell_examples():
    c = solve_mordell(1, "", "log(1000)")
    assert c.pairs() == {(-1, 0), (0, 1), (0, -1), (2, 3), (2, -3)}
    assert c.mode == "bounded" and c.checks_passed
    assert len(c.solutions) <= 82944
    c = solve_mordell(-2, "", "log(1000)")
    assert c.pairs() == {(3, 5), (3, -5)}


@pytest.mark.parametrize("a,S,X", [(1, "", 300), (-2, "2", 40), (8, "2", 40), (Fraction(1, 4), "2", 40), (17, "", 300), (-7, "3", 30)])
def test_mordell_matches_brute_force(a, S, X):
    primes = [int(p) for p in S.split(",")] if S else []
    c = solve_mordell(a, S, f"log({X})")
    assert c.pairs() == brute_mordell(Fraction(a), primes, X)
    assert c.checks_passed


def test_mordell_a_outside_ring():
    c = solve_mordell(Fraction(1, 3), "2", "log(50)")
    assert c.solutions == []


def test_mordell_paper_ceiling_is_bounded():
    c = solve_mordell(1, "", "paper", strict=False)
    assert c.mode == "bounded"
    assert c.requested_ceiling.log_value == c.paper_bound.value
    assert float(c.paper_bound.value) > 3e7
    with pytest.raises(SearchBudgetExceeded):
        solve_mordell(1, "", "paper")


def test_mordell_zero():
    with pytest.raises(DomainError):
        solve_mordell(0, "", "log(10)")


def test_thue_examples():
    c = solve_thue([1, 0, 0, -2], 1, "log(100)")
    assert (1, 0) in {(t.u, t.v) for t in c.solutions}
    assert c.mode == "bounded" and c.checks_passed
    assert c.checks["mordell_cross_check"]
    with pytest.raises(DomainError):
        solve_thue([1, 0, 0, -2], 0, "log(100)")
    with pytest.raises(DomainError):
        solve_thue([1, 1, 0, 0], 1, "log(100)")


@pytest.mark.parametrize("coeffs,m", [([1, 0, 0, -2], 1), ([1, -1, -2, 1], 7), ([2, 3, -5, 7], -9), ([1, 0, -3, 1], 1)])
def test_thue_matches_brute_force(coeffs, m):
    f = CubicForm(*coeffs)
    B = 60
    c = solve_thue(f, m, f"log({B})")
    brute = {(u, v) for u in range(-B, B + 1) for v in range(-B, B + 1) if f(u, v) == m}
    assert {(t.u, t.v) for t in c.solutions} == brute
    assert c.checks_passed


def test_ceilings():
    assert make_ceiling("log(1000)", None).box == 1000
    assert make_ceiling("0", None).box == 1
    assert make_ceiling(Fraction(3, 2), None).box == 4
    with pytest.raises(DomainError):
        make_ceiling("paper", None)
    with pytest.raises(DomainError):
        make_ceiling("-1", None)
    with pytest.raises(DomainError):
        make_ceiling("abc", None)
