"""Integers, rationals, factorization, valuations and Weil heights."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

import mpmath

from .errors import DomainError, FactorizationExhausted

Rational = Fraction

DEFAULT_PREC = 128
TRIAL_LIMIT = 10**6
RHO_BUDGET = 5_000_000

# Deterministic Miller-Rabin witnesses, correct below this bound.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_DETERMINISTIC = 3_317_044_064_679_887_385_961_981


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and strings like "-3/7" to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise DomainError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        try:
            if "/" in s:
                num, den = s.split("/")
                return Fraction(int(num), int(den))
            return Fraction(int(s))
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"not a rational: {x!r}") from exc
    raise DomainError(f"not a rational: {x!r}")


def format_rational(q) -> str:
    q = as_rational(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


@lru_cache(maxsize=1)
def _small_primes() -> tuple:
    n = TRIAL_LIMIT
    sieve = bytearray([1]) * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, n + 1, i)))
    return tuple(i for i in range(n + 1) if sieve[i])


def _strong_probable_prime(n: int, a: int) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def _jacobi(a: int, n: int) -> int:
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _strong_lucas(n: int) -> bool:
    """Strong Lucas probable-prime test with Selfridge parameters."""
    r = math.isqrt(n)
    if r * r == n:
        return False
    D = 5
    while _jacobi(D, n) != -1:
        D = -D - 2 if D > 0 else -D + 2
    P, Q = 1, (1 - D) // 4
    d, s = n + 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    inv2 = (n + 1) // 2
    U, V, Qk = 1, P, Q % n
    for bit in bin(d)[3:]:
        U, V = U * V % n, (V * V - 2 * Qk) % n
        Qk = Qk * Qk % n
        if bit == "1":
            U, V = (P * U + V) * inv2 % n, (D * U + P * V) * inv2 % n
            Qk = Qk * Q % n
    if U == 0 or V == 0:
        return True
    for _ in range(s - 1):
        V = (V * V - 2 * Qk) % n
        Qk = Qk * Qk % n
        if V == 0:
            return True
    return False


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    if not all(_strong_probable_prime(n, a) for a in _MR_BASES):
        return False
    # The fixed bases are a proof below the bound; above it add a Lucas test (BPSW).
    return n < _MR_DETERMINISTIC or _strong_lucas(n)


def _brent(n: int, c: int, budget: list):
    """One Brent rho run; returns a nontrivial factor, or None.

    ``budget`` is a one-element list of remaining iterations, shared across runs.
    """
    y, m, g, r, q = 2, 128, 1, 1, 1
    x = ys = y
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = math.gcd(q, n)
            k += m
        budget[0] -= r
        r *= 2
        if budget[0] < 0:
            return None
    if g == n:
        g = 1
        while g == 1:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
    return g if g != n else None


def _split(n: int, budget: list, out: dict):
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    r = math.isqrt(n)
    if r * r == n:
        _split(r, budget, out)
        _split(r, budget, out)
        return
    for c in range(1, 21):
        f = _brent(n, c, budget)
        if f:
            _split(f, budget, out)
            _split(n // f, budget, out)
            return
        if budget[0] < 0:
            break
    raise FactorizationExhausted(n, budget[1])


@dataclass(frozen=True)
class Factorization:
    sign: int
    factors: tuple  # ((p, e), ...) ascending in p

    def value(self) -> int:
        v = self.sign
        for p, e in self.factors:
            v *= p**e
        return v

    def primes(self) -> tuple:
        return tuple(p for p, _ in self.factors)

    def __iter__(self):
        return iter(self.factors)


def factorize(n: int, budget: int = RHO_BUDGET) -> Factorization:
    """Factor a nonzero integer: trial division, then Brent's rho."""
    n = int(n)
    if n == 0:
        raise DomainError("cannot factor 0")
    sign = -1 if n < 0 else 1
    m = abs(n)
    out: dict = {}
    for p in _small_primes():
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out[p] = e
    if m > 1:
        if m <= TRIAL_LIMIT**2:
            out[m] = out.get(m, 0) + 1
        else:
            _split(m, [budget, budget], out)
    return Factorization(sign, tuple(sorted(out.items())))


def _prime_check(p: int):
    if not isinstance(p, int) or not is_prime(p):
        raise DomainError(f"{p!r} is not prime")


def valuation(q, p: int) -> int:
    q = as_rational(q)
    if q == 0:
        raise DomainError("valuation of 0 is infinite")
    _prime_check(p)
    v = 0
    n, d = q.numerator, q.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def int_valuation(n: int, p: int) -> int:
    """ord_p on integers without the primality check; 0 maps to a large value."""
    if n == 0:
        return 10**9
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def weil_height(q, prec: int = DEFAULT_PREC):
    q = as_rational(q)
    if q == 0:
        return mpmath.mpf(0)
    with mpmath.workprec(prec):
        return +mpmath.log(max(abs(q.numerator), q.denominator))


def height_int(q) -> int:
    """max(|numerator|, denominator), the exponential of the Weil height."""
    q = as_rational(q)
    return max(abs(q.numerator), q.denominator)


def weil_height_vector(values: Iterable, prec: int = DEFAULT_PREC):
    """Affine height log max(D, |n_1|, ..., |n_k|) where v_i = n_i / D."""
    vals = [as_rational(v) for v in values]
    if not vals:
        raise DomainError("empty vector")
    den = 1
    for v in vals:
        den = den * v.denominator // math.gcd(den, v.denominator)
    top = max([den] + [abs(v.numerator * (den // v.denominator)) for v in vals])
    with mpmath.workprec(prec):
        return +mpmath.log(top)


def radical(n: int) -> int:
    if n == 0:
        raise DomainError("radical of 0")
    r = 1
    for p, _ in factorize(n):
        r *= p
    return r


def strip_primes(n: int, primes) -> int:
    """Remove every factor of the given primes from |n|."""
    n = abs(n)
    for p in primes:
        if n == 0:
            break
        while n % p == 0:
            n //= p
    return n


def is_s_unit(q, S) -> bool:
    q = as_rational(q)
    if q == 0:
        return False
    primes = S.primes if isinstance(S, PrimeSet) else tuple(S)
    return strip_primes(q.numerator, primes) == 1 and strip_primes(q.denominator, primes) == 1


@dataclass(frozen=True)
class PrimeSet:
    primes: tuple = ()

    def __post_init__(self):
        ps = tuple(int(p) for p in self.primes)
        if any(b <= a for a, b in zip(ps, ps[1:])):
            raise DomainError("primes must be strictly increasing")
        for p in ps:
            _prime_check(p)
        object.__setattr__(self, "primes", ps)

    @classmethod
    def of(cls, primes) -> "PrimeSet":
        if isinstance(primes, PrimeSet):
            return primes
        if isinstance(primes, str):
            parts = [t for t in primes.replace(" ", "").split(",") if t]
            try:
                primes = [int(t) for t in parts]
            except ValueError as exc:
                raise DomainError(f"bad prime list {primes!r}") from exc
        return cls(tuple(sorted(set(int(p) for p in primes))))

    @property
    def N(self) -> int:
        return math.prod(self.primes)

    @property
    def n_S(self) -> int:
        return 2**7 * self.N

    def __contains__(self, p) -> bool:
        return p in self.primes

    def __iter__(self):
        return iter(self.primes)

    def __len__(self):
        return len(self.primes)

    def label(self) -> str:
        return ",".join(str(p) for p in self.primes)
