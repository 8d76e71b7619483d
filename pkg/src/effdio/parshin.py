"""Frey curves, Mordell curves and the cubic Thue reduction, with conductor checks."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .arith import PrimeSet, as_rational, factorize, format_rational, is_s_unit, strip_primes
from .bounds import a_S
from .elliptic import GlobalCurveData, WeierstrassModel, conductor, invariants
from .errors import DegenerateLambda, DomainError, NotASolution, SingularForm, ZeroA


@dataclass(frozen=True)
class SUnitSolution:
    x: Fraction
    y: Fraction

    def __post_init__(self):
        x, y = as_rational(self.x), as_rational(self.y)
        if x + y != 1:
            raise NotASolution(f"{x} + {y} != 1")
        if x == 0 or y == 0:
            raise NotASolution("x and y must be nonzero")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def to_json(self):
        return [format_rational(self.x), format_rational(self.y)]


@dataclass(frozen=True)
class MordellSolution:
    x: Fraction
    y: Fraction
    a: Fraction

    def __post_init__(self):
        x, y, a = (as_rational(v) for v in (self.x, self.y, self.a))
        if a == 0:
            raise ZeroA("a must be nonzero")
        if y * y != x**3 + a:
            raise NotASolution(f"({x}, {y}) is not on y^2 = x^3 + {a}")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "a", a)

    def to_json(self):
        return [format_rational(self.x), format_rational(self.y)]


@dataclass(frozen=True)
class CheckResult:
    curve: WeierstrassModel
    data: GlobalCurveData
    bound: int
    ok: bool

    @property
    def conductor(self) -> int:
        return self.data.N_E

    def to_json(self) -> dict:
        return {
            "curve": self.curve.to_json(),
            "minimal_model": self.data.minimal_model.to_json(),
            "conductor": str(self.data.N_E),
            "bound": str(self.bound),
            "ok": self.ok,
        }


# ---------------------------------------------------------------- Frey curves


def frey_curve(lam) -> WeierstrassModel:
    """y^2 = x(x - 1)(x - lambda), expanded."""
    lam = as_rational(lam)
    if lam in (0, 1):
        raise DegenerateLambda(f"lambda = {lam} gives a singular curve")
    return WeierstrassModel(0, -(1 + lam), 0, lam, 0)


def frey_j(lam) -> Fraction:
    lam = as_rational(lam)
    if lam in (0, 1):
        raise DegenerateLambda(f"lambda = {lam}")
    return 256 * (lam * lam - lam + 1) ** 3 / (lam * lam - lam) ** 2


def lambda_orbit(lam) -> tuple:
    lam = as_rational(lam)
    return (lam, 1 - lam, 1 / lam, 1 / (1 - lam), lam / (lam - 1), (lam - 1) / lam)


def frey_model_scaled(lam) -> WeierstrassModel:
    """y^2 = x(x - l)(x - m) for lambda = l/m in lowest terms, m > 0."""
    lam = as_rational(lam)
    if lam in (0, 1):
        raise DegenerateLambda(f"lambda = {lam}")
    l, m = lam.numerator, lam.denominator
    return WeierstrassModel(0, -(l + m), 0, l * m, 0)


def frey_conductor_check(sol: SUnitSolution, S) -> CheckResult:
    S = PrimeSet.of(S)
    if 2 not in S:
        raise DomainError("the Frey check needs 2 in S")
    if not (is_s_unit(sol.x, S) and is_s_unit(sol.y, S)):
        raise DomainError("x and y must be S-units")
    W = frey_model_scaled(sol.x)
    data = conductor(W)
    bound = S.n_S
    return CheckResult(W, data, bound, bound % data.N_E == 0)


# ---------------------------------------------------------------- Mordell curves


def mordell_curve(sol: MordellSolution) -> WeierstrassModel:
    """t^2 = s^3 - 27 x s - 54 y, whose c4 and c6 are multiples of x and y."""
    if not isinstance(sol, MordellSolution):
        sol = MordellSolution(*sol)
    return WeierstrassModel(0, 0, 0, -27 * sol.x, -54 * sol.y)


def _in_ring(q: Fraction, S: PrimeSet) -> bool:
    return strip_primes(q.denominator, S.primes) == 1


def mordell_conductor_check(sol: MordellSolution, S) -> CheckResult:
    S = PrimeSet.of(S)
    if not (_in_ring(sol.x, S) and _in_ring(sol.y, S)):
        raise DomainError("x and y must lie in Z[1/N_S]")
    W = mordell_curve(sol)
    data = conductor(W)
    bound = a_S(sol.a, S)
    return CheckResult(W, data, bound, data.N_E <= bound)


# ---------------------------------------------------------------- binary forms


def _mul(f, g):
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] += a * b
    return out


def _add(f, g):
    return [a + b for a, b in zip(f, g)]


def _scale(f, c):
    return [c * a for a in f]


def _du(f):
    # coefficients run from u^n down to v^n
    n = len(f) - 1
    return [(n - i) * f[i] for i in range(n)]


def _dv(f):
    return [i * f[i] for i in range(1, len(f))]


def eval_form(f, u, v):
    n = len(f) - 1
    return sum(c * u ** (n - i) * v**i for i, c in enumerate(f))


@dataclass(frozen=True)
class CubicForm:
    p: int
    q: int
    r: int
    s: int

    def __post_init__(self):
        for name in "pqrs":
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int):
                raise DomainError("cubic form coefficients must be integers")
        if self.disc == 0:
            raise SingularForm(f"{self.coeffs} has zero discriminant")

    @classmethod
    def of(cls, coeffs) -> "CubicForm":
        if isinstance(coeffs, CubicForm):
            return coeffs
        if isinstance(coeffs, str):
            coeffs = [int(t) for t in coeffs.strip().strip("[]").split(",")]
        coeffs = [int(c) for c in coeffs]
        if len(coeffs) != 4:
            raise DomainError("a cubic form has four coefficients")
        return cls(*coeffs)

    @property
    def coeffs(self) -> tuple:
        return (self.p, self.q, self.r, self.s)

    @property
    def disc(self) -> int:
        p, q, r, s = self.p, self.q, self.r, self.s
        return 18 * p * q * r * s - 4 * q**3 * s + q * q * r * r - 4 * p * r**3 - 27 * p * p * s * s

    def __call__(self, u, v):
        return eval_form(self.coeffs, u, v)

    def linear_factor(self):
        """A root (a, b) with f(a, b) = 0, or None when f is irreducible."""
        if self.p == 0:
            return (1, 0)
        for b, _ in _positive_divisors(abs(self.p)):
            for a in integer_roots_cubic(self.p, self.q * b, self.r * b * b, self.s * b**3):
                return (a, b)
        return None

    def is_irreducible(self) -> bool:
        return self.linear_factor() is None

    def to_json(self):
        return [str(c) for c in self.coeffs]


def _positive_divisors(n: int):
    divs = [1]
    for p, e in factorize(n):
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return [(d, n // d) for d in sorted(divs)]


def hessian_covariants(f: CubicForm):
    """(H, G) as coefficient lists; they satisfy G^2 = -4 H^3 - 27 disc(f) f^2."""
    f = CubicForm.of(f)
    p, q, r, s = f.coeffs
    H = [3 * p * r - q * q, 9 * p * s - q * r, 3 * q * s - r * r]
    F = list(f.coeffs)
    G = _add(_mul(_du(F), _dv(H)), _scale(_mul(_dv(F), _du(H)), -1))
    return H, G


SYZYGY = (-4, -27)


def syzygy_residual(f: CubicForm) -> list:
    """Coefficients of G^2 - c1 H^3 - c2 disc f^2; all zero for a correct normalization."""
    f = CubicForm.of(f)
    H, G = hessian_covariants(f)
    c1, c2 = SYZYGY
    F = list(f.coeffs)
    lhs = _mul(G, G)
    rhs = _add(_scale(_mul(_mul(H, H), H), c1), _scale(_mul(F, F), c2 * f.disc))
    return [a - b for a, b in zip(lhs, rhs)]


def thue_target(f: CubicForm, m: int) -> int:
    """The Mordell coefficient reached by the covariant map: -432 m^2 disc(f)."""
    return -432 * m * m * CubicForm.of(f).disc


def thue_to_mordell(f: CubicForm, m: int, point) -> MordellSolution:
    """(X, Y) = (-4 H(u,v), 4 G(u,v)) on Y^2 = X^3 - 432 m^2 disc(f)."""
    f = CubicForm.of(f)
    if m == 0:
        raise DomainError("m must be nonzero")
    u, v = point
    if f(u, v) != m:
        raise NotASolution(f"f({u}, {v}) != {m}")
    H, G = hessian_covariants(f)
    X = -4 * eval_form(H, u, v)
    Y = 4 * eval_form(G, u, v)
    return MordellSolution(X, Y, thue_target(f, m))


# ---------------------------------------------------------------- exact integer roots


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _monotone_root(g, lo: int, hi: int):
    if lo > hi:
        return None
    glo, ghi = g(lo), g(hi)
    if glo == 0:
        return lo
    if ghi == 0:
        return hi
    if _sign(glo) == _sign(ghi):
        return None
    # invariant: sign(g(lo)) == sign(glo) != sign(g(hi))
    while hi - lo > 1:
        mid = (lo + hi) // 2
        gm = g(mid)
        if gm == 0:
            return mid
        if _sign(gm) == _sign(glo):
            lo = mid
        else:
            hi = mid
    return None


def integer_roots_cubic(c3: int, c2: int, c1: int, c0: int) -> list:
    """All integer roots of c3 x^3 + c2 x^2 + c1 x + c0 with c3 != 0, exactly."""
    if c3 == 0:
        raise DomainError("leading coefficient must be nonzero")

    def g(x):
        return ((c3 * x + c2) * x + c1) * x + c0

    R = 1 + max(abs(c2), abs(c1), abs(c0)) // abs(c3) + 1
    roots = set()
    D = 4 * c2 * c2 - 12 * c3 * c1
    if D <= 0:
        pieces = [(-R, R)]
    else:
        sq = math.isqrt(D)
        ks = sorted(math.floor(Fraction(-2 * c2 + e, 6 * c3)) for e in (sq, -sq))
        ks = [max(-R, min(R, k)) for k in ks]
        for k in ks:
            for x in range(k - 2, k + 3):
                if g(x) == 0:
                    roots.add(x)
        pieces = [(-R, ks[0] - 2), (ks[0] + 2, ks[1] - 2), (ks[1] + 2, R)]
    for lo, hi in pieces:
        x = _monotone_root(g, lo, hi)
        if x is not None:
            roots.add(x)
    return sorted(roots)
