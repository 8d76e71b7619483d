"""Weierstrass models over Q, minimal models, Tate's algorithm and conductors."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .arith import (
    DEFAULT_PREC,
    as_rational,
    factorize,
    format_rational,
    int_valuation,
    is_prime,
    weil_height_vector,
)
from .errors import DomainError, NonIntegralModel, NotMinimalAtP, SingularCurve


@dataclass(frozen=True)
class WeierstrassModel:
    a1: Fraction
    a2: Fraction
    a3: Fraction
    a4: Fraction
    a6: Fraction

    def __post_init__(self):
        for name in ("a1", "a2", "a3", "a4", "a6"):
            object.__setattr__(self, name, as_rational(getattr(self, name)))

    @classmethod
    def of(cls, coeffs) -> "WeierstrassModel":
        if isinstance(coeffs, WeierstrassModel):
            return coeffs
        if isinstance(coeffs, str):
            coeffs = [t for t in coeffs.strip().strip("[]").split(",")]
        coeffs = list(coeffs)
        if len(coeffs) == 2:
            coeffs = [0, 0, 0] + coeffs
        if len(coeffs) != 5:
            raise DomainError("expected five a-invariants")
        return cls(*coeffs)

    @property
    def a(self) -> tuple:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.a)

    def to_json(self) -> list:
        return [format_rational(c) for c in self.a]

    def __str__(self):
        return "[" + ",".join(self.to_json()) + "]"


@dataclass(frozen=True)
class CurveInvariants:
    b2: Fraction
    b4: Fraction
    b6: Fraction
    b8: Fraction
    c4: Fraction
    c6: Fraction
    disc: Fraction
    j: Fraction


def _b_invariants(a1, a2, a3, a4, a6):
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    return b2, b4, b6, b8


def _c_invariants(a1, a2, a3, a4, a6):
    b2, b4, b6, b8 = _b_invariants(a1, a2, a3, a4, a6)
    c4 = b2 * b2 - 24 * b4
    c6 = -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6
    disc = -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    return b2, b4, b6, b8, c4, c6, disc


def invariants(W: WeierstrassModel) -> CurveInvariants:
    W = WeierstrassModel.of(W)
    b2, b4, b6, b8, c4, c6, disc = _c_invariants(*W.a)
    if disc == 0:
        raise SingularCurve(f"discriminant vanishes for {W}")
    return CurveInvariants(b2, b4, b6, b8, c4, c6, disc, c4**3 / disc)


def _apply(a, r, s, t, u=1):
    """The image of a-invariants under x = u^2 x' + r, y = u^3 y' + s u^2 x' + t."""
    a1, a2, a3, a4, a6 = a
    n1 = a1 + 2 * s
    n2 = a2 - s * a1 + 3 * r - s * s
    n3 = a3 + r * a1 + 2 * t
    n4 = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t
    n6 = a6 + r * a4 + r * r * a2 + r**3 - t * a3 - t * t - r * t * a1
    if u == 1:
        return (n1, n2, n3, n4, n6)
    return (n1 / u, n2 / u**2, n3 / u**3, n4 / u**4, n6 / u**6)


def transform(W: WeierstrassModel, u, r=0, s=0, t=0) -> WeierstrassModel:
    W = WeierstrassModel.of(W)
    u, r, s, t = (as_rational(v) for v in (u, r, s, t))
    if u == 0:
        raise DomainError("u must be nonzero")
    return WeierstrassModel(*_apply(W.a, r, s, t, u))


def inverse_transform(u, r=0, s=0, t=0) -> tuple:
    """(u, r, s, t) of the inverse change of coordinates."""
    u, r, s, t = (as_rational(v) for v in (u, r, s, t))
    if u == 0:
        raise DomainError("u must be nonzero")
    return (1 / u, -r / u**2, -s / u, (r * s - t) / u**3)


# ---------------------------------------------------------------- minimal models


def _kraus_ok(c4: int, c6: int, p: int) -> bool:
    """Whether (c4, c6) come from a Weierstrass model integral at p (Kraus)."""
    if p == 3:
        return c6 % 27 not in (9, 18)
    if p == 2:
        if c6 % 4 == 3:
            return True
        return c4 % 16 == 0 and c6 % 32 in (0, 8)
    return True


def model_from_c4c6(c4: int, c6: int) -> WeierstrassModel:
    """The reduced integral model with invariants (c4, c6)."""
    b2 = (-c6) % 12
    if b2 > 6:
        b2 -= 12
    b4, r4 = divmod(b2 * b2 - c4, 24)
    b6, r6 = divmod(-(b2**3) + 36 * b2 * b4 - c6, 216)
    if r4 or r6:
        raise NonIntegralModel(f"no integral model with c4={c4}, c6={c6}")
    a1 = b2 % 2
    a3 = b6 % 2
    a2, s2 = divmod(b2 - a1, 4)
    a4, s4 = divmod(b4 - a1 * a3, 2)
    a6, s6 = divmod(b6 - a3, 4)
    if s2 or s4 or s6:
        raise NonIntegralModel(f"no integral model with c4={c4}, c6={c6}")
    return WeierstrassModel(a1, a2, a3, a4, a6)


def integral_model(W: WeierstrassModel) -> WeierstrassModel:
    """Scale a rational model to an integral one by u = 1/D."""
    W = WeierstrassModel.of(W)
    den = 1
    for c in W.a:
        den = den * c.denominator // math.gcd(den, c.denominator)
    if den == 1:
        return W
    D = 1
    for p, _ in factorize(den):
        e = max(-(-int_valuation(c.denominator, p) // i) for c, i in zip(W.a, (1, 2, 3, 4, 6)))
        D *= p**e
    return transform(W, Fraction(1, D))


def minimal_model_data(W: WeierstrassModel):
    """Global minimal model together with the factored |discriminant|."""
    W = integral_model(W)
    inv = invariants(W)
    c4, c6, disc = int(inv.c4), int(inv.c6), int(inv.disc)
    fac = factorize(disc)
    u = 1
    for p, e in fac:
        d = e // 12
        if d == 0:
            continue
        d = min(d, int_valuation(c4, p) // 4 if c4 else d, int_valuation(c6, p) // 6 if c6 else d)
        while d > 0 and not _kraus_ok(c4 // p ** (4 * d), c6 // p ** (6 * d), p):
            d -= 1
        u *= p**d
    M = model_from_c4c6(c4 // u**4, c6 // u**6)
    dfac = {p: e for p, e in fac}
    for p in list(dfac):
        dfac[p] -= 12 * int_valuation(u, p)
        if dfac[p] == 0:
            del dfac[p]
    return M, dfac


def minimal_model(W: WeierstrassModel) -> WeierstrassModel:
    return minimal_model_data(W)[0]


# ---------------------------------------------------------------- Tate's algorithm


@dataclass(frozen=True)
class LocalReductionData:
    p: int
    f_p: int
    v_p_delta_min: int
    kodaira: str
    reduction_kind: str

    def to_json(self) -> dict:
        return {
            "p": str(self.p),
            "f_p": str(self.f_p),
            "v_p_delta_min": str(self.v_p_delta_min),
            "kodaira": self.kodaira,
            "reduction_kind": self.reduction_kind,
        }


def _inv(a: int, p: int) -> int:
    return pow(a % p, -1, p)


def _cubic_roots_type(b: int, c: int, d: int, p: int):
    """Root multiplicities of T^3 + bT^2 + cT + d mod p.

    Returns ("distinct", None), ("double", root) or ("triple", root).
    """
    disc = b * b * c * c - 4 * c**3 - 4 * b**3 * d - 27 * d * d + 18 * b * c * d
    if disc % p:
        return "distinct", None
    if p == 3:
        if b % 3 == 0 and c % 3 == 0:
            return "triple", (-d) % 3
    else:
        r = (-b * _inv(3, p)) % p
        if (b * b - 3 * c) % p == 0:
            return "triple", r
    if p == 2:
        for t in range(2):
            val = t**3 + b * t * t + c * t + d
            der = 3 * t * t + 2 * b * t + c
            if val % 2 == 0 and der % 2 == 0:
                return "double", t
        raise AssertionError("no double root found")
    num = (9 * d - b * c) % p
    den = (2 * (b * b - 3 * c)) % p
    return "double", num * _inv(den, p) % p


def _kodaira_label(kind: str, n: int = 0) -> str:
    if kind == "In":
        return f"I{n}"
    if kind == "In*":
        return f"I{n}*"
    return kind


def tate_local(W: WeierstrassModel, p: int) -> LocalReductionData:
    """Local reduction data at p of a model integral and minimal at p."""
    W = WeierstrassModel.of(W)
    if not W.is_integral():
        raise NonIntegralModel("tate_local needs an integral model")
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    a1, a2, a3, a4, a6 = (int(c) for c in W.a)
    b2, b4, b6, b8, c4, c6, disc = _c_invariants(a1, a2, a3, a4, a6)
    if disc == 0:
        raise SingularCurve(str(W))
    vd = int_valuation(disc, p)
    if vd == 0:
        return LocalReductionData(p, 0, 0, "I0", "good")

    def shift(r, s, t):
        nonlocal a1, a2, a3, a4, a6
        a1, a2, a3, a4, a6 = _apply((a1, a2, a3, a4, a6), r, s, t)

    # Move the singular point of the reduction to (0, 0).
    if p == 2:
        if b2 % 2 == 0:
            r = a4 % 2
            t = (r * (1 + a2 + a4) + a6) % 2
        else:
            r = a3 % 2
            t = (r + a4) % 2
    elif p == 3:
        r = (-b6) % 3 if b2 % 3 == 0 else (-b2 * b4) % 3
        t = (a1 * r + a3) % 3
    else:
        if c4 % p == 0:
            r = (-_inv(12, p) * b2) % p
        else:
            r = (-_inv(12 * c4, p) * (c6 + b2 * c4)) % p
        t = (-_inv(2, p) * (a1 * r + a3)) % p
    shift(r, 0, t)

    if c4 % p:
        return LocalReductionData(p, 1, vd, f"I{vd}", "multiplicative")
    if a6 % (p * p):
        return LocalReductionData(p, vd, vd, "II", "additive")
    b8 = _b_invariants(a1, a2, a3, a4, a6)[3]
    if b8 % p**3:
        return LocalReductionData(p, vd - 1, vd, "III", "additive")
    b6 = a3 * a3 + 4 * a6
    if b6 % p**3:
        return LocalReductionData(p, vd - 2, vd, "IV", "additive")

    # Arrange p | a1, a2; p^2 | a3, a4; p^3 | a6.
    if p == 2:
        s = a2 % 2
        t = 2 * ((a6 // 4) % 2)
    else:
        s = (-a1 * _inv(2, p)) % p
        t = (-a3 * _inv(2, p * p)) % (p * p)
    shift(0, s, t)

    kind, root = _cubic_roots_type(a2 // p, a4 // p**2, a6 // p**3, p)
    if kind == "distinct":
        return LocalReductionData(p, vd - 4, vd, "I0*", "additive")

    if kind == "double":
        shift(root * p, 0, 0)
        n = 0
        k_y, k_x = 2, 2
        while True:
            n += 1
            if n > vd:
                raise AssertionError("In* loop did not terminate")
            if n % 2:
                # Y^2 + (a3/p^k) Y - a6/p^(2k)
                k = k_y
                bq = a3 // p**k
                cq = a6 // p ** (2 * k)
                if (bq * bq + 4 * cq) % p:
                    break
                y0 = cq % 2 if p == 2 else (-bq * _inv(2, p)) % p
                shift(0, 0, y0 * p**k)
                k_y += 1
            else:
                # (a2/p) X^2 + (a4/p^(k+1)) X + a6/p^(2k+1)
                k = k_x
                aq = a2 // p
                bq = a4 // p ** (k + 1)
                cq = a6 // p ** (2 * k + 1)
                if (bq * bq - 4 * aq * cq) % p:
                    break
                x0 = cq % 2 if p == 2 else (-bq * _inv(2 * aq, p)) % p
                shift(x0 * p**k, 0, 0)
                k_x += 1
        return LocalReductionData(p, vd - 4 - n, vd, f"I{n}*", "additive")

    # Triple root.
    shift(root * p, 0, 0)
    bq = a3 // p**2
    cq = a6 // p**4
    if (bq * bq + 4 * cq) % p:
        return LocalReductionData(p, vd - 6, vd, "IV*", "additive")
    y0 = cq % 2 if p == 2 else (-bq * _inv(2, p)) % p
    shift(0, 0, y0 * p**2)
    if a4 % p**4:
        return LocalReductionData(p, vd - 7, vd, "III*", "additive")
    if a6 % p**6:
        return LocalReductionData(p, vd - 8, vd, "II*", "additive")
    raise NotMinimalAtP(p)


# ---------------------------------------------------------------- global data


@dataclass(frozen=True)
class GlobalCurveData:
    minimal_model: WeierstrassModel
    N_E: int
    delta_E: int
    locals: tuple

    def local(self, p: int):
        for loc in self.locals:
            if loc.p == p:
                return loc
        return LocalReductionData(p, 0, 0, "I0", "good")

    def to_json(self) -> dict:
        return {
            "minimal_model": self.minimal_model.to_json(),
            "conductor": str(self.N_E),
            "minimal_discriminant": str(self.delta_E),
            "locals": [loc.to_json() for loc in self.locals],
        }


def conductor(W: WeierstrassModel) -> GlobalCurveData:
    M, dfac = minimal_model_data(W)
    locs = []
    N = 1
    D = 1
    for p in sorted(dfac):
        loc = tate_local(M, p)
        locs.append(loc)
        N *= p**loc.f_p
        D *= p**loc.v_p_delta_min
    return GlobalCurveData(M, N, D, tuple(locs))


def model_height(W: WeierstrassModel, prec: int = DEFAULT_PREC):
    """(1/12) h(c4^3, c6^2) for an integral model."""
    W = WeierstrassModel.of(W)
    if not W.is_integral():
        raise NonIntegralModel(str(W))
    inv = invariants(W)
    return weil_height_vector([inv.c4**3, inv.c6**2], prec) / 12
