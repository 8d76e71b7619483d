"""Period lattices, the modular discriminant and Faltings heights over Q."""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
from mpmath import mpc, mpf

from .arith import DEFAULT_PREC
from .elliptic import WeierstrassModel, invariants, minimal_model_data
from .errors import DomainError, PrecisionLoss

GUARD_BITS = 24
EXTRA_BITS = 40


@dataclass(frozen=True)
class LatticeTau:
    tau: mpc
    precision_bits: int
    error_bound: mpf

    def to_json(self) -> dict:
        d = _digits(self.precision_bits)
        return {
            "re": mpmath.nstr(self.tau.real, d, min_fixed=-mpmath.inf, max_fixed=mpmath.inf),
            "im": mpmath.nstr(self.tau.imag, d, min_fixed=-mpmath.inf, max_fixed=mpmath.inf),
            "precision_bits": str(self.precision_bits),
            "error_bound": mpmath.nstr(self.error_bound, 6),
        }


@dataclass(frozen=True)
class HeightReport:
    h_relative: mpf
    h_stable: mpf
    tau: LatticeTau
    delta_E: int
    unstable_correction: mpf
    error_bound: mpf
    precision_bits: int

    def to_json(self) -> dict:
        d = _digits(self.precision_bits)

        def fmt(x):
            return mpmath.nstr(x, d, min_fixed=-mpmath.inf, max_fixed=mpmath.inf)

        return {
            "h_relative": fmt(self.h_relative),
            "h_stable": fmt(self.h_stable),
            "delta_E": str(self.delta_E),
            "unstable_correction": fmt(self.unstable_correction),
            "tau": self.tau.to_json(),
            "precision_bits": str(self.precision_bits),
            "error_bound": mpmath.nstr(self.error_bound, 6),
        }


def _digits(bits: int) -> int:
    return max(10, int(bits * 0.30103))


# ---------------------------------------------------------------- tau


def reduce_tau(tau):
    """Move tau into the standard fundamental domain.

    Returns the reduced point and the matrix (a, b, c, d) with tau' = (a tau + b)/(c tau + d).
    """
    a, b, c, d = 1, 0, 0, 1
    z = mpc(tau)
    if z.imag <= 0:
        raise DomainError("tau must lie in the upper half plane")
    for _ in range(10_000):
        n = int(mpmath.nint(z.real))
        if n:
            z -= n
            a, b = a - n * c, b - n * d
        if abs(z) < 1:
            z = -1 / z
            a, b, c, d = -c, -d, a, b
            continue
        break
    # Boundary ties go to re(tau) <= 0.
    if z.real > mpf(1) / 2 - mpf(2) ** (-mpmath.mp.prec + 8):
        z -= 1
        a, b = a - c, b - d
    if abs(abs(z) - 1) < mpf(2) ** (-mpmath.mp.prec + 8) and z.real > 0:
        z = -1 / z
        a, b, c, d = -c, -d, a, b
    return z, (a, b, c, d)


def _moebius(m, z):
    a, b, c, d = m
    return (a * z + b) / (c * z + d)


def _raw_tau(inv):
    """A lattice ratio (not reduced) for the period lattice of the curve."""
    b2, b4, b6 = (mpf(x.numerator) / x.denominator for x in (inv.b2, inv.b4, inv.b6))
    with mpmath.extraprec(30):
        roots = mpmath.polyroots([4, b2, 2 * b4, b6], maxsteps=400, extraprec=mpmath.mp.prec)
    if inv.disc > 0:
        e1, e2, e3 = sorted((r.real for r in roots), reverse=True)
        w1 = mpmath.pi / mpmath.agm(mpmath.sqrt(e1 - e3), mpmath.sqrt(e1 - e2))
        w2 = mpc(0, 1) * mpmath.pi / mpmath.agm(mpmath.sqrt(e1 - e3), mpmath.sqrt(e2 - e3))
    else:
        e1 = min(roots, key=lambda r: abs(r.imag)).real
        a = 3 * e1 + b2 / 4
        b = mpmath.sqrt(3 * e1 * e1 + b2 * e1 / 2 + b4 / 2)
        w1 = 2 * mpmath.pi / mpmath.agm(2 * mpmath.sqrt(b), mpmath.sqrt(2 * b + a))
        w2 = -w1 / 2 + mpc(0, 1) * mpmath.pi / mpmath.agm(2 * mpmath.sqrt(b), mpmath.sqrt(2 * b - a))
    tau = w2 / w1
    if tau.imag < 0:
        tau = -tau
    return tau


def _tau_pair(W, prec):
    inv = invariants(W)
    p1 = prec + GUARD_BITS
    p2 = p1 + EXTRA_BITS
    with mpmath.workprec(p2):
        t2, m = reduce_tau(_raw_tau(inv))
    with mpmath.workprec(p1):
        t1 = _moebius(m, _raw_tau(inv))
    with mpmath.workprec(p2):
        err = 4 * abs(mpc(t2) - mpc(t1)) + mpf(2) ** (-p1)
    return t1, t2, err


def period_tau(W: WeierstrassModel, precision_bits: int = DEFAULT_PREC) -> LatticeTau:
    W = WeierstrassModel.of(W)
    if precision_bits < 64:
        raise DomainError("precision_bits must be at least 64")
    _, t2, err = _tau_pair(W, precision_bits)
    if err >= mpf(2) ** (-precision_bits // 2):
        raise PrecisionLoss(f"tau error {mpmath.nstr(err, 5)} too large")
    with mpmath.workprec(precision_bits):
        tau = +t2
        err = err + abs(tau) * mpmath.mpf(2) ** (1 - precision_bits)
        return LatticeTau(tau, precision_bits, err)


# ---------------------------------------------------------------- modular discriminant


def _q_terms(absq, prec):
    """Number of product factors needed for the tail bound to drop below 2^-(prec+10)."""
    if absq >= 1:
        raise DomainError("|q| must be below 1")
    target = mpf(2) ** (-prec - 10)
    n = 1
    while 24 * absq ** (n + 1) / (1 - absq) ** 2 >= target:
        n += 1
        if n > 10**6:
            raise PrecisionLoss("q-series would need too many terms")
    return n


def _delta(tau):
    q = mpmath.exp(2j * mpmath.pi * tau)
    n = _q_terms(abs(q), mpmath.mp.prec)
    prod = mpc(1)
    qn = mpc(1)
    for _ in range(n):
        qn *= q
        prod *= 1 - qn
    return q * prod**24


def modular_discriminant(tau, precision_bits: int = DEFAULT_PREC):
    """Delta(tau) = q prod (1 - q^n)^24."""
    t = tau.tau if isinstance(tau, LatticeTau) else tau
    with mpmath.workprec(precision_bits + GUARD_BITS):
        t = mpc(t)
        if t.imag <= 0:
            raise DomainError("tau must lie in the upper half plane")
        val = _delta(t)
    with mpmath.workprec(precision_bits):
        return +val


def log_delta_term(tau, precision_bits: int = DEFAULT_PREC):
    """log |(2 pi)^12 Delta(tau) im(tau)^6|."""
    t = tau.tau if isinstance(tau, LatticeTau) else tau
    with mpmath.workprec(precision_bits + GUARD_BITS):
        t = mpc(t)
        val = 12 * mpmath.log(2 * mpmath.pi) + mpmath.log(abs(_delta(t))) + 6 * mpmath.log(t.imag)
    with mpmath.workprec(precision_bits):
        return +val


# ---------------------------------------------------------------- heights


def _height_report(W, prec) -> HeightReport:
    W = WeierstrassModel.of(W)
    if prec < 64:
        raise DomainError("precision_bits must be at least 64")
    M, dfac = minimal_model_data(W)
    delta_E = 1
    for p, e in dfac.items():
        delta_E *= p**e
    j = invariants(M).j
    delta_1 = delta_E // j.denominator
    t1, t2, terr = _tau_pair(M, prec)
    p1 = prec + GUARD_BITS
    p2 = p1 + EXTRA_BITS
    with mpmath.workprec(p1):
        h1 = (mpmath.log(delta_E) - log_delta_term(t1, p1)) / 12
    with mpmath.workprec(p2):
        h2 = (mpmath.log(delta_E) - log_delta_term(t2, p2)) / 12
        corr = mpmath.log(delta_1)
        err = 4 * abs(h2 - h1) + mpf(2) ** (-p1)
    limit = mpf(2) ** (-prec // 2)
    if err >= limit or terr >= limit:
        raise PrecisionLoss(f"height error {mpmath.nstr(err, 5)} too large")
    with mpmath.workprec(prec):
        ulp = mpmath.mpf(2) ** (1 - prec)
        tau = LatticeTau(+t2, prec, terr + abs(t2) * ulp)
        h, hs = +h2, +(h2 - corr / 12)
        # final rounding to the report precision
        err = err + (abs(h) + abs(hs)) * ulp
        return HeightReport(h, hs, tau, delta_E, +corr, err, prec)


def relative_faltings_height(W: WeierstrassModel, precision_bits: int = DEFAULT_PREC) -> HeightReport:
    return _height_report(W, precision_bits)


def stable_faltings_height(W: WeierstrassModel, precision_bits: int = DEFAULT_PREC) -> HeightReport:
    return _height_report(W, precision_bits)
