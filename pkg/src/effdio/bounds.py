"""Closed-form explicit bounds, evaluated with upward rounding.

Real-valued bounds are computed in interval arithmetic and the upper endpoint
is written out as a decimal rounded toward +infinity. Counting bounds are exact
integers. Bounds whose decimal expansion would exceed ``LOG_SCALE_DIGITS``
digits are reported through an upper bound on their base-10 logarithm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from mpmath.ctx_iv import MPIntervalContext
from mpmath.libmp import to_rational

from .arith import DEFAULT_PREC, PrimeSet, as_rational, factorize, format_rational, is_prime
from .errors import DomainError

LOG_SCALE_DIGITS = 300


def _ctx(prec: int) -> MPIntervalContext:
    ctx = MPIntervalContext()
    ctx.prec = prec
    return ctx


def _q(c, x):
    """Interval enclosing a rational."""
    x = Fraction(x)
    return c.mpf(x.numerator) / x.denominator


def _upper(x) -> Fraction:
    p, q = to_rational(x._mpi_[1])
    return Fraction(int(p), int(q))


def _lower(x) -> Fraction:
    p, q = to_rational(x._mpi_[0])
    return Fraction(int(p), int(q))


def _sig_digits(prec: int) -> int:
    return max(12, math.ceil(prec * math.log10(2)))


def _floor_log10(a: Fraction) -> int:
    e = len(str(a.numerator)) - len(str(a.denominator))
    while Fraction(10) ** e > a:
        e -= 1
    while Fraction(10) ** (e + 1) <= a:
        e += 1
    return e


def round_decimal(x: Fraction, sig: int, up: bool = True) -> Fraction:
    """A decimal with ``sig`` significant digits that is >= x (or <= x)."""
    if x == 0:
        return x
    e = _floor_log10(abs(x))
    scale = Fraction(10) ** (sig - 1 - e)
    m = x * scale
    n = math.ceil(m) if up else math.floor(m)
    return Fraction(n) / scale


def format_decimal(x: Fraction) -> str:
    """Exact decimal string of a Fraction whose denominator is 2^a 5^b."""
    if x.denominator == 1:
        return str(x.numerator)
    den = x.denominator
    k = 0
    while den % 10 or den != 1:
        if den % 2 == 0 and den % 5 == 0:
            den //= 10
        elif den % 2 == 0:
            den //= 2
        elif den % 5 == 0:
            den //= 5
        else:
            raise ValueError("not a terminating decimal")
        k += 1
        if den == 1:
            break
    n = x * 10**k
    assert n.denominator == 1
    sign = "-" if n < 0 else ""
    digits = str(abs(n.numerator)).rjust(k + 1, "0")
    out = digits[:-k] + "." + digits[-k:]
    out = out.rstrip("0").rstrip(".")
    return sign + out


@dataclass(frozen=True)
class BoundValue:
    name: str
    paper_anchor: str
    inputs: tuple
    value: Fraction | None = None
    log10_value: Fraction | None = None
    exact: bool = False
    rounding: str = "up"

    @property
    def log_scale(self) -> bool:
        return self.value is None

    def as_fraction(self) -> Fraction:
        if self.value is None:
            raise OverflowError(f"{self.name} is only known in log scale")
        return self.value

    def __float__(self):
        return float(self.as_fraction())

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "paper_anchor": self.paper_anchor,
            "inputs": {k: v for k, v in self.inputs},
        }
        if self.value is not None:
            out["value"] = format_decimal(self.value)
        else:
            out["log10_value"] = format_decimal(self.log10_value)
        out["log_scale"] = self.value is None
        out["exact"] = self.exact
        out["rounding"] = self.rounding
        return out


@dataclass(frozen=True)
class BoundGroup:
    name: str
    inputs: tuple
    bounds: tuple = field(default_factory=tuple)

    def __getitem__(self, key) -> BoundValue:
        for b in self.bounds:
            if b.name == key:
                return b
        raise KeyError(key)

    def __contains__(self, key):
        return any(b.name == key for b in self.bounds)

    def names(self):
        return [b.name for b in self.bounds]

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "inputs": {k: v for k, v in self.inputs},
            "bounds": [b.to_json() for b in self.bounds],
        }


def _inputs(**kw) -> tuple:
    out = []
    for k, v in kw.items():
        if isinstance(v, PrimeSet):
            v = v.label()
        elif isinstance(v, (int, Fraction)):
            v = format_rational(v)
        out.append((k, str(v)))
    return tuple(out)


def _real(name, anchor, inputs, fn, prec, down=False, force_log=False) -> BoundValue:
    ctx = _ctx(prec)
    x = fn(ctx)
    sig = _sig_digits(prec)
    if down:
        lo = _lower(x)
        return BoundValue(name, anchor, inputs, round_decimal(lo, sig, up=False), rounding="down")
    hi = _upper(x)
    if force_log or (hi > 0 and _floor_log10(hi) >= LOG_SCALE_DIGITS):
        return BoundValue(name, anchor, inputs, None, round_decimal(_upper(ctx.log10(x)), sig))
    return BoundValue(name, anchor, inputs, round_decimal(hi, sig))


def _exact(name, anchor, inputs, n) -> BoundValue:
    n = Fraction(n)
    if n.denominator != 1:
        n = Fraction(math.ceil(n))
    return BoundValue(name, anchor, inputs, n, exact=True)


def _power_product(name, anchor, inputs, terms, prec, force_log=False) -> BoundValue:
    """prod base^exp for integer pairs; exact when small, log10 otherwise."""
    digits = sum(e * math.log10(b) for b, e in terms if b > 1)
    if digits < LOG_SCALE_DIGITS and not force_log:
        n = 1
        for b, e in terms:
            n *= b**e
        return _exact(name, anchor, inputs, n)
    ctx = _ctx(prec)
    L = ctx.mpf(0)
    for b, e in terms:
        if b > 1:
            L += ctx.mpf(e) * ctx.log10(ctx.mpf(b))
    return BoundValue(name, anchor, inputs, None, round_decimal(_upper(L), _sig_digits(prec)), exact=False)


def _prod_one_plus_inverse(primes) -> Fraction:
    out = Fraction(1)
    for p in sorted(set(primes)):
        out *= Fraction(p + 1, p)
    return out


def _prime_divisors(n: int):
    return factorize(n).primes() if n != 1 else ()


# ---------------------------------------------------------------- local conductor


def conductor_exponent_bound(g: int, p: int, e_v: int) -> int:
    """2g + e_v (p n + (p - 1) lambda_p(n)) with n = floor(2g / (p - 1))."""
    if g < 1 or e_v < 1:
        raise DomainError("g and e_v must be positive")
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    n = (2 * g) // (p - 1)
    lam, i, m = 0, 0, n
    while m:
        m, r = divmod(m, p)
        lam += i * r * p**i
        i += 1
    return 2 * g + e_v * (p * n + (p - 1) * lam)


def conductor_exponent_value(g: int, p: int, e_v: int) -> BoundValue:
    return _exact(
        "conductor_exponent",
        "2g + e_v*(p*n + (p-1)*lambda_p(n)), n = floor(2g/(p-1))",
        _inputs(g=g, p=p, e_v=e_v),
        conductor_exponent_bound(g, p, e_v),
    )


# ---------------------------------------------------------------- S-unit equations


def sunit_height_bound(S, prec: int = DEFAULT_PREC) -> BoundGroup:
    S = PrimeSet.of(S)
    n = S.n_S
    inp = _inputs(S=S)

    def height(c):
        L = c.log(c.mpf(n))
        return c.mpf(3) / 2 * n * L * L + 65

    def exponent(c):
        L = c.log(c.mpf(n))
        return 3 / (2 * c.log(c.mpf(2))) * n * L * L + 94

    return BoundGroup(
        "sunit_height",
        inp,
        (
            _exact("n_S", "2^7*N_S", inp, n),
            _real("sunit_height", "3/2*n_S*log(n_S)^2 + 65", inp, height, prec),
            _real("sunit_exponent", "3/(2*log(2))*n_S*log(n_S)^2 + 94", inp, exponent, prec),
        ),
    )


def sunit_count_bound(S) -> BoundValue:
    S = PrimeSet.of(S)
    value = 4 * S.n_S * _prod_one_plus_inverse(S.primes)
    return _exact("sunit_count", "4*n_S*prod_{p in S}(1+1/p)", _inputs(S=S), value)


# ---------------------------------------------------------------- Mordell equations


def r2(a, S) -> int:
    """prod p^min(2, ord_p a) over primes p outside S with ord_p a >= 1."""
    a = as_rational(a)
    if a == 0:
        raise DomainError("a must be nonzero")
    S = PrimeSet.of(S)
    out = 1
    if abs(a.numerator) == 1:
        return 1
    for p, e in factorize(a.numerator):
        if p not in S:
            out *= p ** min(2, e)
    return out


def a_S(a, S) -> int:
    S = PrimeSet.of(S)
    return 2**8 * 3**5 * S.N**2 * r2(a, S)


def mordell_height_bound(a, S, prec: int = DEFAULT_PREC) -> BoundGroup:
    a = as_rational(a)
    S = PrimeSet.of(S)
    r = r2(a, S)
    aS = 2**8 * 3**5 * S.N**2 * r
    inp = _inputs(a=a, S=S)
    top = max(abs(a.numerator), a.denominator)

    def height(c):
        L = c.log(c.mpf(aS))
        return c.log(c.mpf(top)) + 4 * aS * L * L

    return BoundGroup(
        "mordell_height",
        inp,
        (
            _exact("r2", "prod_{p not in S, ord_p(a)>=1} p^min(2, ord_p(a))", inp, r),
            _exact("a_S", "2^8*3^5*N_S^2*r2(a)", inp, aS),
            _real("mordell_height", "h(a) + 4*a_S*log(a_S)^2", inp, height, prec),
        ),
    )


def mordell_count_bound(a, S) -> BoundValue:
    a = as_rational(a)
    S = PrimeSet.of(S)
    aS = a_S(a, S)
    value = Fraction(2, 3) * aS * _prod_one_plus_inverse(_prime_divisors(aS))
    return _exact("mordell_count", "2/3*a_S*prod_{p | a_S}(1+1/p)", _inputs(a=a, S=S), value)


# ---------------------------------------------------------------- Shafarevich


def shafarevich_bounds(S, level_count: int = 1, prec: int = DEFAULT_PREC) -> BoundGroup:
    S = PrimeSet.of(S)
    nu = 12**3 * S.N**2
    inp = _inputs(S=S)
    euler = _prod_one_plus_inverse(_prime_divisors(nu))

    def model_height(c):
        L = c.log(c.mpf(nu))
        return c.mpf(nu) / 2 * L * L

    def moduli_height(c):
        L = c.log(c.mpf(nu))
        return c.mpf(nu) / 4 * L * L + 9

    return BoundGroup(
        "shafarevich",
        inp,
        (
            _exact("nu_S", "12^3*N_S^2", inp, nu),
            _real("shafarevich_model_height", "1/2*nu_S*log(nu_S)^2", inp, model_height, prec),
            _exact("shafarevich_count", "2/3*nu_S*prod_{p | nu_S}(1+1/p)", inp, Fraction(2, 3) * nu * euler),
            _real("moduli_height", "1/4*nu_T*log(nu_T)^2 + 9", inp, moduli_height, prec),
            _exact(
                "moduli_count",
                "2/3*|P|_T*nu_T*prod_{p | nu_T}(1+1/p)",
                inp + _inputs(level_count=level_count),
                Fraction(2, 3) * level_count * nu * euler,
            ),
        ),
    )


# ---------------------------------------------------------------- modular curves


def _num_divisors(n: int) -> int:
    out = 1
    for _, e in factorize(n):
        out *= e + 1
    return out


def modular_index(N: int) -> int:
    if N < 1:
        raise DomainError("N must be positive")
    d = N
    for p in _prime_divisors(N):
        d = d // p * (p + 1)
    return d


def modular_bounds(N: int, prec: int = DEFAULT_PREC) -> BoundGroup:
    d = modular_index(N)
    g = d // 12
    l = (6 + d) // 6
    inp = _inputs(N=N)
    taus = sorted((_num_divisors(j) for j in range(1, l + 1)), reverse=True)[:g]
    tau_prod = math.prod(taus)

    def log_degree(c):
        L = c.log(c.mpf(N))
        return c.mpf(N) / 2 * L * L

    def refined(c):
        return c.sqrt(c.factorial(g) * c.factorial(l)) * tau_prod

    def j0(c):
        return 7 * c.mpf(10) ** 7 * (N * c.log(c.mpf(N))) ** 6

    return BoundGroup(
        "modular",
        inp,
        (
            _exact("index_d", "N*prod_{p | N}(1+1/p)", inp, d),
            _exact("genus", "floor(d/12)", inp, g),
            _real("divisor_degree", "d/6", inp, lambda c: c.mpf(d) / 6, prec),
            _exact("l", "floor(1 + d/6)", inp, l),
            _real("log_modular_degree", "1/2*N*log(N)^2", inp, log_degree, prec),
            _real("modular_degree_refined", "(g!*l!)^(1/2)*max_J prod_{j in J} tau(j)", inp, refined, prec),
            _real("faltings_height_J0", "7*10^7*(N*log(N))^6", inp, j0, prec),
            _exact("faltings_height_J1", "17*10^3*N^12", inp, 17 * 10**3 * N**12),
            _exact("faltings_height_J", "17*10^3*N^18", inp, 17 * 10**3 * N**18),
        ),
    )


# ---------------------------------------------------------------- height and conductor


def height_conductor_bound(N_E: int, prec: int = DEFAULT_PREC) -> BoundGroup:
    if N_E < 1:
        raise DomainError("N_E must be positive")
    inp = _inputs(N_E=N_E)

    def height(c):
        L = c.log(c.mpf(N_E))
        return c.mpf(N_E) / 4 * L * L + 9

    def disc(c):
        L = c.log(c.mpf(N_E))
        return 3 * c.mpf(N_E) * L * L + 124

    def poly(c):
        return c.mpf(10) ** 8 * (N_E * c.log(c.mpf(N_E))) ** 6

    return BoundGroup(
        "height_conductor",
        inp,
        (
            _real("faltings_height", "1/4*N_E*log(N_E)^2 + 9", inp, height, prec),
            _real("log_discriminant", "3*N_E*log(N_E)^2 + 124", inp, disc, prec),
            _real("faltings_height_polynomial", "10^8*(N_E*log(N_E))^6", inp, poly, prec),
        ),
    )


def pellarin_bound(h_F, prec: int = DEFAULT_PREC) -> BoundValue:
    """12 h_F + 6 log max(1, h_F) + 75.84, an upper bound for h(j)."""
    hF = _as_fraction(h_F)

    def fn(c):
        return 12 * _q(c, hF) + 6 * c.log(_q(c, max(Fraction(1), hF))) + _q(c, Fraction(7584, 100))

    return _real("pellarin", "12*h_F + 6*log(max(1,h_F)) + 75.84", _inputs(h_F=hF), fn, prec)


def model_height_bound(h, h_F, kappa_value=0, prec: int = DEFAULT_PREC) -> BoundValue:
    """h + log(max(1, h_F))/2 + kappa + 7, an upper bound for h(W)."""
    h, hF, k = (_as_fraction(v) for v in (h, h_F, kappa_value))

    def fn(c):
        return _q(c, h) + c.log(_q(c, max(Fraction(1), hF))) / 2 + _q(c, k) + 7

    return _real("weierstrass_model_height", "h(E) + 1/2*log(max(1,h_F)) + kappa + 7", _inputs(h=h, h_F=hF), fn, prec)


def bost_lower_bound(g: int = 1, prec: int = DEFAULT_PREC) -> BoundValue:
    return _real(
        "bost_lower_bound",
        "-(g/2)*log(2*pi^2)",
        _inputs(g=g),
        lambda c: -c.mpf(g) / 2 * c.log(2 * c.pi**2),
        prec,
        down=True,
    )


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        if "/" in x:
            return as_rational(x)
        return Fraction(x)
    try:
        from mpmath.libmp import to_rational as _tr

        p, q = _tr(x._mpf_)
        return Fraction(int(p), int(q))
    except AttributeError:
        return Fraction(x)


# ---------------------------------------------------------------- GL2-type results


def gl2_bounds(
    g: int,
    S,
    N_A: int | None = None,
    h_F=None,
    d: int = 1,
    isogeny_degree: int | None = None,
    prec: int = DEFAULT_PREC,
    force_log: bool = False,
) -> BoundGroup:
    if g < 1:
        raise DomainError("g must be positive")
    S = PrimeSet.of(S)
    N = S.N
    inp = _inputs(g=g, S=S)
    rho = sum(1 for p in S.primes if p <= 2 * g + 1)
    nu0 = (2 * g + 1) ** (6 * rho) * N**2
    logN = (lambda c: c.log(c.mpf(N)))

    def precise(c):
        return g * (18 * c.mpf(10) ** 3 * c.mpf(nu0) ** 12 + c.mpf(8 * g) ** 6 * c.log(c.mpf(nu0)))

    def ss(c):
        return g * c.mpf(3 * N) ** 12 + c.mpf(6 * g) ** 7 * logN(c)

    def isodiff(c):
        return c.mpf(30 * g) ** 3 * logN(c) + c.mpf(9 * g) ** 6

    out = [
        _exact("rho", "#{p in S : p <= 2g+1}", inp, rho),
        _power_product("nu_0", "(2g+1)^(6*rho)*N_S^2", inp, [(2 * g + 1, 6 * rho), (N, 2)], prec, force_log),
        _power_product("effective_shafarevich", "(3g)^(144g)*N_S^24", inp, [(3 * g, 144 * g), (N, 24)], prec, force_log),
        _real("precise_height", "g*(18*10^3*nu_0^12 + (8g)^6*log(nu_0))", inp, precise, prec, force_log=force_log),
        _real("semistable_height", "g*(3*N_S)^12 + (6g)^7*log(N_S)", inp, ss, prec, force_log=force_log),
        _power_product(
            "isogeny_degree", "(14g)^((12g)^5)*N_S^((37g)^3)", inp, [(14 * g, (12 * g) ** 5), (N, (37 * g) ** 3)], prec, force_log
        ),
        _real("isogeny_height_difference", "(30g)^3*log(N_S) + (9g)^6", inp, isodiff, prec, force_log=force_log),
        _power_product(
            "isomorphism_classes", "(14g)^((9g)^6)*N_S^((18g)^4)", inp, [(14 * g, (9 * g) ** 6), (N, (18 * g) ** 4)], prec, force_log
        ),
        _power_product(
            "isogenous_varieties", "(14g)^((9g)^6)*N_T^((18g)^4)", inp, [(14 * g, (9 * g) ** 6), (N, (18 * g) ** 4)], prec, force_log
        ),
        _power_product("isogeny_classes", "(3g)^(32g^2)*N_T^(4g)", inp, [(3 * g, 32 * g * g), (N, 4 * g)], prec, force_log),
        _power_product(
            "conductor_divisor",
            "(2g+1)^(6*g*d*rho)*N_S^(2g)",
            inp + _inputs(d=d),
            [(2 * g + 1, 6 * g * d * rho), (N, 2 * g)],
            prec,
            force_log,
        ),
        _real("isogeny_class_height_variation", "1/2*log(163)", inp, lambda c: c.log(c.mpf(163)) / 2, prec),
        _real(
            "semistable_leading_constant",
            "e^gamma/(4*pi^2)",
            inp,
            lambda c: c.exp(c.euler) / (4 * c.pi**2),
            prec,
        ),
        _real(
            "semistable_leading_constant_good_23",
            "e^gamma/(6*pi^2)",
            inp,
            lambda c: c.exp(c.euler) / (6 * c.pi**2),
            prec,
        ),
        bost_lower_bound(g, prec),
    ]
    if N_A is not None:
        if N_A < 1:
            raise DomainError("N_A must be positive")

        def gl2(c):
            return c.mpf(3 * N_A) ** 12 + c.mpf(8 * g) ** 6 * c.log(c.mpf(N_A))

        out.append(_real("gl2_height", "(3*N_A)^12 + (8g)^6*log(N_A)", inp + _inputs(N_A=N_A), gl2, prec, force_log=force_log))
    if h_F is not None:
        hF = _as_fraction(h_F)

        def gr(c):
            m = _q(c, max(hF, Fraction(1), _upper(c.log(c.mpf(d)))))
            inner = c.mpf(64 * g * g) * c.log(c.mpf(14 * g)) + c.log(c.mpf(d)) + 2 * c.log(m)
            return 2**10 * c.mpf(g) ** 3 * inner

        out.append(
            _real(
                "isogeny_height_difference_transcendental",
                "2^10*g^3*log((14g)^(64g^2)*d*max(h_F,log(d),1)^2)",
                inp + _inputs(h_F=hF, d=d),
                gr,
                prec,
            )
        )
    if isogeny_degree is not None:
        if isogeny_degree < 1:
            raise DomainError("degree must be positive")
        out.append(
            _real(
                "isogeny_degree_height_difference",
                "1/2*log(deg)",
                inp + _inputs(deg=isogeny_degree),
                lambda c: c.log(c.mpf(isogeny_degree)) / 2,
                prec,
            )
        )
    return BoundGroup("gl2", inp, tuple(out))


# ---------------------------------------------------------------- number fields


def kappa(D_K: int, d: int, R_K, r_K: int, prec: int = DEFAULT_PREC) -> BoundValue:
    if d < 1 or D_K < 1 or r_K < 0:
        raise DomainError("need D_K >= 1, d >= 1, r_K >= 0")
    R = _as_fraction(R_K)
    if R < 0:
        raise DomainError("R_K must be nonnegative")

    def fn(c):
        first = c.log(c.mpf(D_K)) / (2 * d)
        if r_K == 0 or R == 0 or d == 1:
            return first
        return first + 79 * _q(c, R) * math.factorial(r_K) * c.mpf(r_K) ** c.mpf(1.5) * c.log(c.mpf(d))

    return _real("kappa", "log(D_K)/(2d) + 79*R_K*r_K!*r_K^(3/2)*log(d)", _inputs(D_K=D_K, d=d, R_K=R, r_K=r_K), fn, prec)


def number_field_parshin_bounds(d: int, D_K: int, h_K: int, N_T: int, N_S: int = 1, r2_a: int = 1, prec: int = DEFAULT_PREC) -> BoundGroup:
    if min(d, D_K, h_K, N_T, N_S, r2_a) < 1:
        raise DomainError("all inputs must be positive")
    inp = _inputs(d=d, D_K=D_K, h_K=h_K, N_T=N_T, N_S=N_S, r2=r2_a)
    return BoundGroup(
        "number_field_parshin",
        inp,
        (
            _power_product("frey_conductor", "2^(6d)*3^(5d)*N_T^2", inp, [(2, 6 * d), (3, 5 * d), (N_T, 2)], prec),
            _power_product(
                "legendre_conductor",
                "2^(7d)*3^(5d)*D_K^(h_K-1)*N_T",
                inp,
                [(2, 7 * d), (3, 5 * d), (D_K, h_K - 1), (N_T, 1)],
                prec,
            ),
            _power_product("mordell_conductor", "2^(6d)*3^(3d)*N_T^2", inp, [(2, 6 * d), (3, 3 * d), (N_T, 2)], prec),
            _power_product(
                "mordell_conductor_explicit",
                "2^(8d)*3^(5d)*D_K*N_S^2*r2(a)",
                inp,
                [(2, 8 * d), (3, 5 * d), (D_K, 1), (N_S, 2), (r2_a, 1)],
                prec,
            ),
        ),
    )
