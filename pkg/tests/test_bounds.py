import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from effdio import bounds as B
from effdio.errors import DomainError

PRIME_SETS = ["", "2", "3", "2,3", "5", "2,5", "2,3,5", "7,11", "2,3,5,7,11,13"]


def collect(prec, S="2,3", g=1, N=37, a=8):
    out = []
    out += B.sunit_height_bound(S, prec).bounds
    out += B.mordell_height_bound(a, S, prec).bounds
    out += B.shafarevich_bounds(S, prec=prec).bounds
    out += B.modular_bounds(N, prec).bounds
    out += B.height_conductor_bound(N, prec).bounds
    out += B.gl2_bounds(g, S, N_A=N, h_F="1.5", d=2, isogeny_degree=7, prec=prec).bounds
    out += B.number_field_parshin_bounds(2, 5, 1, 6, 3, 4, prec).bounds
    out += [B.kappa(5, 2, "0.5", 1, prec), B.pellarin_bound("2.5", prec), B.model_height_bound(1, 2, 0, prec)]
    out += [B.bost_lower_bound(g, prec), B.sunit_count_bound(S), B.mordell_count_bound(a, S)]
    return out


def check_sound(lo, hi):
    assert lo.name == hi.name
    if lo.rounding == "down":
        assert hi.value >= lo.value
    elif lo.log_scale:
        assert hi.log_scale and hi.log10_value <= lo.log10_value
    else:
        assert hi.value <= lo.value, lo.name


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(PRIME_SETS), st.integers(1, 3), st.integers(1, 400), st.sampled_from([1, -2, 8, 12, Fraction(3, 4), 1000]))
def test_upward_rounding_survives_4x_precision(S, g, N, a):
    lo = collect(128, S, g, N, a)
    hi = collect(512, S, g, N, a)
    for x, y in zip(lo, hi):
        check_sound(x, y)


def test_sunit_examples():
    assert B.sunit_height_bound("2")["n_S"].value == 256
    assert B.sunit_height_bound("")["n_S"].value == 128
    h = B.sunit_height_bound("2")["sunit_height"].value
    assert 11872 < h < 11873 and abs(float(h) - 1.188e4) < 10
    assert B.sunit_count_bound("2").value == 1536
    assert B.sunit_count_bound("").value == 512
    assert B.sunit_count_bound("2,3").value == 6144


def test_mordell_examples():
    g = B.mordell_height_bound(1, "")
    assert g["a_S"].value == 62208
    assert B.mordell_height_bound(8, "")["r2"].value == 4
    assert B.mordell_height_bound(8, "")["a_S"].value == 248832
    assert B.mordell_height_bound(8, "2")["r2"].value == 1
    assert B.r2(-2, "") == 2
    assert abs(float(g["mordell_height"].value) - 3.03e7) < 1e5
    assert B.mordell_count_bound(1, "").value == 82944
    aS = 2**8 * 3**5 * 4
    assert B.mordell_count_bound(1, "2").value == Fraction(2, 3) * aS * Fraction(3, 2) * Fraction(4, 3)
    with pytest.raises(DomainError):
        B.r2(0, "")


def test_shafarevich_examples():
    assert B.shafarevich_bounds("")["nu_S"].value == 1728
    assert B.shafarevich_bounds("")["shafarevich_count"].value == 2304
    assert B.shafarevich_bounds("5")["nu_S"].value == 43200


def test_modular_examples():
    m = B.modular_bounds(11)
    assert m["index_d"].value == 12 and m["genus"].value == 1 and m["l"].value == 3
    assert abs(float(m["log_modular_degree"].value) - 31.62) < 0.01
    assert B.modular_bounds(1)["index_d"].value == 1
    assert m["faltings_height_J1"].value == 17 * 10**3 * 11**12
    # sqrt(1! 3!) * tau(2)
    assert abs(float(m["modular_degree_refined"].value) - math.sqrt(6) * 2) < 1e-12


def test_height_conductor_examples():
    assert abs(float(B.height_conductor_bound(11)["faltings_height"].value) - 24.81) < 0.01
    assert B.height_conductor_bound(1)["faltings_height"].value == 9
    v = B.height_conductor_bound(37)["log_discriminant"].value
    with mpmath.workprec(200):
        exact = 3 * 37 * mpmath.log(37) ** 2 + 124
        assert 0 <= mpmath.mpf(v.numerator) / v.denominator - exact < mpmath.mpf(10) ** -34


def test_conductor_exponent():
    assert B.conductor_exponent_bound(1, 2, 1) == 8
    assert B.conductor_exponent_bound(1, 3, 1) == 5
    assert B.conductor_exponent_bound(1, 5, 1) == 2
    assert B.conductor_exponent_bound(1, 2, 2) == 2 + 6 * 2
    assert B.conductor_exponent_bound(1, 3, 2) == 2 + 3 * 2
    with pytest.raises(DomainError):
        B.conductor_exponent_bound(1, 4, 1)


@given(st.integers(1, 6), st.sampled_from([2, 3, 5, 7, 11, 13, 17, 19, 23]), st.integers(1, 4))
def test_conductor_exponent_collapses_for_large_p(g, p, e):
    f = B.conductor_exponent_bound(g, p, e)
    assert f >= 2 * g
    if p > 2 * g + 1:
        assert f == 2 * g


def test_gl2_examples():
    g = B.gl2_bounds(1, "")
    assert g["effective_shafarevich"].value == 3**144
    assert g["effective_shafarevich"].exact
    assert g["isomorphism_classes"].log_scale
    assert g["isogeny_degree"].log_scale
    assert abs(float(g["isogeny_class_height_variation"].value) - 2.548) < 2e-3
    assert g["semistable_height"].value == 3**12
    assert g["bost_lower_bound"].rounding == "down"
    # bad primes at most 2g+1
    assert g["rho"].value == 0 and g["nu_0"].value == 1
    g23 = B.gl2_bounds(1, "2,3,5")
    assert g23["rho"].value == 2
    assert g23["nu_0"].value == 3**12 * 30**2


def test_gl2_log_scale_reproduces_small_cases():
    g = B.gl2_bounds(1, "", force_log=True)
    with mpmath.workprec(256):
        for name, exact in [("effective_shafarevich", 3**144), ("isogeny_classes", 3**32), ("nu_0", 1), ("semistable_height", 3**12)]:
            b = g[name]
            assert b.log_scale
            v = mpmath.mpf(10) ** (mpmath.mpf(b.log10_value.numerator) / b.log10_value.denominator)
            assert abs(v / exact - 1) < mpmath.mpf(10) ** -30, name
            assert v >= exact


def test_gl2_optional_pieces():
    g = B.gl2_bounds(2, "3", N_A=15, h_F=2, d=3, isogeny_degree=4)
    assert "gl2_height" in g and "isogeny_degree_height_difference" in g
    assert "isogeny_height_difference_transcendental" in g
    assert "gl2_height" not in B.gl2_bounds(2, "3")
    v = g["gl2_height"].value
    assert v >= (3 * 15) ** 12 + 16**6 * Fraction(270805, 100000)


def test_kappa():
    assert B.kappa(1, 1, 0, 0).value == 0
    v = B.kappa(5, 2, "0.5", 1).value
    assert abs(float(v) - (math.log(5) / 4 + 79 * 0.5 * math.log(2))) < 1e-12
    assert B.kappa(7, 2, "0.5", 1).value > v


def test_number_field():
    nf = B.number_field_parshin_bounds(1, 1, 1, 2)
    assert nf["legendre_conductor"].value == 62208
    assert nf["frey_conductor"].value == 62208
    assert B.number_field_parshin_bounds(1, 1, 1, 1)["mordell_conductor_explicit"].value == 62208
    with pytest.raises(DomainError):
        B.number_field_parshin_bounds(0, 1, 1, 1)


def test_counting_bounds_are_exact_integers():
    for b in [B.sunit_count_bound("2,3,7"), B.mordell_count_bound(Fraction(5, 3), "3"), B.shafarevich_bounds("2")["shafarevich_count"]]:
        assert b.exact and b.value.denominator == 1


def test_json_shape():
    doc = B.sunit_height_bound("2")["sunit_height"].to_json()
    assert set(doc) == {"name", "paper_anchor", "inputs", "value", "log_scale", "exact", "rounding"}
    assert doc["rounding"] == "up" and isinstance(doc["value"], str)
    big = B.gl2_bounds(1, "")["isomorphism_classes"].to_json()
    assert "log10_value" in big and big["log_scale"] is True


@given(st.fractions(min_value=Fraction(1, 10**9), max_value=Fraction(10**30)), st.integers(5, 40))
def test_round_decimal(x, sig):
    up = B.round_decimal(x, sig)
    down = B.round_decimal(x, sig, up=False)
    assert down <= x <= up
    assert Fraction(B.format_decimal(up)) == up
    assert (up - down) <= x * Fraction(10) ** (1 - sig) * 2
