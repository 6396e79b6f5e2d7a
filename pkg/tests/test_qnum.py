"""Tests for quantum-integer arithmetic over pointed rings."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from valenced_tl.qnum import (
    INFINITY,
    Mode,
    NoValidModulus,
    build_ring,
    generic_ring,
    p_power,
    parse,
    psi_polynomial,
    qint_ratio,
    quantum_binomial,
    quantum_factorial,
    quantum_int,
    render,
)
from valenced_tl.digits import dominates

GRID = [(2, 2), (3, 2), (2, 5), (4, 3), (5, 3), (5, INFINITY), (INFINITY, INFINITY)]


def rings():
    return [build_ring(ell, p) for ell, p in GRID]


# -- construction ------------------------------------------------------------

def test_build_ring_modes():
    assert build_ring(INFINITY, INFINITY).mode is Mode.GENERIC
    assert build_ring(5, INFINITY).mode is Mode.CHAR_ZERO_ROOT
    assert build_ring(5, 3).mode is Mode.MIXED


def test_psi_5():
    # frozen value: divide [5] by psi_2 * psi_3 by hand: psi_5 = d^4 - 3d^2 + 1
    assert psi_polynomial(5) == (1, 0, -3, 0, 1)


def test_psi_2_gives_delta_zero():
    for p in (2, 3, 5, INFINITY):
        ring = build_ring(2, p)
        assert ring.delta.is_zero()


def test_build_ring_4_3():
    # psi_4 = d^2 - 2; mod 3 it is irreducible (2 is not a QR mod 3)
    ring = build_ring(4, 3)
    assert ring.modulus == (1, 0, 1)  # d^2 - 2 = d^2 + 1 mod 3
    assert not quantum_int(2, ring).is_zero()
    assert not quantum_int(3, ring).is_zero()
    assert quantum_int(4, ring).is_zero()


def test_theta_222_cross_check():
    # [4][3]/[2]^2 = (d^3-2d)(d^2-1)/d^2 = (d^2-2)(d^2-1)/d generically.
    g = generic_ring()
    v = (quantum_int(4, g) * quantum_int(3, g)) / (quantum_int(2, g) ** 2)
    assert render(v) == "(d^4-3*d^2+2)/(d)"
    w = (quantum_int(2, g) ** 2 - g.one) * (quantum_int(2, g) ** 2 - g.from_int(2))
    assert v * quantum_int(2, g) == w


def test_first_vanishing_validated_everywhere():
    for ring in rings():
        if ring.mode is Mode.GENERIC:
            continue
        ell = ring.ell
        for i in range(2, ell):
            assert not quantum_int(i, ring).is_zero()
        assert quantum_int(ell, ring).is_zero()


def test_invalid_parameters():
    with pytest.raises(ValueError):
        build_ring(1, INFINITY)
    with pytest.raises(ValueError):
        build_ring(3, 4)


# -- quantum integers ----------------------------------------------------------

def test_quantum_int_base_cases():
    for ring in rings():
        assert quantum_int(0, ring).is_zero()
        assert quantum_int(1, ring) == ring.one
        assert quantum_int(2, ring) == ring.delta


def test_quantum_int_3_generic():
    g = generic_ring()
    assert render(quantum_int(3, g)) == "d^2-1"


def test_quantum_int_5_vanishes_at_ell_5():
    ring = build_ring(5, INFINITY)
    assert quantum_int(5, ring).is_zero()


def test_negative_argument():
    g = generic_ring()
    assert quantum_int(-3, g) == -quantum_int(3, g)


def test_recurrence_all_rings():
    for ring in rings():
        d = ring.delta
        for n in range(1, 51):
            assert (quantum_int(n + 1, ring) + quantum_int(n - 1, ring)
                    == d * quantum_int(n, ring))


def test_vanishing_iff_ell_divides():
    for ring in rings():
        if ring.mode is Mode.GENERIC:
            continue
        ell = ring.ell
        for n in range(0, 10 * ell + 1):
            assert quantum_int(n, ring).is_zero() == (n % ell == 0)


# -- factorials and binomials --------------------------------------------------

def test_binomial_2_1():
    g = generic_ring()
    assert quantum_binomial(2, 1, g) == g.delta


def test_binomial_4_2():
    g = generic_ring()
    expected = (quantum_int(4, g) * quantum_int(3, g)) / (
        quantum_int(2, g) * quantum_int(1, g)
    )
    assert quantum_binomial(4, 2, g) == expected
    assert render(quantum_binomial(4, 2, g)) == "d^4-3*d^2+2"


def test_binomial_5_2_vanishes_at_ell_5():
    ring = build_ring(5, INFINITY)
    assert quantum_binomial(5, 2, ring).is_zero()


def test_factorial():
    g = generic_ring()
    assert quantum_factorial(0, g) == g.one
    assert quantum_factorial(3, g) == quantum_int(2, g) * quantum_int(3, g)


def test_binomial_dominance_equivalence():
    # [n over k] != 0 in the ring iff n dominates k digitwise
    for ell, p in [(2, 2), (3, 2), (4, 3), (5, 3), (5, INFINITY)]:
        ring = build_ring(ell, p)
        for n in range(0, 61):
            for k in range(0, n + 1):
                nonzero = not quantum_binomial(n, k, ring).is_zero()
                assert nonzero == dominates(n, k, ell, p), (ell, p, n, k)


# -- field behavior -------------------------------------------------------------

def test_generic_field_random_division():
    g = generic_ring()
    rng = random.Random(20240817)
    for _ in range(1000):
        x = g.from_int_poly(tuple(rng.randint(-5, 5) for _ in range(4)))
        y = g.from_int_poly(tuple(rng.randint(-5, 5) for _ in range(4)))
        if y.is_zero():
            continue
        assert (x / y) * y == x


def test_mixed_mode_is_field():
    ring = build_ring(5, 3)
    elems = [ring.from_int_poly((a, b)) for a in range(3) for b in range(3)]
    for x in elems:
        if x.is_zero():
            continue
        assert x * x.inverse() == ring.one


# -- the exact-cancellation ratio -----------------------------------------------

def test_qint_ratio_trivial():
    ring = build_ring(3, 5)
    assert qint_ratio(1, 1, 1, ring) == ring.one


def test_qint_ratio_lemma_value():
    ring = build_ring(3, 5)
    assert qint_ratio(2, 1, 1, ring) == ring.from_int(2)


def test_qint_ratio_mod_p_inverse():
    # [12]/[8] at (4,5).  [12]/[8] cancels to psi_3*psi_6*psi_12/psi_8 over Q;
    # at d^2 = 2 in F_5 this is (1 * -1 * -3) / -2 = -3/2 = -3 * 3 = 1 mod 5.
    # (The unsigned value 3/2 = 4 would be wrong: the branch point has
    # q^(l) = -1, which contributes the sign (-1)^(a-b).)
    ring = build_ring(4, 5)
    assert qint_ratio(3, 2, 1, ring) == ring.one


def test_qint_ratio_sweep():
    # The cancelled ratio is always +-a/b; it is defined exactly when the
    # reduced denominator of a/b is invertible mod p, and composing ratios
    # is consistent.
    from fractions import Fraction

    for ell, p in [(2, 2), (3, 2), (2, 5), (4, 3), (5, 3)]:
        ring = build_ring(ell, p)
        for a in range(1, 7):
            for b in range(1, 7):
                for i in (1, 2):
                    if Fraction(a, b).denominator % p == 0:
                        with pytest.raises(ZeroDivisionError):
                            qint_ratio(a, b, i, ring)
                        continue
                    value = qint_ratio(a, b, i, ring)
                    frac = Fraction(a, b)
                    image = ring.from_int(frac.numerator) / ring.from_int(
                        frac.denominator
                    )
                    assert value in (image, -image), (ell, p, a, b, i)
                    assert qint_ratio(a, a, i, ring) == ring.one
                    if Fraction(b, a).denominator % p != 0:
                        # both directions defined: they are inverse to
                        # each other
                        assert value * qint_ratio(b, a, i, ring) == ring.one


# -- render / parse round trip ---------------------------------------------------

def test_render_examples():
    ring = build_ring(5, INFINITY)
    assert render(ring.zero) == "0"
    assert render(ring.one) == "1"
    assert render(ring.delta) == "d"


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(-9, 9), min_size=1, max_size=5),
       st.lists(st.integers(-9, 9), min_size=1, max_size=5))
def test_round_trip_generic(num, den):
    g = generic_ring()
    y = g.from_int_poly(tuple(den))
    if y.is_zero():
        return
    x = g.from_int_poly(tuple(num)) / y
    assert parse(render(x), g) == x


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 2), min_size=1, max_size=4))
def test_round_trip_mixed(coeffs):
    ring = build_ring(5, 3)
    x = ring.from_int_poly(tuple(coeffs))
    assert parse(render(x), ring) == x


def test_p_power():
    assert p_power(0, 4, 3) == 1
    assert p_power(1, 4, 3) == 4
    assert p_power(2, 4, 3) == 12
    assert p_power(3, 4, 3) == 36
