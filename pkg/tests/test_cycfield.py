from __future__ import annotations

from fractions import Fraction
from math import comb, prod

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from rayclass.abgroup import is_prime, p_adic_valuation
from rayclass.cycfield import (
    CycElem,
    bernoulli,
    bernoulli_numbers,
    cyc_mul,
    cyclotomic_unit,
    digit_expansion,
    div_by_pi,
    from_digits,
    gamma_k,
    is_regular,
    minus_class_number,
    pi_valuation,
    primitive_root,
)
from rayclass.errors import (
    CapExceeded,
    IndexOutOfRange,
    MismatchedPrime,
    NotDivisible,
    NotOddPrime,
    ZeroElement,
)


def recurrence_bernoulli(n_max):
    """sum_{j<=n} C(n+1, j) B_j = 0 with B_0 = 1."""
    B = [Fraction(1)]
    for n in range(1, n_max + 1):
        B.append(-sum(comb(n + 1, j) * B[j] for j in range(n)) / (n + 1))
    return B


def norm_valuation(x: CycElem) -> int:
    """v_p of the norm of x, via the resultant with Phi_p; equals v_pi(x)."""
    t = sympy.symbols("t")
    phi = sum(t ** i for i in range(x.p))
    poly = sum(c * t ** i for i, c in enumerate(x.coeffs))
    return p_adic_valuation(abs(int(sympy.resultant(phi, poly, t))), x.p)


def cyc_elems(p, lo=-20, hi=20):
    return st.lists(st.integers(lo, hi), min_size=p - 1, max_size=p - 1).map(lambda c: CycElem(p, c))


# --- ring arithmetic -------------------------------------------------------------------


def test_elem_validation():
    with pytest.raises(ValueError):
        CycElem(5, (1, 2, 3))
    with pytest.raises(MismatchedPrime):
        CycElem.integer(5, 1) * CycElem.integer(7, 1)


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_zeta_identities(p):
    z = CycElem.zeta_power(p, 1)
    one = CycElem.integer(p, 1)
    assert z * one == z
    assert z * CycElem.zeta_power(p, p - 2) == CycElem(p, (-1,) * (p - 1))
    assert z ** p == one
    assert pi_valuation(CycElem.pi(p) ** (p - 1)) == p - 1 == pi_valuation(CycElem.integer(p, p))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([3, 5, 7]).flatmap(lambda p: st.tuples(cyc_elems(p), cyc_elems(p), cyc_elems(p))))
def test_ring_axioms(xyz):
    x, y, z = xyz
    assert cyc_mul(x, y) == cyc_mul(y, x)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z


def test_div_by_pi_examples():
    p = 5
    assert div_by_pi(CycElem.pi(p)) == CycElem.integer(p, 1)
    z = div_by_pi(CycElem.integer(p, p))
    assert CycElem.pi(p) * z == CycElem.integer(p, p)
    with pytest.raises(NotDivisible):
        div_by_pi(CycElem.integer(p, 1))


@pytest.mark.parametrize(
    "x, v",
    [(CycElem.pi(5), 1), (CycElem.integer(5, 5), 4), (CycElem.integer(7, 7), 6),
     (cyclotomic_unit(5, 2), 0), (CycElem.integer(5, 25), 8)],
)
def test_pi_valuation_examples(x, v):
    assert pi_valuation(x) == v


def test_pi_valuation_zero():
    with pytest.raises(ZeroElement):
        pi_valuation(CycElem.integer(5, 0))


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([3, 5, 7]).flatmap(lambda p: st.tuples(cyc_elems(p), cyc_elems(p))))
def test_pi_valuation_additive_and_matches_norm(xy):
    x, y = xy
    if x.is_zero() or y.is_zero():
        return
    assert pi_valuation(x * y) == pi_valuation(x) + pi_valuation(y)
    assert pi_valuation(x) == norm_valuation(x)


# --- digits ------------------------------------------------------------------------------


def test_digit_examples():
    assert digit_expansion(CycElem.integer(5, 1), 4).digits == (1, 0, 0, 0)
    assert digit_expansion(CycElem.zeta_power(5, 1), 3).digits == (1, 4, 0)
    assert digit_expansion(cyclotomic_unit(5, 2), 3).digits == (2, 4, 0)


@settings(max_examples=150, deadline=None)
@given(st.sampled_from([3, 5, 7, 11]).flatmap(
    lambda p: st.tuples(st.just(p), st.lists(st.integers(0, p - 1), min_size=1, max_size=12))))
def test_digit_round_trip(pd):
    p, digits = pd
    k = len(digits)
    x = from_digits(p, digits)
    assert digit_expansion(x, k).digits == tuple(digits)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([3, 5, 7, 11]).flatmap(lambda p: cyc_elems(p, -500, 500)), st.integers(1, 12))
def test_digits_reconstruct_modulo_pi_k(x, k):
    back = from_digits(x.p, digit_expansion(x, k).digits)
    diff = back - x
    assert diff.is_zero() or pi_valuation(diff) >= k


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([5, 7]).flatmap(lambda p: st.tuples(cyc_elems(p), cyc_elems(p))), st.integers(1, 10))
def test_equal_digits_means_congruent(xy, k):
    x, y = xy
    same = digit_expansion(x, k).digits == digit_expansion(y, k).digits
    diff = x - y
    assert same == (diff.is_zero() or pi_valuation(diff) >= k)


# --- cyclotomic units ----------------------------------------------------------------------


def test_cyclotomic_unit_examples():
    assert cyclotomic_unit(5, 2) == CycElem(5, (1, 1, 0, 0))
    assert cyclotomic_unit(5, 4) == -CycElem.zeta_power(5, 4)
    with pytest.raises(IndexOutOfRange):
        cyclotomic_unit(5, 1)
    with pytest.raises(IndexOutOfRange):
        cyclotomic_unit(5, 5)
    with pytest.raises(NotOddPrime):
        cyclotomic_unit(4, 2)


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 23])
def test_cyclotomic_units_are_units(p):
    for i in range(2, p):
        assert pi_valuation(cyclotomic_unit(p, i)) == 0
    lam = primitive_root(p)
    # u_lambda = lambda mod pi, so its residue has order p - 1
    assert cyclotomic_unit(p, lam).trace_sum() % p == lam
    assert sympy.n_order(lam, p) == p - 1


# --- Bernoulli numbers ----------------------------------------------------------------------


def test_bernoulli_examples():
    assert bernoulli(0) == 1 and bernoulli(1) == Fraction(-1, 2)
    assert bernoulli(2) == Fraction(1, 6) and bernoulli(4) == Fraction(-1, 30)
    assert bernoulli(3) == 0 and bernoulli(12) == Fraction(-691, 2730)


def test_bernoulli_matches_plain_recurrence():
    assert bernoulli_numbers(120) == recurrence_bernoulli(120)


@pytest.mark.parametrize("n", [2, 10, 50, 100, 250])
def test_bernoulli_matches_sympy(n):
    assert bernoulli(n) == Fraction(int(sympy.bernoulli(n).p), int(sympy.bernoulli(n).q))


def test_von_staudt_clausen():
    for k in range(2, 400, 2):
        want = prod(q for q in range(2, k + 2) if is_prime(q) and k % (q - 1) == 0)
        assert bernoulli(k).denominator == want, k


def test_bernoulli_cap():
    with pytest.raises(CapExceeded):
        bernoulli(2002)
    with pytest.raises(ValueError):
        bernoulli(-1)


def test_regularity():
    irregular = {p: is_regular(p)[1] for p in range(3, 70) if is_prime(p) and not is_regular(p)[0]}
    assert irregular == {37: [32], 59: [44], 67: [58]}
    assert is_regular(3) == (True, [])
    assert is_regular(23) == (True, [])


def test_gamma():
    assert gamma_k(23, 4) == 0
    assert gamma_k(37, 2, index_cap=100) == 0
    # 37 | B_32 (gamma >= 1), and 37^3 does not divide the numerator of B_1184
    assert bernoulli(32).numerator % 37 == 0
    assert bernoulli(32 * 37).numerator % 37 ** 3 != 0
    assert gamma_k(37, 32) == 1
    with pytest.raises(ValueError):
        gamma_k(37, 3)


# --- minus class number ------------------------------------------------------------------------


@pytest.mark.parametrize(
    "p, h",
    [(3, 1), (5, 1), (7, 1), (11, 1), (13, 1), (17, 1), (19, 1), (23, 3), (29, 8), (31, 9),
     (37, 37), (41, 121), (43, 211), (47, 695), (53, 4889), (59, 41241)],
)
def test_minus_class_number(p, h):
    assert minus_class_number(p) == h


def test_minus_class_number_divisibility_tracks_regularity():
    for p in (23, 29, 31, 37, 41, 43, 47, 53, 59):
        regular, _ = is_regular(p)
        assert (minus_class_number(p) % p != 0) == regular


def test_minus_class_number_cap():
    with pytest.raises(CapExceeded):
        minus_class_number(211)
