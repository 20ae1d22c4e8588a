from __future__ import annotations

from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from rayclass.abgroup import AbGroup, quotient_by_subgroup
from rayclass.cycfield import CycElem, from_digits
from rayclass.errors import BudgetExceeded, CapExceeded, NotAUnit, RamifiedPrime, UnsupportedPrime
from rayclass.oracle import (
    Budget,
    cyc_quotient_oracle,
    cyc_unit_image_order,
    dlog,
    filtration_jump_oracle,
    local_unit_presentation_cyc,
    local_unit_presentation_quad,
    quad_ratio_oracle,
    tiny_closure_crosscheck,
)
from rayclass.quadfield import split_omega_image, totally_positive_generator


# --- presentations ---------------------------------------------------------------


@pytest.mark.parametrize("p, k, want", [(5, 3, (5, 20)), (3, 1, (2,)), (5, 2, (20,)), (7, 1, (6,))])
def test_cyc_presentation_examples(p, k, want):
    assert local_unit_presentation_cyc(p, k).group().invariant_factors == want


@pytest.mark.parametrize("p, k", [(3, 1), (3, 7), (5, 6), (7, 9), (11, 5)])
def test_cyc_presentation_order(p, k):
    pres = local_unit_presentation_cyc(p, k)
    assert pres.group().order == (p - 1) * p ** (k - 1)
    assert pres.context == "cyclotomic"


@pytest.mark.parametrize("d, p, k, order", [(17, 2, 5, 16), (7, 3, 4, 54), (5, 2, 3, 3 * 16), (2, 3, 3, 8 * 81)])
def test_quad_presentation_order(d, p, k, order):
    assert local_unit_presentation_quad(d, p, k).group().order == order


def test_quad_presentation_rejects_ramified():
    with pytest.raises(RamifiedPrime):
        local_unit_presentation_quad(5, 5, 2)


def test_teichmuller_generator():
    pres = local_unit_presentation_cyc(7, 6)
    ring = pres.ring
    t = pres.generators[0]
    assert ring.is_one(ring.pow(t, 6))
    assert not ring.is_one(ring.pow(t, 3)) and not ring.is_one(ring.pow(t, 2))


# --- dlog -------------------------------------------------------------------------


def test_dlog_examples():
    pres = local_unit_presentation_cyc(5, 3)
    ring = pres.ring
    assert dlog(pres, ring.one) == [0] * pres.num_generators
    assert dlog(pres, pres.generators[0]) == [1] + [0] * (pres.num_generators - 1)
    z = ring.reduce(CycElem.zeta_power(5, 1))
    assert ring.equal(pres.evaluate(dlog(pres, z)), z)
    with pytest.raises(NotAUnit):
        dlog(pres, ring.reduce(CycElem.pi(5)))


PRESENTATIONS = {
    "cyc-3-7": lambda: local_unit_presentation_cyc(3, 7),
    "cyc-5-6": lambda: local_unit_presentation_cyc(5, 6),
    "cyc-7-5": lambda: local_unit_presentation_cyc(7, 5),
}


@pytest.mark.parametrize("name", sorted(PRESENTATIONS))
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_dlog_round_trip_cyc(name, data):
    pres = PRESENTATIONS[name]()
    p, k = pres.p, pres.k
    digits = [data.draw(st.integers(1, p - 1))] + data.draw(
        st.lists(st.integers(0, p - 1), min_size=k - 1, max_size=k - 1))
    x = pres.ring.reduce(from_digits(p, digits))
    assert pres.ring.equal(pres.evaluate(dlog(pres, x)), x)


@pytest.mark.parametrize("d, p, k", [(17, 2, 6), (7, 3, 4), (5, 2, 4), (2, 3, 3), (13, 3, 3)])
@settings(max_examples=30, deadline=None)
@given(a=st.integers(0, 10**6), b=st.integers(0, 10**6))
def test_dlog_round_trip_quad(d, p, k, a, b):
    pres = local_unit_presentation_quad(d, p, k)
    ring = pres.ring
    x = a % ring.modulus if pres.ring.f == 1 else (a % ring.modulus, b % ring.modulus)
    if ring.residue(x) in (0, (0, 0)):
        with pytest.raises(NotAUnit):
            dlog(pres, x)
        return
    assert ring.equal(pres.evaluate(dlog(pres, x)), x)


def test_dlog_is_a_homomorphism_modulo_relations():
    pres = local_unit_presentation_cyc(5, 5)
    ring = pres.ring
    x = ring.reduce(from_digits(5, [2, 1, 0, 3, 4]))
    y = ring.reduce(from_digits(5, [3, 4, 4, 0, 1]))
    lhs = dlog(pres, ring.mul(x, y))
    rhs = [a + b for a, b in zip(dlog(pres, x), dlog(pres, y))]
    diff = [a - b for a, b in zip(lhs, rhs)]
    # the difference lies in the relation lattice: quotienting by it changes nothing
    assert quotient_by_subgroup((pres.num_generators, pres.relations), [diff]) == pres.group()


# --- cyclotomic quotient ---------------------------------------------------------------


@pytest.mark.parametrize("p, k, want", [(5, 3, ()), (5, 6, (5, 5, 5)), (3, 5, (3, 9)), (5, 8, (5, 5, 25))])
def test_cyc_quotient_examples(p, k, want):
    assert cyc_quotient_oracle(p, k).invariant_factors == want


@pytest.mark.parametrize("p", [3, 5, 7])
def test_full_image_at_small_levels(p):
    for k in (0, 1, 2):
        assert cyc_quotient_oracle(p, k) == AbGroup()


def test_cyc_oracle_guards():
    with pytest.raises(UnsupportedPrime):
        cyc_quotient_oracle(11, 3)
    assert cyc_quotient_oracle(11, 4, max_prime=11).order == 11 ** 1
    with pytest.raises(UnsupportedPrime):
        cyc_quotient_oracle(53, 3, max_prime=60)
    with pytest.raises(BudgetExceeded):
        cyc_quotient_oracle(7, 10, budget=Budget(50))


@pytest.mark.parametrize("p, k", [(3, 1), (3, 2), (3, 4), (3, 6), (3, 8), (5, 3), (5, 5), (7, 4)])
def test_closure_agrees_with_dlog_path(p, k):
    assert tiny_closure_crosscheck(p, k) == cyc_quotient_oracle(p, k)


def test_closure_examples_and_cap():
    assert tiny_closure_crosscheck(3, 2) == AbGroup()
    assert tiny_closure_crosscheck(3, 1) == AbGroup()
    with pytest.raises(CapExceeded):
        tiny_closure_crosscheck(3, 9)


def test_unit_image_order():
    assert cyc_unit_image_order(5, 2) == 20
    assert cyc_unit_image_order(5, 6) == 4 * 5 ** 5 // 125


@pytest.mark.parametrize("p, k, idx", [(5, 3, 1), (5, 6, 5), (3, 2, 1), (3, 5, 1), (3, 8, 1), (7, 4, 7)])
def test_filtration_oracle_examples(p, k, idx):
    assert filtration_jump_oracle(p, k) == idx


# --- quadratic oracle -------------------------------------------------------------------


def brute_split_quotient(d, p, k):
    """(Z/p^k)^* / <u0> by listing residues; structure from an order census."""
    mod = p ** k
    _, u0, _ = totally_positive_generator(d)
    a, b = u0.omega_coords()
    g = (a + b * split_omega_image(d, p, k)) % mod
    sub, y = {1 % mod}, g
    while y not in sub:
        sub.add(y)
        y = y * g % mod
    units = [x for x in range(mod) if gcd(x, p) == 1]
    seen, orders = set(), []
    for x in units:
        if x in seen:
            continue
        seen |= {x * h % mod for h in sub}
        n, z = 1, x
        while z not in sub:
            z = z * x % mod
            n += 1
        orders.append(n)
    return orders


@pytest.mark.parametrize("d, p, k, ratio", [(17, 2, 3, 4), (5, 2, 4, 16), (2, 3, 2, 6), (17, 2, 1, 1)])
def test_quad_oracle_examples(d, p, k, ratio):
    assert quad_ratio_oracle(d, p, k).ratio == ratio


def test_quad_oracle_d17_structure_is_klein():
    # u0 = 33 + 8 sqrt17 is 1 mod 8 at both primes above 2, so the quotient is all of (Z/8)^*
    res = quad_ratio_oracle(17, 2, 3)
    assert res.structure == AbGroup((2, 2))
    orders = brute_split_quotient(17, 2, 3)
    assert sorted(orders) == [1, 2, 2, 2]


@pytest.mark.parametrize("d, p, k", [(17, 2, 5), (41, 2, 6), (7, 3, 4), (19, 5, 3), (33, 2, 6)])
def test_quad_split_structure_matches_brute_force(d, p, k):
    res = quad_ratio_oracle(d, p, k)
    orders = brute_split_quotient(d, p, k)
    assert res.ratio == len(orders)
    assert res.structure.exponent == max(orders)


def test_quad_oracle_errors():
    with pytest.raises(RamifiedPrime):
        quad_ratio_oracle(5, 5, 2)
    with pytest.raises(ValueError):
        quad_ratio_oracle(17, 2, 3, case="inert")
    with pytest.raises(BudgetExceeded):
        quad_ratio_oracle(5, 2, 8, budget=Budget(10))
    assert quad_ratio_oracle(17, 2, 0).ratio == 1


def test_inert_structure_cap():
    res = quad_ratio_oracle(2, 3, 12)  # ratio 2 * 3^11
    assert res.structure is None and res.ratio > 10**5
    assert quad_ratio_oracle(2, 3, 3).structure.order == quad_ratio_oracle(2, 3, 3).ratio
