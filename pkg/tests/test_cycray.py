from __future__ import annotations

import pytest

from rayclass.abgroup import AbGroup, is_prime
from rayclass.cycray import (
    CycRayParams,
    filtration_jump_pattern,
    p_rank,
    ray_order_exponent,
    ray_params,
    ray_structure,
    require_regular,
)
from rayclass.errors import ClassPartNotCoprime, IrregularPrime, NotOddPrime
from rayclass.oracle import cyc_quotient_oracle


def test_params():
    assert ray_params(23, 22) == CycRayParams(23, 22, 20, 0)
    assert ray_params(5, 8) == CycRayParams(5, 8, 2, 1)
    with pytest.raises(ValueError):
        CycRayParams(5, 8, 1, 1)
    with pytest.raises(ValueError):
        ray_params(5, 2)


@pytest.mark.parametrize("p, k, e", [(23, 22, 10), (5, 2, 0), (5, 6, 3), (5, 0, 0), (7, 9, 4)])
def test_order_exponent(p, k, e):
    assert ray_order_exponent(p, k) == e


def test_structure_examples():
    st = ray_structure(23, 22, AbGroup((3,)))
    assert st.class_part == AbGroup((3,)) and st.p_part == AbGroup((23,) * 10)
    assert st.merged() == AbGroup((23,) * 9 + (69,))
    assert ray_structure(23, 44, AbGroup((3,))).p_part == AbGroup((23, 23) + (529,) * 10)
    assert ray_structure(5, 8).p_part == AbGroup((5, 5, 25))
    assert ray_structure(5, 2).p_part == AbGroup()
    assert ray_structure(5, 8).order == 5 ** 4


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 17, 19, 23])
def test_structure_order_matches_exponent(p):
    for k in range(0, 5 * p):
        assert ray_structure(p, k).p_part.order == p ** ray_order_exponent(p, k)


def test_errors():
    with pytest.raises(IrregularPrime) as err:
        ray_structure(37, 36, AbGroup((37,)))
    assert err.value.indices == [32]
    with pytest.raises(IrregularPrime):
        require_regular(59)
    with pytest.raises(NotOddPrime):
        ray_order_exponent(9, 3)
    with pytest.raises(ClassPartNotCoprime):
        ray_structure(23, 22, AbGroup((23,)))


@pytest.mark.parametrize("p, k, r", [(23, 44, 12), (5, 3, 0), (5, 6, 3), (7, 9, 4)])
def test_p_rank(p, k, r):
    assert p_rank(p, k) == r


def test_rank_law():
    for p in [q for q in range(3, 24) if is_prime(q)]:
        for k in range(p + 1, 4 * (p - 1) + 1):
            assert p_rank(p, k) == (p + 1) // 2, (p, k)


@pytest.mark.parametrize("p, k, idx", [(5, 3, 1), (5, 4, 1), (5, 6, 5), (3, 4, 1), (7, 4, 7), (7, 6, 1)])
def test_filtration_pattern(p, k, idx):
    assert filtration_jump_pattern(p, k) == idx


def test_filtration_pattern_tracks_orders():
    # the index jump is exactly the growth of |Cl^{pi^k}| minus the growth of (O/pi^k)*
    for p in (5, 7, 11):
        for k in range(2, 20):
            growth = ray_order_exponent(p, k + 1) - ray_order_exponent(p, k)
            jump = filtration_jump_pattern(p, k)
            assert p ** (1 - growth) == jump


@pytest.mark.parametrize("p, k", [(3, 6), (5, 7), (5, 9), (7, 8)])
def test_structure_matches_oracle(p, k):
    assert cyc_quotient_oracle(p, k) == ray_structure(p, k).p_part
