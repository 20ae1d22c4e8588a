"""Closed-form ray class numbers of Q(sqrt d) for a modulus supported at one prime.

All functions return the ratio f = |Cl^m| / |Cl^1| (narrow ray class number
over narrow class number); pass ``class_number`` to also get f * h.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import GrowthOnlyCase, NonIntegerRatio, NotInert, NotSplit, WrongCase
from .quadfield import (
    SplittingType,
    fundamental_unit,
    splitting_type,
    unit_invariants,
    valuation_at_inert_prime,
    valuation_at_split_prime,
)

__all__ = [
    "BoundKind",
    "RayOrderResult",
    "split_ray_ratio",
    "split_abelian_bound",
    "inert_ray_ratio",
    "inert_growth_start",
]


class BoundKind(enum.Enum):
    EXACT = "exact"
    UPPER_BOUND = "upper"


@dataclass(frozen=True)
class RayOrderResult:
    kind: BoundKind
    ratio: int
    with_class_number: int | None = None

    def __post_init__(self):
        if self.ratio < 1:
            raise NonIntegerRatio(f"ratio {self.ratio} is not a positive integer")


def _exact_div(num: int, den: int) -> int:
    q, r = divmod(num, den)
    if r:
        raise NonIntegerRatio(f"{num}/{den} is not an integer")
    return q


def _result(kind: BoundKind, ratio: int, class_number: int | None) -> RayOrderResult:
    return RayOrderResult(kind, ratio, None if class_number is None else ratio * class_number)


def split_ray_ratio(d: int, p: int, k: int, class_number: int | None = None) -> RayOrderResult:
    """|Cl^{P^k}| / |Cl^1| for the canonical prime P above a split p."""
    if splitting_type(d, p) is not SplittingType.SPLIT:
        raise NotSplit(f"{p} does not split in Q(sqrt {d})")
    if k < 0:
        raise ValueError("k must be >= 0")
    if k == 0:
        return _result(BoundKind.EXACT, 1, class_number)
    inv = unit_invariants(d, p)
    if p == 2 and inv.norm_u == 1:
        nu = valuation_at_split_prime(inv.u * inv.u - 1, d, 2)
        return _result(BoundKind.UPPER_BOUND, 2 ** (nu - 2), class_number)
    ratio = _exact_div((p - 1) * p ** (min(k, inv.m) - 1), inv.s)
    return _result(BoundKind.EXACT, ratio, class_number)


def split_abelian_bound(d: int) -> int:
    """2^(m-1) with m = v(u^2 - 1) - [(N(u) + 1)/2], for d = 1 (mod 8)."""
    if splitting_type(d, 2) is not SplittingType.SPLIT:
        raise NotSplit(f"2 does not split in Q(sqrt {d})")
    u = fundamental_unit(d)
    m = valuation_at_split_prime(u * u - 1, d, 2) - (u.norm() + 1) // 2
    return 2 ** (m - 1)


def inert_ray_ratio(d: int, p: int, k: int, class_number: int | None = None) -> RayOrderResult:
    """|Cl^{p^k}| / |Cl^1| for an inert p."""
    if splitting_type(d, p) is not SplittingType.INERT:
        raise NotInert(f"{p} is not inert in Q(sqrt {d})")
    if k < 0:
        raise ValueError("k must be >= 0")
    if k == 0:
        return _result(BoundKind.EXACT, 1, class_number)
    inv = unit_invariants(d, p)
    if p == 2 and inv.norm_u == 1:
        raise GrowthOnlyCase(
            f"d={d}, p=2, N(u)=+1: only |Cl^(2^(k+1))| = 2|Cl^(2^k)| for "
            f"k >= {inert_growth_start(d)} is available"
        )
    s, m = inv.s, inv.m
    if k >= m:
        num = (p * p - 1) * p ** (k - 2 + m)
    else:
        num = p ** (2 * k - 2) * (p * p - 1)
    return _result(BoundKind.EXACT, _exact_div(num, s), class_number)


def inert_growth_start(d: int) -> int:
    """v_2(u^6 - 1): from this level on the ray class number doubles with k."""
    if splitting_type(d, 2) is not SplittingType.INERT:
        raise NotInert(f"2 is not inert in Q(sqrt {d})")
    u = fundamental_unit(d)
    if u.norm() != 1:
        raise WrongCase(f"N(u) = -1 for d={d}; use inert_ray_ratio")
    return valuation_at_inert_prime(u ** 6 - 1, 2)
