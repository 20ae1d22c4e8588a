"""Ray class groups of Q(zeta_p) modulo (1 - zeta_p)^k for regular p."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .abgroup import AbGroup
from .cycfield import check_odd_prime, is_regular
from .errors import ClassPartNotCoprime, IrregularPrime

__all__ = [
    "CycRayParams",
    "RayClassStructure",
    "ray_params",
    "ray_order_exponent",
    "ray_structure",
    "p_rank",
    "filtration_jump_pattern",
    "require_regular",
]


@lru_cache(maxsize=None)
def _regularity(p: int) -> tuple[bool, tuple[int, ...]]:
    ok, idx = is_regular(p)
    return ok, tuple(idx)


def require_regular(p: int) -> int:
    check_odd_prime(p)
    ok, idx = _regularity(p)
    if not ok:
        raise IrregularPrime(p, list(idx))
    return p


@dataclass(frozen=True)
class CycRayParams:
    """k - 2 = k0 + level * (p - 1) with 0 <= k0 <= p - 2."""

    p: int
    k: int
    k0: int
    level: int

    def __post_init__(self):
        if self.k0 + self.level * (self.p - 1) != self.k - 2:
            raise ValueError("k0 + level*(p-1) must equal k-2")
        if not 0 <= self.k0 <= self.p - 2 or self.level < 0:
            raise ValueError("k0 out of range")


def ray_params(p: int, k: int) -> CycRayParams:
    if k < 3:
        raise ValueError("k0/level are defined for k >= 3")
    level, k0 = divmod(k - 2, p - 1)
    return CycRayParams(p, k, k0, level)


def ray_order_exponent(p: int, k: int) -> int:
    """e with |Cl^{pi^k}| = |Cl| * p^e."""
    require_regular(p)
    if k < 0:
        raise ValueError("k must be >= 0")
    if k <= 2:
        return 0
    return k // 2 + (k - 1) // (p - 1) - 1


@dataclass(frozen=True)
class RayClassStructure:
    class_part: AbGroup
    p_part: AbGroup

    @property
    def order(self) -> int:
        return self.class_part.order * self.p_part.order

    def merged(self) -> AbGroup:
        """Canonical invariant factors of class_part x p_part."""
        return self.class_part * self.p_part


def _p_part_factors(p: int, k: int) -> list[int]:
    if k <= 2:
        return []
    prm = ray_params(p, k)
    hi, lo = p ** (prm.level + 1), p ** prm.level
    if prm.k0 != p - 2:
        n_hi = prm.k0 // 2
        n_lo = (p + 1) // 2 - n_hi
    else:
        n_hi, n_lo = (p - 1) // 2, 1
    factors = [lo] * n_lo + [hi] * n_hi
    return [f for f in factors if f > 1]


def ray_structure(p: int, k: int, class_part: AbGroup | None = None) -> RayClassStructure:
    require_regular(p)
    if k < 0:
        raise ValueError("k must be >= 0")
    class_part = class_part if class_part is not None else AbGroup()
    if class_part.order % p == 0:
        raise ClassPartNotCoprime(f"p={p} divides the class group order {class_part.order}")
    return RayClassStructure(class_part, AbGroup(tuple(_p_part_factors(p, k))))


def p_rank(p: int, k: int) -> int:
    return ray_structure(p, k).p_part.rank


def filtration_jump_pattern(p: int, k: int) -> int:
    """Predicted index of the level-(k+1) unit subgroup in the level-k one (1 or p)."""
    require_regular(p)
    if k < 2:
        raise ValueError("k must be >= 2")
    if k % 2 or k % (p - 1) == 0:
        return 1
    return p
