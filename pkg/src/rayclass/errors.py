"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class RayClassError(Exception):
    """Base class for every error raised by this package."""


class InvalidD(RayClassError, ValueError):
    """d is not a square-free integer greater than 1."""


class NotPrime(RayClassError, ValueError):
    pass


class NotOddPrime(NotPrime):
    pass


class NotSplit(RayClassError):
    pass


class NotInert(RayClassError):
    pass


class RamifiedPrime(RayClassError):
    pass


class WrongCase(RayClassError):
    pass


class GrowthOnlyCase(RayClassError):
    """p = 2 inert with N(u) = +1: only the doubling law is known."""


class NonIntegerRatio(RayClassError):
    """Internal consistency failure: a closed-form ratio was not an integer."""


class ZeroElement(RayClassError, ValueError):
    pass


class InfiniteGroup(RayClassError):
    pass


class MismatchedPrime(RayClassError, ValueError):
    pass


class NotDivisible(RayClassError, ValueError):
    pass


class IndexOutOfRange(RayClassError, ValueError):
    pass


class CapExceeded(RayClassError):
    pass


class PrecisionFailure(RayClassError):
    pass


class IrregularPrime(RayClassError):
    def __init__(self, p: int, indices: list[int]):
        self.p = p
        self.indices = list(indices)
        super().__init__(
            f"p={p} is irregular (p divides B_k for k in {self.indices}); "
            "structure formulas need a regular prime, use the oracle instead"
        )


class ClassPartNotCoprime(RayClassError, ValueError):
    pass


class BudgetExceeded(RayClassError):
    pass


class NotAUnit(RayClassError, ValueError):
    pass


class UnsupportedPrime(RayClassError):
    pass
