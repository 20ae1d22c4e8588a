"""Exact arithmetic in Z[zeta_p], the uniformizer pi = 1 - zeta, Bernoulli numbers.

A CycElem stores coefficients on the power basis 1, zeta, ..., zeta^(p-2);
products are reduced eagerly modulo the cyclotomic polynomial Phi_p.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath

from .abgroup import is_prime, prime_factors
from .errors import (
    CapExceeded,
    IndexOutOfRange,
    MismatchedPrime,
    NotDivisible,
    NotOddPrime,
    PrecisionFailure,
    ZeroElement,
)

__all__ = [
    "CycElem",
    "PiDigits",
    "cyc_mul",
    "div_by_pi",
    "pi_valuation",
    "digit_expansion",
    "from_digits",
    "cyclotomic_unit",
    "primitive_root",
    "bernoulli_numbers",
    "bernoulli",
    "is_regular",
    "gamma_k",
    "minus_class_number",
    "BERNOULLI_INDEX_CAP",
]

BERNOULLI_INDEX_CAP = 2000


def check_odd_prime(p: int) -> int:
    if not isinstance(p, int) or p == 2 or not is_prime(p):
        raise NotOddPrime(f"{p!r} is not an odd prime")
    return p


@dataclass(frozen=True)
class CycElem:
    p: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = tuple(int(v) for v in self.coeffs)
        if len(c) != self.p - 1:
            raise ValueError(f"expected {self.p - 1} coefficients, got {len(c)}")
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def integer(cls, p: int, n: int) -> "CycElem":
        return cls(p, (n,) + (0,) * (p - 2))

    @classmethod
    def zeta_power(cls, p: int, i: int) -> "CycElem":
        return cls(p, _reduce_cyclic(p, {i % p: 1}))

    @classmethod
    def pi(cls, p: int) -> "CycElem":
        return cls(p, (1, -1) + (0,) * (p - 3))

    def __add__(self, other):
        if isinstance(other, int):
            other = CycElem.integer(self.p, other)
        _same(self, other)
        return CycElem(self.p, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycElem(self.p, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        if isinstance(other, int):
            other = CycElem.integer(self.p, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return CycElem(self.p, tuple(a * other for a in self.coeffs))
        return cyc_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = CycElem.integer(self.p, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def trace_sum(self) -> int:
        """Value of the coefficient polynomial at 1; congruent to self mod pi."""
        return sum(self.coeffs)

    def mod(self, n: int) -> "CycElem":
        return CycElem(self.p, tuple(a % n for a in self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)


def _same(x: CycElem, y: CycElem) -> None:
    if x.p != y.p:
        raise MismatchedPrime(f"elements of Q(zeta_{x.p}) and Q(zeta_{y.p}) mixed")


def _reduce_cyclic(p: int, terms) -> tuple[int, ...]:
    full = [0] * p
    for i, c in terms.items():
        full[i % p] += c
    top = full[p - 1]
    return tuple(c - top for c in full[: p - 1])


def cyc_mul(x: CycElem, y: CycElem) -> CycElem:
    _same(x, y)
    p = x.p
    full = [0] * p
    yc = y.coeffs
    for i, a in enumerate(x.coeffs):
        if not a:
            continue
        for j, b in enumerate(yc):
            if b:
                full[(i + j) % p] += a * b
    top = full[p - 1]
    return CycElem(p, tuple(c - top for c in full[: p - 1]))


def div_by_pi(y: CycElem) -> CycElem:
    """z with (1 - zeta) z = y.

    Subtract (y(1)/p) * Phi_p so the polynomial vanishes at 1, then divide
    by (1 - x) synthetically.
    """
    p = y.p
    s = y.trace_sum()
    if s % p:
        raise NotDivisible("element is not divisible by 1 - zeta")
    c = s // p
    poly = [a - c for a in y.coeffs] + [-c]  # degree p-1
    # poly = (1 - x) * z; from the top: z_{n-1} = -poly_n, z_{i-1} = z_i - poly_i
    n = p - 1
    z = [0] * n
    z[n - 1] = -poly[n]
    for i in range(n - 1, 0, -1):
        z[i - 1] = z[i] - poly[i]
    return CycElem(p, tuple(z))


def pi_valuation(x: CycElem) -> int:
    if x.is_zero():
        raise ZeroElement("valuation of 0")
    v = 0
    while x.trace_sum() % x.p == 0:
        x = div_by_pi(x)
        v += 1
    return v


@dataclass(frozen=True)
class PiDigits:
    p: int
    k: int
    digits: tuple[int, ...]

    def __post_init__(self):
        if len(self.digits) != self.k or any(not 0 <= c < self.p for c in self.digits):
            raise ValueError("digits must be k values in [0, p-1]")


def digit_expansion(x: CycElem, k: int) -> PiDigits:
    """Digits c_i in [0, p-1] with x = sum c_i pi^i (mod pi^k)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    p = x.p
    out = []
    for i in range(k):
        c = x.trace_sum() % p
        out.append(c)
        if i + 1 < k:
            x = div_by_pi(x - c)
    return PiDigits(p, k, tuple(out))


def from_digits(p: int, digits: Sequence[int]) -> CycElem:
    """sum c_i pi^i as an element of Z[zeta_p]."""
    result = CycElem.integer(p, 0)
    pi = CycElem.pi(p)
    power = CycElem.integer(p, 1)
    for c in digits:
        if c:
            result = result + power * c
        power = power * pi
    return result


def cyclotomic_unit(p: int, i: int) -> CycElem:
    """(zeta^i - 1)/(zeta - 1) = 1 + zeta + ... + zeta^(i-1)."""
    check_odd_prime(p)
    if not 2 <= i <= p - 1:
        raise IndexOutOfRange(f"cyclotomic unit index {i} outside [2, {p - 1}]")
    return CycElem(p, _reduce_cyclic(p, {j: 1 for j in range(i)}))


def primitive_root(p: int) -> int:
    """Smallest positive primitive root mod p."""
    if p == 2:
        return 1
    qs = prime_factors(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in qs):
            return g
    raise AssertionError("unreachable for prime p")


# --- Bernoulli numbers -----------------------------------------------------

_tangent_lock = threading.Lock()
_tangent: list[int] = [0]  # _tangent[n] = T_n, the n-th tangent number


def _tangent_numbers(n: int) -> list[int]:
    """Tangent numbers T_1..T_n (Brent-Harvey integer recurrence), memoized."""
    with _tangent_lock:
        have = len(_tangent) - 1
        if have >= n:
            return _tangent
        # recompute from scratch: the in-place triangle is not resumable
        T = [0] * (n + 1)
        T[1] = 1
        for k in range(2, n + 1):
            T[k] = (k - 1) * T[k - 1]
        for k in range(2, n + 1):
            for j in range(k, n + 1):
                T[j] = (j - k) * T[j - 1] + (j - k + 2) * T[j]
        _tangent[:] = T
        return _tangent


def bernoulli(n: int) -> Fraction:
    """B_n with the convention B_1 = -1/2."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n > BERNOULLI_INDEX_CAP:
        raise CapExceeded(f"Bernoulli index {n} exceeds cap {BERNOULLI_INDEX_CAP}")
    if n == 0:
        return Fraction(1)
    if n == 1:
        return Fraction(-1, 2)
    if n % 2:
        return Fraction(0)
    k = n // 2
    T = _tangent_numbers(k)[k]
    four_k = 4 ** k
    sign = 1 if k % 2 else -1
    return Fraction(sign * n * T, four_k * (four_k - 1))


def bernoulli_numbers(n_max: int) -> list[Fraction]:
    """B_0 .. B_{n_max}, exact."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    if n_max >= 2:
        _tangent_numbers(n_max // 2)
    return [bernoulli(n) for n in range(n_max + 1)]


def irregular_indices(p: int) -> list[int]:
    check_odd_prime(p)
    return [k for k in range(2, p - 2, 2) if bernoulli(k).numerator % p == 0]


def is_regular(p: int) -> tuple[bool, list[int]]:
    """(regular?, even k in [2, p-3] with p | numerator(B_k))."""
    idx = irregular_indices(p)
    return (not idx, idx)


def gamma_k(p: int, k: int, index_cap: int = BERNOULLI_INDEX_CAP) -> int:
    """Smallest g >= 0 with p^(2g+1) not dividing the numerator of B_{k p^g}."""
    check_odd_prime(p)
    if k % 2 or not 2 <= k <= p - 3:
        raise ValueError(f"k={k} must be even with 2 <= k <= p-3")
    g = 0
    while k * p ** g <= min(index_cap, BERNOULLI_INDEX_CAP):
        num = bernoulli(k * p ** g).numerator
        if num % p ** (2 * g + 1):
            return g
        g += 1
    raise CapExceeded(f"no gamma found with k*p^g <= {index_cap}")


# --- relative class number -------------------------------------------------

MINUS_CLASS_NUMBER_CAP = 200


def minus_class_number(p: int, cap: int = MINUS_CLASS_NUMBER_CAP,
                       start_bits: int = 128, max_bits: int = 4096) -> int:
    """h^- of Q(zeta_p) = 2p * prod over odd characters of (-B_{1,chi}/2).

    Evaluated in floating point with escalating precision and accepted only
    once the result sits within 1/4 of an integer (and the imaginary part
    within 1/4 of zero).
    """
    check_odd_prime(p)
    if p > cap:
        raise CapExceeded(f"p={p} exceeds the configured cap {cap}")
    g = primitive_root(p)
    # log table: a = g^i
    index = [0] * p
    a = 1
    for i in range(p - 1):
        index[a] = i
        a = a * g % p
    n = p - 1
    bits = start_bits
    while bits <= max_bits:
        with mpmath.workprec(bits):
            roots = [mpmath.expjpi(mpmath.mpf(2 * t) / n) for t in range(n)]
            prod = mpmath.mpc(2 * p)
            for j in range(1, n, 2):
                s = mpmath.mpc(0)
                for a in range(1, p):
                    s += a * roots[(j * index[a]) % n]
                b1 = s / p
                prod *= -b1 / 2
            re, im = prod.real, prod.imag
            h = int(mpmath.nint(re))
            if abs(re - h) < mpmath.mpf(1) / 4 and abs(im) < mpmath.mpf(1) / 4 and h > 0:
                return h
        bits *= 2
    raise PrecisionFailure(f"could not certify h^-({p}) within {max_bits} bits")

