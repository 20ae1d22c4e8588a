"""Exact arithmetic in real quadratic fields Q(sqrt d).

Elements of the maximal order are kept as (x + y*sqrt(d))/q with q in {1, 2}.
Residue computations use the integral basis {1, w}, where w = sqrt(d), or
w = (1 + sqrt(d))/2 when d = 1 (mod 4).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from math import gcd, isqrt

from .abgroup import is_prime, p_adic_valuation, prime_factors
from .errors import InvalidD, NotInert, NotPrime, NotSplit, RamifiedPrime, ZeroElement

__all__ = [
    "QuadElem",
    "SplittingType",
    "QuadUnitInvariants",
    "check_d",
    "is_squarefree",
    "discriminant",
    "fundamental_unit",
    "splitting_type",
    "split_root",
    "split_omega_image",
    "valuation_at_split_prime",
    "valuation_at_inert_prime",
    "unit_invariants",
    "narrow_class_number",
    "reduced_forms",
]


def is_squarefree(n: int) -> bool:
    if n < 1:
        return False
    q = 2
    while q * q <= n:
        if n % (q * q) == 0:
            return False
        q += 1
    return True


def check_d(d: int) -> int:
    if not isinstance(d, int) or d <= 1 or not is_squarefree(d):
        raise InvalidD(f"d={d!r} must be a square-free integer > 1")
    return d


def _check_prime(p: int) -> int:
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    return p


def discriminant(d: int) -> int:
    check_d(d)
    return d if d % 4 == 1 else 4 * d


def _omega_poly(d: int) -> tuple[int, int]:
    """(t, c) with w^2 = t*w + c."""
    return (1, (d - 1) // 4) if d % 4 == 1 else (0, d)


@dataclass(frozen=True)
class QuadElem:
    d: int
    x: int
    y: int
    q: int = 1

    def __post_init__(self):
        check_d(self.d)
        x, y, q = int(self.x), int(self.y), int(self.q)
        if q not in (1, 2):
            raise ValueError(f"denominator must be 1 or 2, got {q}")
        if q == 2:
            if x % 2 == 0 and y % 2 == 0:
                x, y, q = x // 2, y // 2, 1
            elif self.d % 4 != 1 or (x - y) % 2:
                raise ValueError(f"({x} + {y}*sqrt({self.d}))/2 is not integral")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "q", q)

    @classmethod
    def from_half(cls, d: int, a: int, b: int) -> "QuadElem":
        """(a + b*sqrt(d))/2."""
        return cls(d, a, b, 2)

    @classmethod
    def from_omega(cls, d: int, a: int, b: int) -> "QuadElem":
        """a + b*w in the integral basis."""
        if d % 4 == 1:
            return cls(d, 2 * a + b, b, 2)
        return cls(d, a, b, 1)

    @classmethod
    def integer(cls, d: int, n: int) -> "QuadElem":
        return cls(d, n, 0, 1)

    @property
    def a(self) -> int:
        """Trace-style coordinate: self = (a + b*sqrt(d))/2."""
        return self.x * (2 // self.q)

    @property
    def b(self) -> int:
        return self.y * (2 // self.q)

    def omega_coords(self) -> tuple[int, int]:
        if self.d % 4 == 1:
            return (self.a - self.b) // 2, self.b
        return self.x, self.y

    def _check(self, other: "QuadElem") -> None:
        if other.d != self.d:
            raise ValueError(f"elements of Q(sqrt {self.d}) and Q(sqrt {other.d}) mixed")

    def __add__(self, other):
        if isinstance(other, int):
            other = QuadElem.integer(self.d, other)
        self._check(other)
        return QuadElem.from_half(self.d, self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadElem(self.d, -self.x, -self.y, self.q)

    def __sub__(self, other):
        if isinstance(other, int):
            other = QuadElem.integer(self.d, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return QuadElem(self.d, self.x * other, self.y * other, self.q)
        self._check(other)
        a1, b1, a2, b2 = self.a, self.b, other.a, other.b
        # ((a1 + b1 r)(a2 + b2 r))/4 = (A + B r)/4, A and B both even for ring elements
        A = a1 * a2 + b1 * b2 * self.d
        B = a1 * b2 + a2 * b1
        return QuadElem.from_half(self.d, A // 2, B // 2)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are only defined for units; use inverse_unit()")
        result = QuadElem.integer(self.d, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> "QuadElem":
        return QuadElem(self.d, self.x, -self.y, self.q)

    def norm(self) -> int:
        return (self.a * self.a - self.b * self.b * self.d) // 4

    def trace(self) -> int:
        return self.a

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def sign(self) -> int:
        """Sign of the real embedding with sqrt(d) > 0, decided exactly."""
        x, y = self.x, self.y
        if y == 0:
            return (x > 0) - (x < 0)
        if x == 0:
            return (y > 0) - (y < 0)
        if (x > 0) == (y > 0):
            return 1 if x > 0 else -1
        # opposite signs: compare x^2 with y^2 d
        big = x * x - y * y * self.d
        dominant = 1 if x > 0 else -1
        return dominant if big > 0 else -dominant

    def is_totally_positive(self) -> bool:
        return self.sign() > 0 and self.conjugate().sign() > 0

    def divide_by(self, n: int) -> "QuadElem | None":
        """self/n if that lies in the maximal order, else None."""
        a, b = self.a, self.b
        if a % n or b % n:
            return None
        a, b = a // n, b // n
        if (a - b) % 2 or (self.d % 4 != 1 and a % 2):
            return None
        return QuadElem.from_half(self.d, a, b)

    def __str__(self) -> str:
        if self.q == 1:
            return f"{self.x} + {self.y}*sqrt({self.d})"
        return f"({self.x} + {self.y}*sqrt({self.d}))/2"


def _icbrt(n: int) -> int:
    """floor(n ** (1/3)) for n >= 0, exactly."""
    if n < 0:
        raise ValueError("negative")
    if n < 2:
        return n
    x = 1 << ((n.bit_length() + 2) // 3)
    while True:
        y = (2 * x + n // (x * x)) // 3
        if y >= x:
            break
        x = y
    while x * x * x > n:
        x -= 1
    while (x + 1) ** 3 <= n:
        x += 1
    return x


def _pell_unit(d: int) -> tuple[int, int]:
    """Smallest h + k*sqrt(d) > 1 with h^2 - d k^2 = +-1, from the period of sqrt(d)."""
    a0 = isqrt(d)
    m, den, a = 0, 1, a0
    h_prev, h = 1, a0
    k_prev, k = 0, 1
    while True:
        m = den * a - m
        den = (d - m * m) // den
        a = (a0 + m) // den
        if a == 2 * a0:
            return h, k
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev


def fundamental_unit(d: int) -> QuadElem:
    """Smallest unit > 1 of the maximal order of Q(sqrt d)."""
    check_d(d)
    h, k = _pell_unit(d)
    eps = QuadElem(d, h, k, 1)
    if d % 4 != 1:
        return eps
    # [O* : Z[sqrt d]*] is 1 or 3; look for u with u^3 = eps, u = (A + B sqrt d)/2.
    # Traces satisfy A^3 - 3 N A = 2h with N = N(eps) = N(u).
    n = eps.norm()
    c = _icbrt(2 * h)
    for A in range(max(1, c - 2), c + 3):
        if A ** 3 - 3 * n * A != 2 * h:
            continue
        B2, r = divmod(A * A - 4 * n, d)
        if r:
            continue
        B = isqrt(B2)
        if B * B != B2 or B <= 0 or (A - B) % 2:
            continue
        u = QuadElem.from_half(d, A, B)
        if u ** 3 == eps:
            return u
    return eps


class SplittingType(enum.Enum):
    SPLIT = "split"
    INERT = "inert"
    RAMIFIED = "ramified"


def splitting_type(d: int, p: int) -> SplittingType:
    """Behaviour of p in Q(sqrt d), from the Kronecker symbol (D/p)."""
    check_d(d)
    _check_prime(p)
    if p == 2:
        if d % 4 != 1:
            return SplittingType.RAMIFIED
        return SplittingType.SPLIT if d % 8 == 1 else SplittingType.INERT
    if d % p == 0:
        return SplittingType.RAMIFIED
    return SplittingType.SPLIT if pow(d, (p - 1) // 2, p) == 1 else SplittingType.INERT


def _root_seed(d: int, p: int) -> int:
    if p == 2:
        # seeds mod 8 that extend to a 2-adic root are those with r^2 = d (mod 16)
        return min(r for r in range(1, 8, 2) if (r * r - d) % 16 == 0)
    return min(r for r in range(p) if (r * r - d) % p == 0)


def split_root(d: int, p: int, K: int) -> int:
    """Canonical p-adic square root of d, reduced mod p^K.

    The root is the one congruent to the smallest admissible seed mod p
    (mod 8 for p = 2); results at different K agree under reduction.
    """
    if splitting_type(d, p) is not SplittingType.SPLIT:
        raise NotSplit(f"{p} does not split in Q(sqrt {d})")
    if K < 1:
        raise ValueError("precision K must be >= 1")
    r = _root_seed(d, p)
    if p == 2:
        # r^2 = d mod 2^j, correct mod 2^(j-1); run one level past K
        j = 4
        while j < K + 2:
            if (r * r - d) % (1 << (j + 1)):
                r += 1 << (j - 1)
            j += 1
        return r % (1 << K)
    mod = p
    while mod < p ** K:
        mod = min(mod * mod, p ** K)
        r = (r - (r * r - d) * pow(2 * r, -1, mod)) % mod
    return r % p ** K


def split_omega_image(d: int, p: int, K: int, conjugate: bool = False) -> int:
    """Image of w in Z/p^K under the embedding attached to the first (or second) prime."""
    if d % 4 != 1:
        r = split_root(d, p, K)
        return (-r if conjugate else r) % p ** K
    if p == 2:
        r = split_root(d, p, K + 1)
        if conjugate:
            r = -r
        return ((1 + r) % (1 << (K + 1))) // 2
    r = split_root(d, p, K)
    if conjugate:
        r = -r
    return (1 + r) * pow(2, -1, p ** K) % p ** K


def _split_image(x: QuadElem, p: int, K: int, conjugate: bool = False) -> int:
    a, b = x.omega_coords()
    mod = p ** K
    return (a + b * split_omega_image(x.d, p, K, conjugate)) % mod


def valuation_at_split_prime(x: QuadElem, d: int, p: int, conjugate: bool = False) -> int:
    """Valuation of x at the canonical prime above a split p (the other one if ``conjugate``)."""
    if x.d != d:
        raise ValueError("element lives in a different field")
    if x.is_zero():
        raise ZeroElement("valuation of 0")
    if splitting_type(d, p) is not SplittingType.SPLIT:
        raise NotSplit(f"{p} does not split in Q(sqrt {d})")
    bound = p_adic_valuation(abs(x.norm()), p) + 1
    K = 4
    while True:
        K = min(K, bound)
        img = _split_image(x, p, K, conjugate)
        if img:
            return p_adic_valuation(img, p)
        K *= 2


def valuation_at_inert_prime(x: QuadElem, p: int) -> int:
    """Largest v with x / p^v still integral; (p) is prime when p is inert."""
    if x.is_zero():
        raise ZeroElement("valuation of 0")
    if splitting_type(x.d, p) is not SplittingType.INERT:
        raise NotInert(f"{p} is not inert in Q(sqrt {x.d})")
    a, b = x.omega_coords()
    return min(p_adic_valuation(c, p) for c in (a, b) if c)


# --- arithmetic in O / n O on the integral basis ---------------------------


def omega_mul(u: tuple[int, int], v: tuple[int, int], d: int, n: int) -> tuple[int, int]:
    t, c = _omega_poly(d)
    a1, b1 = u
    a2, b2 = v
    bb = b1 * b2
    return (a1 * a2 + bb * c) % n, (a1 * b2 + a2 * b1 + bb * t) % n


def omega_pow(u: tuple[int, int], e: int, d: int, n: int) -> tuple[int, int]:
    result = (1 % n, 0)
    base = (u[0] % n, u[1] % n)
    while e:
        if e & 1:
            result = omega_mul(result, base, d, n)
        base = omega_mul(base, base, d, n)
        e >>= 1
    return result


def _order_by_descent(group_order: int, is_identity_power) -> int:
    e = group_order
    for q in prime_factors(group_order):
        while e % q == 0 and is_identity_power(e // q):
            e //= q
    return e


@dataclass(frozen=True)
class QuadUnitInvariants:
    u: QuadElem
    norm_u: int
    u0: QuadElem
    s: int
    m: int


def totally_positive_generator(d: int) -> tuple[QuadElem, QuadElem, int]:
    u = fundamental_unit(d)
    n = u.norm()
    return u, (u if n == 1 else u * u), n


def unit_invariants(d: int, p: int) -> QuadUnitInvariants:
    """s = order of u0 modulo the prime above p, m = valuation of u0^s - 1 there."""
    kind = splitting_type(d, p)
    if kind is SplittingType.RAMIFIED:
        raise RamifiedPrime(f"{p} ramifies in Q(sqrt {d})")
    u, u0, n = totally_positive_generator(d)
    if kind is SplittingType.SPLIT:
        g = _split_image(u0, p, 1)
        s = _order_by_descent(p - 1, lambda e: pow(g, e, p) == 1)
        K = 4
        while True:
            mod = p ** K
            v = (pow(_split_image(u0, p, K), s, mod) - 1) % mod
            if v:
                m = p_adic_valuation(v, p)
                break
            K *= 2
    else:
        w = u0.omega_coords()
        s = _order_by_descent(p * p - 1, lambda e: omega_pow(w, e, d, p) == (1, 0))
        K = 4
        while True:
            a, b = omega_pow(w, s, d, p ** K)
            a = (a - 1) % p ** K
            if a or b:
                m = min(p_adic_valuation(c, p) for c in (a, b) if c)
                break
            K *= 2
    return QuadUnitInvariants(u=u, norm_u=n, u0=u0, s=s, m=m)


# --- narrow class number by cycles of reduced indefinite forms -------------


def _is_reduced(A: int, B: int, D: int) -> bool:
    # |sqrt D - 2|A|| < B < sqrt D, with D not a square
    a2 = 2 * abs(A)
    if B <= 0 or B * B >= D:
        return False
    return (a2 + B) ** 2 > D and (a2 - B < 0 or (a2 - B) ** 2 < D)


def reduced_forms(D: int) -> list[tuple[int, int, int]]:
    s = isqrt(D)
    out = []
    for B in range(1, s + 1):
        if (B - D) % 2:
            continue
        ac = (B * B - D) // 4
        n = -ac
        for a in range(1, n + 1):
            if n % a or not _is_reduced(a, B, D):
                continue
            for A in (a, -a):
                C = ac // A
                out.append((A, B, C))
    return out


def _rho(form: tuple[int, int, int], D: int) -> tuple[int, int, int]:
    _, B, C = form
    s = isqrt(D)
    m = 2 * abs(C)
    B2 = s - (s + B) % m
    return C, B2, (B2 * B2 - D) // (4 * C)


def narrow_class_number(d: int) -> int:
    """Number of rho-cycles of reduced primitive forms of discriminant D."""
    D = discriminant(d)
    forms = [f for f in reduced_forms(D) if gcd(gcd(f[0], f[1]), f[2]) == 1]
    seen: set[tuple[int, int, int]] = set()
    cycles = 0
    for f in forms:
        if f in seen:
            continue
        cycles += 1
        g = f
        while g not in seen:
            seen.add(g)
            g = _rho(g, D)
    return cycles
