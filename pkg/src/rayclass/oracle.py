"""Brute-force ray class computations straight from the exact sequence

    1 -> O*_+ / O^m_+ -> (O/m)* -> Cl^m -> Cl^1 -> 1.

(O/m)* is presented by a Teichmuller generator plus the principal units
1 + pi^i * beta; discrete logs strip one filtration level at a time.  The
quotient (O/m)* / image(global units) is then read off with Smith normal
form.  ``tiny_closure_crosscheck`` recomputes the cyclotomic quotient by
explicit subgroup closure and coset counting, sharing none of that
machinery.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Hashable, Sequence

from .abgroup import AbGroup, IntMatrix, group_from_relations, prime_factors, quotient_by_subgroup
from .cycfield import (
    CycElem,
    check_odd_prime,
    cyclotomic_unit,
    digit_expansion,
    from_digits,
    primitive_root,
)
from .errors import BudgetExceeded, CapExceeded, NotAUnit, RamifiedPrime, UnsupportedPrime
from .quadfield import SplittingType, omega_mul, split_omega_image, splitting_type, totally_positive_generator

__all__ = [
    "Budget",
    "DEFAULT_BUDGET",
    "LocalUnitPresentation",
    "local_unit_presentation_cyc",
    "local_unit_presentation_quad",
    "dlog",
    "cyc_quotient_oracle",
    "cyc_unit_image_order",
    "QuadOracleResult",
    "quad_ratio_oracle",
    "tiny_closure_crosscheck",
    "filtration_jump_oracle",
]

DEFAULT_BUDGET = 10**7
# h^+ = 1 for Q(zeta_p), p <= 47, so the cyclotomic units with -1 and zeta
# generate the full unit group there.
H_PLUS_ONE_LIMIT = 47
DEFAULT_ORACLE_PRIMES = (3, 5, 7)
TINY_CAP = 3**8
INERT_STRUCTURE_CAP = 10**5


class Budget:
    """Counts ring multiplications and aborts past ``limit``."""

    def __init__(self, limit: int = DEFAULT_BUDGET):
        self.limit = limit
        self.used = 0

    def spend(self, n: int = 1) -> None:
        self.used += n
        if self.used > self.limit:
            raise BudgetExceeded(f"oracle budget of {self.limit} ring multiplications exhausted")


# --- residue rings O / P^k -------------------------------------------------


class _LocalRing:
    """O/P^k with residue field of size q = p^f; subclasses fill in the arithmetic."""

    p: int
    k: int
    f: int

    def __init__(self, budget: Budget):
        self.budget = budget

    @property
    def q(self) -> int:
        return self.p ** self.f

    @property
    def unit_group_order(self) -> int:
        return (self.q - 1) * self.p ** (self.f * (self.k - 1))

    def mul(self, x, y):
        self.budget.spend()
        return self._mul(x, y)

    def pow(self, x, e: int):
        result = self.one
        base = x
        while e:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result

    def equal(self, x, y) -> bool:
        return self.key(x) == self.key(y)

    def is_one(self, x) -> bool:
        return self.key(x) == self.key(self.one)


class CycLocalRing(_LocalRing):
    """Z[zeta_p] / (1 - zeta)^k, elements kept as coefficient vectors mod p^c."""

    f = 1

    def __init__(self, p: int, k: int, budget: Budget):
        super().__init__(budget)
        self.p, self.k = p, k
        self.c = -(-k // (p - 1))
        self.modulus = p ** self.c
        self.one = CycElem.integer(p, 1)

    def reduce(self, x: CycElem) -> CycElem:
        return x.mod(self.modulus)

    def _mul(self, x, y):
        return (x * y).mod(self.modulus)

    def key(self, x) -> Hashable:
        return digit_expansion(x, self.k).digits

    def residue(self, x) -> Hashable:
        return x.trace_sum() % self.p

    def level_digits(self, x, i: int) -> tuple[int, ...]:
        return (digit_expansion(x, i + 1).digits[i],)

    def level_generators(self, i: int) -> list:
        pi_i = CycElem.pi(self.p) ** i
        return [self.reduce(pi_i + 1)]

    def residue_generator(self):
        return CycElem.integer(self.p, primitive_root(self.p))


class SplitLocalRing(_LocalRing):
    """O/P^k = Z/p^k for a degree-one prime P."""

    f = 1

    def __init__(self, p: int, k: int, budget: Budget):
        super().__init__(budget)
        self.p, self.k = p, k
        self.modulus = p ** k
        self.one = 1 % self.modulus

    def _mul(self, x, y):
        return x * y % self.modulus

    def key(self, x) -> Hashable:
        return x % self.modulus

    def residue(self, x) -> Hashable:
        return x % self.p

    def level_digits(self, x, i: int) -> tuple[int, ...]:
        return (((x - 1) // self.p ** i) % self.p,)

    def level_generators(self, i: int) -> list:
        return [(1 + self.p ** i) % self.modulus]

    def residue_generator(self):
        return primitive_root(self.p)


class InertLocalRing(_LocalRing):
    """O/p^k for inert p; elements are pairs (a, b) meaning a + b*w."""

    f = 2

    def __init__(self, d: int, p: int, k: int, budget: Budget):
        super().__init__(budget)
        self.d, self.p, self.k = d, p, k
        self.modulus = p ** k
        self.one = (1 % self.modulus, 0)

    def _mul(self, x, y):
        return omega_mul(x, y, self.d, self.modulus)

    def key(self, x) -> Hashable:
        return (x[0] % self.modulus, x[1] % self.modulus)

    def residue(self, x) -> Hashable:
        return (x[0] % self.p, x[1] % self.p)

    def level_digits(self, x, i: int) -> tuple[int, ...]:
        pi = self.p ** i
        return (((x[0] - 1) // pi) % self.p, (x[1] // pi) % self.p)

    def level_generators(self, i: int) -> list:
        pi = self.p ** i
        return [((1 + pi) % self.modulus, 0), (1 % self.modulus, pi % self.modulus)]

    def residue_generator(self):
        qs = prime_factors(self.q - 1)
        small = InertLocalRing(self.d, self.p, 1, self.budget)
        for a in range(self.p):
            for b in range(1, self.p):
                x = (a, b)
                if small.is_one(small.pow(x, self.q - 1)) and all(
                    not small.is_one(small.pow(x, (self.q - 1) // r)) for r in qs
                ):
                    return x
        raise AssertionError("F_{p^2}* is cyclic; a generator must exist")


# --- presentation and discrete log ----------------------------------------


@dataclass
class LocalUnitPresentation:
    """Generators and relation lattice for (O/P^k)*, with a discrete log."""

    p: int
    k: int
    ring: Any
    generators: list
    labels: list[str]
    relations: IntMatrix
    context: str
    _teich_log: dict = field(default_factory=dict, repr=False)
    _inverses: list = field(default_factory=list, repr=False)
    _level_index: dict = field(default_factory=dict, repr=False)
    _has_teich: bool = False

    @property
    def num_generators(self) -> int:
        return len(self.generators)

    def group(self) -> AbGroup:
        return group_from_relations(self.num_generators, self.relations)

    def dlog(self, x) -> list[int]:
        return dlog(self, x)

    def evaluate(self, exps: Sequence[int]):
        """Product of generators raised to ``exps`` (nonnegative representatives)."""
        order = self.ring.unit_group_order
        out = self.ring.one
        for g, e in zip(self.generators, exps):
            if e % order:
                out = self.ring.mul(out, self.ring.pow(g, e % order))
        return out


def _build_presentation(ring: _LocalRing, context: str) -> LocalUnitPresentation:
    p, k, q = ring.p, ring.k, ring.q
    gens: list = []
    labels: list[str] = []
    teich_log: dict = {}
    has_teich = q - 1 > 1
    if has_teich:
        t = ring.residue_generator()
        # Teichmuller lift: iterate x -> x^q until it stabilises mod P^k
        while True:
            t2 = ring.pow(t, q)
            if ring.equal(t2, t):
                break
            t = t2
        gens.append(t)
        labels.append("teich")
        y = ring.one
        for e in range(q - 1):
            teich_log[ring.residue(y)] = e
            y = ring.mul(y, t)
    level_index: dict = {}
    for i in range(1, k):
        for j, g in enumerate(ring.level_generators(i)):
            level_index[(i, j)] = len(gens)
            gens.append(g)
            labels.append(f"1+pi^{i}*b{j}")
    principal_order = p ** (ring.f * (k - 1))
    inverses = [None] * len(gens)
    for (i, j), idx in level_index.items():
        inverses[idx] = ring.pow(gens[idx], principal_order - 1)
    if has_teich:
        inverses[0] = ring.pow(gens[0], q - 2)
    pres = LocalUnitPresentation(
        p=p, k=k, ring=ring, generators=gens, labels=labels,
        relations=IntMatrix.from_rows([], cols=len(gens)) if gens else IntMatrix(0, 0, ()),
        context=context, _teich_log=teich_log, _inverses=inverses,
        _level_index=level_index, _has_teich=has_teich,
    )
    rows = []
    n = len(gens)
    if has_teich:
        row = [0] * n
        row[0] = q - 1
        w = dlog(pres, ring.pow(gens[0], q - 1))
        rows.append([a - b for a, b in zip(row, w)])
    for (i, j), idx in level_index.items():
        row = [0] * n
        row[idx] = p
        w = dlog(pres, ring.pow(gens[idx], p))
        rows.append([a - b for a, b in zip(row, w)])
    pres.relations = IntMatrix.from_rows(rows, cols=n) if n else IntMatrix(0, 0, ())
    return pres


def dlog(pres: LocalUnitPresentation, x) -> list[int]:
    """Exponents e with prod(gen_j ** e_j) = x in (O/P^k)*."""
    ring = pres.ring
    exps = [0] * pres.num_generators
    if pres._has_teich:
        r = ring.residue(x)
        if r not in pres._teich_log:
            raise NotAUnit("element is not a unit modulo the prime")
        e = pres._teich_log[r]
        exps[0] = e
        if e:
            x = ring.mul(x, ring.pow(pres._inverses[0], e))
    if ring.residue(x) != ring.residue(ring.one):
        raise NotAUnit("element is not a unit modulo the prime")
    for i in range(1, pres.k):
        digits = ring.level_digits(x, i)
        for j, c in enumerate(digits):
            if c:
                idx = pres._level_index[(i, j)]
                exps[idx] = c
                x = ring.mul(x, ring.pow(pres._inverses[idx], c))
    if not ring.is_one(x):
        raise AssertionError("discrete log stripping left a nontrivial residue")
    return exps


def local_unit_presentation_cyc(p: int, k: int, budget: Budget | None = None) -> LocalUnitPresentation:
    """(Z[zeta_p] / (1 - zeta)^k)*."""
    check_odd_prime(p)
    if k < 1:
        raise ValueError("k must be >= 1")
    budget = budget or Budget()
    if k * (p - 1) > budget.limit:
        raise BudgetExceeded("presentation too large for the budget")
    return _build_presentation(CycLocalRing(p, k, budget), "cyclotomic")


def local_unit_presentation_quad(d: int, p: int, k: int, budget: Budget | None = None) -> LocalUnitPresentation:
    """(O/P^k)* for the canonical prime P above p in Q(sqrt d) (split or inert)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    budget = budget or Budget()
    kind = splitting_type(d, p)
    if kind is SplittingType.RAMIFIED:
        raise RamifiedPrime(f"{p} ramifies in Q(sqrt {d})")
    if kind is SplittingType.SPLIT:
        return _build_presentation(SplitLocalRing(p, k, budget), f"quadratic split d={d}")
    return _build_presentation(InertLocalRing(d, p, k, budget), f"quadratic inert d={d}")


# --- cyclotomic quotient -------------------------------------------------------


def global_unit_generators(p: int) -> list[CycElem]:
    """-1, zeta, u_2, ..., u_{(p-1)/2}: generators of O* when h^+ = 1."""
    gens = [CycElem.integer(p, -1), CycElem.zeta_power(p, 1)]
    gens += [cyclotomic_unit(p, i) for i in range(2, (p - 1) // 2 + 1)]
    return gens


def _check_oracle_prime(p: int, max_prime: int) -> None:
    check_odd_prime(p)
    if p > max_prime or p > H_PLUS_ONE_LIMIT:
        raise UnsupportedPrime(f"p={p} is outside the oracle's supported range (<= {min(max_prime, H_PLUS_ONE_LIMIT)})")


def cyc_quotient_oracle(p: int, k: int, budget: Budget | None = None,
                        max_prime: int = max(DEFAULT_ORACLE_PRIMES)) -> AbGroup:
    """(O/pi^k)* / image(O*), the part of Cl^{pi^k} lying over Cl."""
    _check_oracle_prime(p, max_prime)
    if k == 0:
        return AbGroup()
    pres = local_unit_presentation_cyc(p, k, budget)
    ring = pres.ring
    images = [dlog(pres, ring.reduce(u)) for u in global_unit_generators(p)]
    return quotient_by_subgroup((pres.num_generators, pres.relations), images)


def cyc_unit_image_order(p: int, k: int, budget: Budget | None = None,
                         max_prime: int = max(DEFAULT_ORACLE_PRIMES)) -> int:
    """|O* / O^{pi^k}|, the order of the global unit image in (O/pi^k)*."""
    if k == 0:
        return 1
    q = cyc_quotient_oracle(p, k, budget, max_prime)
    return (p - 1) * p ** (k - 1) // q.order


def filtration_jump_oracle(p: int, k: int, budget: Budget | None = None,
                           max_prime: int = max(DEFAULT_ORACLE_PRIMES)) -> int:
    """[O^{pi^k} : O^{pi^(k+1)}] measured as |im_{k+1}| / |im_k|."""
    if k < 2:
        raise ValueError("k must be >= 2")
    budget = budget or Budget()
    a = cyc_unit_image_order(p, k, budget, max_prime)
    b = cyc_unit_image_order(p, k + 1, budget, max_prime)
    index, r = divmod(b, a)
    if r or index not in (1, p):
        raise AssertionError(f"unit image index {b}/{a} is not 1 or p")
    return index


# --- independent closure path ------------------------------------------------


def _from_primary(parts: dict[int, list[int]]) -> AbGroup:
    """Combine primary cyclic orders {l: [l^e, ...]} into invariant factors."""
    cols = [sorted(v, reverse=True) for v in parts.values()]
    width = max((len(c) for c in cols), default=0)
    out = []
    for i in range(width):
        n = 1
        for c in cols:
            if i < len(c):
                n *= c[i]
        out.append(n)
    return AbGroup(tuple(sorted(out)))


def _structure_from_census(orders: list[int]) -> AbGroup:
    """Invariant factors of a finite abelian group from the multiset of element orders."""
    n = len(orders)
    parts: dict[int, list[int]] = {}
    for ell in prime_factors(n) if n > 1 else []:
        # |G[ell^j]| / |G[ell^(j-1)]| = ell^(number of ell-primary factors of order >= ell^j)
        ranks = []
        prev, j = 1, 1
        while True:
            cnt = sum(1 for o in orders if ell ** j % o == 0)
            ratio, r = divmod(cnt, prev)
            rk = 0
            while ratio > 1 and ratio % ell == 0:
                ratio //= ell
                rk += 1
            if r or ratio != 1:
                raise AssertionError("element census is not that of an abelian group")
            if rk == 0:
                break
            ranks.append(rk)
            prev, j = cnt, j + 1
        ranks.append(0)
        cyc = []
        for j, (a, b) in enumerate(zip(ranks, ranks[1:]), start=1):
            cyc += [ell ** j] * (a - b)
        parts[ell] = cyc
    return _from_primary(parts)


def tiny_closure_crosscheck(p: int, k: int, budget: Budget | None = None) -> AbGroup:
    """The cyclotomic quotient by explicit enumeration of (O/pi^k)*."""
    check_odd_prime(p)
    if p ** k > TINY_CAP:
        raise CapExceeded(f"p^k = {p ** k} exceeds the closure cap {TINY_CAP}")
    if p > H_PLUS_ONE_LIMIT:
        raise UnsupportedPrime(f"p={p} beyond the h^+ = 1 range")
    if k == 0:
        return AbGroup()
    budget = budget or Budget()
    c = -(-k // (p - 1))
    mod = p ** c

    def key(x: CycElem) -> tuple[int, ...]:
        return digit_expansion(x, k).digits

    def mul(x: CycElem, y: CycElem) -> CycElem:
        budget.spend()
        return (x * y).mod(mod)

    one = CycElem.integer(p, 1)
    gens = [u.mod(mod) for u in global_unit_generators(p)]
    # closure of the unit image
    sub = {key(one): one}
    frontier = [one]
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                y = mul(h, g)
                ky = key(y)
                if ky not in sub:
                    sub[ky] = y
                    nxt.append(y)
        frontier = nxt
    sub_elems = list(sub.values())
    # all units, as digit vectors with nonzero leading digit
    units = {}
    for idx in range(p ** k):
        digits = []
        n = idx
        for _ in range(k):
            digits.append(n % p)
            n //= p
        if digits[0]:
            units[tuple(digits)] = from_digits(p, digits).mod(mod)
    covered: set = set()
    orders = []
    for kx, x in units.items():
        if kx in covered:
            continue
        for h in sub_elems:
            covered.add(key(mul(x, h)))
        y, n = x, 1
        while key(y) not in sub:
            y = mul(y, x)
            n += 1
        orders.append(n)
    return _structure_from_census(orders)


# --- quadratic ratio oracle -------------------------------------------------


@dataclass(frozen=True)
class QuadOracleResult:
    ratio: int
    structure: AbGroup | None
    group_order: int
    unit_image_order: int


def _element_order(ring: _LocalRing, x, group_order: int) -> int:
    e = group_order
    for r in prime_factors(group_order) if group_order > 1 else []:
        while e % r == 0 and ring.is_one(ring.pow(x, e // r)):
            e //= r
    return e


def quad_ratio_oracle(d: int, p: int, k: int, case: SplittingType | str | None = None,
                      budget: Budget | None = None, with_structure: bool = True) -> QuadOracleResult:
    """|(O/m)*| / |<u0>| and, when affordable, the quotient's structure."""
    kind = splitting_type(d, p)
    if kind is SplittingType.RAMIFIED:
        raise RamifiedPrime(f"{p} ramifies in Q(sqrt {d})")
    if case is not None:
        want = SplittingType(case) if isinstance(case, str) else case
        if want is not kind:
            raise ValueError(f"p={p} is {kind.value} in Q(sqrt {d}), not {want.value}")
    if k == 0:
        return QuadOracleResult(1, AbGroup(), 1, 1)
    budget = budget or Budget()
    _, u0, _ = totally_positive_generator(d)
    if kind is SplittingType.SPLIT:
        ring: _LocalRing = SplitLocalRing(p, k, budget)
        a, b = u0.omega_coords()
        img = (a + b * split_omega_image(d, p, k)) % ring.modulus
    else:
        ring = InertLocalRing(d, p, k, budget)
        a, b = u0.omega_coords()
        img = (a % ring.modulus, b % ring.modulus)
    n = ring.unit_group_order
    order = _element_order(ring, img, n)
    ratio = n // order
    structure = None
    if with_structure and (kind is SplittingType.SPLIT or ratio <= INERT_STRUCTURE_CAP):
        pres = _build_presentation(ring, f"quadratic {kind.value} d={d}")
        structure = quotient_by_subgroup((pres.num_generators, pres.relations), [dlog(pres, img)])
        if structure.order != ratio:
            raise AssertionError("quotient order disagrees with the unit-order count")
    return QuadOracleResult(ratio, structure, n, order)
