"""Finite abelian groups from integer relation lattices.

Everything here is exact: entries are Python ints, so no overflow handling
is needed.  Groups are stored by invariant factors d_1 | d_2 | ... | d_t with
every d_i >= 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Iterable, Sequence, Union

from .errors import InfiniteGroup

__all__ = [
    "IntMatrix",
    "AbGroup",
    "smith_normal_form",
    "group_from_relations",
    "quotient_by_subgroup",
    "p_part",
    "p_adic_valuation",
]


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("matrix dimensions do not match entry storage")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        entries = tuple(tuple(int(v) for v in r) for r in rows)
        if cols is None:
            if not entries:
                raise ValueError("cols must be given for an empty matrix")
            cols = len(entries[0])
        return cls(len(entries), cols, entries)

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self.entries]


MatrixLike = Union[IntMatrix, Sequence[Sequence[int]]]


def _as_lists(m: MatrixLike, cols: int | None = None) -> tuple[list[list[int]], int]:
    if isinstance(m, IntMatrix):
        return m.to_lists(), m.cols
    rows = [list(map(int, r)) for r in m]
    if cols is None:
        cols = len(rows[0]) if rows else 0
    for r in rows:
        if len(r) != cols:
            raise ValueError(f"row of length {len(r)} in matrix with {cols} columns")
    return rows, cols


def smith_normal_form(m: MatrixLike, cols: int | None = None) -> list[int]:
    """Return the Smith diagonal d_1 | d_2 | ... of ``m`` (length min(rows, cols)).

    Elimination pivots on the entry of least absolute value in the active
    block; whenever the pivot fails to divide a remaining entry, that row is
    folded into the pivot row and the step repeats.
    """
    a, ncols = _as_lists(m, cols)
    nrows = len(a)
    n = min(nrows, ncols)
    for t in range(n):
        while True:
            best = None
            for i in range(t, nrows):
                row = a[i]
                for j in range(t, ncols):
                    v = row[j]
                    if v and (best is None or abs(v) < best[0]):
                        best = (abs(v), i, j)
            if best is None:
                # active block is zero
                return [abs(a[i][i]) for i in range(t)] + [0] * (n - t)
            _, pi, pj = best
            a[t], a[pi] = a[pi], a[t]
            if pj != t:
                for row in a:
                    row[t], row[pj] = row[pj], row[t]
            piv = a[t][t]
            done = True
            for i in range(t + 1, nrows):
                q = a[i][t] // piv
                if q:
                    ri, rt = a[i], a[t]
                    for j in range(t, ncols):
                        ri[j] -= q * rt[j]
                if a[i][t]:
                    done = False
            rt = a[t]
            for j in range(t + 1, ncols):
                q = rt[j] // piv
                if q:
                    for row in a:
                        row[j] -= q * row[t]
                if rt[j]:
                    done = False
            if not done:
                continue
            # pivot row/col cleared; enforce divisibility on the rest
            bad = None
            for i in range(t + 1, nrows):
                for j in range(t + 1, ncols):
                    if a[i][j] % piv:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            rb = a[bad]
            for j in range(t, ncols):
                rt[j] += rb[j]
    return [abs(a[i][i]) for i in range(n)]


@dataclass(frozen=True)
class AbGroup:
    """Finite abelian group given by invariant factors d_1 | ... | d_t, all >= 2."""

    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self):
        f = tuple(int(x) for x in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", f)
        for x in f:
            if x < 2:
                raise ValueError(f"invariant factor {x} < 2")
        for x, y in zip(f, f[1:]):
            if y % x:
                raise ValueError(f"invariant factors {list(f)} violate divisibility")

    @classmethod
    def from_cyclic_orders(cls, orders: Iterable[int]) -> "AbGroup":
        """Normalize a product of cyclic groups Z/n_1 x Z/n_2 x ... ."""
        orders = [int(n) for n in orders]
        if any(n < 1 for n in orders):
            raise ValueError("cyclic orders must be positive")
        r = len(orders)
        diag = [[orders[i] if i == j else 0 for j in range(r)] for i in range(r)]
        return group_from_relations(r, diag)

    @property
    def order(self) -> int:
        return prod(self.invariant_factors)

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    @property
    def is_cyclic(self) -> bool:
        return len(self.invariant_factors) <= 1

    def __mul__(self, other: "AbGroup") -> "AbGroup":
        return AbGroup.from_cyclic_orders(self.invariant_factors + other.invariant_factors)

    def __len__(self) -> int:
        return len(self.invariant_factors)

    def __iter__(self):
        return iter(self.invariant_factors)

    def __str__(self) -> str:
        if not self.invariant_factors:
            return "1"
        return " x ".join(f"Z/{d}" for d in self.invariant_factors)


def _factors_to_group(diag: Sequence[int], r: int) -> AbGroup:
    diag = list(diag) + [0] * (r - len(diag))
    if any(d == 0 for d in diag):
        raise InfiniteGroup("relation lattice has rank below the number of generators")
    return AbGroup(tuple(d for d in diag if d > 1))


def group_from_relations(num_generators: int, relations: MatrixLike) -> AbGroup:
    """Z^r modulo the row span of ``relations``."""
    if num_generators == 0:
        return AbGroup()
    rows, _ = _as_lists(relations, num_generators)
    if not rows:
        raise InfiniteGroup("no relations on a nonzero number of generators")
    return _factors_to_group(smith_normal_form(rows, num_generators), num_generators)


def quotient_by_subgroup(
    presentation: tuple[int, MatrixLike], subgroup_gens: Iterable[Sequence[int]]
) -> AbGroup:
    """Z^r / (L + span(subgroup_gens)) for a presentation (r, L)."""
    r, relations = presentation
    rows, _ = _as_lists(relations, r)
    for g in subgroup_gens:
        g = [int(x) for x in g]
        if len(g) != r:
            raise ValueError(f"subgroup generator of length {len(g)}, expected {r}")
        rows.append(g)
    return group_from_relations(r, rows)


def p_adic_valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def p_part(g: AbGroup, p: int) -> AbGroup:
    """Sylow p-subgroup, as invariant factors."""
    out = []
    for d in g.invariant_factors:
        q = p ** p_adic_valuation(d, p)
        if q > 1:
            out.append(q)
    return AbGroup(tuple(out))


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors by trial division (inputs here are desk-sized)."""
    out = []
    q = 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1 if q == 2 else 2
    if n > 1:
        out.append(n)
    return out


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    q = 3
    while q * q <= n:
        if n % q == 0:
            return False
        q += 2
    return True

