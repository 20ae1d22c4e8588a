"""Bundled reference data and the CRT-merged display of ray class groups."""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources

from .abgroup import AbGroup, p_adic_valuation

__all__ = [
    "ReferenceRow",
    "load_table1",
    "parse_factor_list",
    "format_factor_list",
    "display_group",
    "parse_display",
    "split_at_prime",
]


@dataclass(frozen=True)
class ReferenceRow:
    p: int
    cl: AbGroup
    clp: AbGroup
    clp2: AbGroup
    source: str
    status: str = "regular"

    @property
    def reference_only(self) -> bool:
        return self.status == "reference"


def parse_factor_list(text: str) -> AbGroup:
    """'[23x9,69]' -> AbGroup((23,)*9 + (69,))."""
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise ValueError(f"malformed factor list {text!r}")
    body = text[1:-1].strip()
    factors: list[int] = []
    if body:
        for item in body.split(","):
            n, _, mult = item.strip().partition("x")
            factors += [int(n)] * (int(mult) if mult else 1)
    return AbGroup(tuple(sorted(factors)))


def format_factor_list(g: AbGroup) -> str:
    items = []
    for n in sorted(set(g.invariant_factors)):
        c = g.invariant_factors.count(n)
        items.append(f"{n}x{c}" if c > 1 else str(n))
    return "[" + ",".join(items) + "]"


def _parse_line(line: str) -> ReferenceRow:
    fields = dict(tok.split("=", 1) for tok in line.split())
    missing = {"p", "cl", "clp", "clp2", "source"} - fields.keys()
    if missing:
        raise ValueError(f"reference line missing {sorted(missing)}: {line!r}")
    return ReferenceRow(
        p=int(fields["p"]),
        cl=parse_factor_list(fields["cl"]),
        clp=parse_factor_list(fields["clp"]),
        clp2=parse_factor_list(fields["clp2"]),
        source=fields["source"],
        status=fields.get("status", "regular"),
    )


def load_table1(text: str | None = None) -> dict[int, ReferenceRow]:
    if text is None:
        text = resources.files("rayclass").joinpath("data/table1.txt").read_text(encoding="utf-8")
    rows = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            row = _parse_line(line)
            rows[row.p] = row
    return rows


def split_at_prime(g: AbGroup, p: int) -> tuple[AbGroup, AbGroup]:
    """(prime-to-p part, p-part) of g."""
    coprime, ppart = [], []
    for n in g.invariant_factors:
        e = p_adic_valuation(n, p)
        if n // p ** e > 1:
            coprime.append(n // p ** e)
        if e:
            ppart.append(p ** e)
    return AbGroup.from_cyclic_orders(coprime), AbGroup.from_cyclic_orders(ppart)


def _label(n: int, p: int) -> str:
    e = p_adic_valuation(n, p)
    a = n // p ** e
    pe = "" if e == 0 else (str(p) if e == 1 else f"{p}^{e}")
    if a > 1 and pe:
        return f"Z/({a}·{pe})"
    return f"Z/{pe or a}"


def display_group(g: AbGroup, p: int) -> str:
    """Invariant factors written with the p-power split off, largest first."""
    if g.order == 1:
        return "1"
    parts = []
    for n in sorted(set(g.invariant_factors), reverse=True):
        c = g.invariant_factors.count(n)
        lab = _label(n, p)
        parts.append(f"({lab})^{c}" if c > 1 else lab)
    return " x ".join(parts)


_TERM = re.compile(r"^(?:\((Z/.+)\)\^(\d+)|(Z/.+))$")


def _eval_modulus(text: str) -> int:
    text = text.strip()
    if text.startswith("(") and text.endswith(")"):
        text = text[1:-1]
    n = 1
    for piece in re.split(r"[·*]", text):
        base, _, exp = piece.strip().partition("^")
        n *= int(base) ** (int(exp) if exp else 1)
    return n


def parse_display(text: str) -> AbGroup:
    """Inverse of display_group."""
    text = text.strip()
    if text == "1":
        return AbGroup()
    factors: list[int] = []
    for term in text.split(" x "):
        m = _TERM.match(term.strip())
        if not m:
            raise ValueError(f"cannot parse group term {term!r}")
        body, mult = (m.group(1), int(m.group(2))) if m.group(1) else (m.group(3), 1)
        factors += [_eval_modulus(body[2:])] * mult
    return AbGroup(tuple(sorted(factors)))
