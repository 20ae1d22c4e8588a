"""Command-line front end: ``rayclass quad|cyc|table1|verify|bernoulli|hminus``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from typing import Any, Sequence

from .abgroup import AbGroup
from .cycfield import bernoulli, check_odd_prime, is_regular, minus_class_number
from .cycray import ray_order_exponent, ray_structure
from .errors import (
    BudgetExceeded,
    GrowthOnlyCase,
    InvalidD,
    IrregularPrime,
    NotOddPrime,
    RamifiedPrime,
    RayClassError,
    UnsupportedPrime,
)
from .oracle import DEFAULT_BUDGET, Budget, cyc_quotient_oracle, quad_ratio_oracle
from .quadfield import SplittingType, check_d, narrow_class_number, splitting_type
from .quadray import BoundKind, inert_growth_start, inert_ray_ratio, split_ray_ratio
from .reference import display_group, load_table1
from .sweeps import SUITES, run_suite

EXIT_OK, EXIT_DISAGREE, EXIT_USAGE = 0, 1, 2
D_SOFT_CAP = 10**6
# h(Q(zeta_p)) = 1 for every p <= 19
TRIVIAL_CLASS_GROUP_LIMIT = 19
GLOBAL_DEFAULTS = {"format": "text", "budget": DEFAULT_BUDGET, "seed": 0}

QUERY_KEYS = ("kind", "d", "p", "k", "case")
RESULT_KEYS = ("ratio", "bound", "exponent", "class_part", "p_part")
CSV_COLUMNS = QUERY_KEYS + RESULT_KEYS + ("structure", "display", "status", "provenance", "agreement")


@dataclass
class ResultRecord:
    query: dict
    result: dict
    provenance: str  # formula | oracle | both
    agreement: bool | None = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        for key in QUERY_KEYS:
            self.query.setdefault(key, None)
        for key in RESULT_KEYS:
            self.result.setdefault(key, None)
        if (self.agreement is not None) != (self.provenance == "both"):
            raise ValueError("agreement is present exactly when provenance is 'both'")

    def to_dict(self) -> dict:
        out = {"query": self.query, "result": self.result, "provenance": self.provenance,
               "agreement": self.agreement}
        out.update(self.extra)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "ResultRecord":
        data = dict(data)
        return cls(query=dict(data.pop("query")), result=dict(data.pop("result")),
                   provenance=data.pop("provenance"), agreement=data.pop("agreement", None),
                   extra=data)

    @property
    def ok(self) -> bool:
        return self.agreement is not False and self.result.get("status") != "fail"


def _factors(g: AbGroup | None) -> list[int] | None:
    return None if g is None else list(g.invariant_factors)


# --- output ----------------------------------------------------------------------


def _csv_cell(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, (list, tuple)):
        return ";".join(str(x) for x in v)
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, dict):
        return json.dumps(v, sort_keys=True)
    return str(v)


def _text_line(rec: ResultRecord) -> str:
    q = " ".join(f"{k}={v}" for k, v in rec.query.items() if v is not None)
    r = " ".join(f"{k}={v}" for k, v in rec.result.items() if v is not None and k != "display")
    line = f"{q} :: {r}"
    if rec.result.get("display"):
        line += f" :: {rec.result['display']}"
    if rec.agreement is not None:
        line += f" :: agreement={'yes' if rec.agreement else 'NO'}"
    return line


def emit(records: Sequence[ResultRecord], fmt: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        for rec in records:
            out.write(json.dumps(rec.to_dict(), sort_keys=True) + "\n")
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for rec in records:
            merged = {**rec.query, **rec.result, "provenance": rec.provenance, "agreement": rec.agreement}
            w.writerow([_csv_cell(merged.get(c)) for c in CSV_COLUMNS])
        out.write(buf.getvalue())
    else:
        for rec in records:
            out.write(_text_line(rec) + "\n")


# --- quad --------------------------------------------------------------------


def quad_record(d: int, p: int, k: int, mode: str = "formula", budget: int = DEFAULT_BUDGET) -> ResultRecord:
    check_d(d)
    kind = splitting_type(d, p)
    if kind is SplittingType.RAMIFIED:
        raise RamifiedPrime(f"{p} ramifies in Q(sqrt {d}); only split and inert primes are supported")
    h = narrow_class_number(d)
    query = {"kind": "quad", "d": d, "p": p, "k": k, "case": kind.value}
    result: dict = {"class_number": h}
    formula_ratio = None
    bound = None
    if mode in ("formula", "both"):
        try:
            res = split_ray_ratio(d, p, k) if kind is SplittingType.SPLIT else inert_ray_ratio(d, p, k)
            formula_ratio, bound = res.ratio, res.kind.value
        except GrowthOnlyCase:
            bound = "growth-only"
            result["growth_start"] = inert_growth_start(d)
    oracle_ratio = None
    if mode in ("oracle", "both"):
        orc = quad_ratio_oracle(d, p, k, kind, Budget(budget))
        oracle_ratio = orc.ratio
        result["oracle_ratio"] = str(orc.ratio)
        result["structure"] = _factors(orc.structure)
    ratio = formula_ratio if formula_ratio is not None else oracle_ratio
    result["ratio"] = None if ratio is None else str(ratio)
    result["bound"] = bound
    if ratio is not None:
        result["order"] = str(ratio * h)
    agreement = None
    if mode == "both":
        if bound == "exact":
            agreement = formula_ratio == oracle_ratio
        elif bound == "upper":
            agreement = oracle_ratio <= formula_ratio
        else:
            start = result["growth_start"]
            agreement = True
            if k - 1 >= start and k >= 2:
                prev = quad_ratio_oracle(d, p, k - 1, kind, Budget(budget), with_structure=False).ratio
                agreement = oracle_ratio == 2 * prev
    return ResultRecord(query, result, mode, agreement)


# --- cyc ----------------------------------------------------------------------------


def _class_part(p: int) -> AbGroup | None:
    if p <= TRIVIAL_CLASS_GROUP_LIMIT:
        return AbGroup()
    row = load_table1().get(p)
    return row.cl if row is not None else None


def cyc_record(p: int, k: int, mode: str = "formula", budget: int = DEFAULT_BUDGET) -> ResultRecord:
    check_odd_prime(p)
    cl = _class_part(p)
    query = {"kind": "cyc", "p": p, "k": k}
    result: dict = {}
    ppart = None
    if mode in ("formula", "both"):
        e = ray_order_exponent(p, k)
        st = ray_structure(p, k, cl)
        ppart = st.p_part
        result["exponent"] = e
        result["ratio"] = str(p ** e)
        result["bound"] = BoundKind.EXACT.value
        result["p_part"] = _factors(ppart)
    if mode in ("oracle", "both"):
        orc = cyc_quotient_oracle(p, k, Budget(budget))
        result["oracle_p_part"] = _factors(orc)
        if ppart is None:
            ppart = orc
            result["p_part"] = _factors(orc)
            result["ratio"] = str(orc.order)
    result["class_part"] = _factors(cl)
    if cl is not None:
        result["display"] = display_group(cl * ppart, p)
        result["order"] = str(cl.order * ppart.order)
    agreement = None
    if mode == "both":
        agreement = result["oracle_p_part"] == result["p_part"]
    return ResultRecord(query, result, mode, agreement)


# --- table1 -----------------------------------------------------------------------


def table1_records(only: int | None = None) -> list[ResultRecord]:
    rows = load_table1()
    if only is not None:
        if only not in rows:
            raise UnsupportedPrime(f"p={only} is not a Table 1 row (rows: {sorted(rows)})")
        rows = {only: rows[only]}
    out = []
    for p, row in sorted(rows.items()):
        h = minus_class_number(p)
        result: dict = {"class_part": _factors(row.cl), "h_minus": h,
                        "class_order_match": h == row.cl.order}
        regular, idx = is_regular(p)
        if row.reference_only or not regular:
            ok = not regular and h == row.cl.order
            result.update({"status": "pass" if ok else "fail", "irregular_indices": idx,
                           "note": "irregular prime; row kept for reference only",
                           "display_p": display_group(row.clp, p), "display_p2": display_group(row.clp2, p)})
        else:
            clp = ray_structure(p, p - 1, row.cl).merged()
            clp2 = ray_structure(p, 2 * (p - 1), row.cl).merged()
            ok = h == row.cl.order and clp == row.clp and clp2 == row.clp2
            result.update({"status": "pass" if ok else "fail",
                           "clp": _factors(clp), "clp2": _factors(clp2),
                           "display_p": display_group(clp, p), "display_p2": display_group(clp2, p),
                           "p_part": _factors(ray_structure(p, p - 1).p_part)})
        out.append(ResultRecord({"kind": "table1", "p": p}, result, "formula"))
    return out


# --- verify -------------------------------------------------------------------


def verify_records(suite: str, seed: int, budget: int) -> list[ResultRecord]:
    out = []
    for case in run_suite(suite, seed=seed, budget_limit=budget):
        q = {"kind": "verify", "suite": case.suite, **case.key}
        r = {"status": case.status, **case.detail}
        out.append(ResultRecord(q, r, "both", case.status != "fail"))
    return out


# --- argument parsing ----------------------------------------------------------------


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def build_parser() -> argparse.ArgumentParser:
    # global flags are accepted both before and after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default=argparse.SUPPRESS)
    common.add_argument("--budget", type=int, default=argparse.SUPPRESS,
                        help="ring multiplications allowed per oracle call")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="seed for randomized property checks")
    ap = argparse.ArgumentParser(prog="rayclass", parents=[common],
                                 description="Ray class groups of Q(sqrt d) and Q(zeta_p).")
    sub = ap.add_subparsers(dest="command", required=True)

    q = sub.add_parser("quad", parents=[common], help="real quadratic field, modulus P^k at one prime")
    q.add_argument("--d", type=int, required=True)
    q.add_argument("--p", type=int, required=True)
    q.add_argument("--k", type=_nonneg, required=True)
    q.add_argument("--mode", choices=("formula", "oracle", "both"), default="formula")

    c = sub.add_parser("cyc", parents=[common], help="Q(zeta_p), modulus (1 - zeta)^k")
    c.add_argument("--p", type=int, required=True)
    c.add_argument("--k", type=_nonneg, required=True)
    c.add_argument("--mode", choices=("formula", "oracle", "both"), default="formula")

    t = sub.add_parser("table1", parents=[common], help="recompute the bundled cyclotomic reference table")
    t.add_argument("--only", type=int, default=None)

    v = sub.add_parser("verify", parents=[common], help="formula-vs-oracle and lemma sweeps")
    v.add_argument("--suite", choices=tuple(SUITES) + ("all",), default="all")

    b = sub.add_parser("bernoulli", parents=[common], help="exact Bernoulli numbers and regularity")
    b.add_argument("--n", type=_nonneg, action="append", default=[])
    b.add_argument("--p", type=int, default=None, help="report regularity of this prime")

    h = sub.add_parser("hminus", parents=[common], help="relative class number of Q(zeta_p)")
    h.add_argument("--p", type=int, required=True, action="append")
    return ap


def _dispatch(args) -> list[ResultRecord]:
    if args.command == "quad":
        if abs(args.d) > D_SOFT_CAP:
            raise InvalidD(f"|d| = {abs(args.d)} exceeds the CLI cap {D_SOFT_CAP}")
        return [quad_record(args.d, args.p, args.k, args.mode, args.budget)]
    if args.command == "cyc":
        return [cyc_record(args.p, args.k, args.mode, args.budget)]
    if args.command == "table1":
        return table1_records(args.only)
    if args.command == "verify":
        return verify_records(args.suite, args.seed, args.budget)
    if args.command == "bernoulli":
        recs = []
        for n in args.n:
            b = bernoulli(n)
            recs.append(ResultRecord({"kind": "bernoulli", "k": n},
                                     {"ratio": f"{b.numerator}/{b.denominator}"}, "formula"))
        if args.p is not None:
            ok, idx = is_regular(args.p)
            recs.append(ResultRecord({"kind": "bernoulli", "p": args.p},
                                     {"regular": ok, "irregular_indices": idx}, "formula"))
        if not recs:
            raise argparse.ArgumentError(None, "give --n and/or --p")
        return recs
    if args.command == "hminus":
        return [ResultRecord({"kind": "hminus", "p": p}, {"h_minus": minus_class_number(p)}, "formula")
                for p in args.p]
    raise AssertionError(args.command)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    for name, default in GLOBAL_DEFAULTS.items():
        if not hasattr(args, name):
            setattr(args, name, default)
    try:
        records = _dispatch(args)
    except IrregularPrime as exc:
        print(f"error: IrregularPrime: p={exc.p} divides the numerator of B_k for k in {exc.indices}",
              file=sys.stderr)
        return EXIT_USAGE
    except (InvalidD, NotOddPrime, RamifiedPrime, UnsupportedPrime, BudgetExceeded, ValueError,
            argparse.ArgumentError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RayClassError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    emit(records, args.format)
    return EXIT_OK if all(r.ok for r in records) else EXIT_DISAGREE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
