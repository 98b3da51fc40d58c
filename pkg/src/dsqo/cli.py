"""Command-line front end.

Every subcommand reads JSON files, runs one library operation and prints a
report. Exit codes: 0 for a pass or a computed value, 1 for a failed check
(the report carries a certificate), 2 for usage or input validation errors
(nothing is printed on stdout).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Literal, Sequence

from . import extremal, matrix_classes as mc, qso
from .linalg import enumerate_vertices, feasible
from .majorization import majorizes, prefix_sums
from .serialization import (
    ValidationError,
    decode_permutation,
    decode_prefix,
    decode_qso,
    decode_simplex_vector,
    decode_sym_matrix,
    encode_matrix,
    encode_qso,
    encode_rational,
    encode_subset,
    encode_vector,
    read_json,
)

Verdict = Literal["pass", "fail", "value"]


@dataclass
class RunReport:
    command: str
    verdict: Verdict
    value: Any = None
    certificate: dict[str, Any] | None = None
    timing_ms: float = 0.0
    output_format: Literal["json", "csv"] = field(default="json", compare=False)

    def __post_init__(self) -> None:
        if self.verdict == "fail" and self.certificate is None:
            raise ValueError("a failed check must carry a certificate")

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"command": self.command, "verdict": self.verdict}
        if self.value is not None:
            out["value"] = self.value
        if self.certificate is not None:
            out["certificate"] = self.certificate
        out["timing_ms"] = round(self.timing_ms, 3)
        return out

    def render(self) -> str:
        return self.to_csv() if self.output_format == "csv" else self.to_json() + "\n"

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_csv(self) -> str:
        """One header row and one data row; nested values are JSON-encoded."""
        row: dict[str, Any] = {"command": self.command, "verdict": self.verdict}
        if isinstance(self.value, dict):
            for key in sorted(self.value):
                v = self.value[key]
                if isinstance(v, (int, str, bool)):
                    row[key] = v
                elif isinstance(v, list) and all(isinstance(t, int) for t in v):
                    row[key] = json.dumps(v)
                elif key == "summary" and isinstance(v, dict):
                    row.update({f"summary.{k}": json.dumps(v[k]) for k in sorted(v)})
        elif self.value is not None:
            row["value"] = json.dumps(self.value, sort_keys=True)
        if self.certificate is not None:
            row["certificate"] = json.dumps(self.certificate, sort_keys=True)
        row["timing_ms"] = round(self.timing_ms, 3)
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(row), lineterminator="\n")
        writer.writeheader()
        writer.writerow(row)
        return buf.getvalue()


def _u1_certificate(check: mc.Membership) -> dict[str, Any]:
    if check.subset is not None:
        return {
            "subset": encode_subset(check.subset),
            "subset_sum": encode_rational(check.subset_sum),
            "bound": len(check.subset),
        }
    return {"total": encode_rational(check.total)}


# ---------------------------------------------------------------------------
# handlers: each returns (verdict, value, certificate)

Outcome = tuple[Verdict, Any, "dict[str, Any] | None"]


def cmd_majorize(args: argparse.Namespace) -> Outcome:
    x = decode_simplex_vector(read_json(args.x), "x")
    y = decode_simplex_vector(read_json(args.y), "y")
    if x.m != y.m:
        raise ValidationError(f"x has {x.m} coordinates, y has {y.m}")
    if majorizes(x, y):
        return "pass", None, None
    px, py = prefix_sums(x), prefix_sums(y)
    k = next(t for t in range(x.m - 1) if px[t] > py[t])
    return "fail", None, {
        "k": k + 1,
        "prefix_x": encode_rational(px[k]),
        "prefix_y": encode_rational(py[k]),
    }


def cmd_apply(args: argparse.Namespace) -> Outcome:
    v = decode_qso(read_json(args.qso))
    x = decode_simplex_vector(read_json(args.x), "x")
    if v.m != x.m:
        raise ValidationError(f"operator has m={v.m}, x has {x.m} coordinates")
    return "value", encode_vector(qso.apply(v, x).coords), None


def cmd_check_u1(args: argparse.Namespace) -> Outcome:
    a = decode_sym_matrix(read_json(args.matrix))
    check = mc.in_U1(a)
    if check:
        return "pass", None, None
    return "fail", None, _u1_certificate(check)


def cmd_check_uk(args: argparse.Namespace) -> Outcome:
    a = decode_sym_matrix(read_json(args.matrix))
    if not 1 <= args.k <= a.m:
        raise ValidationError(f"k={args.k} outside 1..{a.m}")
    result = mc.in_Uk(a, args.k)
    if result:
        return "pass", {"witness": encode_matrix(result.witness.entries)}, None
    cert: dict[str, Any] = {"system": "infeasible"}
    total = a.total()
    if total != args.k * a.m:
        cert["total"] = encode_rational(total)
        cert["expected_total"] = args.k * a.m
    if args.k == 1:
        check = mc.in_U1(a)
        if not check:
            cert.update(_u1_certificate(check))
    return "fail", None, cert


def cmd_solve_sym(args: argparse.Namespace) -> Outcome:
    a = decode_sym_matrix(read_json(args.matrix))
    try:
        t = mc.solve_symmetrization(a)
    except mc.NotInU1Error as exc:
        return "fail", None, _u1_certificate(exc.membership)
    return "value", encode_matrix(t.entries), None


def cmd_solution_vertices(args: argparse.Namespace) -> Outcome:
    a = decode_sym_matrix(read_json(args.matrix))
    system = mc.solution_polytope(a)
    if feasible(system) is None:
        return "fail", None, _u1_certificate(mc.in_U1(a)) | {"system": "infeasible"}
    m = a.m
    vertices = [mc.matrix_from_flat(m, v) for v in enumerate_vertices(system)]
    return "value", {
        "count": len(vertices),
        "vertices": [encode_matrix(t.entries) for t in vertices],
    }, None


def cmd_check_dsqo(args: argparse.Namespace) -> Outcome:
    v = decode_qso(read_json(args.qso))
    check = qso.is_dsqo(v)
    if check:
        return "pass", None, None
    cert: dict[str, Any] = {}
    if check.slice_index is not None:
        cert["slice"] = check.slice_index + 1
        cert.update(_u1_certificate(check.membership))
        x = check.counterexample(v.m)
        cert["counterexample"] = encode_vector(x.coords)
        cert["image"] = encode_vector(qso.apply(v, x).coords)
    else:
        cert["pair"] = [check.pair[0] + 1, check.pair[1] + 1]
    return "fail", None, cert


def cmd_check_necessary(args: argparse.Namespace) -> Outcome:
    v = decode_qso(read_json(args.qso))
    rep = qso.check_necessary_conditions(v)
    value = {
        "slice_totals": rep.totals_ok,
        "row_sums": rep.rows_ok,
        "subset_sums": rep.subsets_ok,
    }
    if rep.passed:
        return "pass", value, None
    cert = {
        "slice_totals": [
            {"slice": k + 1, "total": encode_rational(t)} for k, t in rep.slice_totals
        ],
        "row_sums": [
            {"row": i + 1, "slice": k + 1, "sum": encode_rational(s)}
            for i, k, s in rep.row_sums
        ],
        "subset_sums": [
            {"slice": k + 1, "subset": encode_subset(sub), "sum": encode_rational(s)}
            for k, sub, s in rep.subset_sums
        ],
    }
    return "fail", value, cert


def cmd_witness_search(args: argparse.Namespace) -> Outcome:
    v = decode_qso(read_json(args.qso))
    x = qso.majorization_witness(v, trials=args.trials, seed=args.seed)
    if x is None:
        return "pass", {"trials": args.trials, "seed": args.seed}, None
    return "fail", {"trials": args.trials, "seed": args.seed}, {
        "x": encode_vector(x.coords),
        "image": encode_vector(qso.apply(v, x).coords),
    }


def cmd_complete(args: argparse.Namespace) -> Outcome:
    prefix = decode_prefix(read_json(args.prefix))
    try:
        v = qso.complete_to_dsqo(prefix, args.m)
    except qso.CompletionError as exc:
        return "fail", None, {"error": str(exc)}
    return "value", encode_qso(v), None


def cmd_permute(args: argparse.Namespace) -> Outcome:
    if (args.qso is None) == (args.matrix is None):
        raise ValidationError("give exactly one of --qso or --matrix")
    if args.qso is not None:
        v = decode_qso(read_json(args.qso))
        return "value", encode_qso(qso.permute_qso(v, decode_permutation(args.perm, v.m))), None
    a = decode_sym_matrix(read_json(args.matrix))
    g = decode_permutation(args.perm, a.m)
    return "value", encode_matrix(mc.permute_matrix(a, g).entries), None


def _refuse(exc: Exception) -> ValidationError:
    return ValidationError(str(exc))


def _oracle_outcome(args, compute: Callable[[], Any]) -> tuple[Any, dict[str, Any] | None]:
    try:
        return compute(), None
    except extremal.EnumerationError as exc:
        if args.oracle and "double description" in str(exc):
            return None, {"oracle_mismatch": str(exc)}
        raise _refuse(exc) from exc


def cmd_enum_u1(args: argparse.Namespace) -> Outcome:
    mats, cert = _oracle_outcome(
        args, lambda: extremal.enumerate_extreme_u1(args.m, oracle=args.oracle)
    )
    if cert is not None:
        return "fail", None, cert
    value = {"m": args.m, "count": len(mats), "matrices": [encode_matrix(a.entries) for a in mats]}
    if args.oracle:
        value["oracle_agrees"] = True
    return "value", value, None


def cmd_enum_b(args: argparse.Namespace) -> Outcome:
    ops, cert = _oracle_outcome(
        args, lambda: extremal.enumerate_extreme_b(args.m, oracle=args.oracle)
    )
    if cert is not None:
        return "fail", None, cert
    value: dict[str, Any] = {
        "m": args.m,
        "count": len(ops),
        "tensors": [encode_qso(v) for v in ops],
    }
    if args.m == 3:
        all_ext, with_m = extremal.count_triples(extremal.enumerate_extreme_u1(3))
        value["summary"] = {
            "count": len(ops),
            "triples_all_extreme": all_ext,
            "triples_with_M": with_m,
        }
    if args.oracle:
        value["oracle_agrees"] = True
    return "value", value, None


def cmd_verify_counts(args: argparse.Namespace) -> Outcome:
    m = args.m
    if m not in extremal.B_SUPPORTED:
        raise ValidationError(f"verify-counts supports m in {extremal.B_SUPPORTED}, got {m}")
    u1 = extremal.enumerate_extreme_u1(m)
    b = extremal.enumerate_extreme_b(m)
    dd = extremal.double_description_b(m)
    value: dict[str, Any] = {"u1": len(u1), "b": len(b)}
    problems = []
    if dd != b:
        problems.append(f"double description found {len(dd)} vertices of B")
    if m == 3:
        triples = extremal.count_triples(u1)
        value["triples"] = list(triples)
        if extremal.expand_triples(u1) != b:
            problems.append("orderings of the counted triples differ from the enumerated set")
    if problems:
        return "fail", value, {"problems": problems}
    return "pass", value, None


COMMANDS: dict[str, tuple[Callable[[argparse.Namespace], Outcome], str]] = {
    "majorize": (cmd_majorize, "is x majorized by y"),
    "apply": (cmd_apply, "evaluate an operator at a simplex point"),
    "check-u1": (cmd_check_u1, "subset-sum test for U_1"),
    "check-uk": (cmd_check_uk, "decide membership in U_k"),
    "solve-sym": (cmd_solve_sym, "stochastic T with (T+T')/2 = A"),
    "solution-vertices": (cmd_solution_vertices, "vertices of the solution polytope"),
    "check-dsqo": (cmd_check_dsqo, "is the operator doubly stochastic"),
    "check-necessary": (cmd_check_necessary, "slice total, row-sum and subset-sum conditions"),
    "witness-search": (cmd_witness_search, "sample for a majorization counterexample"),
    "complete": (cmd_complete, "complete leading slices to a doubly stochastic operator"),
    "permute": (cmd_permute, "permute operator slices or matrix rows and columns"),
    "enum-u1": (cmd_enum_u1, "extreme points of U_1"),
    "enum-b": (cmd_enum_b, "extreme points of B"),
    "verify-counts": (cmd_verify_counts, "cross-check extreme point counts"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dsqo", description="Exact tools for doubly stochastic quadratic operators."
    )
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    sub = parser.add_subparsers(dest="command", required=True)
    parsers = {name: sub.add_parser(name, help=h) for name, (_, h) in COMMANDS.items()}
    for name in ("majorize",):
        parsers[name].add_argument("--x", required=True)
        parsers[name].add_argument("--y", required=True)
    parsers["apply"].add_argument("--qso", required=True)
    parsers["apply"].add_argument("--x", required=True)
    for name in ("check-u1", "check-uk", "solve-sym", "solution-vertices"):
        parsers[name].add_argument("--matrix", required=True)
    parsers["check-uk"].add_argument("--k", type=int, required=True)
    for name in ("check-dsqo", "check-necessary", "witness-search"):
        parsers[name].add_argument("--qso", required=True)
    parsers["witness-search"].add_argument("--trials", type=int, default=1000)
    parsers["witness-search"].add_argument("--seed", type=int, default=0)
    parsers["complete"].add_argument("--prefix", required=True)
    parsers["complete"].add_argument("--m", type=int, required=True)
    parsers["permute"].add_argument("--qso")
    parsers["permute"].add_argument("--matrix")
    parsers["permute"].add_argument("--perm", required=True, help="1-based, e.g. 2,3,1")
    for name in ("enum-u1", "enum-b", "verify-counts"):
        parsers[name].add_argument("--m", type=int, required=True)
    for name in ("enum-u1", "enum-b"):
        parsers[name].add_argument(
            "--oracle", action="store_true", help="cross-check with double description"
        )
    for p in parsers.values():
        p.add_argument("--format", choices=("json", "csv"), default=argparse.SUPPRESS)
    return parser


def run(argv: Sequence[str] | None = None) -> tuple[int, RunReport | None]:
    """Parse ``argv`` and execute; returns the exit code and the report."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (exc.code if isinstance(exc.code, int) else 2), None
    handler = COMMANDS[args.command][0]
    start = time.perf_counter()
    try:
        verdict, value, cert = handler(args)
    except ValidationError as exc:
        print(f"dsqo {args.command}: {exc}", file=sys.stderr)
        return 2, None
    elapsed = (time.perf_counter() - start) * 1000
    report = RunReport(args.command, verdict, value, cert, elapsed, args.format)
    return (1 if verdict == "fail" else 0), report


def main(argv: Sequence[str] | None = None) -> int:
    code, report = run(argv)
    if report is not None:
        sys.stdout.write(report.render())
    return code


if __name__ == "__main__":
    sys.exit(main())
