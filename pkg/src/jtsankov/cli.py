"""Command-line driver: ``jacobi-tsankov <command> ...``.

Exit codes: 0 success, 1 verdict mismatch or violated invariant, 2 input error.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from .catalog import build_example, profile_mismatches
from .checkers import (
    ALL_PROPERTIES,
    PropertyVerdict,
    implication_audit,
    recheck,
    run_checks,
)
from .curvature import CurvatureTensor
from .errors import (
    CurvatureSymmetryError,
    DegenerateFormError,
    FormatError,
    InternalConsistencyError,
    JTError,
    PreconditionError,
    SearchExhaustedError,
    SymmetryError,
)
from .exact_linalg import InnerProductSpace, format_rational, identity, parse_rational, signature_of
from .formats import (
    canonical_json,
    digest,
    read_metric,
    read_tensor,
    serialize_tensor,
    tensor_document,
)
from .metric import curvature_at
from .structure import decompose_2step, lemma31_witness

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT = 0, 1, 2


def plain(obj: Any) -> Any:
    """Convert exact values, arrays and tuples into JSON-ready data."""
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, (bool, str)) or obj is None:
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [plain(v) for v in obj.tolist()] if obj.dtype != object else [plain(v) for v in obj]
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(v) for v in obj]
    return str(obj)


def verdict_record(v: PropertyVerdict, rechecked: bool | None = None) -> dict:
    rec: dict[str, Any] = {"property": v.name, "verdict": "holds" if v.holds else "fails"}
    if v.witness is not None:
        rec["witness"] = plain(v.witness)
    if v.certificate is not None:
        cert = v.certificate
        if isinstance(cert, np.ndarray):
            rec["certificate"] = {
                "kind": "quotient",
                "shape": list(cert.shape),
                "nonzero": int(np.count_nonzero(cert)),
                "sha256": digest(canonical_json(plain(cert))),
            }
        else:
            rec["certificate"] = plain(cert)
    if rechecked is not None:
        rec["recheck"] = "agrees" if rechecked else "DISAGREES"
    return rec


@dataclass
class RunReport:
    command: list[str]
    input_digest: str = ""
    details: dict[str, Any] = field(default_factory=dict)
    verdicts: list[dict] = field(default_factory=list)
    problems: list[str] = field(default_factory=list)
    exit_code: int = EXIT_OK
    seconds: float = 0.0
    fmt: str = "text"

    def body(self) -> dict:
        return {
            "command": self.command,
            "input_digest": self.input_digest,
            "details": plain(self.details),
            "verdicts": self.verdicts,
            "problems": self.problems,
            "exit_code": self.exit_code,
        }

    def fail(self, message: str, code: int = EXIT_MISMATCH) -> "RunReport":
        self.problems.append(message)
        self.exit_code = max(self.exit_code, code)
        return self

    def render(self) -> str:
        if self.fmt == "machine":
            return canonical_json({"report": self.body(), "timing": {"seconds": round(self.seconds, 3)}})
        lines = [f"command: {' '.join(self.command)}"]
        if self.input_digest:
            lines.append(f"input: sha256:{self.input_digest}")
        for key, value in plain(self.details).items():
            lines.extend(_text_block(key, value))
        if self.verdicts:
            lines.append("verdicts:")
            width = max(len(v["property"]) for v in self.verdicts)
            for v in self.verdicts:
                line = f"  {v['property']:<{width}}  {v['verdict']}"
                if "witness" in v:
                    line += "  witness " + _inline(v["witness"])
                if "recheck" in v:
                    line += f"  [recheck {v['recheck']}]"
                lines.append(line)
        lines.append("problems: none" if not self.problems else "problems:")
        lines.extend(f"  {p}" for p in self.problems)
        lines.append(f"exit: {self.exit_code}")
        lines.append(f"time: {self.seconds:.3f} s")
        return "\n".join(lines) + "\n"


def _inline(value) -> str:
    if isinstance(value, dict):
        return " ".join(f"{k}={_inline(v)}" for k, v in value.items())
    if isinstance(value, list):
        return "(" + ",".join(_inline(v) for v in value) + ")"
    return str(value)


def _text_block(key: str, value) -> list[str]:
    if isinstance(value, list) and value and isinstance(value[0], (list, dict)):
        return [f"{key}:"] + [f"  {_inline(v)}" for v in value]
    if isinstance(value, dict):
        return [f"{key}:"] + [f"  {k}: {_inline(v)}" for k, v in value.items()]
    return [f"{key}: {_inline(value)}"]


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def _tensor_digest(A: CurvatureTensor) -> str:
    return digest(serialize_tensor(A))


def _verdicts(report: RunReport, A: CurvatureTensor, verdicts, do_recheck: bool) -> None:
    for v in verdicts:
        again = recheck(A, v) if do_recheck else None
        report.verdicts.append(verdict_record(v, again))
        if again is False:
            report.fail(f"{v.name}: witness did not re-verify")


def cmd_verify(args, report: RunReport) -> RunReport:
    example = build_example(args.example)
    A = example.tensor
    report.input_digest = _tensor_digest(A)
    report.details["dim"] = A.dim
    report.details["signature"] = tuple(A.space.signature)
    report.details["nonzero_orbits"] = len(A.nonzero_orbits())
    report.details["symmetries"] = "valid"
    if A.dim:
        n = A.dim * (A.dim + 1) // 2
        report.details["polarized_pairs"] = n
    try:
        verdicts = implication_audit(A, seed=args.seed)
    except InternalConsistencyError as exc:
        return report.fail(f"implication chain violated: {exc}")
    _verdicts(report, A, verdicts, args.recheck)
    for problem in profile_mismatches(example, verdicts):
        report.fail(problem)
    extras = []
    for check in example.extra_checks():
        entry = {"check": check.label, "result": "ok" if check.passed else "FAILED"}
        if check.detail:
            entry["detail"] = check.detail
        extras.append(entry)
        if not check.passed:
            report.fail(f"{check.label}: failed")
    if extras:
        report.details["checks"] = extras
    report.details["expected"] = {k: "holds" if v else "fails" for k, v in example.expected.items()}
    return report


def cmd_check(args, report: RunReport) -> RunReport:
    A = read_tensor(args.file)
    report.input_digest = _tensor_digest(A)
    report.details["dim"] = A.dim
    report.details["signature"] = tuple(A.space.signature)
    if args.property:
        verdicts = run_checks(A, args.property, seed=args.seed)
    else:
        try:
            verdicts = implication_audit(A, seed=args.seed)
        except InternalConsistencyError as exc:
            return report.fail(f"implication chain violated: {exc}")
    _verdicts(report, A, verdicts, args.recheck)
    return report


def cmd_decompose(args, report: RunReport) -> RunReport:
    A = read_tensor(args.file)
    report.input_digest = _tensor_digest(A)
    try:
        result = decompose_2step(A)
    except PreconditionError as exc:
        if exc.witness is not None:
            report.verdicts.append(verdict_record(exc.witness))
        return report.fail(f"precondition: {exc}")
    report.details["dim_W"] = result.k
    report.details["dim_T"] = result.flat_dim
    if result.flat_dim:
        report.details["T_signature"] = tuple(signature_of(result.t_gram(A.space)))
    report.details["W"] = [list(v) for v in result.w_basis]
    report.details["Wbar"] = [list(v) for v in result.wbar_basis]
    report.details["T"] = [list(v) for v in result.t_basis]
    report.details["A_W"] = [
        {"i": i, "j": j, "k": k, "l": l, "value": v}
        for (i, j, k, l), v in CurvatureTensor(_bare_space(result.k), result.a_w_components).nonzero_orbits()
    ] if result.k >= 2 else []
    problems = result.check(A)
    report.details["invariants"] = "re-verified" if not problems else problems
    for p in problems:
        report.fail(p)
    return report


def _bare_space(k: int) -> InnerProductSpace:
    # A_W carries no inner product; any space of the right size works for orbit listing
    return InnerProductSpace(identity(k))


def cmd_witness(args, report: RunReport) -> RunReport:
    A = read_tensor(args.file)
    report.input_digest = _tensor_digest(A)
    try:
        ws = lemma31_witness(A)
    except PreconditionError as exc:
        if exc.witness is not None:
            report.verdicts.append(verdict_record(exc.witness))
        return report.fail(f"precondition: {exc}")
    except SearchExhaustedError as exc:
        report.details["witness"] = "search exhausted"
        return report.fail(str(exc))
    if ws is None:
        report.details["witness"] = "none (2-step nilpotent)"
        return report
    report.details["witness"] = "found"
    report.details["pairing"] = ws.pairing
    report.details["independence_rank"] = ws.independence_rank
    report.details["vectors"] = {label: list(v) for label, v in ws.labelled().items()}
    return report


def _parse_point(text: str) -> list[Fraction]:
    try:
        return [parse_rational(t) for t in text.split(",") if t.strip()]
    except FormatError as exc:
        raise FormatError(f"--point: {exc}") from None


def cmd_curvature(args, report: RunReport) -> RunReport:
    metric = read_metric(args.metric_file)
    point = _parse_point(args.point)
    if len(point) != metric.dim:
        raise FormatError(f"--point has {len(point)} coordinates, metric has dimension {metric.dim}")
    A = curvature_at(metric, point)
    gram_doc = [[[t["exponents"], t["coeff"]] for t in g.to_records()] for row in metric.gram_polys for g in row]
    report.input_digest = digest(canonical_json({"metric": gram_doc, "point": plain(point)}))
    report.details["point"] = point
    report.details["signature"] = tuple(A.space.signature)
    report.details["components"] = [
        {"i": i, "j": j, "k": k, "l": l, "value": v} for (i, j, k, l), v in A.nonzero_orbits()
    ]
    names = args.property or list(ALL_PROPERTIES)
    _verdicts(report, A, run_checks(A, names, seed=args.seed), args.recheck)
    return report


def cmd_export(args, report: RunReport) -> RunReport:
    example = build_example(args.example)
    text = serialize_tensor(example.tensor)
    report.input_digest = digest(text)
    if args.out == "-":
        sys.stdout.write(text)
        report.details["written"] = "stdout"
    else:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            return report.fail(f"cannot write {args.out}: {exc.strerror}", EXIT_INPUT)
        report.details["written"] = args.out
    report.details["dim"] = example.tensor.dim
    report.details["orbits"] = len(tensor_document(example.tensor)["components"])
    return report


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for randomized witness searches (default 0)")
    common.add_argument("--format", choices=("text", "machine"), default="text", help="report format")
    common.add_argument("--recheck", action="store_true", help="re-evaluate every witness from raw components")

    parser = argparse.ArgumentParser(
        prog="jacobi-tsankov",
        description="Exact verification of Jacobi-Tsankov and nilpotency properties of curvature tensors.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="build a named example and check its expected profile")
    p.add_argument("example", help="identifier such as lemma-3.2 or defn-1.8:k=2:seed=1")
    p.set_defaults(run=cmd_verify)

    props = dict(choices=ALL_PROPERTIES, action="append", metavar="NAME", help="property to check (repeatable)")
    p = sub.add_parser("check", parents=[common], help="run checkers on a tensor file")
    p.add_argument("file")
    p.add_argument("--property", **props)
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("decompose", parents=[common], help="split a 2-step nilpotent tensor")
    p.add_argument("file")
    p.set_defaults(run=cmd_decompose)

    p = sub.add_parser("witness", parents=[common], help="build the 14-vector independent set")
    p.add_argument("file")
    p.set_defaults(run=cmd_witness)

    p = sub.add_parser("curvature", parents=[common], help="curvature of a polynomial metric at a point")
    p.add_argument("metric_file")
    p.add_argument("--point", required=True, help="comma-separated rational coordinates")
    p.add_argument("--property", **props)
    p.set_defaults(run=cmd_curvature)

    p = sub.add_parser("export", parents=[common], help="write a named example as a tensor file")
    p.add_argument("example")
    p.add_argument("out", help="output path, or - for stdout")
    p.set_defaults(run=cmd_export)
    return parser


INPUT_ERRORS = (FormatError, CurvatureSymmetryError, SymmetryError, DegenerateFormError, OSError)


def run(argv: Sequence[str] | None = None) -> RunReport:
    args = build_parser().parse_args(argv)
    report = RunReport(command=[args.command] + _echo(args), fmt=args.format)
    start = time.perf_counter()
    try:
        args.run(args, report)
    except INPUT_ERRORS as exc:
        report.fail(f"input error: {exc}", EXIT_INPUT)
    except JTError as exc:
        report.fail(f"{type(exc).__name__}: {exc}")
    report.seconds = time.perf_counter() - start
    return report


def _echo(args) -> list[str]:
    out = []
    for key in ("example", "file", "metric_file", "out"):
        if getattr(args, key, None) is not None:
            out.append(str(getattr(args, key)))
    if getattr(args, "point", None):
        out.append(f"--point={args.point}")
    for name in getattr(args, "property", None) or []:
        out.append(f"--property={name}")
    out.append(f"--seed={args.seed}")
    if args.recheck:
        out.append("--recheck")
    return out


def main(argv: Sequence[str] | None = None) -> int:
    report = run(argv)
    to_stdout = report.command[0] == "export" and report.details.get("written") == "stdout"
    (sys.stderr if to_stdout else sys.stdout).write(report.render())
    return report.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
