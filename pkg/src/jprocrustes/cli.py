"""Command-line front end: JSON problem files in, JSON solution/diagnostic
reports out.

Input document fields:
  mode        "hamiltonian" | "skew_hamiltonian" | "symplectic"
  J, X, A_tilde   2-D arrays; every entry is either a plain number (real)
                  or a two-element [re, im] array
  D           full 2-D array, or a 1-D diagonal shorthand (list of numbers
              or of [re, im] pairs)
  tol         optional {"rank_cutoff": ..., "structure_atol": ...}
  audit_samples, seed   optional integers

Exit codes: 0 solution, 1 input error, 2 infeasible, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__, oracle
from .ham import CONDITION_STEPS, Infeasible, Solution
from .jspace import StructureMode, check_spectrum_symmetry, partition_x
from .matcore import (
    NumericalError,
    PreconditionError,
    SamplingError,
    ShapeError,
    SingularityError,
    StructureError,
    Tolerance,
)
from .problem import ProblemInstance, eigen_residual, solve_instance

EXIT_SOLUTION = 0
EXIT_INPUT_ERROR = 1
EXIT_INFEASIBLE = 2
EXIT_NUMERICAL = 3


class ParseError(ValueError):
    """Malformed input document; the message carries the offending field."""


def _decode_entry(value, where: str) -> complex:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2 and all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
    ):
        return complex(value[0], value[1])
    raise ParseError(f"{where}: entries must be numbers or [re, im] pairs, got {value!r}")


def _decode_matrix(rows, field: str) -> np.ndarray:
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise ParseError(f"{field}: expected a non-empty 2-D array")
    width = len(rows[0])
    if width == 0 or any(len(r) != width for r in rows):
        raise ParseError(f"{field}: rows have inconsistent lengths")
    out = np.empty((len(rows), width), dtype=complex)
    for i, row in enumerate(rows):
        for j, value in enumerate(row):
            out[i, j] = _decode_entry(value, f"{field}[{i}][{j}]")
    return out


def _is_entry(value) -> bool:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return True
    return (
        isinstance(value, (list, tuple))
        and len(value) == 2
        and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)
    )


def _decode_d(value) -> np.ndarray:
    if not isinstance(value, list) or not value:
        raise ParseError("D: expected an array")
    if all(_is_entry(v) for v in value):
        # 1-D diagonal shorthand; full matrices must use [re, im] entries.
        diag = [_decode_entry(v, f"D[{i}]") for i, v in enumerate(value)]
        return np.diag(np.asarray(diag, dtype=complex))
    return _decode_matrix(value, "D")


def encode_matrix(m: np.ndarray) -> list:
    """Lossless [re, im] encoding of a complex matrix."""
    m = np.asarray(m, dtype=complex)
    return [[[float(v.real), float(v.imag)] for v in row] for row in m]


def parse_instance(source) -> ProblemInstance:
    """Load and validate a problem document from a path or open stream."""
    if hasattr(source, "read"):
        try:
            doc = json.load(source)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from exc
    else:
        try:
            with open(source, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise ParseError(f"cannot read {source}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON in {source}: {exc}") from exc
    return instance_from_document(doc)


def instance_from_document(doc: dict) -> ProblemInstance:
    if not isinstance(doc, dict):
        raise ParseError("top-level document must be an object")
    for field in ("mode", "J", "X", "D", "A_tilde"):
        if field not in doc:
            raise ParseError(f"missing required field '{field}'")
    try:
        mode = StructureMode(doc["mode"])
    except ValueError:
        raise ParseError(
            f"mode: expected one of {[m.value for m in StructureMode]}, got {doc['mode']!r}"
        ) from None

    tol_doc = doc.get("tol", {})
    if not isinstance(tol_doc, dict):
        raise ParseError("tol: expected an object")
    try:
        tol = Tolerance(
            rank_cutoff=float(tol_doc.get("rank_cutoff", Tolerance.rank_cutoff)),
            structure_atol=float(tol_doc.get("structure_atol", Tolerance.structure_atol)),
        )
    except (PreconditionError, TypeError, ValueError) as exc:
        raise ParseError(f"tol: {exc}") from exc

    try:
        inst = ProblemInstance(
            mode=mode,
            J=_decode_matrix(doc["J"], "J"),
            X=_decode_matrix(doc["X"], "X"),
            D=_decode_d(doc["D"]),
            A_tilde=_decode_matrix(doc["A_tilde"], "A_tilde"),
            tol=tol,
            audit_samples=int(doc.get("audit_samples", 0)),
            seed=int(doc.get("seed", 0)),
        )
    except (ShapeError, PreconditionError) as exc:
        raise ParseError(str(exc)) from exc

    # Surface rank deficiency of X as a parse failure, before any solve.
    try:
        partition_x(inst.jstructure(), inst.X, inst.tol)
    except PreconditionError as exc:
        raise ParseError(f"X: {exc}") from exc
    except (ShapeError, StructureError):
        # J problems are reported by the solver with full context.
        pass
    return inst


def instance_to_document(inst: ProblemInstance) -> dict:
    """Canonical document for an instance; parses back to identical values."""
    return {
        "mode": inst.mode.value,
        "J": encode_matrix(inst.J),
        "X": encode_matrix(inst.X),
        "D": encode_matrix(inst.D),
        "A_tilde": encode_matrix(inst.A_tilde),
        "tol": {"rank_cutoff": inst.tol.rank_cutoff, "structure_atol": inst.tol.structure_atol},
        "audit_samples": inst.audit_samples,
        "seed": inst.seed,
    }


def run(inst: ProblemInstance) -> tuple[int, dict]:
    """Solve one instance and build the report document."""
    js = inst.jstructure()
    outcome = solve_instance(inst, js)
    report: dict = {"mode": inst.mode.value}
    try:
        report["spectrum_symmetry_ok"] = check_spectrum_symmetry(inst.D, inst.mode, inst.tol)
    except PreconditionError:
        report["spectrum_symmetry_ok"] = False

    report["conditions"] = {
        name: {
            "residual": check.residual,
            "threshold": check.threshold,
            "passed": check.passed,
            "step": CONDITION_STEPS[name],
        }
        for name, check in outcome.report.checks.items()
    }

    if isinstance(outcome, Infeasible):
        report["status"] = "infeasible"
        report["failed_step"] = outcome.failed_step
        return EXIT_INFEASIBLE, report

    assert isinstance(outcome, Solution)
    report["status"] = "solution"
    report["A_hat"] = encode_matrix(outcome.a_hat)
    report["residual_fro"] = outcome.residual
    report["eigen_residual"] = eigen_residual(outcome.a_hat, inst.X, inst.D)

    if inst.audit_samples > 0:
        try:
            batch = oracle.sample_feasible(inst, inst.audit_samples, inst.seed, js)
            audit = oracle.optimality_audit(inst, outcome.a_hat, batch)
            report["audit"] = {
                "margin": audit.margin,
                "uniqueness_gap": audit.uniqueness_gap,
                "sample_count": audit.sample_count,
            }
        except SamplingError as exc:
            report["audit_error"] = str(exc)
    return EXIT_SOLUTION, report


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jprocrustes",
        description="Nearest normal J-Hamiltonian / skew J-Hamiltonian / J-symplectic "
        "solution of the inverse eigenvalue problem A X = X D to a given target.",
    )
    parser.add_argument("--input", required=True, help="path to the JSON problem document")
    parser.add_argument("--output", default=None, help="path for the JSON report (default: stdout)")
    parser.add_argument("--mode", choices=[m.value for m in StructureMode], help="override the document's mode")
    parser.add_argument("--tol-rank", type=float, default=None, help="override the relative rank cutoff")
    parser.add_argument("--tol-structure", type=float, default=None, help="override the structure tolerance")
    parser.add_argument("--audit", type=int, default=None, metavar="N", help="audit optimality against N feasible samples")
    parser.add_argument("--seed", type=int, default=None, metavar="S", help="seed for audit sampling")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return parser


def _apply_overrides(inst: ProblemInstance, args: argparse.Namespace) -> ProblemInstance:
    mode = StructureMode(args.mode) if args.mode else inst.mode
    tol = Tolerance(
        rank_cutoff=args.tol_rank if args.tol_rank is not None else inst.tol.rank_cutoff,
        structure_atol=args.tol_structure if args.tol_structure is not None else inst.tol.structure_atol,
    )
    return ProblemInstance(
        mode=mode,
        J=inst.J,
        X=inst.X,
        D=inst.D,
        A_tilde=inst.A_tilde,
        tol=tol,
        audit_samples=args.audit if args.audit is not None else inst.audit_samples,
        seed=args.seed if args.seed is not None else inst.seed,
    )


def _emit(report: dict, output: str | None) -> None:
    text = json.dumps(report, indent=2)
    if output is None:
        print(text)
    else:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        inst = _apply_overrides(parse_instance(args.input), args)
    except (ParseError, PreconditionError, ShapeError, StructureError) as exc:
        _emit({"status": "error", "error": str(exc)}, args.output)
        return EXIT_INPUT_ERROR

    try:
        code, report = run(inst)
    except (ShapeError, StructureError, PreconditionError) as exc:
        _emit({"status": "error", "error": str(exc)}, args.output)
        return EXIT_INPUT_ERROR
    except (NumericalError, SingularityError) as exc:
        _emit({"status": "error", "error": str(exc)}, args.output)
        return EXIT_NUMERICAL

    _emit(report, args.output)
    return code


if __name__ == "__main__":
    sys.exit(main())
