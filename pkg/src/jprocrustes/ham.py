"""Feasibility tests and explicit optimal blocks for the structured
Procrustes problem min ||A_tilde - A||_F over {A : A X = X D} intersected
with the normal J-Hamiltonian class (and, via the hermitian flavor, the
normal skew J-Hamiltonian class).

The step numbering in failure labels follows the solve pipeline:
  7  structure of the diagonal target tiles
  8  structure of X1* X1 D - X2* X2 D
  9  off-diagonal coupling of the target tiles, and X1 D P L = 0
  10 M P = 0 and N T = 0
  15 commutation of the assembled optimal blocks
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .jspace import BlockData, JStructure, make_block_data
from .matcore import (
    DEFAULT_TOL,
    InfeasibleError,
    PreconditionError,
    ShapeError,
    Tolerance,
    as_matrix,
    fro_norm,
    hermitian_defect,
    is_skew_hermitian,
    skew_hermitian_defect,
)

CONDITION_STEPS = {
    "c_skew_At11": "7",
    "c_skew_At22": "7",
    "c_skew_gram": "8",
    "c_coupling": "9",
    "c_cond1": "9",
    "c_cond22": "10",
    "c_cond33": "10",
    "c_commute": "15",
}

STEP_ORDER = ("7", "8", "9", "10", "15")


@dataclass(frozen=True)
class ConditionCheck:
    residual: float
    threshold: float
    passed: bool


@dataclass(frozen=True)
class FeasibilityReport:
    """Named residual norms for every feasibility condition.

    ``checks`` maps the fixed condition names of CONDITION_STEPS to their
    ConditionCheck, in evaluation order. The same names are used whether
    the skew-hermitian (Hamiltonian) or hermitian (skew-Hamiltonian)
    variant of each test was evaluated.
    """

    checks: dict

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    @property
    def failed_step(self) -> str | None:
        for step in STEP_ORDER:
            for name, check in self.checks.items():
                if CONDITION_STEPS[name] == step and not check.passed:
                    return step
        return None

    def residuals(self) -> dict:
        return {name: c.residual for name, c in self.checks.items()}


@dataclass(frozen=True)
class Solution:
    a_hat: np.ndarray
    residual: float
    report: FeasibilityReport


@dataclass(frozen=True)
class Infeasible:
    report: FeasibilityReport
    failed_step: str


SolveOutcome = Solution | Infeasible


def _require_diagonal(d, m: int, tol: Tolerance) -> np.ndarray:
    d = as_matrix(d, "D")
    if d.shape != (m, m):
        raise ShapeError(f"D must be {m} x {m}, got {d.shape}")
    off = d - np.diag(np.diag(d))
    if np.max(np.abs(off), initial=0.0) > tol.structure_atol:
        raise PreconditionError("D must be diagonal")
    return d


def _check(residual: float, scale: float, tol: Tolerance) -> ConditionCheck:
    threshold = tol.structure_atol * (1.0 + scale)
    return ConditionCheck(residual=residual, threshold=threshold, passed=residual <= threshold)


def intermediates(
    bd: BlockData, d, tol: Tolerance = DEFAULT_TOL, *, hermitian_flavor: bool = False
) -> tuple[np.ndarray, np.ndarray]:
    """The two residual generators M and N of the feasibility tests.

    M = X1 D - X1 D P (X2 P)^+ X2 - T12 Q X2
    N = X2 D -/+ (P X2*)^+ P D* X1* X1 - Q T21 X1
    with P, Q the null/range-complement projectors from the block data; the
    middle sign of N flips in the hermitian flavor.
    """
    d = _require_diagonal(d, bd.x1.shape[1], tol)
    p, q = bd.qx1, bd.px2qx1
    x1, x2 = bd.x1, bd.x2
    m = x1 @ d - x1 @ d @ p @ bd.x2qx1_pinv @ x2 - bd.t12 @ q @ x2
    mid = bd.qx1x2h_pinv @ p @ d.conj().T @ x1.conj().T @ x1
    sign = 1.0 if hermitian_flavor else -1.0
    n = x2 @ d + sign * mid - q @ bd.t21 @ x1
    return m, n


def check_feasibility(
    bd: BlockData, d, hermitian_flavor: bool = False, tol: Tolerance = DEFAULT_TOL
) -> FeasibilityReport:
    """Evaluate the step 7-10 conditions (commutation is appended by solve).

    hermitian_flavor=False tests the skew-hermitian variants (normal
    J-Hamiltonian target class); True tests the hermitian variants used by
    the skew J-Hamiltonian reduction. Failures are report entries, never
    exceptions, and every residual is always computed.
    """
    d = _require_diagonal(d, bd.x1.shape[1], tol)
    defect = hermitian_defect if hermitian_flavor else skew_hermitian_defect
    x1, x2 = bd.x1, bd.x2

    checks: dict[str, ConditionCheck] = {}
    checks["c_skew_At11"] = _check(defect(bd.t11), fro_norm(bd.t11), tol)
    checks["c_skew_At22"] = _check(defect(bd.t22), fro_norm(bd.t22), tol)

    g1 = x1.conj().T @ x1 @ d
    g2 = x2.conj().T @ x2 @ d
    checks["c_skew_gram"] = _check(defect(g1 - g2), fro_norm(g1) + fro_norm(g2), tol)

    sign = 1.0 if hermitian_flavor else -1.0
    coupling = (bd.t12 + sign * bd.t21.conj().T) @ bd.px2qx1
    checks["c_coupling"] = _check(fro_norm(coupling), fro_norm(bd.t12) + fro_norm(bd.t21), tol)
    c1 = x1 @ d @ bd.qx1 @ bd.qx2qx1
    checks["c_cond1"] = _check(fro_norm(c1), fro_norm(x1 @ d), tol)

    m, n = intermediates(bd, d, tol, hermitian_flavor=hermitian_flavor)
    checks["c_cond22"] = _check(fro_norm(m @ bd.qx1), fro_norm(m), tol)
    checks["c_cond33"] = _check(fro_norm(n @ bd.qx2), fro_norm(n), tol)
    return FeasibilityReport(checks=checks)


def compute_blocks(
    bd: BlockData, d, tol: Tolerance = DEFAULT_TOL, *, hermitian_flavor: bool = False
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Optimal diagonal-basis blocks (A11, A12, A22) of the nearest member.

    Valid when the step 7-10 conditions pass; always computable.
    """
    d = _require_diagonal(d, bd.x1.shape[1], tol)
    p, q, r, s = bd.qx1, bd.px2qx1, bd.px1, bd.px2
    x1, x2 = bd.x1, bd.x2
    x1_pinv, x2_pinv, x2p_pinv = bd.x1_pinv, bd.x2_pinv, bd.x2qx1_pinv

    a12 = x1 @ d @ p @ x2p_pinv + bd.t12 @ q
    m, n = intermediates(bd, d, tol, hermitian_flavor=hermitian_flavor)
    a11 = m @ x1_pinv + x1_pinv.conj().T @ x2.conj().T @ q @ bd.t21 @ r + r @ bd.t11 @ r
    bracket = x1.conj().T @ x1 @ d @ p @ x2p_pinv - x1.conj().T @ bd.t12 @ q
    a22 = n @ x2_pinv + x2_pinv.conj().T @ bracket @ s + s @ bd.t22 @ s
    return a11, a12, a22


def assemble(
    js: JStructure, a11, a12, a22, *, hermitian_flavor: bool = False
) -> np.ndarray:
    """U [[A11, A12], [+/-A12*, A22]] U* (minus sign in the hermitian flavor)."""
    sign = -1.0 if hermitian_flavor else 1.0
    top = np.hstack([a11, a12])
    bottom = np.hstack([sign * a12.conj().T, a22])
    return js.U @ np.vstack([top, bottom]) @ js.U.conj().T


def solve(
    js: JStructure,
    x,
    d,
    at,
    tol: Tolerance = DEFAULT_TOL,
    *,
    hermitian_flavor: bool = False,
) -> SolveOutcome:
    """Nearest normal J-Hamiltonian solution of A X = X D to the target.

    Runs the full pipeline: partition, feasibility, optimal blocks,
    commutation test and assembly. With hermitian_flavor=True the hermitian
    variants of the conditions and the skew-structured assembly are used,
    which yields the nearest normal skew J-Hamiltonian member instead.
    Infeasibility is reported with the first failing step label.
    """
    at = as_matrix(at, "A_tilde")
    bd = make_block_data(js, x, at, tol)
    d = _require_diagonal(d, bd.x1.shape[1], tol)

    report = check_feasibility(bd, d, hermitian_flavor, tol)
    a11, a12, a22 = compute_blocks(bd, d, tol, hermitian_flavor=hermitian_flavor)
    commute = fro_norm(a11 @ a12 - a12 @ a22)
    scale = fro_norm(a11) * fro_norm(a12) + fro_norm(a12) * fro_norm(a22)
    checks = dict(report.checks)
    checks["c_commute"] = _check(commute, scale, tol)
    report = FeasibilityReport(checks=checks)

    failed = report.failed_step
    if failed is not None:
        return Infeasible(report=report, failed_step=failed)
    a_hat = assemble(js, a11, a12, a22, hermitian_flavor=hermitian_flavor)
    return Solution(a_hat=a_hat, residual=fro_norm(at - a_hat), report=report)


def general_solution(
    bd: BlockData, d, y11, y12, y22, tol: Tolerance = DEFAULT_TOL
) -> np.ndarray:
    """A member of the solution set for free parameters (Y11, Y12, Y22).

    Y11 and Y22 must be skew-hermitian; Y12 is arbitrary. The existence
    conditions are verified and a violated one raises InfeasibleError
    naming it; on success the assembled n x n normal J-Hamiltonian matrix
    with A X = X D is returned.
    """
    d = _require_diagonal(d, bd.x1.shape[1], tol)
    y11 = as_matrix(y11, "Y11")
    y12 = as_matrix(y12, "Y12")
    y22 = as_matrix(y22, "Y22")
    k = bd.js.k
    for name, y in (("Y11", y11), ("Y12", y12), ("Y22", y22)):
        if y.shape != (k, k):
            raise ShapeError(f"{name} must be {k} x {k}, got {y.shape}")
    if not is_skew_hermitian(y11, tol):
        raise PreconditionError("Y11 must be skew-hermitian")
    if not is_skew_hermitian(y22, tol):
        raise PreconditionError("Y22 must be skew-hermitian")

    p, t, l, q, r, s = bd.qx1, bd.qx2, bd.qx2qx1, bd.px2qx1, bd.px1, bd.px2
    x1, x2 = bd.x1, bd.x2
    x1_pinv, x2_pinv, x2p_pinv = bd.x1_pinv, bd.x2_pinv, bd.x2qx1_pinv

    a12 = x1 @ d @ p @ x2p_pinv + y12 @ q
    m_y = x1 @ d - x1 @ d @ p @ x2p_pinv @ x2 - y12 @ q @ x2
    n_y = x2 @ d - bd.qx1x2h_pinv @ p @ d.conj().T @ x1.conj().T @ x1 - q @ y12.conj().T @ x1
    a11 = m_y @ x1_pinv + x1_pinv.conj().T @ x2.conj().T @ q @ y12.conj().T @ r + r @ y11 @ r
    bracket = x1.conj().T @ x1 @ d @ p @ x2p_pinv - x1.conj().T @ y12 @ q
    a22 = n_y @ x2_pinv + x2_pinv.conj().T @ bracket @ s + s @ y22 @ s

    def _gate(name: str, residual: float, scale: float) -> None:
        threshold = tol.structure_atol * (1.0 + scale)
        if residual > threshold:
            raise InfeasibleError(name, residual)

    _gate("cond1", fro_norm(x1 @ d @ p @ l), fro_norm(x1 @ d))
    _gate("cond2", fro_norm(m_y @ p), fro_norm(m_y))
    _gate("cond3", fro_norm(n_y @ t), fro_norm(n_y))
    s1 = x1.conj().T @ (x1 @ d - a12 @ x2)
    s2 = x2.conj().T @ (x2 @ d - a12.conj().T @ x1)
    _gate("skew_pair_1", skew_hermitian_defect(s1), fro_norm(s1))
    _gate("skew_pair_2", skew_hermitian_defect(s2), fro_norm(s2))
    commute_scale = fro_norm(a11) * fro_norm(a12) + fro_norm(a12) * fro_norm(a22)
    _gate("commute", fro_norm(a11 @ a12 - a12 @ a22), commute_scale)

    return assemble(bd.js, a11, a12, a22)
