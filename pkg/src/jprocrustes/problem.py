"""Problem container shared by the CLI and the sampling oracle."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import ham, skewham, symplectic
from .jspace import JStructure, StructureMode, build_jstructure, partition_x
from .matcore import (
    DEFAULT_TOL,
    PreconditionError,
    ShapeError,
    Tolerance,
    as_matrix,
    fro_norm,
)


@dataclass(frozen=True)
class ProblemInstance:
    """One full Procrustes problem: (J, X, D, target, mode, tolerances)."""

    mode: StructureMode
    J: np.ndarray
    X: np.ndarray
    D: np.ndarray
    A_tilde: np.ndarray
    tol: Tolerance = field(default_factory=Tolerance)
    audit_samples: int = 0
    seed: int = 0

    def __post_init__(self) -> None:
        j = as_matrix(self.J, "J")
        x = as_matrix(self.X, "X")
        d = as_matrix(self.D, "D")
        at = as_matrix(self.A_tilde, "A_tilde")
        for name, value in (("J", j), ("X", x), ("D", d), ("A_tilde", at)):
            object.__setattr__(self, name, value)
        n = j.shape[0]
        if j.shape[0] != j.shape[1]:
            raise ShapeError(f"J must be square, got {j.shape}")
        if x.shape[0] != n:
            raise ShapeError(f"X must have {n} rows, got {x.shape}")
        if d.shape != (x.shape[1], x.shape[1]):
            raise ShapeError(f"D must be {x.shape[1]} x {x.shape[1]}, got {d.shape}")
        if at.shape != (n, n):
            raise ShapeError(f"A_tilde must be {n} x {n}, got {at.shape}")
        off = d - np.diag(np.diag(d))
        if np.max(np.abs(off), initial=0.0) > self.tol.structure_atol:
            raise PreconditionError("D must be diagonal")
        if self.audit_samples < 0:
            raise PreconditionError("audit_samples must be nonnegative")

    def jstructure(self) -> JStructure:
        return build_jstructure(self.J, self.tol)


_SOLVERS = {
    StructureMode.HAMILTONIAN: ham.solve,
    StructureMode.SKEW_HAMILTONIAN: skewham.solve,
    StructureMode.SYMPLECTIC: symplectic.solve,
}


def solve_instance(inst: ProblemInstance, js: JStructure | None = None) -> ham.SolveOutcome:
    """Dispatch to the mode-appropriate solver. Validates X's rank up front."""
    if js is None:
        js = inst.jstructure()
    partition_x(js, inst.X, inst.tol)
    return _SOLVERS[inst.mode](js, inst.X, inst.D, inst.A_tilde, inst.tol)


def eigen_residual(a, x, d) -> float:
    """||A X - X D||_F, the defect of the inverse eigenvalue equation."""
    a = as_matrix(a, "A")
    x = as_matrix(x, "X")
    d = as_matrix(d, "D")
    return fro_norm(a @ x - x @ d)


def eigen_threshold(x, d, tol: Tolerance = DEFAULT_TOL) -> float:
    """Acceptance threshold for eigen_residual, scaled by the data size."""
    x = as_matrix(x, "X")
    return x.shape[0] * tol.structure_atol * fro_norm(x) * (1.0 + fro_norm(d))
