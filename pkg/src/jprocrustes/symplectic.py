"""Normal J-symplectic Procrustes solver via the Cayley transform.

The map A -> (I - A)(I + A)^{-1} is an involution exchanging normal
J-symplectic matrices (without eigenvalue -1) and normal J-Hamiltonian
matrices, and carries A X = X D to A^C X = X D^C with D^C the transform
of D. Solving the Hamiltonian problem against D^C and transforming back
gives the structured optimum.
"""

from __future__ import annotations

import numpy as np

from . import ham
from .jspace import BlockData, JStructure
from .matcore import (
    DEFAULT_TOL,
    SingularityError,
    Tolerance,
    as_matrix,
    fro_norm,
)

# Relative floor on the smallest singular value of I + D before the
# transform of D is refused; stricter than rank_cutoff on purpose, since a
# near -1 eigenvalue poisons every downstream block.
DIAG_SINGULARITY_RTOL = 1e-8


def cayley(a, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """(I - A)(I + A)^{-1}, defined whenever -1 is not an eigenvalue of A."""
    a = as_matrix(a, "A")
    if a.shape[0] != a.shape[1]:
        raise SingularityError(f"Cayley transform needs a square matrix, got {a.shape}")
    eye = np.eye(a.shape[0], dtype=complex)
    s = np.linalg.svd(eye + a, compute_uv=False)
    if s[0] == 0.0 or s[-1] <= tol.rank_cutoff * s[0]:
        raise SingularityError(
            f"I + A is singular at tolerance (sigma_min/sigma_max = {s[-1] / max(s[0], 1e-300):.3e})"
        )
    # Right division: solve Z (I + A) = I - A.
    return np.linalg.solve((eye + a).T, (eye - a).T).T


def _transform_diagonal(d: np.ndarray) -> np.ndarray:
    vals = np.diag(d)
    denom = 1.0 + vals
    floor = DIAG_SINGULARITY_RTOL * float(np.max(np.abs(denom), initial=0.0))
    if np.any(np.abs(denom) <= max(floor, 1e-300)):
        raise SingularityError("D has an eigenvalue at -1; its Cayley transform does not exist")
    return np.diag((1.0 - vals) / denom)


def solve(js: JStructure, x, d, at, tol: Tolerance = DEFAULT_TOL) -> ham.SolveOutcome:
    """Nearest normal J-symplectic solution of A X = X D to the target.

    Transforms D, solves the Hamiltonian problem for the intermediate
    matrix, and maps the optimum back through the transform. The report
    carries the feasibility conditions of the intermediate problem; the
    returned residual is measured against the original target.
    """
    at = as_matrix(at, "A_tilde")
    d = as_matrix(d, "D")
    dc = _transform_diagonal(d)
    outcome = ham.solve(js, x, dc, at, tol)
    if isinstance(outcome, ham.Infeasible):
        return outcome
    a_hat = cayley(outcome.a_hat, tol)
    return ham.Solution(a_hat=a_hat, residual=fro_norm(at - a_hat), report=outcome.report)


def general_solution(
    bd: BlockData, d, y11, y12, y22, tol: Tolerance = DEFAULT_TOL
) -> np.ndarray:
    """A member of the J-symplectic solution set for free (Y11, Y12, Y22).

    Y11 and Y22 must be skew-hermitian; Y12 is arbitrary. Builds the
    Hamiltonian general solution against the transformed D and applies the
    inverse transform, which lands in the normal J-symplectic class.
    """
    d = as_matrix(d, "D")
    inner = ham.general_solution(bd, _transform_diagonal(d), y11, y12, y22, tol)
    return cayley(inner, tol)
