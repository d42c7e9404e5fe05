"""Normal skew J-Hamiltonian Procrustes solver.

Multiplying a skew J-Hamiltonian matrix by i gives a J-Hamiltonian one and
turns A X = X D into (iA) X = X (iD), so the whole problem reduces to the
Hamiltonian engine; here the reduction is realized through its hermitian
flavor, which evaluates the equivalent conditions directly on the
unscaled data. The literally i-scaled route is kept as a cross-check in
the test suite.
"""

from __future__ import annotations

import numpy as np

from . import ham
from .jspace import BlockData, JStructure
from .matcore import DEFAULT_TOL, PreconditionError, Tolerance, as_matrix, is_hermitian


def solve(js: JStructure, x, d, at, tol: Tolerance = DEFAULT_TOL) -> ham.SolveOutcome:
    """Nearest normal skew J-Hamiltonian solution of A X = X D to the target.

    Equivalent to scaling (D, target) by i, solving the Hamiltonian
    problem and scaling the optimum back by -i; condition names in the
    report refer to the hermitian variants of the tests (identical
    residual norms either way).
    """
    return ham.solve(js, x, d, at, tol, hermitian_flavor=True)


def general_solution(
    bd: BlockData, d, y11, y12, y22, tol: Tolerance = DEFAULT_TOL
) -> np.ndarray:
    """A member of the skew J-Hamiltonian solution set for free (Y11, Y12, Y22).

    Y11 and Y22 must be hermitian; Y12 is arbitrary. Delegates to the
    Hamiltonian general solution of (iD) with parameters (iY11, iY12, iY22)
    and scales back by -i.
    """
    y11 = as_matrix(y11, "Y11")
    y22 = as_matrix(y22, "Y22")
    if not is_hermitian(y11, tol):
        raise PreconditionError("Y11 must be hermitian")
    if not is_hermitian(y22, tol):
        raise PreconditionError("Y22 must be hermitian")
    d = as_matrix(d, "D")
    inner = ham.general_solution(bd, 1j * d, 1j * y11, 1j * as_matrix(y12, "Y12"), 1j * y22, tol)
    return -1j * inner
