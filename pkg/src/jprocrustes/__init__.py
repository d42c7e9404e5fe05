"""Procrustes solvers over the structured solution sets of A X = X D.

Given a structure matrix J (normal, J^2 = -I), an eigenvector matrix X, a
diagonal eigenvalue matrix D and a target, the solvers return the nearest
(Frobenius norm) normal J-Hamiltonian, normal skew J-Hamiltonian or normal
J-symplectic matrix satisfying A X = X D, or a step-labelled infeasibility
report.
"""

__version__ = "0.1.0"

from . import ham, jspace, matcore, oracle, skewham, symplectic
from .ham import FeasibilityReport, Infeasible, Solution, SolveOutcome
from .jspace import (
    BlockData,
    JStructure,
    StructureMode,
    build_jstructure,
    check_spectrum_symmetry,
    from_unitary,
    is_member,
    make_block_data,
)
from .matcore import (
    InfeasibleError,
    NumericalError,
    PreconditionError,
    SamplingError,
    ShapeError,
    SingularityError,
    StructureError,
    Tolerance,
)
from .oracle import AuditReport, SampleBatch, optimality_audit, sample_feasible
from .problem import ProblemInstance, eigen_residual, solve_instance
from .symplectic import cayley

__all__ = [
    "AuditReport",
    "BlockData",
    "FeasibilityReport",
    "Infeasible",
    "InfeasibleError",
    "JStructure",
    "NumericalError",
    "PreconditionError",
    "ProblemInstance",
    "SampleBatch",
    "SamplingError",
    "ShapeError",
    "SingularityError",
    "Solution",
    "SolveOutcome",
    "StructureError",
    "StructureMode",
    "Tolerance",
    "build_jstructure",
    "cayley",
    "check_spectrum_symmetry",
    "eigen_residual",
    "from_unitary",
    "ham",
    "is_member",
    "jspace",
    "make_block_data",
    "matcore",
    "optimality_audit",
    "oracle",
    "sample_feasible",
    "skewham",
    "solve_instance",
    "symplectic",
]
