"""Verified feasible-set sampling and brute-force optimality audits.

Samples are drawn through the general-solution parameterization around the
solver's own optimum and filtered against the exact membership and
eigen-equation predicates, so every accepted sample is a certified member
of the constraint set. Audits then compare the solver's distance to the
target against every sample's.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import ham, skewham, symplectic
from .jspace import JStructure, StructureMode, is_member, make_block_data
from .matcore import (
    InfeasibleError,
    SamplingError,
    SingularityError,
    fro_norm,
)
from .problem import ProblemInstance, eigen_residual, eigen_threshold, solve_instance

ATTEMPT_BUDGET_FACTOR = 100

_GENERAL_SOLUTIONS = {
    StructureMode.HAMILTONIAN: ham.general_solution,
    StructureMode.SKEW_HAMILTONIAN: skewham.general_solution,
    StructureMode.SYMPLECTIC: symplectic.general_solution,
}


@dataclass(frozen=True)
class SampleBatch:
    """Verified members of the constraint set, with reproducibility data.

    ``seeds`` records the (master_seed, attempt_index) pair of each
    accepted sample; rerunning with the same master seed regenerates the
    identical batch.
    """

    mode: StructureMode
    samples: list
    seeds: list


@dataclass(frozen=True)
class AuditReport:
    """margin = max over samples of ||T - A_hat|| - ||T - A||; nonpositive
    (up to rounding) certifies optimality against the sampled set.
    uniqueness_gap is the largest ||A - A_hat|| among near-optimal samples."""

    margin: float
    uniqueness_gap: float
    sample_count: int


def _structured_part(g: np.ndarray, hermitian: bool) -> np.ndarray:
    return 0.5 * (g + g.conj().T) if hermitian else 0.5 * (g - g.conj().T)


def _draw(rng: np.random.Generator, k: int, scale: float) -> np.ndarray:
    return scale * (rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k)))


def sample_feasible(
    inst: ProblemInstance, count: int, seed: int, js: JStructure | None = None
) -> SampleBatch:
    """Draw up to ``count`` verified members of the constraint set.

    Free parameters are perturbed around the target's own diagonal-basis
    tiles: Y11/Y22 by a structured Gaussian (skew-hermitian, or hermitian in
    the skew-Hamiltonian mode), Y12 only inside the range of X2 Q_X1, which
    provably leaves the optimal off-diagonal block untouched. The nonlinear
    commutation coupling is enforced by rejection; attempts stop after
    ATTEMPT_BUDGET_FACTOR * count draws.
    """
    if count <= 0:
        raise SamplingError("count must be positive")
    if js is None:
        js = inst.jstructure()
    outcome = solve_instance(inst, js)
    if isinstance(outcome, ham.Infeasible):
        raise SamplingError(f"instance is infeasible (step {outcome.failed_step}); nothing to sample")

    tol = inst.tol
    bd = make_block_data(js, inst.X, inst.A_tilde, tol)
    hermitian = inst.mode is StructureMode.SKEW_HAMILTONIAN
    general = _GENERAL_SOLUTIONS[inst.mode]
    k = js.k
    scale = fro_norm(inst.A_tilde) / js.n

    # Base point: the target tiles themselves reproduce the optimum.
    y11_base = _structured_part(bd.t11, hermitian)
    y22_base = _structured_part(bd.t22, hermitian)
    y12_base = bd.t12
    range_proj = bd.x2qx1 @ bd.x2qx1_pinv

    res_threshold = eigen_threshold(inst.X, inst.D, tol)
    samples: list[np.ndarray] = []
    seeds: list[tuple[int, int]] = []
    budget = ATTEMPT_BUDGET_FACTOR * count
    for attempt in range(budget):
        rng = np.random.default_rng([seed, attempt])
        y11 = y11_base + _structured_part(_draw(rng, k, scale), hermitian)
        y22 = y22_base + _structured_part(_draw(rng, k, scale), hermitian)
        y12 = y12_base + _draw(rng, k, scale) @ range_proj
        try:
            a = general(bd, inst.D, y11, y12, y22, tol)
        except (InfeasibleError, SingularityError):
            continue
        if not is_member(a, js, inst.mode, tol):
            continue
        if eigen_residual(a, inst.X, inst.D) > res_threshold:
            continue
        samples.append(a)
        seeds.append((seed, attempt))
        if len(samples) >= count:
            break
    if not samples:
        raise SamplingError(f"no feasible sample accepted within {budget} attempts")
    return SampleBatch(mode=inst.mode, samples=samples, seeds=seeds)


def optimality_audit(inst: ProblemInstance, a_hat: np.ndarray, batch: SampleBatch) -> AuditReport:
    """Compare the solver's distance against every sampled member.

    margin <= 0 (up to rounding) on every sample supports optimality;
    uniqueness_gap close to 0 supports uniqueness of the minimizer.
    """
    base = fro_norm(inst.A_tilde - a_hat)
    margin = -np.inf
    uniqueness_gap = 0.0
    for a in batch.samples:
        dist = fro_norm(inst.A_tilde - a)
        margin = max(margin, base - dist)
        if dist <= base + 1e-8:
            uniqueness_gap = max(uniqueness_gap, fro_norm(a - a_hat))
    return AuditReport(margin=float(margin), uniqueness_gap=float(uniqueness_gap), sample_count=len(batch.samples))
