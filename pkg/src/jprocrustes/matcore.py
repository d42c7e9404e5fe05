"""Dense complex matrix kernel: pseudoinverse, orthogonal projectors,
Frobenius geometry and tolerance-based structure predicates.

Everything operates on plain ``numpy`` arrays of ``complex128``. All
functions are pure; nothing here mutates its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class ShapeError(ValueError):
    """A matrix has the wrong shape for the requested operation."""


class StructureError(ValueError):
    """A matrix violates a required structural identity (e.g. J^2 = -I)."""


class PreconditionError(ValueError):
    """An argument violates a documented precondition."""


class NumericalError(RuntimeError):
    """A numerical routine (SVD, eigendecomposition) failed to converge."""


class SingularityError(RuntimeError):
    """I + A is numerically singular where the Cayley transform needs it."""


class InfeasibleError(RuntimeError):
    """A general-solution construction hit a violated existence condition."""

    def __init__(self, condition: str, residual: float, message: str = ""):
        self.condition = condition
        self.residual = residual
        super().__init__(message or f"condition {condition} violated (residual {residual:.3e})")


class SamplingError(RuntimeError):
    """Feasible-set sampling exhausted its attempt budget without a hit."""


@dataclass(frozen=True)
class Tolerance:
    """Numeric thresholds used throughout.

    rank_cutoff: relative singular-value cutoff; singular values below
        rank_cutoff * sigma_max are treated as zero (pseudoinverse, rank
        tests).
    structure_atol: absolute entrywise threshold for structure predicates
        and for the feasibility-condition checks (scaled by input size
        where documented).
    """

    rank_cutoff: float = 1e-10
    structure_atol: float = 1e-9

    def __post_init__(self) -> None:
        for name in ("rank_cutoff", "structure_atol"):
            v = getattr(self, name)
            if not (0.0 < v < 1.0):
                raise PreconditionError(f"{name} must lie strictly between 0 and 1, got {v}")


DEFAULT_TOL = Tolerance()


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Coerce to a finite 2-D complex array (copies only when needed)."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise ShapeError(f"{name} must be 2-D, got ndim={m.ndim}")
    if not np.all(np.isfinite(m)):
        raise PreconditionError(f"{name} contains non-finite entries")
    return m


def _require_square(m: np.ndarray, name: str) -> np.ndarray:
    m = as_matrix(m, name)
    if m.shape[0] != m.shape[1]:
        raise ShapeError(f"{name} must be square, got {m.shape}")
    return m


def fro_norm(m) -> float:
    """Frobenius norm sqrt(sum |m_ij|^2) = sqrt(trace(M M*))."""
    return float(np.linalg.norm(as_matrix(m), "fro"))


def pinv(m, tol: Tolerance = DEFAULT_TOL, *, scale: float = 0.0) -> np.ndarray:
    """Moore-Penrose inverse via SVD.

    Singular values below rank_cutoff * max(sigma_max, scale) are treated
    as zero. ``scale`` lets callers anchor the cutoff to the magnitude of
    the data a product was formed from, so that a product which vanishes in
    exact arithmetic (and survives only as rounding noise) is recognized as
    the zero matrix rather than inverted.
    """
    m = as_matrix(m, "pinv argument")
    try:
        u, s, vh = np.linalg.svd(m, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"SVD did not converge in pinv: {exc}") from exc
    sigma_max = float(s[0]) if s.size else 0.0
    cutoff = tol.rank_cutoff * max(sigma_max, scale)
    inv = np.where(s > cutoff, 1.0 / np.where(s > cutoff, s, 1.0), 0.0)
    return (vh.conj().T * inv) @ u.conj().T


def proj_q(m, tol: Tolerance = DEFAULT_TOL, *, scale: float = 0.0) -> np.ndarray:
    """Orthogonal projector I - M^+ M onto the null space of M."""
    m = as_matrix(m, "proj_q argument")
    p = np.eye(m.shape[1], dtype=complex) - pinv(m, tol, scale=scale) @ m
    return 0.5 * (p + p.conj().T)


def proj_p(m, tol: Tolerance = DEFAULT_TOL, *, scale: float = 0.0) -> np.ndarray:
    """Orthogonal projector I - M M^+ onto the orthogonal complement of range(M)."""
    m = as_matrix(m, "proj_p argument")
    p = np.eye(m.shape[0], dtype=complex) - m @ pinv(m, tol, scale=scale)
    return 0.5 * (p + p.conj().T)


def spectral_norm(m) -> float:
    """Largest singular value."""
    m = as_matrix(m, "spectral_norm argument")
    s = np.linalg.svd(m, compute_uv=False)
    return float(s[0]) if s.size else 0.0


def hermitian_defect(m) -> float:
    """Frobenius norm of M - M*."""
    m = _require_square(m, "hermitian_defect argument")
    return fro_norm(m - m.conj().T)


def skew_hermitian_defect(m) -> float:
    """Frobenius norm of M + M*."""
    m = _require_square(m, "skew_hermitian_defect argument")
    return fro_norm(m + m.conj().T)


def normality_defect(m) -> float:
    """Frobenius norm of M M* - M* M."""
    m = _require_square(m, "normality_defect argument")
    return fro_norm(m @ m.conj().T - m.conj().T @ m)


def is_hermitian(m, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Entrywise test of M == M* within structure_atol."""
    m = _require_square(m, "is_hermitian argument")
    return bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= tol.structure_atol)


def is_skew_hermitian(m, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Entrywise test of M == -M* within structure_atol."""
    m = _require_square(m, "is_skew_hermitian argument")
    return bool(np.max(np.abs(m + m.conj().T), initial=0.0) <= tol.structure_atol)


def is_normal(m, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Entrywise test of M M* == M* M within structure_atol."""
    m = _require_square(m, "is_normal argument")
    d = m @ m.conj().T - m.conj().T @ m
    return bool(np.max(np.abs(d), initial=0.0) <= tol.structure_atol)


def is_orthogonal_projector(m, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True when M is hermitian and idempotent within structure_atol."""
    m = _require_square(m, "projector candidate")
    if not is_hermitian(m, tol):
        return False
    return bool(np.max(np.abs(m @ m - m), initial=0.0) <= tol.structure_atol)


def lemma1_min_norm(b, p1, p2, tol: Tolerance = DEFAULT_TOL) -> float:
    """Minimum of ||B - P1 E P2||_F over all E, for orthogonal projectors P1, P2.

    The minimum equals ||B - P1 B P2||_F and is attained at E = B. Used as
    an independent oracle for the block-optimality of the solvers.
    """
    b = as_matrix(b, "B")
    for name, p in (("P1", p1), ("P2", p2)):
        if not is_orthogonal_projector(p, tol):
            raise PreconditionError(f"{name} is not a hermitian idempotent within tolerance")
    p1 = as_matrix(p1, "P1")
    p2 = as_matrix(p2, "P2")
    if p1.shape[0] != b.shape[0] or p2.shape[0] != b.shape[1]:
        raise ShapeError(f"shapes not conformable: B {b.shape}, P1 {p1.shape}, P2 {p2.shape}")
    return fro_norm(b - p1 @ b @ p2)
