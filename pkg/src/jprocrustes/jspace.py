"""Structure matrix J: validation, unitary diagonalization to the
i*I (+) -i*I form, basis partitioning of problem data, membership
predicates and spectral-symmetry diagnostics.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .matcore import (
    DEFAULT_TOL,
    PreconditionError,
    ShapeError,
    StructureError,
    Tolerance,
    as_matrix,
    is_normal,
    pinv,
    proj_p,
    proj_q,
    spectral_norm,
)


class StructureMode(enum.Enum):
    """Which structured matrix class the unknown is constrained to."""

    HAMILTONIAN = "hamiltonian"
    SKEW_HAMILTONIAN = "skew_hamiltonian"
    SYMPLECTIC = "symplectic"


@dataclass(frozen=True)
class JStructure:
    """A validated structure matrix J with a unitary diagonalizer U.

    Invariants (established by the constructors):
      * J is normal and J^2 = -I
      * U is unitary
      * U* J U = diag(i*I_k, -i*I_k)
    """

    J: np.ndarray
    U: np.ndarray
    k: int

    @property
    def n(self) -> int:
        return 2 * self.k


def _canonical_columns(basis: np.ndarray) -> np.ndarray:
    """Deterministic representative of an orthonormal column basis.

    Each column is rotated so its largest-magnitude entry is real positive,
    then columns are sorted lexicographically by their rounded entries.
    Keeps the output reproducible even though the basis itself is free.
    """
    if basis.shape[1] == 0:
        return basis
    cols = []
    for j in range(basis.shape[1]):
        v = basis[:, j].copy()
        i = int(np.argmax(np.abs(v)))
        piv = v[i]
        if abs(piv) > 0:
            v = v * (np.conj(piv) / abs(piv))
        cols.append(v)
    keys = [tuple(np.round([x for c in col for x in (c.real, c.imag)], 9)) for col in cols]
    order = sorted(range(len(cols)), key=lambda j: keys[j])
    return np.column_stack([cols[j] for j in order])


def _eigenspace_basis(projector: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the range of a (near-exact) orthogonal projector."""
    w, s, _ = np.linalg.svd(projector)
    rank = int(np.sum(s > 0.5))
    return _canonical_columns(w[:, :rank])


def build_jstructure(j, tol: Tolerance = DEFAULT_TOL) -> JStructure:
    """Validate J and compute a unitary U with U* J U = diag(i*I_k, -i*I_k).

    J may be complex; it only has to be normal with J^2 = -I (any such
    matrix is automatically skew-hermitian and unitary). The +i eigenspace
    fills the first k columns of U, deterministically ordered.
    """
    j = as_matrix(j, "J")
    n = j.shape[0]
    if j.shape[0] != j.shape[1] or n % 2 != 0:
        raise ShapeError(f"J must be square of even size, got {j.shape}")
    eye = np.eye(n, dtype=complex)
    if not is_normal(j, tol):
        raise StructureError("J is not normal: J J* != J* J within tolerance")
    sq_defect = float(np.max(np.abs(j @ j + eye)))
    if sq_defect > tol.structure_atol:
        raise StructureError(f"J^2 != -I: max entrywise defect {sq_defect:.3e}")

    # (I -/+ iJ)/2 are the orthogonal projectors onto the +/-i eigenspaces.
    u_plus = _eigenspace_basis(0.5 * (eye - 1j * j))
    u_minus = _eigenspace_basis(0.5 * (eye + 1j * j))
    if u_plus.shape[1] != n // 2 or u_minus.shape[1] != n // 2:
        raise StructureError(
            f"eigenvalue multiplicities of +i and -i differ "
            f"({u_plus.shape[1]} vs {u_minus.shape[1]}); J admits no balanced diagonalization"
        )
    u = np.hstack([u_plus, u_minus])
    return from_unitary(j, u, tol)


def from_unitary(j, u, tol: Tolerance = DEFAULT_TOL) -> JStructure:
    """Build a JStructure from a user-supplied diagonalizer, verifying all invariants."""
    j = as_matrix(j, "J")
    u = as_matrix(u, "U")
    n = j.shape[0]
    if j.shape != u.shape or j.shape[0] != j.shape[1] or n % 2 != 0:
        raise ShapeError(f"J and U must be square of equal even size, got {j.shape} and {u.shape}")
    eye = np.eye(n, dtype=complex)
    if not is_normal(j, tol):
        raise StructureError("J is not normal")
    if float(np.max(np.abs(j @ j + eye))) > tol.structure_atol:
        raise StructureError("J^2 != -I within tolerance")
    if float(np.max(np.abs(u.conj().T @ u - eye))) > tol.structure_atol:
        raise StructureError("U is not unitary within tolerance")
    k = n // 2
    d = np.diag(np.concatenate([1j * np.ones(k), -1j * np.ones(k)]))
    if float(np.max(np.abs(u.conj().T @ j @ u - d))) > tol.structure_atol:
        raise StructureError("U* J U != diag(i I, -i I) within tolerance")
    return JStructure(J=j, U=u, k=k)


def partition_x(js: JStructure, x, tol: Tolerance = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Top and bottom k x m blocks of U* X. X must have full column rank."""
    x = as_matrix(x, "X")
    if x.shape[0] != js.n:
        raise ShapeError(f"X must have {js.n} rows, got {x.shape[0]}")
    s = np.linalg.svd(x, compute_uv=False)
    if x.shape[1] > x.shape[0] or s[0] == 0.0 or s[-1] <= tol.rank_cutoff * s[0]:
        raise PreconditionError("X is not of full column rank at tolerance")
    ux = js.U.conj().T @ x
    return ux[: js.k, :], ux[js.k :, :]


def block_target(js: JStructure, at) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """The four k x k tiles of U* A U for the n x n target A."""
    at = as_matrix(at, "A_tilde")
    if at.shape != (js.n, js.n):
        raise ShapeError(f"target must be {js.n} x {js.n}, got {at.shape}")
    b = js.U.conj().T @ at @ js.U
    k = js.k
    return b[:k, :k], b[:k, k:], b[k:, :k], b[k:, k:]


@dataclass(frozen=True)
class BlockData:
    """Problem data partitioned in the J-diagonalizing basis.

    x1, x2: top/bottom blocks of U* X.
    t11..t22: tiles of U* A_tilde U.
    Projectors (all hermitian idempotents):
      qx1    = I - x1^+ x1      null space of x1              (m x m)
      qx2    = I - x2^+ x2      null space of x2              (m x m)
      qx2qx1 = null space of x2 qx1                           (m x m)
      px2qx1 = range complement of x2 qx1                     (k x k)
      px1    = range complement of x1                         (k x k)
      px2    = range complement of x2                         (k x k)
    The pseudoinverses of x1, x2, x2 qx1 and qx1 x2* are carried along;
    the product ones are rank-decided against the magnitude of x2 itself,
    so products that vanish in exact arithmetic stay zero.
    """

    js: JStructure
    x1: np.ndarray
    x2: np.ndarray
    t11: np.ndarray
    t12: np.ndarray
    t21: np.ndarray
    t22: np.ndarray
    qx1: np.ndarray
    qx2: np.ndarray
    qx2qx1: np.ndarray
    px2qx1: np.ndarray
    px1: np.ndarray
    px2: np.ndarray
    x1_pinv: np.ndarray
    x2_pinv: np.ndarray
    x2qx1: np.ndarray
    x2qx1_pinv: np.ndarray
    qx1x2h_pinv: np.ndarray


def make_block_data(js: JStructure, x, at, tol: Tolerance = DEFAULT_TOL) -> BlockData:
    """Partition X and the target, and precompute projectors and pseudoinverses.

    Every rank decision is anchored to the largest singular value of X, so
    a block or block product that vanishes in exact arithmetic (e.g. when
    all eigenvectors lie in one eigenspace of J) is treated as zero instead
    of having its rounding noise inverted.
    """
    x1, x2 = partition_x(js, x, tol)
    t11, t12, t21, t22 = block_target(js, at)
    anchor = spectral_norm(x)
    qx1 = proj_q(x1, tol, scale=anchor)
    x2qx1 = x2 @ qx1
    return BlockData(
        js=js,
        x1=x1,
        x2=x2,
        t11=t11,
        t12=t12,
        t21=t21,
        t22=t22,
        qx1=qx1,
        qx2=proj_q(x2, tol, scale=anchor),
        qx2qx1=proj_q(x2qx1, tol, scale=anchor),
        px2qx1=proj_p(x2qx1, tol, scale=anchor),
        px1=proj_p(x1, tol, scale=anchor),
        px2=proj_p(x2, tol, scale=anchor),
        x1_pinv=pinv(x1, tol, scale=anchor),
        x2_pinv=pinv(x2, tol, scale=anchor),
        x2qx1=x2qx1,
        x2qx1_pinv=pinv(x2qx1, tol, scale=anchor),
        qx1x2h_pinv=pinv(qx1 @ x2.conj().T, tol, scale=anchor),
    )


def is_member(a, js: JStructure, mode: StructureMode, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Membership in the normal structured class selected by ``mode``.

    Hamiltonian:        A normal and (A J)* = A J
    Skew-Hamiltonian:   A normal and (A J)* = -A J
    Symplectic:         A normal, A* J A = J, and I + A nonsingular at tolerance
    """
    a = as_matrix(a, "A")
    if a.shape != (js.n, js.n):
        raise ShapeError(f"A must be {js.n} x {js.n}, got {a.shape}")
    if not is_normal(a, tol):
        return False
    aj = a @ js.J
    if mode is StructureMode.HAMILTONIAN:
        return bool(np.max(np.abs(aj.conj().T - aj)) <= tol.structure_atol)
    if mode is StructureMode.SKEW_HAMILTONIAN:
        return bool(np.max(np.abs(aj.conj().T + aj)) <= tol.structure_atol)
    if mode is StructureMode.SYMPLECTIC:
        if np.max(np.abs(a.conj().T @ js.J @ a - js.J)) > tol.structure_atol:
            return False
        s = np.linalg.svd(np.eye(js.n, dtype=complex) + a, compute_uv=False)
        return bool(s[0] > 0.0 and s[-1] > tol.rank_cutoff * s[0])
    raise PreconditionError(f"unknown mode {mode!r}")


def _closed_under(values: np.ndarray, image, atol: float) -> bool:
    """Greedy perfect matching of each value with some value near image(value)."""
    m = len(values)
    matched = [False] * m
    for i in range(m):
        if matched[i]:
            continue
        target = image(values[i])
        best, best_gap = -1, np.inf
        for jdx in range(m):
            if matched[jdx] and jdx != i:
                continue
            if jdx == i and abs(values[i] - target) > atol:
                continue
            gap = abs(values[jdx] - target)
            if gap < best_gap:
                best, best_gap = jdx, gap
        if best < 0 or best_gap > atol:
            return False
        matched[i] = True
        matched[best] = True
    return True


def check_spectrum_symmetry(d, mode: StructureMode, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Whether the diagonal of D obeys the spectral symmetry the class forces.

    Hamiltonian: each eigenvalue lam pairs with -conj(lam); skew-Hamiltonian:
    with conj(lam); symplectic: conj(lam), 1/lam and 1/conj(lam) must all be
    present and no eigenvalue may equal -1. Matching is greedy with
    multiplicity, within structure_atol. Diagnostic only: the solvers never
    gate on it.
    """
    d = as_matrix(d, "D")
    if d.shape[0] != d.shape[1]:
        raise PreconditionError(f"D must be square diagonal, got {d.shape}")
    off = d - np.diag(np.diag(d))
    if np.max(np.abs(off), initial=0.0) > tol.structure_atol:
        raise PreconditionError("D must be diagonal")
    vals = np.diag(d)
    atol = tol.structure_atol
    if mode is StructureMode.HAMILTONIAN:
        return _closed_under(vals, lambda z: -np.conj(z), atol)
    if mode is StructureMode.SKEW_HAMILTONIAN:
        return _closed_under(vals, np.conj, atol)
    if mode is StructureMode.SYMPLECTIC:
        if np.any(np.abs(vals + 1.0) <= atol) or np.any(np.abs(vals) <= atol):
            return False
        return (
            _closed_under(vals, np.conj, atol)
            and _closed_under(vals, lambda z: 1.0 / z, atol)
            and _closed_under(vals, lambda z: 1.0 / np.conj(z), atol)
        )
    raise PreconditionError(f"unknown mode {mode!r}")
