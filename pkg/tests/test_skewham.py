"""Tests for the skew-Hamiltonian-mode solver and its reduction."""

import numpy as np
import pytest

from jprocrustes import ham, jspace, skewham
from jprocrustes.jspace import StructureMode
from jprocrustes.matcore import PreconditionError, fro_norm

import cases

TOL = cases.TOL


def test_solve_reference_problem():
    js = cases.js_a()
    x, d, at = cases.skew_feasible(a=1.0, h=1.0)
    out = skewham.solve(js, x, d, at, TOL)
    assert isinstance(out, ham.Solution)
    assert np.max(np.abs(out.a_hat - cases.SKEW_A_HAT)) < 1e-10
    assert out.residual == pytest.approx(2 * np.sqrt(11), abs=1e-10)
    assert jspace.is_member(out.a_hat, js, StructureMode.SKEW_HAMILTONIAN, TOL)
    assert fro_norm(out.a_hat @ x - x @ d) < 1e-10


def test_solve_residual_tracks_target_parameter():
    js = cases.js_a()
    for h in (1.0, 2.0, 0.5 - 1.5j):
        x, d, at = cases.skew_feasible(h=h)
        out = skewham.solve(js, x, d, at, TOL)
        assert out.residual == pytest.approx(cases.skew_residual(h), abs=1e-10)
        assert np.max(np.abs(out.a_hat - cases.SKEW_A_HAT)) < 1e-10


def test_reference_tiles_and_intermediates():
    js = cases.js_a()
    x, d, at = cases.skew_feasible(h=1.0)
    bd = jspace.make_block_data(js, x, at, TOL)
    assert np.allclose(bd.t11, cases.SKEW_T11, atol=1e-12)
    assert np.allclose(bd.t12, cases.SKEW_T12, atol=1e-12)
    m, n = ham.intermediates(bd, d, TOL, hermitian_flavor=True)
    assert np.allclose(m, cases.SKEW_M, atol=1e-12)
    assert np.allclose(n, cases.SKEW_N, atol=1e-12)
    gram = bd.x1.conj().T @ bd.x1 @ d - bd.x2.conj().T @ bd.x2 @ d
    assert np.allclose(gram, cases.SKEW_GRAM, atol=1e-12)


def test_solve_infeasible_at_coupling():
    js = cases.js_a()
    x, d, at = cases.skew_infeasible()
    out = skewham.solve(js, x, d, at, TOL)
    assert isinstance(out, ham.Infeasible)
    assert out.failed_step == "9"
    assert out.report.checks["c_coupling"].residual == pytest.approx(np.sqrt(40), abs=1e-12)
    assert out.report.checks["c_cond1"].residual < 1e-12
    bd = jspace.make_block_data(js, x, at, TOL)
    coupling = (bd.t12 + bd.t21.conj().T) @ bd.px2qx1
    assert np.allclose(coupling, cases.SKEW_INFEASIBLE_COUPLING, atol=1e-12)


def test_solve_feasible_target_returned_unchanged():
    js = cases.js_a()
    x, d, at = cases.skew_feasible()
    first = skewham.solve(js, x, d, at, TOL)
    again = skewham.solve(js, x, d, first.a_hat, TOL)
    assert isinstance(again, ham.Solution)
    assert again.residual < 1e-9


def test_reduction_equivalence_on_reference():
    js = cases.js_a()
    x, d, at = cases.skew_feasible()
    direct = skewham.solve(js, x, d, at, TOL)
    inner = ham.solve(js, x, 1j * d, 1j * at, TOL)
    assert isinstance(inner, ham.Solution)
    assert np.max(np.abs(-1j * inner.a_hat - direct.a_hat)) < 1e-10
    for name in direct.report.checks:
        assert direct.report.checks[name].residual == pytest.approx(
            inner.report.checks[name].residual, abs=1e-10
        )


def test_reduction_equivalence_on_random_instances():
    rng = np.random.default_rng(21)
    checked = 0
    while checked < 10:
        js, x, d, at = cases.random_feasible_instance(rng, StructureMode.SKEW_HAMILTONIAN)
        direct = skewham.solve(js, x, d, at, TOL)
        if isinstance(direct, ham.Infeasible):
            continue
        inner = ham.solve(js, x, 1j * d, 1j * at, TOL)
        assert isinstance(inner, ham.Solution)
        assert np.max(np.abs(-1j * inner.a_hat - direct.a_hat)) < 1e-10
        checked += 1


def _direct_blocks(bd, d):
    """Optimal blocks written out directly in the unscaled data (test-only
    cross-check of the production reduction)."""
    p, q, r, s = bd.qx1, bd.px2qx1, bd.px1, bd.px2
    x1, x2 = bd.x1, bd.x2
    x1p, x2p, x2pp = bd.x1_pinv, bd.x2_pinv, bd.x2qx1_pinv
    m_h = x1 @ d - x1 @ d @ p @ x2pp @ x2 - bd.t12 @ q @ x2
    mid = bd.qx1x2h_pinv @ p @ d.conj().T @ x1.conj().T @ x1
    n_h = x2 @ d + mid - q @ bd.t21 @ x1
    a12 = x1 @ d @ p @ x2pp + bd.t12 @ q
    a11 = m_h @ x1p + x1p.conj().T @ x2.conj().T @ q @ bd.t21 @ r + r @ bd.t11 @ r
    bracket = x1.conj().T @ x1 @ d @ p @ x2pp - x1.conj().T @ bd.t12 @ q
    a22 = n_h @ x2p + x2p.conj().T @ bracket @ s + s @ bd.t22 @ s
    return a11, a12, a22


def test_direct_block_formulas_match_production():
    rng = np.random.default_rng(22)
    checked = 0
    js = cases.js_a()
    x, d, at = cases.skew_feasible()
    pool = [(js, x, d, at)]
    while len(pool) < 6:
        pool.append(cases.random_feasible_instance(rng, StructureMode.SKEW_HAMILTONIAN))
    for js_i, x_i, d_i, at_i in pool:
        out = skewham.solve(js_i, x_i, d_i, at_i, TOL)
        if isinstance(out, ham.Infeasible):
            continue
        bd = jspace.make_block_data(js_i, x_i, at_i, TOL)
        a11, a12, a22 = _direct_blocks(bd, d_i)
        assembled = ham.assemble(js_i, a11, a12, a22, hermitian_flavor=True)
        assert np.max(np.abs(assembled - out.a_hat)) < 1e-9
        checked += 1
    assert checked >= 4


def test_general_solution_membership_and_preconditions():
    js = cases.js_a()
    x, d, at = cases.skew_feasible()
    bd = jspace.make_block_data(js, x, at, TOL)
    rng = np.random.default_rng(23)
    g1 = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    g2 = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    y11 = bd.t11 + 0.5 * (g1 + g1.conj().T)
    y22 = bd.t22 + 0.5 * (g2 + g2.conj().T)
    a = skewham.general_solution(bd, d, y11, bd.t12, y22, TOL)
    assert jspace.is_member(a, js, StructureMode.SKEW_HAMILTONIAN, TOL)
    assert fro_norm(a @ x - x @ d) < 1e-9

    with pytest.raises(PreconditionError):
        skewham.general_solution(bd, d, 1j * np.eye(2), bd.t12, y22, TOL)


def test_general_solution_equals_scaled_composition():
    js = cases.js_a()
    x, d, at = cases.skew_feasible()
    bd = jspace.make_block_data(js, x, at, TOL)
    rng = np.random.default_rng(24)
    g1 = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    y11 = bd.t11 + 0.5 * (g1 + g1.conj().T)
    y12 = bd.t12
    y22 = bd.t22
    direct = skewham.general_solution(bd, d, y11, y12, y22, TOL)
    composed = -1j * ham.general_solution(bd, 1j * d, 1j * y11, 1j * y12, 1j * y22, TOL)
    assert np.max(np.abs(direct - composed)) < 1e-10


def test_solution_structure_identities():
    js = cases.js_a()
    x, d, at = cases.skew_feasible()
    out = skewham.solve(js, x, d, at, TOL)
    aj = out.a_hat @ cases.J4
    assert np.max(np.abs(aj.conj().T + aj)) < 1e-9
    assert np.max(np.abs(out.a_hat @ out.a_hat.conj().T - out.a_hat.conj().T @ out.a_hat)) < 1e-9


def test_spectral_compatibility_of_reduction():
    rng = np.random.default_rng(25)
    for _ in range(10):
        vals = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        d = np.diag(np.concatenate([vals, np.conj(vals)]))
        assert jspace.check_spectrum_symmetry(d, StructureMode.SKEW_HAMILTONIAN, TOL)
        assert jspace.check_spectrum_symmetry(1j * d, StructureMode.HAMILTONIAN, TOL)
