"""Tests for the dense-matrix kernel."""

import numpy as np
import pytest

from jprocrustes.matcore import (
    PreconditionError,
    ShapeError,
    Tolerance,
    fro_norm,
    is_hermitian,
    is_normal,
    is_skew_hermitian,
    lemma1_min_norm,
    pinv,
    proj_p,
    proj_q,
)

import cases

TOL = cases.TOL


def penrose_max_defect(m, mp):
    return max(
        np.max(np.abs(m @ mp @ m - m)),
        np.max(np.abs(mp @ m @ mp - mp)),
        np.max(np.abs((m @ mp).conj().T - m @ mp)),
        np.max(np.abs((mp @ m).conj().T - mp @ m)),
    )


def test_pinv_identity():
    assert np.allclose(pinv(np.eye(3, dtype=complex), TOL), np.eye(3), atol=1e-14)


def test_pinv_zero():
    z = np.zeros((2, 3), dtype=complex)
    out = pinv(z, TOL)
    assert out.shape == (3, 2)
    assert np.max(np.abs(out)) == 0.0


def test_pinv_penrose_on_reference_block():
    x2 = cases.HAM_X2
    assert penrose_max_defect(x2, pinv(x2, TOL)) < 1e-12


def test_pinv_scale_anchor_zeroes_noise():
    noise = 1e-16 * np.ones((3, 3), dtype=complex)
    anchored = pinv(noise, TOL, scale=1.0)
    assert np.max(np.abs(anchored)) == 0.0


def test_pinv_rejects_nonfinite():
    with pytest.raises(PreconditionError):
        pinv(np.array([[np.nan, 0], [0, 1]], dtype=complex), TOL)


def test_proj_q_trivial():
    assert np.allclose(proj_q(np.eye(4, dtype=complex), TOL), 0.0, atol=1e-14)
    assert np.allclose(proj_q(np.zeros((3, 5), dtype=complex), TOL), np.eye(5), atol=1e-14)


def test_proj_p_trivial():
    assert np.allclose(proj_p(np.eye(4, dtype=complex), TOL), 0.0, atol=1e-14)
    assert np.allclose(proj_p(cases.HAM_X1, TOL), cases.HAM_PX1, atol=1e-12)


def test_proj_q_reference_value():
    assert np.allclose(proj_q(cases.HAM_X1, TOL), cases.HAM_QX1, atol=1e-12)


def test_proj_p_of_degenerate_product_is_identity():
    # x2 qx1 vanishes in exact arithmetic for this data; the projector onto
    # the complement of its range must come out as the identity.
    x1 = np.eye(2, dtype=complex)
    x2 = np.diag([-1.0, 1.0]).astype(complex)
    prod = x2 @ proj_q(x1, TOL)
    assert np.allclose(proj_p(prod, TOL, scale=1.0), np.eye(2), atol=1e-12)


def test_fro_norm_basic():
    assert fro_norm(np.zeros((3, 3))) == 0.0
    assert fro_norm(np.eye(4)) == pytest.approx(2.0, abs=1e-14)


def test_fro_norm_reference_distance():
    _, _, at = cases.skew_feasible(h=1.0)
    assert fro_norm(at - cases.SKEW_A_HAT) == pytest.approx(2 * np.sqrt(11), abs=1e-12)
    assert fro_norm(at - cases.SKEW_A_HAT) == pytest.approx(6.63325, abs=1e-5)


def test_predicates():
    skew = np.array([[-2j, -2j * cases.S3], [-2j * cases.S3, 2j]])
    assert is_skew_hermitian(skew, TOL)
    assert not is_hermitian(1j * np.eye(2), TOL)
    assert is_normal(cases.HAM_A_HAT, TOL)
    with pytest.raises(ShapeError):
        is_hermitian(np.zeros((2, 3)), TOL)


def test_tolerance_validation():
    with pytest.raises(PreconditionError):
        Tolerance(rank_cutoff=0.0)
    with pytest.raises(PreconditionError):
        Tolerance(structure_atol=1.5)


def test_lemma1_trivial():
    b = np.arange(16, dtype=float).reshape(4, 4).astype(complex)
    eye = np.eye(4, dtype=complex)
    zero = np.zeros((4, 4), dtype=complex)
    assert lemma1_min_norm(b, eye, eye, TOL) == pytest.approx(0.0, abs=1e-12)
    assert lemma1_min_norm(b, zero, zero, TOL) == pytest.approx(fro_norm(b), abs=1e-12)


def test_lemma1_rejects_non_projector():
    b = np.eye(4, dtype=complex)
    with pytest.raises(PreconditionError):
        lemma1_min_norm(b, 2 * np.eye(4, dtype=complex), np.eye(4, dtype=complex), TOL)


def test_lemma1_is_a_lower_bound_monte_carlo():
    rng = np.random.default_rng(42)
    b = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    p1 = proj_q(rng.standard_normal((2, 4)) + 1j * rng.standard_normal((2, 4)), TOL)
    p2 = proj_q(rng.standard_normal((1, 4)) + 1j * rng.standard_normal((1, 4)), TOL)
    best = lemma1_min_norm(b, p1, p2, TOL)
    for _ in range(1000):
        e = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        assert best <= fro_norm(b - p1 @ e @ p2) + 1e-10


def _random_matrix(rng):
    rows = int(rng.integers(1, 9))
    cols = int(rng.integers(1, 9))
    m = rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
    if rng.random() < 0.3:
        rank = int(rng.integers(0, min(rows, cols)))
        left = rng.standard_normal((rows, rank)) + 1j * rng.standard_normal((rows, rank))
        right = rng.standard_normal((rank, cols)) + 1j * rng.standard_normal((rank, cols))
        m = left @ right if rank else np.zeros((rows, cols), dtype=complex)
    return m


def test_penrose_property_random():
    rng = np.random.default_rng(7)
    for _ in range(60):
        m = _random_matrix(rng)
        mp = pinv(m, TOL)
        assert penrose_max_defect(m, mp) < 1e-10


def test_projector_identities_random():
    rng = np.random.default_rng(8)
    for _ in range(60):
        m = _random_matrix(rng)
        mp = pinv(m, TOL)
        q = proj_q(m, TOL)
        p = proj_p(m, TOL)
        for proj in (q, p):
            assert np.max(np.abs(proj - proj.conj().T)) < 1e-10
            assert np.max(np.abs(proj @ proj - proj)) < 1e-10
        assert np.max(np.abs(mp @ p)) < 1e-10
        assert np.max(np.abs(p @ mp.conj().T)) < 1e-10


def test_fro_norm_unitary_invariance():
    rng = np.random.default_rng(9)
    for _ in range(30):
        m = rng.standard_normal((5, 4)) + 1j * rng.standard_normal((5, 4))
        u = cases.random_unitary(rng, 5)
        v = cases.random_unitary(rng, 4)
        assert abs(fro_norm(u @ m @ v) - fro_norm(m)) < 1e-10
