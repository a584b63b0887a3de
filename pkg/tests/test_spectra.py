import math

import numpy as np
import pytest

import latmat
from latmat import SpectraError, eigen_symmetric


GOLD_2x2 = np.array([(3 - math.sqrt(5)) / 2, (3 + math.sqrt(5)) / 2])


def test_analytic_2x2():
    s = eigen_symmetric(np.array([[2.0, 1.0], [1.0, 2.0]]))
    assert np.allclose(s.eigenvalues, [1.0, 3.0], atol=1e-12)


def test_identity():
    s = eigen_symmetric(np.eye(5))
    assert np.allclose(s.eigenvalues, 1.0)
    assert s.iterations == 0  # already diagonal


def test_golden_ratio_matrix():
    s = eigen_symmetric(np.array([[1.0, 1.0], [1.0, 2.0]]))
    assert np.allclose(s.eigenvalues, GOLD_2x2, atol=1e-13)


def test_rejects_nonsquare():
    with pytest.raises(SpectraError, match="square"):
        eigen_symmetric(np.ones((2, 3)))


def test_rejects_asymmetric():
    with pytest.raises(SpectraError, match="not symmetric"):
        eigen_symmetric(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_matches_lapack_oracle_random():
    rng = np.random.default_rng(42)
    for n in (2, 3, 5, 9, 16, 33):
        m = rng.normal(size=(n, n))
        m = (m + m.T) / 2
        ours = eigen_symmetric(m).eigenvalues
        lapack = np.linalg.eigvalsh(m)
        assert np.allclose(ours, lapack, atol=1e-10 * max(1.0, np.abs(m).max()))


def test_trace_and_det_invariants():
    rng = np.random.default_rng(7)
    for n in (3, 6, 10):
        q = rng.normal(size=(n, n))
        m = q @ q.T + n * np.eye(n)  # well conditioned SPD
        s = eigen_symmetric(m)
        assert s.eigenvalues.sum() == pytest.approx(np.trace(m), rel=1e-9)
        assert np.prod(s.eigenvalues) == pytest.approx(np.linalg.det(m), rel=1e-6)
        assert s.offdiag_residual <= 1e-12 * latmat.frobenius_norm(m)


def test_orthogonal_invariance():
    rng = np.random.default_rng(11)
    m = rng.normal(size=(6, 6))
    m = m + m.T
    q, _ = np.linalg.qr(rng.normal(size=(6, 6)))
    rotated = q.T @ m @ q
    rotated = (rotated + rotated.T) / 2
    a = eigen_symmetric(m).eigenvalues
    b = eigen_symmetric(rotated).eigenvalues
    assert np.abs(a - b).max() <= 1e-10 * max(1.0, np.abs(a).max())


def test_kappa():
    assert latmat.kappa(np.array([[1.0, 1.0], [1.0, 2.0]])) == pytest.approx(
        GOLD_2x2[0], abs=1e-13
    )
    assert latmat.kappa(np.diag([-3.0, 2.0])) == 2.0
    assert latmat.kappa(np.ones((2, 2))) == pytest.approx(0.0, abs=1e-12)


def test_spectral_radius():
    assert latmat.spectral_radius(np.array([[1.0, 1.0], [1.0, 2.0]])) == pytest.approx(
        GOLD_2x2[1], abs=1e-13
    )
    assert latmat.spectral_radius(np.eye(4)) == 1.0
    assert latmat.spectral_radius(np.diag([-3.0, 2.0])) == 3.0


def test_norms():
    j = np.ones((3, 3))
    assert latmat.frobenius_norm(j) == pytest.approx(3.0)
    assert latmat.spectral_norm(j) == pytest.approx(3.0, rel=1e-12)
    d = np.diag([1.0, 2.0])
    assert latmat.frobenius_norm(d) == pytest.approx(math.sqrt(5.0))
    assert latmat.spectral_norm(d) == pytest.approx(2.0)


def test_norm_inequalities_random():
    rng = np.random.default_rng(5)
    for _ in range(10):
        a = rng.normal(size=(4, 4))
        b = rng.normal(size=(4, 4))
        sa, sb = latmat.spectral_norm(a), latmat.spectral_norm(b)
        assert latmat.spectral_norm(a @ b) <= sa * sb * (1 + 1e-10)
        assert sa <= latmat.frobenius_norm(a) * (1 + 1e-10)


def test_inverse_radius_identity():
    # spectral radius of the inverse equals 1/kappa for invertible symmetric m
    rng = np.random.default_rng(9)
    for _ in range(5):
        q = rng.normal(size=(5, 5))
        m = q @ q.T + 5 * np.eye(5)
        inv = np.linalg.inv(m)
        inv = (inv + inv.T) / 2
        assert latmat.spectral_radius(inv) == pytest.approx(1.0 / latmat.kappa(m), rel=1e-9)


def test_is_positive_definite():
    assert latmat.is_positive_definite(np.array([[1.0, 1.0], [1.0, 2.0]]))
    assert not latmat.is_positive_definite(np.ones((3, 3)))  # singular
    assert not latmat.is_positive_definite(-np.eye(3))


def test_determinants():
    rng = np.random.default_rng(13)
    m = rng.normal(size=(5, 5))
    assert latmat.determinant(m) == pytest.approx(np.linalg.det(m), rel=1e-9)
    sym = m + m.T
    assert latmat.det_symmetric(sym) == pytest.approx(np.linalg.det(sym), rel=1e-9)
    assert latmat.determinant(np.zeros((2, 2))) == 0.0


def test_backends_agree(monkeypatch):
    rng = np.random.default_rng(21)
    m = rng.normal(size=(8, 8))
    m = m + m.T
    monkeypatch.setenv("LATMAT_BACKEND", "numpy")
    a = eigen_symmetric(m).eigenvalues
    if latmat._kernels.HAS_NUMBA:
        monkeypatch.setenv("LATMAT_BACKEND", "numba")
        b = eigen_symmetric(m).eigenvalues
        assert np.abs(a - b).max() <= 1e-12 * max(1.0, np.abs(a).max())


def test_backend_env_validation(monkeypatch):
    monkeypatch.setenv("LATMAT_BACKEND", "sideways")
    with pytest.raises(ValueError, match="LATMAT_BACKEND"):
        latmat.use_numba()
