import numpy as np
import pytest

from qcqp_tight import (COMPLEX, REAL, FieldMismatchError, cross_form, eig,
                        hermitian, identity, inner_product, null_basis,
                        project_psd, psd_rank, quad_form, zeros)
from util import rand_herm


def test_hermitian_mirrors_lower_triangle_and_validates():
    h = hermitian([[1.0, 99.0], [2.0, 3.0]], REAL)
    np.testing.assert_allclose(h.mat, [[1.0, 2.0], [2.0, 3.0]])
    assert h.field == REAL and h.n == 2

    c = hermitian([[1.0, 99j], [-1j, 2.0]], COMPLEX)
    assert np.allclose(c.mat, c.mat.conj().T)
    np.testing.assert_allclose(c.mat[0, 1], 1j)

    with pytest.raises(FieldMismatchError):
        hermitian([[1.0, 1j], [-1j, 2.0]], REAL)


def test_identity_zeros():
    assert np.allclose(identity(3, REAL).mat, np.eye(3))
    assert zeros(2, COMPLEX).mat.dtype == complex
    assert np.all(zeros(2, COMPLEX).mat == 0)


def test_quad_and_cross_forms_match_numpy():
    rng = np.random.default_rng(3)
    for field in (REAL, COMPLEX):
        for _ in range(25):
            n = int(rng.integers(2, 6))
            a = rand_herm(rng, n, field)
            x = rng.standard_normal(n)
            y = rng.standard_normal(n)
            if field == COMPLEX:
                x = x + 1j * rng.standard_normal(n)
                y = y + 1j * rng.standard_normal(n)
            h = hermitian(a, field)
            assert quad_form(h, x) == pytest.approx(
                float(np.real(x.conj() @ a @ x)), abs=1e-12)
            assert cross_form(h, x, y) == pytest.approx(
                complex(x.conj() @ a @ y), abs=1e-12)


def test_inner_product_is_frobenius():
    rng = np.random.default_rng(4)
    a = rand_herm(rng, 4, COMPLEX)
    b = rand_herm(rng, 4, COMPLEX)
    want = float(np.real(np.trace(a.conj().T @ b)))
    assert inner_product(hermitian(a, COMPLEX),
                         hermitian(b, COMPLEX)) == pytest.approx(want)


def test_eig_descending_and_reconstructs():
    rng = np.random.default_rng(5)
    for field in (REAL, COMPLEX):
        for _ in range(50):
            n = int(rng.integers(2, 7))
            a = rand_herm(rng, n, field, 2.0)
            d = eig(hermitian(a, field))
            assert np.all(np.diff(d.values) <= 1e-12)
            recon = (d.vectors * d.values) @ d.vectors.conj().T
            np.testing.assert_allclose(recon, a, atol=1e-10)
            # orthonormal columns
            gram = d.vectors.conj().T @ d.vectors
            np.testing.assert_allclose(gram, np.eye(n), atol=1e-10)


def test_eig_phase_deterministic():
    rng = np.random.default_rng(6)
    a = rand_herm(rng, 5, COMPLEX)
    d1 = eig(hermitian(a, COMPLEX))
    d2 = eig(hermitian(a.copy(), COMPLEX))
    assert np.array_equal(d1.vectors, d2.vectors)


def test_psd_rank_and_null_basis():
    diag = np.diag([3.0, 1.0, 1e-8, 0.0])
    h = hermitian(diag, REAL)
    assert psd_rank(h, 1e-4) == 2
    assert psd_rank(h, 1e-10) == 3
    nb = null_basis(h, 1e-4)
    assert nb.shape == (4, 2)
    np.testing.assert_allclose(diag @ nb, 0.0, atol=1e-7)
    np.testing.assert_allclose(nb.conj().T @ nb, np.eye(2), atol=1e-12)


def test_null_basis_spans_kernel_randomly():
    rng = np.random.default_rng(7)
    for _ in range(30):
        n = int(rng.integers(3, 7))
        r = int(rng.integers(1, n))
        g = rng.standard_normal((n, r)) + 1j * rng.standard_normal((n, r))
        a = hermitian(g @ g.conj().T, COMPLEX)
        nb = null_basis(a, 1e-7)
        assert nb.shape[1] == n - r
        assert np.linalg.norm(a.mat @ nb) < 1e-6


def test_project_psd():
    rng = np.random.default_rng(8)
    for _ in range(20):
        a = rand_herm(rng, 5, REAL, 3.0)
        p = project_psd(a)
        w = np.linalg.eigvalsh(p)
        assert w.min() >= -1e-12
        # already-psd input passes through unchanged
        np.testing.assert_allclose(project_psd(p), p, atol=1e-12)
