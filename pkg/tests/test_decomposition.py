import numpy as np
import pytest

from qcqp_tight import (COMPLEX, REAL, check_joint_definiteness,
                        decompose_two_forms, extract_four_forms,
                        extract_three_forms, hermitian, inner_product,
                        quad_form)
from util import rand_frame, rand_herm, rand_psd


def form_value_at_x(a, x):
    return quad_form(hermitian(a, COMPLEX if np.iscomplexobj(a) else REAL), x)


def test_two_forms_real_known_case():
    # X = I/2 against the pure cross form: pieces must each give value 0
    X = hermitian(np.eye(2) / 2.0, REAL)
    b = hermitian(np.array([[0.0, 1.0], [1.0, 0.0]]), REAL)
    dec = decompose_two_forms(X, b)
    assert dec.r == 2
    np.testing.assert_allclose(dec.reconstruct(), X.mat, atol=1e-10)
    for v in dec.vectors:
        assert quad_form(b, v) == pytest.approx(0.0, abs=1e-10)


def test_two_forms_wrong_count_raises():
    X = rand_psd(np.random.default_rng(0), 3, 2, REAL)
    b = hermitian(np.eye(3), REAL)
    with pytest.raises(ValueError):
        decompose_two_forms(X, [b, b])


def test_two_forms_equalizes_randomly():
    rng = np.random.default_rng(21)
    for field in (REAL, COMPLEX):
        nf = 1 if field == REAL else 2
        for _ in range(150):
            n = int(rng.integers(2, 6))
            r = int(rng.integers(1, n + 1))
            X = rand_psd(rng, n, r, field)
            forms = [hermitian(rand_herm(rng, n, field), field)
                     for _ in range(nf)]
            dec = decompose_two_forms(X, forms if nf > 1 else forms[0])
            assert dec.r == min(r, n)
            scale = max(1.0, np.linalg.norm(X.mat))
            assert np.linalg.norm(dec.reconstruct() - X.mat) <= 1e-8 * scale
            for f in forms:
                total = inner_product(f, X)
                for v in dec.vectors:
                    got = dec.r * quad_form(f, v)
                    assert abs(got - total) <= 1e-7 * max(1.0, abs(total))


def test_three_forms_matches_values():
    # complex admits three distinct forms; real duplicates the first
    rng = np.random.default_rng(22)
    for field in (REAL, COMPLEX):
        for _ in range(100):
            n = int(rng.integers(3, 6))
            r = int(rng.integers(1, n + 1))
            X = rand_psd(rng, n, r, field)
            draws = 3 if field == COMPLEX else 2
            forms = [hermitian(rand_herm(rng, n, field), field)
                     for _ in range(draws)]
            if field == REAL:
                forms = [forms[0]] + forms
            x = extract_three_forms(X, forms)
            for f in forms:
                want = inner_product(f, X)
                assert quad_form(f, x) == pytest.approx(
                    want, rel=1e-7, abs=1e-7 * max(1.0, abs(want)))


def test_three_forms_zero_triple_needs_subspace():
    # X = 0 value triple with rank-1 X: no basis to move in -> error
    X = rand_psd(np.random.default_rng(1), 4, 1, REAL)
    z = hermitian(np.zeros((4, 4)), REAL)
    with pytest.raises(ValueError):
        extract_three_forms(X, [z, z, z])


def test_four_forms_matches_values_on_subspace():
    rng = np.random.default_rng(23)
    hits = 0
    for field in (REAL, COMPLEX):
        for _ in range(120):
            n = int(rng.integers(3, 6))
            k = int(rng.integers(3, n + 1))
            V = rand_frame(rng, n, k, field)
            W = rng.standard_normal((k, k))
            if field == COMPLEX:
                W = W + 1j * rng.standard_normal((k, k))
            X = hermitian(V @ W @ W.conj().T @ V.conj().T, field)
            draws = 4 if field == COMPLEX else 3
            forms = [hermitian(rand_herm(rng, n, field), field)
                     for _ in range(draws)]
            if field == REAL:
                forms = [forms[0]] + forms
            if not check_joint_definiteness(forms, V).certified:
                continue
            hits += 1
            x = extract_four_forms(X, forms, V)
            # result stays in span(V)
            resid = x - V @ (V.conj().T @ x)
            assert np.linalg.norm(resid) <= 1e-7 * np.linalg.norm(x)
            for f in forms:
                want = inner_product(f, X)
                assert quad_form(f, x) == pytest.approx(
                    want, rel=1e-7, abs=1e-7 * max(1.0, abs(want)))
    assert hits > 50  # the hypothesis holds for most random draws


def test_joint_definiteness_counterexample():
    # forms that all annihilate e1 on span(e1, e2, e3): not definite
    n = 4
    V = np.eye(n)[:, :3]
    forms = []
    for d in ([0, 1, 0, 0], [0, -1, 1, 0], [0, 1, 1, 0], [0, 0, -1, 0]):
        forms.append(hermitian(np.diag(np.array(d, dtype=float)), REAL))
    res = check_joint_definiteness(forms, V)
    assert not res.certified
    ce = res.counterexample
    assert ce is not None
    w = np.linalg.eigvalsh(ce.mat)
    assert w.min() >= -1e-8
    assert np.trace(ce.mat).real == pytest.approx(1.0, abs=1e-6)
    for f in forms:
        assert abs(inner_product(f, ce)) <= 1e-6


def test_joint_definiteness_certificate():
    V = np.eye(3)
    forms = [hermitian(np.eye(3), REAL),
             hermitian(np.diag([1.0, -1.0, 0.0]), REAL)]
    res = check_joint_definiteness(forms, V)
    assert res.certified
    lam = res.combination
    combo = sum(c * f.mat for c, f in zip(lam, forms))
    assert np.linalg.eigvalsh(combo).min() > 0
