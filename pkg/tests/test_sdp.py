import numpy as np
import pytest

from qcqp_tight import (COMPLEX, REAL, SENSE_EQ, SENSE_LE, Constraint,
                        QcqpInstance, check_slater, hermitian, identity,
                        purify, solve_sdp)
from qcqp_tight.fixtures import complex_gap_instance, real_gap_instance
from qcqp_tight.sdp import embed_hermitian, DEFAULT_EPS2
from util import rand_herm


def ball_instance(field, a0, extra=(), bound=1.0):
    n = a0.shape[0] if hasattr(a0, "shape") else len(a0)
    cons = tuple(extra) + (Constraint(identity(n, field), bound, SENSE_LE),)
    return QcqpInstance(field, hermitian(a0, field), cons)


def test_instance_validation():
    a0 = np.eye(2)
    with pytest.raises(ValueError):
        # last bound must be nonzero
        QcqpInstance(REAL, hermitian(a0, REAL),
                     (Constraint(identity(2, REAL), 0.0, SENSE_LE),))
    inst = ball_instance(REAL, a0)
    assert inst.n == 2 and inst.m == 1 and inst.mf == 1
    assert ball_instance(COMPLEX, a0.astype(complex)).mf == 2


def test_embed_hermitian_preserves_forms():
    rng = np.random.default_rng(11)
    for _ in range(30):
        n = int(rng.integers(2, 6))
        a = rand_herm(rng, n, COMPLEX)
        t = embed_hermitian(a)
        assert np.allclose(t, t.T)
        x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        xe = np.concatenate([x.real, x.imag])
        got = xe @ t @ xe
        want = float(np.real(x.conj() @ a @ x))
        assert got == pytest.approx(want, rel=1e-12, abs=1e-12)
        # spectrum doubles in multiplicity
        we = np.linalg.eigvalsh(t)
        w = np.linalg.eigvalsh(a)
        np.testing.assert_allclose(we, np.sort(np.repeat(w, 2)), atol=1e-10)


def test_solve_trivial_ball_minimum():
    # min x'diag(1,-1)x over ||x||^2 <= 1 has relaxation value -1
    inst = ball_instance(REAL, np.diag([1.0, -1.0]))
    pair = solve_sdp(inst)
    assert pair.primal_value == pytest.approx(-1.0, abs=1e-6)
    assert pair.dual_value == pytest.approx(-1.0, abs=1e-6)
    assert pair.kkt_residual < 1e-6
    np.testing.assert_allclose(pair.X, np.diag([0.0, 1.0]), atol=1e-5)


def test_solve_interior_optimum_zero():
    # psd objective: optimum X = 0 strictly inside the ball row
    inst = ball_instance(REAL, np.array([[2.0, 0.5], [0.5, 1.0]]))
    pair = purify(solve_sdp(inst), DEFAULT_EPS2)
    assert pair.primal_value == pytest.approx(0.0, abs=1e-6)
    assert pair.mu[0] < 1e-9  # slack multiplier vanishes


def test_real_fixture_solution():
    pair = purify(solve_sdp(real_gap_instance()), DEFAULT_EPS2)
    assert pair.primal_value == pytest.approx(1.0, abs=1e-6)
    np.testing.assert_allclose(pair.mu, [0.5, 0.0, 0.5], atol=1e-5)
    np.testing.assert_allclose(pair.Z, 0.0, atol=1e-6)


def test_complex_fixture_solution():
    pair = purify(solve_sdp(complex_gap_instance()), DEFAULT_EPS2)
    assert pair.primal_value == pytest.approx(-10.0083, abs=1e-3)
    np.testing.assert_allclose(pair.mu, [0.1821, 0.2708, 0.6705, 0.2464],
                               atol=1e-3)
    # dual feasibility of the returned pair
    z = np.linalg.eigvalsh(pair.Z)
    assert z.min() >= -1e-8


def test_purify_enforces_complementarity():
    inst = ball_instance(REAL, np.diag([1.0, -1.0]))
    pair = purify(solve_sdp(inst), DEFAULT_EPS2)
    vals = inst.constraint_values(pair.X)
    for mu_i, v, con in zip(pair.mu, vals, inst.constraints):
        assert mu_i >= 0.0
        if con.sense == SENSE_LE and mu_i > 0:
            assert abs(v - con.bound) < 1e-6
    w = np.linalg.eigvalsh(pair.X)
    assert w.min() >= 0.0


def test_equality_rows_allow_negative_multiplier_sign_handling():
    # equality row active with value 0; solver must keep it exactly
    a0 = np.diag([1.0, 2.0])
    eqm = np.array([[1.0, 0.0], [0.0, -1.0]])
    inst = QcqpInstance(REAL, hermitian(a0, REAL),
                        (Constraint(hermitian(eqm, REAL), 0.0, SENSE_EQ),
                         Constraint(identity(2, REAL), 1.0, SENSE_LE)))
    pair = solve_sdp(inst)
    vals = inst.constraint_values(pair.X)
    assert abs(vals[0]) < 1e-7
    assert pair.primal_value == pytest.approx(0.0, abs=1e-6)


def test_check_slater_ball():
    inst = ball_instance(REAL, np.diag([1.0, -1.0]))
    rep = check_slater(inst)
    assert rep.primal_point is not None and rep.primal_margin > 0
    assert rep.dual_point is not None and rep.dual_margin > 0
