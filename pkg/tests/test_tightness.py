import numpy as np
import pytest

from qcqp_tight import (COMPLEX, OUTCOME_GAP, OUTCOME_RECOVERED, REAL,
                        SENSE_EQ, SENSE_LE, Constraint, GeneratorConfig,
                        QcqpInstance, diagnose_gap, generate_instance,
                        hermitian, identity, purify, quad_form,
                        recover_optimum, recover_zero_multiplier, solve_exact,
                        solve_and_diagnose, solve_sdp)
from qcqp_tight.fixtures import complex_gap_instance, real_gap_instance
from qcqp_tight.sdp import DEFAULT_EPS2

FEAS_TOL = 1e-6
VALUE_TOL = 1e-5


def check_recovered(inst, pair, verdict):
    """The two soundness gates every recovered point must clear."""
    assert verdict.outcome == OUTCOME_RECOVERED
    x = verdict.x
    for con in inst.constraints:
        v = quad_form(con.matrix, x)
        if con.sense == SENSE_LE:
            assert v <= con.bound + FEAS_TOL
        else:
            assert abs(v - con.bound) <= FEAS_TOL
    obj = quad_form(inst.objective, x)
    assert abs(obj - pair.primal_value) <= \
        VALUE_TOL * max(1.0, abs(pair.primal_value))


def test_real_fixture_gap_holds():
    inst = real_gap_instance()
    pair, verdict = solve_and_diagnose(inst)
    d = verdict.diagnosis
    assert verdict.outcome == OUTCOME_GAP and verdict.x is None
    assert d.holds
    assert d.rank_primal == 2 and d.rank_dual == 0
    assert d.multipliers_ok  # the single LE row has multiplier 1/2
    assert d.second_cross_ok is None  # real instances skip the clause
    # the two split pieces take strictly opposite last-form values
    v1, v2 = d.split_values
    assert v1 * v2 < -d.eps2 ** 2


def test_complex_fixture_clause_values():
    inst = complex_gap_instance()
    pair, verdict = solve_and_diagnose(inst)
    d = verdict.diagnosis
    assert verdict.outcome == OUTCOME_GAP
    assert d.holds and d.second_cross_ok is True
    assert abs(d.first_cross) == pytest.approx(1.7032, abs=1e-2)
    assert abs(d.second_cross) == pytest.approx(3.5430, abs=1e-2)
    assert d.split_values[0] * d.split_values[1] == \
        pytest.approx(-17.7092, abs=0.1)


def test_slack_multiplier_branch():
    # objective psd: optimum X = 0, every multiplier slack -> branch 1
    a0 = np.array([[2.0, 0.3], [0.3, 1.0]])
    a1 = np.array([[1.0, 0.0], [0.0, -1.0]])
    a2 = np.array([[0.0, 1.0], [1.0, 0.0]])
    inst = QcqpInstance(REAL, hermitian(a0, REAL), (
        Constraint(hermitian(a1, REAL), 1.0, SENSE_LE),
        Constraint(hermitian(a2, REAL), 1.0, SENSE_LE),
        Constraint(identity(2, REAL), 1.0, SENSE_LE)))
    pair, verdict = solve_and_diagnose(inst)
    assert not verdict.diagnosis.multipliers_ok
    check_recovered(inst, pair, verdict)
    assert verdict.value == pytest.approx(0.0, abs=1e-6)


def test_rank_one_branch():
    # unique negative eigendirection: X* is rank one, recovery trivial
    a0 = np.diag([1.0, -1.0])
    inst = QcqpInstance(REAL, hermitian(a0, REAL), (
        Constraint(hermitian(np.diag([1.0, 0.0]), REAL), 1.0, SENSE_LE),
        Constraint(hermitian(np.array([[0.0, 1.0], [1.0, 0.0]]), REAL),
                   1.0, SENSE_LE),
        Constraint(identity(2, REAL), 1.0, SENSE_LE)))
    pair, verdict = solve_and_diagnose(inst)
    assert verdict.diagnosis.rank_primal == 1
    check_recovered(inst, pair, verdict)
    assert verdict.value == pytest.approx(-1.0, abs=1e-5)
    # the recovered direction is e2 up to sign
    assert abs(verdict.x[1]) == pytest.approx(1.0, abs=1e-4)


def test_recover_zero_multiplier_direct():
    inst = real_gap_instance()
    pair = purify(solve_sdp(inst), DEFAULT_EPS2)
    # the middle equality row is inapplicable; only LE rows qualify
    with pytest.raises(ValueError):
        recover_zero_multiplier(inst, pair, 1)


def test_diagnose_requires_family_size():
    inst = QcqpInstance(REAL, identity(2, REAL),
                        (Constraint(identity(2, REAL), 1.0, SENSE_LE),))
    pair = purify(solve_sdp(inst), DEFAULT_EPS2)
    with pytest.raises(ValueError):
        diagnose_gap(inst, pair)


def test_solve_exact_reduced_family():
    # one constraint fewer than the exactness family: always recovered
    for field, m in ((REAL, 2), (COMPLEX, 3)):
        cfg = GeneratorConfig(field, 4, 314, 1, constraint_count=m)
        for idx in range(6):
            inst = generate_instance(cfg, idx)
            verdict = solve_exact(inst)
            assert verdict.outcome == OUTCOME_RECOVERED
            x = verdict.x
            for con in inst.constraints:
                v = quad_form(con.matrix, x)
                assert v <= con.bound + FEAS_TOL
            assert abs(quad_form(inst.objective, x) - verdict.value) <= 1e-8


def test_solve_exact_rejects_full_family():
    cfg = GeneratorConfig(REAL, 3, 11, 1)
    inst = generate_instance(cfg, 0)
    with pytest.raises(ValueError):
        solve_exact(inst)


def test_random_instances_sound_real_and_complex():
    # volume check across the generator family at several dimensions
    for field in (REAL, COMPLEX):
        for n in (2, 3, 5):
            cfg = GeneratorConfig(field, n, 616, 1)
            for idx in range(8):
                inst = generate_instance(cfg, idx)
                pair, verdict = solve_and_diagnose(inst)
                if verdict.outcome == OUTCOME_RECOVERED:
                    check_recovered(inst, pair, verdict)
                else:
                    assert verdict.diagnosis.holds
