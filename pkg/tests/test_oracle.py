import numpy as np
import pytest

from qcqp_tight import (OUTCOME_RECOVERED, REAL, SENSE_LE, Constraint,
                        GeneratorConfig, OracleError, QcqpInstance,
                        brute_force_value, generate_instance, identity,
                        solve_and_diagnose)
from qcqp_tight.fixtures import complex_gap_instance, real_gap_instance


def test_infeasible_fixture():
    res = brute_force_value(real_gap_instance(), 120)
    assert not res.feasible
    assert res.value is None and res.argmin is None


def test_complex_fixture_value():
    res = brute_force_value(complex_gap_instance(), 200)
    assert res.feasible
    assert res.value == pytest.approx(-9.6974, abs=5e-3)
    # the reported argmin actually attains the reported value feasibly
    inst = complex_gap_instance()
    x = res.argmin
    for con in inst.constraints:
        assert float(np.real(x.conj() @ con.matrix.mat @ x)) \
            <= con.bound + 1e-9
    got = float(np.real(x.conj() @ inst.objective.mat @ x))
    assert got == pytest.approx(res.value, abs=1e-9)


def test_psd_objective_minimum_zero():
    inst = QcqpInstance(REAL, identity(2, REAL),
                        (Constraint(identity(2, REAL), 100.0, SENSE_LE),))
    res = brute_force_value(inst, 80)
    assert res.feasible
    assert res.value == pytest.approx(0.0, abs=1e-6)


def test_dimension_guard():
    inst = QcqpInstance(REAL, identity(3, REAL),
                        (Constraint(identity(3, REAL), 1.0, SENSE_LE),))
    with pytest.raises(OracleError):
        brute_force_value(inst, 50)


def test_recovered_value_is_grid_optimal():
    # invariant: no grid point beats a recovered optimum by > 1e-3
    for field in ("real", "complex"):
        cfg = GeneratorConfig(field, 2, 2024, 1)
        for idx in range(5):
            inst = generate_instance(cfg, idx)
            pair, verdict = solve_and_diagnose(inst)
            if verdict.outcome != OUTCOME_RECOVERED:
                continue
            res = brute_force_value(inst, 150)
            assert res.feasible
            assert res.value >= verdict.value - 1e-3
