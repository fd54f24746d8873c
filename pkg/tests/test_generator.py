import numpy as np
import pytest

from qcqp_tight import (COMPLEX, REAL, SENSE_LE, GeneratorConfig,
                        check_slater, generate_instance)
from qcqp_tight.jsonio import instance_to_json


def total_matrix(inst):
    out = inst.objective.mat.copy()
    for con in inst.constraints:
        out = out + con.matrix.mat
    return out


def test_config_validation():
    with pytest.raises(ValueError):
        GeneratorConfig("quaternion", 3, 0, 1)
    with pytest.raises(ValueError):
        GeneratorConfig(REAL, 1, 0, 1)
    with pytest.raises(ValueError):
        GeneratorConfig(REAL, 3, 0, 1, constraint_count=0)


def test_reference_draw_has_slater_both_sides():
    inst = generate_instance(GeneratorConfig(REAL, 3, 42, 1), 0)
    rep = check_slater(inst)
    assert rep.primal_point is not None and rep.primal_margin > 0
    assert rep.dual_point is not None and rep.dual_margin > 0


def test_family_shape_and_senses():
    for field, m in ((REAL, 3), (COMPLEX, 4)):
        inst = generate_instance(GeneratorConfig(field, 4, 9, 1), 2)
        assert inst.m == m
        assert all(c.sense == SENSE_LE for c in inst.constraints)
        assert abs(inst.constraints[-1].bound) >= 1e-6


def test_deterministic_and_distinct():
    cfg = GeneratorConfig(COMPLEX, 2, 7, 10)
    docs = [instance_to_json(generate_instance(cfg, i)) for i in range(10)]
    again = [instance_to_json(generate_instance(cfg, i)) for i in range(10)]
    assert docs == again
    # all ten draws are distinct
    seen = {str(d) for d in docs}
    assert len(seen) == 10


def test_total_matrix_definite():
    # the matrix sum is shifted positive definite by construction
    rng = np.random.default_rng(0)
    for _ in range(12):
        field = REAL if rng.integers(2) else COMPLEX
        n = int(rng.integers(2, 8))
        cfg = GeneratorConfig(field, n, int(rng.integers(10000)), 1)
        inst = generate_instance(cfg, int(rng.integers(50)))
        w = np.linalg.eigvalsh(total_matrix(inst))
        assert w.min() >= 1.0 - 1e-9


def test_constraint_count_override():
    cfg = GeneratorConfig(REAL, 3, 5, 1, constraint_count=2)
    inst = generate_instance(cfg, 0)
    assert inst.m == 2
    w = np.linalg.eigvalsh(total_matrix(inst))
    assert w.min() >= 1.0 - 1e-9
