"""Oracle validation: infeasible fixture, gap fixture value, trivial min."""
import time
import numpy as np

from qcqp_tight import REAL, COMPLEX, Constraint, QcqpInstance, SENSE_EQ, \
    SENSE_LE, hermitian
from qcqp_tight.oracle import brute_force_value, OracleError
from scratch_tightness_check import inst_r, inst_c

t0 = time.perf_counter()
res = brute_force_value(inst_r, 200)
print(f"[real fixture] {time.perf_counter()-t0:.2f}s feasible={res.feasible}"
      f" (want False)")
assert not res.feasible

t0 = time.perf_counter()
res = brute_force_value(inst_c, 200)
print(f"[complex fixture] {time.perf_counter()-t0:.2f}s "
      f"value={res.value:.5f} (want -9.6974)  argmin={res.argmin}")
assert res.feasible and abs(res.value - (-9.6974)) <= 5e-3
viol = inst_c.feasibility_violation(res.argmin)
print(f"  argmin violation={viol:.2e}")
assert viol <= 1e-8

triv = QcqpInstance(REAL, hermitian(np.eye(2), REAL),
                    (Constraint(hermitian(np.eye(2), REAL), 50.0, SENSE_LE),))
res = brute_force_value(triv, 64)
print(f"[trivial] value={res.value:.2e} (want 0)")
assert abs(res.value) <= 1e-12

try:
    big = QcqpInstance(REAL, hermitian(np.eye(3), REAL),
                       (Constraint(hermitian(np.eye(3), REAL), 1.0, SENSE_LE),))
    brute_force_value(big, 64)
    raise AssertionError("should have raised")
except OracleError as e:
    print(f"[n=3] raises OracleError: {e}")
print("oracle checks PASS")
