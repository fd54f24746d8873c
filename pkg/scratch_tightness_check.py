"""Validate tightness.py against the two worked gap examples."""
import time

import numpy as np

from qcqp_tight import (
    COMPLEX, REAL, Constraint, QcqpInstance, SENSE_EQ, SENSE_LE,
    hermitian, solve_and_diagnose,
)

# --- real gap example -------------------------------------------------------
a0 = hermitian([[0, 0], [0, 1]], REAL)
a1 = hermitian([[1, 0], [0, -1]], REAL)
a2 = hermitian([[0, 1], [1, 0]], REAL)
a3 = hermitian([[-1, 0], [0, -1]], REAL)
inst_r = QcqpInstance(REAL, a0, (
    Constraint(a1, 0.0, SENSE_EQ),
    Constraint(a2, 0.0, SENSE_EQ),
    Constraint(a3, -2.0, SENSE_LE),
))
t0 = time.perf_counter()
pair, verdict = solve_and_diagnose(inst_r)
el = time.perf_counter() - t0
d = verdict.diagnosis
print(f"[real] {el:.3f}s  value={pair.primal_value:.8f} (want 1)")
print(f"  purified Z max|.|={np.abs(pair.Z.mat).max():.2e} (want 0)")
print(f"  mu={np.array2string(pair.mu, precision=6)} (want 0.5, 0, 0.5)")
print(f"  holds={d.holds} outcome={verdict.outcome} (want True/gap)")
print(f"  clauses: mu_ok={d.multipliers_ok} rz={d.rank_dual} rx={d.rank_primal}"
      f" first={d.first_cross_ok} split={d.split_ok}")
print(f"  witnesses:\n    x1={d.witnesses[0]}\n    x2={d.witnesses[1]}")
print(f"  first_cross={d.first_cross:.6f} split_values="
      f"({d.split_values[0]:.6f}, {d.split_values[1]:.6f})")
assert abs(pair.primal_value - 1.0) <= 1e-6
assert np.abs(pair.Z.mat).max() == 0.0
assert np.allclose(pair.mu, [0.5, 0.0, 0.5], atol=1e-5)
assert d.holds and verdict.outcome == "gap_or_infeasible"

# --- complex gap example ----------------------------------------------------
b0 = hermitian([[-7, -4j], [4j, -6]], COMPLEX)
b1 = hermitian([[9, 8 - 10j], [8 + 10j, 18]], COMPLEX)
b2 = hermitian([[6, 7 + 3j], [7 - 3j, 0]], COMPLEX)
b3 = hermitian([[3, -5 + 6j], [-5 - 6j, 7]], COMPLEX)
b4 = hermitian([[7, 4j], [-4j, -8]], COMPLEX)
inst_c = QcqpInstance(COMPLEX, b0, (
    Constraint(b1, 6.0, SENSE_LE),
    Constraint(b2, 7.0, SENSE_LE),
    Constraint(b3, 9.0, SENSE_LE),
    Constraint(b4, 4.0, SENSE_LE),
))
t0 = time.perf_counter()
pair, verdict = solve_and_diagnose(inst_c)
el = time.perf_counter() - t0
d = verdict.diagnosis
print(f"\n[complex] {el:.3f}s  value={pair.primal_value:.6f} (want -10.0083)")
print(f"  purified Z max|.|={np.abs(pair.Z.mat).max():.2e} (want 0)")
print(f"  mu={np.array2string(pair.mu, precision=5)}"
      f" (want 0.1821 0.2708 0.6705 0.2464)")
print(f"  holds={d.holds} outcome={verdict.outcome} (want True/gap)")
print(f"  |first_cross|={abs(d.first_cross):.5f} (want 1.7032)")
print(f"  |second_cross|={abs(d.second_cross):.5f} (want 3.5430)")
prod = d.split_values[0] * d.split_values[1]
print(f"  split product={prod:.5f} (want -17.7092)")
assert abs(pair.primal_value - (-10.0083)) <= 1e-3
assert np.allclose(pair.mu, [0.1821, 0.2708, 0.6705, 0.2464], atol=1e-3)
assert d.holds and verdict.outcome == "gap_or_infeasible"
assert abs(abs(d.first_cross) - 1.7032) <= 1e-2
assert abs(abs(d.second_cross) - 3.5430) <= 1e-2
assert abs(prod - (-17.7092)) <= 0.1

# witness reconstruction invariant
x1, x2 = d.witnesses
rec = np.outer(x1, x1.conj()) + np.outer(x2, x2.conj())
err = np.abs(rec - pair.X.mat).max() / max(1.0, np.abs(pair.X.mat).max())
print(f"  witness reconstruction err={err:.2e} (want <=1e-7)")
assert err <= 1e-7
print("\nboth gap examples PASS")
