"""Random-instance smoke test of recover_optimum across branches."""
import sys
import numpy as np

from qcqp_tight import (
    COMPLEX, REAL, Constraint, QcqpInstance, SENSE_LE, hermitian,
    RecoveryError, solve_and_diagnose,
)
from qcqp_tight.ipm import SdpSolverError


def rand_herm(rng, n, field, rad):
    if field == REAL:
        w = rng.uniform(-rad, rad, (n, n))
    else:
        w = rng.uniform(-rad, rad, (n, n)) + 1j * rng.uniform(-rad, rad, (n, n))
    return (w + w.conj().T) / 2


def gen(rng, n, field):
    m = 3 if field == REAL else 4
    mats = [rand_herm(rng, n, field, 10.0) for _ in range(m)]  # A0..A_{m-2}
    w = rand_herm(rng, n, field, 40.0)
    lo = np.linalg.eigvalsh(w).min()
    z = w + (1.0 - lo) * np.eye(n)
    a_last = z - sum(mats)
    forms = mats[1:] + [a_last]
    for _ in range(100):
        if field == REAL:
            xt = rng.uniform(-1, 1, n)
        else:
            xt = rng.uniform(-1, 1, n) + 1j * rng.uniform(-1, 1, n)
        cs = [float(np.real(xt.conj() @ a @ xt)) + rng.uniform(0.5, 1.5)
              for a in forms]
        if abs(cs[-1]) >= 1e-6:
            break
    cons = tuple(Constraint(hermitian(a, field), c, SENSE_LE)
                 for a, c in zip(forms, cs))
    return QcqpInstance(field, hermitian(mats[0], field), cons)


def branch_of(inst, pair, d):
    if d.holds:
        return "gap"
    if any(c.sense == SENSE_LE and pair.mu[i] <= d.eps2
           for i, c in enumerate(inst.constraints)):
        return "b1-slack"
    if d.rank_primal < 2:
        return "b2-rank1"
    if d.rank_dual <= inst.n - 3 or d.rank_primal >= 3:
        return "b3-null"
    if not d.split_ok or not d.first_cross_ok:
        return "b4/5-split"
    return "b6-range"


for field in (REAL, COMPLEX):
    rng = np.random.default_rng(7 if field == REAL else 8)
    tally, fails = {}, []
    for trial in range(150):
        n = int(rng.integers(2, 7))
        inst = gen(rng, n, field)
        try:
            pair, verdict = solve_and_diagnose(inst)
        except SdpSolverError as e:
            tally["solver-fail"] = tally.get("solver-fail", 0) + 1
            continue
        except RecoveryError as e:
            fails.append((field, trial, n, "recovery", str(e)[:110]))
            tally["recovery-fail"] = tally.get("recovery-fail", 0) + 1
            continue
        br = branch_of(inst, pair, verdict.diagnosis)
        tally[br] = tally.get(br, 0) + 1
        if verdict.recovered:
            viol = inst.feasibility_violation(verdict.x)
            verr = abs(verdict.value - pair.primal_value) / max(
                1.0, abs(pair.primal_value))
            if viol > 1e-6 or verr > 1e-5:
                fails.append((field, trial, n, "verify", viol, verr))
    print(f"{field}: {dict(sorted(tally.items()))}")
    for f in fails[:8]:
        print("  FAIL", f)
print("done")
