"""Dissect the failing trial-118 complex case and the solver failures."""
import numpy as np

from qcqp_tight import (
    COMPLEX, REAL, purify, solve_sdp, diagnose_gap, RecoveryError,
    recover_zero_multiplier, SENSE_LE,
)
from qcqp_tight.ipm import SdpSolverError, SdpConvergenceError, SdpInfeasibleError
from scratch_recovery_smoke import gen

for field, seed, bad_trials in ((REAL, 7, []), (COMPLEX, 8, [118])):
    rng = np.random.default_rng(seed)
    for trial in range(150):
        n = int(rng.integers(2, 7))
        inst = gen(rng, n, field)
        if trial in bad_trials:
            pair = purify(solve_sdp(inst))
            d = diagnose_gap(inst, pair)
            print(f"[{field} {trial}] n={n} kkt={pair.kkt_residual:.2e} "
                  f"pv={pair.primal_value:.4f}")
            print(f"  mu={pair.mu} rx={d.rank_primal} rz={d.rank_dual}")
            slack = [i for i, c in enumerate(inst.constraints)
                     if c.sense == SENSE_LE and pair.mu[i] <= 1e-4]
            print(f"  slack idx={slack} delta={inst.constraint_values(pair.X)}")
            if slack:
                i0 = min(slack, key=lambda i: pair.mu[i])
                try:
                    x = recover_zero_multiplier(inst, pair, i0)
                    print(f"  zero-mult viol={inst.feasibility_violation(x):.2e}")
                    vals = inst.point_values(x)
                    cs = [c.bound for c in inst.constraints]
                    print(f"  point vals - c = "
                          f"{[f'{vals[i]-cs[i]:+.2e}' for i in range(inst.m)]}")
                    print(f"  mu at slack={pair.mu[i0]:.3e}")
                except RecoveryError as e:
                    print(f"  zero-mult raised: {e}")
        else:
            continue

# solver failure census
for field, seed in ((REAL, 7), (COMPLEX, 8)):
    rng = np.random.default_rng(seed)
    kinds = {}
    worst = []
    for trial in range(150):
        n = int(rng.integers(2, 7))
        inst = gen(rng, n, field)
        try:
            solve_sdp(inst)
        except SdpConvergenceError as e:
            kinds["converge"] = kinds.get("converge", 0) + 1
            worst.append((trial, n, str(e)[:100]))
        except SdpInfeasibleError:
            kinds["infeasible"] = kinds.get("infeasible", 0) + 1
        except SdpSolverError as e:
            kinds["other"] = kinds.get("other", 0) + 1
            worst.append((trial, n, str(e)[:100]))
        except Exception as e:
            kinds[type(e).__name__] = kinds.get(type(e).__name__, 0) + 1
            worst.append((trial, n, repr(e)[:100]))
    print(f"{field} solver failures: {kinds}")
    for w in worst[:6]:
        print("   ", w)
