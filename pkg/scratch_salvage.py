"""Probe: how many solver failures pass the outer gate if we (a) salvage
the stalled best iterate, (b) row-equilibrate the formulation."""
import numpy as np
import numpy.linalg as la

from qcqp_tight import REAL, COMPLEX
from qcqp_tight.ipm import solve_cone_sdp, SdpSolverError, SdpConvergenceError
from qcqp_tight.sdp import _solver_rows, _pair_from_result, solve_sdp
from scratch_recovery_smoke import gen

EPS1 = 1e-8


def attempt(inst, equilibrate):
    C, rows, lift = _solver_rows(inst)
    if equilibrate:
        cn = max(la.norm(C, "fro"), 1e-12)
        Cs = C / cn
        scaled, factors = [], []
        for mat, b, sense in rows:
            rn = max(la.norm(mat, "fro"), 1e-12)
            scaled.append((mat / rn, b / rn, sense))
            factors.append(cn / rn)

        def lift2(nu):
            return lift(np.asarray(nu) * np.array(factors))
        try:
            res = solve_cone_sdp(Cs, scaled, tol=EPS1 / 4)
        except SdpConvergenceError as e:
            if e.best is None:
                return None
            res = e.best
        except SdpSolverError:
            return None
        res.X, res.Z = res.X, res.Z * cn
        pair = _pair_from_result(inst, res, lift2)
    else:
        try:
            res = solve_cone_sdp(C, rows, tol=EPS1 / 4)
        except SdpConvergenceError as e:
            if e.best is None:
                return None
            res = e.best
        except SdpSolverError:
            return None
        pair = _pair_from_result(inst, res, lift)
    scale = max(1.0, la.norm(inst.objective.mat, "fro"))
    gap = abs(pair.primal_value - pair.dual_value)
    ok = (pair.kkt_residual <= EPS1 * scale
          and gap <= EPS1 * max(1.0, abs(pair.primal_value)))
    return ok, pair.kkt_residual / (EPS1 * scale), gap / (
        EPS1 * max(1.0, abs(pair.primal_value)))


for field, seed in ((REAL, 7), (COMPLEX, 8)):
    rng = np.random.default_rng(seed)
    plain_pass = salv_pass = eq_pass = either = total_fail = 0
    for trial in range(150):
        n = int(rng.integers(2, 7))
        inst = gen(rng, n, field)
        try:
            solve_sdp(inst)
            continue
        except Exception:
            total_fail += 1
        a = attempt(inst, equilibrate=False)
        b = attempt(inst, equilibrate=True)
        if a and a[0]:
            salv_pass += 1
        if b and b[0]:
            eq_pass += 1
        if (a and a[0]) or (b and b[0]):
            either += 1
        else:
            ar = f"{a[1]:.1f}/{a[2]:.1f}" if a else "none"
            br = f"{b[1]:.1f}/{b[2]:.1f}" if b else "none"
            print(f"  {field} trial {trial} n={n}: salvage {ar} equil {br}"
                  f"  (kkt/gap as multiples of gate)")
    print(f"{field}: {total_fail} failures -> salvage rescues {salv_pass}, "
          f"equilibrated rescues {eq_pass}, either {either}")
