"""Why doesn't the polish fix trial 118?"""
import numpy as np
import numpy.linalg as la

from qcqp_tight import COMPLEX, purify, solve_sdp
from qcqp_tight.linalg import eig
from scratch_recovery_smoke import gen

rng = np.random.default_rng(8)
for trial in range(150):
    n = int(rng.integers(2, 7))
    inst = gen(rng, n, COMPLEX)
    if trial != 118:
        continue
    raw = solve_sdp(inst)
    pair = purify(raw)
    ev_raw = eig(raw.X).values
    print(f"raw X eigenvalues: {ev_raw}")
    print(f"kkt={raw.kkt_residual:.2e} mu={raw.mu}")
    cs = np.array([c.bound for c in inst.constraints])
    delta = np.array(inst.constraint_values(pair.X))
    print(f"delta - c = {delta - cs}")
    # GN with active targets c_i, objective row weighted soft
    mats = [inst.objective.mat] + [c.matrix.mat for c in inst.constraints]
    target = np.concatenate([[raw.primal_value], cs])
    d = eig(pair.X)
    y = np.sqrt(d.values[0]) * d.vectors[:, 0]
    for it in range(8):
        vals = np.array([float(np.real(np.vdot(y, a @ y))) for a in mats])
        r = vals - target
        print(f"  it{it}: obj_err={r[0]:+.2e} cons_err="
              + " ".join(f"{v:+.2e}" for v in r[1:]))
        grads = np.stack([2.0 * (a @ y) for a in mats])
        jac = np.concatenate([grads.real, grads.imag], axis=1)
        step, *_ = la.lstsq(jac, r, rcond=None)
        y = y - (step[:n] + 1j * step[n:])
    break
