"""Brute-force reference solver for two-dimensional instances.

Used by tests and the CLI as an independent check on recovered optima and
gap verdicts.  The search space is angular only: along any direction u
every form value scales with r^2, so the feasible radii form an interval
computed exactly and the objective -- linear in r^2 -- is optimized at an
endpoint.  A grid over the direction parameters (one angle for the real
field, polar angle plus relative phase for the complex field after the
global-phase quotient) plus coordinate-descent refinement then covers the
whole space.  Higher dimensions are out of scope: the cost is exponential
and n = 2 already exercises every contract this oracle backs.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.linalg as la
from scipy.optimize import minimize

from .ipm import SENSE_LE
from .linalg import REAL
from .sdp import QcqpInstance, check_slater

#: Absolute slack allowed when deciding that a grid point is feasible.
FEASIBLE_MARGIN = 1e-9

_BIG = 1e18


class OracleError(RuntimeError):
    """The brute-force oracle cannot handle the request."""


@dataclass(frozen=True)
class BruteForceResult:
    """Outcome of the grid search.

    ``feasible`` False means no direction admitted any radius within the
    feasibility margin; ``value``/``argmin`` are None in that case.
    """

    feasible: bool
    value: float | None = None
    argmin: np.ndarray | None = None


def _directions(inst: QcqpInstance, resolution: int):
    """Unit directions covering the angular search space at grid scale,
    together with the per-direction parameter tuples."""
    if inst.field == REAL:
        thetas = np.linspace(0.0, np.pi, resolution, endpoint=False)
        dirs = np.stack([np.cos(thetas), np.sin(thetas)], axis=1)
        return dirs, [(t,) for t in thetas]
    thetas = np.linspace(0.0, np.pi / 2, resolution)
    phis = np.linspace(0.0, 2 * np.pi, resolution, endpoint=False)
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    tt, pp = tt.ravel(), pp.ravel()
    dirs = np.stack([np.cos(tt), np.sin(tt) * np.exp(1j * pp)], axis=1)
    return dirs, list(zip(tt, pp))


def _unit(inst: QcqpInstance, params) -> np.ndarray:
    if inst.field == REAL:
        (t,) = params
        return np.array([np.cos(t), np.sin(t)])
    t, p = params
    return np.array([np.cos(t), np.sin(t) * np.exp(1j * p)])


def _radial_best(inst: QcqpInstance, u: np.ndarray, cap_sq: float):
    """Best objective along the ray {r u : r >= 0}.

    Intersects the per-constraint feasible r^2 intervals (each one is an
    interval because every form is linear in r^2) and evaluates the
    linear objective at the cheaper endpoint.  Returns (value, r^2) or
    None when the ray is infeasible.  ``cap_sq`` bounds the interval from
    above; rays feasible out to infinity keep their lower endpoint, which
    is the optimal one whenever the objective is nonnegative along them.
    """
    lo, hi = 0.0, cap_sq
    a0 = float(np.real(np.vdot(u, inst.objective.mat @ u)))
    for con in inst.constraints:
        a = float(np.real(np.vdot(u, con.matrix.mat @ u)))
        c = con.bound
        if con.sense == SENSE_LE:
            if a > 0:
                hi = min(hi, (c + FEASIBLE_MARGIN) / a)
            elif a < 0:
                lo = max(lo, (c + FEASIBLE_MARGIN) / a)
            elif c < -FEASIBLE_MARGIN:
                return None
        else:
            if a == 0.0:
                if abs(c) > FEASIBLE_MARGIN:
                    return None
                continue
            e1 = (c - FEASIBLE_MARGIN) / a
            e2 = (c + FEASIBLE_MARGIN) / a
            lo = max(lo, min(e1, e2))
            hi = min(hi, max(e1, e2))
        if lo > hi:
            return None
    r_sq = lo if a0 >= 0 else hi
    if not np.isfinite(r_sq):
        return None
    return a0 * r_sq, r_sq


def brute_force_value(inst: QcqpInstance,
                      resolution: int = 200) -> BruteForceResult:
    """Grid-search the global optimum of a two-dimensional instance.

    The radius never needs its own grid axis (see module docstring); its
    upper bound comes from the dual interior point's level-set argument:
    a feasible x no better than the incumbent x0 satisfies
    ``lambda_min(Z~) r^2 <= x0^H A0 x0 + sum mu~_i c_i``.  Reports
    infeasible when no direction admits a radius within 1e-9.
    """
    if inst.n != 2:
        raise OracleError(
            f"brute force search supports n = 2 only, got n = {inst.n}")
    if resolution < 8:
        raise ValueError("resolution must be at least 8")

    dirs, params = _directions(inst, resolution)
    best = None  # (value, r_sq, params)
    for u, prm in zip(dirs, params):
        hit = _radial_best(inst, u, _BIG)
        if hit is not None and (best is None or hit[0] < best[0]):
            best = (hit[0], hit[1], prm)
    if best is None:
        return BruteForceResult(False)

    # level-set radius cap from the dual interior point, seeded by the
    # incumbent; without a dual point the sweep value stands unrefined
    report = check_slater(inst)
    cap_sq = _BIG
    if report.dual_point is not None:
        mu, zt = report.dual_point
        lam = float(la.eigvalsh(zt.mat)[0])
        if lam > 0:
            cs = np.array([c.bound for c in inst.constraints])
            cap_sq = max((best[0] + float(mu @ cs)) / lam, 1.0)

    # pattern refinement over the angle parameters; diagonal moves matter
    # because optima often sit on corners where several constraints tie
    # and axis-only probes stall on the ridge
    value, r_sq, prm = best
    prm = np.array(prm, dtype=float)
    k = prm.size
    moves = []
    for idx in np.ndindex(*(3,) * k):
        s = np.array(idx) - 1
        if np.any(s):
            moves.append(s.astype(float))
    step = np.pi / resolution
    for _ in range(200):
        cand = None
        for mv in moves:
            trial = prm + step * mv
            hit = _radial_best(inst, _unit(inst, tuple(trial)), cap_sq)
            if hit is not None and (cand is None or hit[0] < cand[0]):
                cand = (hit[0], hit[1], trial)
        if cand is not None and cand[0] < value - 1e-15 * abs(value):
            value, r_sq, prm = cand
        else:
            step /= 2.0
            if step < 1e-13:
                break

    # a simplex polish absorbs the valley curvature the compass pattern
    # cannot follow near multi-constraint corners
    def angle_objective(params):
        hit = _radial_best(inst, _unit(inst, tuple(params)), cap_sq)
        return hit[0] if hit is not None else _BIG

    opt = minimize(angle_objective, prm, method="Nelder-Mead",
                   options={"maxiter": 600, "xatol": 1e-13, "fatol": 1e-13})
    if opt.fun < value:
        hit = _radial_best(inst, _unit(inst, tuple(opt.x)), cap_sq)
        if hit is not None:
            value, r_sq, prm = hit[0], hit[1], np.asarray(opt.x)
    x = np.sqrt(max(r_sq, 0.0)) * _unit(inst, tuple(prm))
    return BruteForceResult(True, float(value), x)
