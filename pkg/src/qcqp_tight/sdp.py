"""Modeling layer: QCQP instances, their SDP relaxation, Slater
verification, and solution purification.

The relaxation of  min x^H A0 x  s.t.  x^H A_i x (<=|=) c_i  replaces xx^H
with a PSD matrix variable X:

    (SP)  min  <A0, X>   s.t.  <A_i, X> (<=|=) c_i,  X >= 0
    (SD)  max  -sum c_i mu_i  s.t.  Z = A0 + sum mu_i A_i >= 0,
          mu_i >= 0 on "<=" rows, free on "=" rows.

Complex instances are solved through the standard real symmetric embedding
T(A) = [[Re A, -Im A], [Im A, Re A]]: with matrices T(A)/2 the embedded
problem has identical objective/constraint values, and mapping any embedded
solution back by block-averaging preserves feasibility, PSD-ness and all
inner products.  Purification and rank decisions always happen on the
mapped-back complex matrices.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
import numpy.linalg as la

from .ipm import (
    SENSE_EQ,
    SENSE_LE,
    IpmResult,
    SdpConvergenceError,
    SdpInfeasibleError,
    SdpSolverError,
    solve_cone_sdp,
)
from .linalg import COMPLEX, REAL, HermitianMatrix, eig, hermitian, quad_form

DEFAULT_EPS1 = 1e-8
DEFAULT_EPS2 = 1e-4


@dataclass(frozen=True)
class Constraint:
    """One quadratic constraint  x^H A x (<=|=) c."""

    matrix: HermitianMatrix
    bound: float
    sense: str

    def __post_init__(self):
        if self.sense not in (SENSE_LE, SENSE_EQ):
            raise ValueError(f"unknown sense {self.sense!r}")
        if not np.isfinite(self.bound):
            raise ValueError("constraint bound must be finite")


@dataclass(frozen=True)
class QcqpInstance:
    """A homogeneous QCQP over the tagged scalar field.

    The tightness pipeline expects exactly mf + 2 constraints (3 real /
    4 complex) with a nonzero last bound; general constraint counts are
    accepted for solve-only use, but the nonzero-last-bound rule always
    applies.
    """

    field: str
    objective: HermitianMatrix
    constraints: tuple[Constraint, ...]

    def __post_init__(self):
        if self.field not in (REAL, COMPLEX):
            raise ValueError(f"unknown field {self.field!r}")
        object.__setattr__(self, "constraints", tuple(self.constraints))
        if not self.constraints:
            raise ValueError("at least one constraint is required")
        if self.objective.field != self.field:
            raise ValueError("objective field does not match instance field")
        n = self.objective.n
        for con in self.constraints:
            if con.matrix.field != self.field or con.matrix.n != n:
                raise ValueError("constraint matrices must share the "
                                 "instance field and dimension")
        if self.constraints[-1].bound == 0:
            raise ValueError("the last constraint bound must be nonzero")

    @property
    def n(self) -> int:
        return self.objective.n

    @property
    def m(self) -> int:
        return len(self.constraints)

    @property
    def mf(self) -> int:
        """Field multiplicity: 1 for real, 2 for complex."""
        return 1 if self.field == REAL else 2

    def constraint_values(self, X) -> np.ndarray:
        xm = X.mat if isinstance(X, HermitianMatrix) else np.asarray(X)
        return np.array([float(np.vdot(c.matrix.mat, xm).real)
                         for c in self.constraints])

    def point_values(self, x: np.ndarray) -> np.ndarray:
        return np.array([quad_form(c.matrix, x) for c in self.constraints])

    def feasibility_violation(self, x: np.ndarray) -> float:
        """Worst sense-aware constraint violation of the point x."""
        vals = self.point_values(x)
        worst = 0.0
        for con, v in zip(self.constraints, vals):
            if con.sense == SENSE_LE:
                worst = max(worst, v - con.bound)
            else:
                worst = max(worst, abs(v - con.bound))
        return worst


@dataclass(frozen=True)
class SdpPair:
    """A primal-dual solution pair of (SP)/(SD)."""

    X: HermitianMatrix
    Z: HermitianMatrix
    mu: np.ndarray
    primal_value: float
    dual_value: float
    kkt_residual: float
    iterations: int = 0


@dataclass(frozen=True)
class SlaterReport:
    """Strict interior points for (SP) and (SD), when found.

    Absence of a point means the margin-maximizing auxiliary solve did not
    produce one at tolerance; it is not a proof of non-existence.
    """

    primal_point: HermitianMatrix | None
    primal_margin: float
    dual_point: tuple[np.ndarray, HermitianMatrix] | None
    dual_margin: float


# ---------------------------------------------------------------------------
# real symmetric embedding of complex Hermitian problems


def embed_hermitian(a: np.ndarray) -> np.ndarray:
    """T(A) = [[Re A, -Im A], [Im A, Re A]] (symmetric for Hermitian A)."""
    p, q = a.real, a.imag
    return np.block([[p, -q], [q, p]])


def restrict_embedded(y: np.ndarray) -> np.ndarray:
    """Map a 2n x 2n symmetric matrix back to an n x n Hermitian one.

    For T-structured input this inverts embed_hermitian; in general it
    averages the two diagonal blocks and recombines the skew part, which
    preserves PSD-ness and every inner product against embedded matrices.
    """
    n = y.shape[0] // 2
    p = (y[:n, :n] + y[n:, n:]) / 2.0
    q = (y[n:, :n] - y[:n, n:]) / 2.0
    h = p + 1j * q
    return (h + h.conj().T) / 2.0


def _solver_rows(inst: QcqpInstance):
    """Objective/constraint matrices in the solver's real arena.

    Returns (C, rows, lift) where rows excludes identically-zero constraint
    matrices (their multiplier is fixed at 0) and lift maps solver-row
    multipliers back to instance order.  Zero rows are feasibility-checked
    immediately: 0 <= c or 0 = c must hold or the instance is infeasible.
    """
    if inst.field == COMPLEX:
        C = embed_hermitian(inst.objective.mat) / 2.0
        mats = [embed_hermitian(c.matrix.mat) / 2.0 for c in inst.constraints]
    else:
        C = inst.objective.mat.copy()
        mats = [c.matrix.mat.copy() for c in inst.constraints]
    rows = []
    keep = []
    for i, (con, mat) in enumerate(zip(inst.constraints, mats)):
        if la.norm(mat, "fro") == 0.0:
            ok = (con.bound >= 0) if con.sense == SENSE_LE else (con.bound == 0)
            if not ok:
                raise SdpInfeasibleError(
                    "primal", f"constraint {i} has a zero matrix and an "
                              f"unsatisfiable bound {con.bound}")
            continue
        rows.append((mat, con.bound, con.sense))
        keep.append(i)
    if not rows:
        raise SdpSolverError("all constraint matrices are zero")

    def lift(nu: np.ndarray) -> np.ndarray:
        full = np.zeros(inst.m)
        full[keep] = nu
        return full

    return C, rows, lift


def _native_kkt(inst: QcqpInstance, X: np.ndarray, Z: np.ndarray,
                mu: np.ndarray) -> float:
    """Worst KKT residual of the pair, measured on the instance's own field."""
    vals = inst.constraint_values(X)
    worst = 0.0
    for con, v, m_i in zip(inst.constraints, vals, mu):
        if con.sense == SENSE_LE:
            worst = max(worst, v - con.bound, -min(m_i, 0.0))
        else:
            worst = max(worst, abs(v - con.bound))
        worst = max(worst, abs(m_i * (v - con.bound)))
    dual_mat = inst.objective.mat + sum(
        m_i * con.matrix.mat for m_i, con in zip(mu, inst.constraints)) - Z
    worst = max(worst, la.norm(dual_mat, "fro"))
    worst = max(worst, abs(float(np.vdot(Z, X).real)))
    worst = max(worst, -min(la.eigvalsh(X)[0], 0.0))
    worst = max(worst, -min(la.eigvalsh(Z)[0], 0.0))
    return float(worst)


def _pair_from_result(inst: QcqpInstance, res: IpmResult, lift) -> SdpPair:
    if inst.field == COMPLEX:
        X = restrict_embedded(res.X)
        Z = restrict_embedded(2.0 * res.Z)
    else:
        X = res.X
        Z = res.Z
    mu = lift(res.nu)
    for i, con in enumerate(inst.constraints):
        if con.sense == SENSE_LE:
            mu[i] = max(mu[i], 0.0)
    Xh = hermitian(X, inst.field)
    Zh = hermitian(Z, inst.field)
    kkt = _native_kkt(inst, Xh.mat, Zh.mat, mu)
    pv = float(np.vdot(inst.objective.mat, Xh.mat).real)
    dv = float(-(np.array([c.bound for c in inst.constraints]) @ mu))
    return SdpPair(Xh, Zh, mu, pv, dv, kkt, res.iterations)


def solve_sdp(inst: QcqpInstance, eps1: float = DEFAULT_EPS1) -> SdpPair:
    """Solve the relaxation pair (SP)/(SD) to accuracy eps1.

    The returned pair satisfies, natively on the instance's field:
    feasibility and complementarity residuals <= eps1 * max(1, ||A0||_F)
    and duality gap <= eps1 * max(1, |primal_value|).  The solver runs on
    the raw rows first and once more row-equilibrated if that pass misses
    the bounds; a stalled run still counts through its best iterate.
    Failure of both passes raises SdpConvergenceError carrying the best
    pair found.
    """
    if eps1 <= 0:
        raise ValueError("eps1 must be positive")
    C, rows, lift = _solver_rows(inst)
    scale = max(1.0, la.norm(inst.objective.mat, "fro"))

    def excess(pair: SdpPair) -> float:
        gap = abs(pair.primal_value - pair.dual_value)
        return max(pair.kkt_residual / (eps1 * scale),
                   gap / (eps1 * max(1.0, abs(pair.primal_value))))

    best_pair = None
    best_excess = np.inf
    for equilibrate in (False, True):
        if equilibrate:
            cn = max(la.norm(C, "fro"), 1e-12)
            factors = np.array([max(la.norm(mat, "fro"), 1e-12)
                                for mat, _, _ in rows])
            rows_s = [(mat / f, b / f, sense)
                      for (mat, b, sense), f in zip(rows, factors)]
            C_s, zscale = C / cn, cn

            def lift_s(nu, _f=factors, _cn=cn):
                return lift(np.asarray(nu) * (_cn / _f))
        else:
            C_s, rows_s, lift_s, zscale = C, rows, lift, 1.0
        try:
            # The interior stopping test is relative; the native gate on
            # <Z, X> is absolute, so ask for it explicitly (in the scaled
            # problem's units) with a factor 2 of headroom.
            res = solve_cone_sdp(C_s, rows_s, tol=eps1 / 4.0,
                                 comp_tol=eps1 * scale / (2.0 * zscale))
        except SdpConvergenceError as exc:
            if exc.best is None:
                continue
            res = exc.best
        res.Z = res.Z * zscale
        pair = _pair_from_result(inst, res, lift_s)
        over = excess(pair)
        if over <= 1.0:
            return pair
        if over < best_excess:
            best_pair, best_excess = pair, over
    if best_pair is None:
        raise SdpConvergenceError(
            "no usable iterate from either solver pass", best=None)
    gap = abs(best_pair.primal_value - best_pair.dual_value)
    raise SdpConvergenceError(
        f"solution accuracy {best_pair.kkt_residual:.2e} (gap {gap:.2e}) "
        f"misses the eps1={eps1:.1e} target", best=best_pair)


def purify(pair: SdpPair, eps2: float = DEFAULT_EPS2) -> SdpPair:
    """Zero out eigenvalues <= eps2 of X and Z; multipliers unchanged.

    The result is PSD by construction with every eigenvalue either 0 or
    > eps2, which makes the later rank tests stable.
    """
    if eps2 <= 0:
        raise ValueError("eps2 must be positive")

    def threshold(h: HermitianMatrix) -> HermitianMatrix:
        d = eig(h)
        vals = np.where(d.values > eps2, d.values, 0.0)
        mat = (d.vectors * vals) @ d.vectors.conj().T
        return hermitian(mat, h.field)

    return replace(pair, X=threshold(pair.X), Z=threshold(pair.Z))


# ---------------------------------------------------------------------------
# Slater condition


def _embedded_data(inst: QcqpInstance):
    if inst.field == COMPLEX:
        obj = embed_hermitian(inst.objective.mat) / 2.0
        mats = [embed_hermitian(c.matrix.mat) / 2.0 for c in inst.constraints]
    else:
        obj = inst.objective.mat
        mats = [c.matrix.mat for c in inst.constraints]
    return obj, mats


def _primal_slater(inst: QcqpInstance):
    """max t s.t. X = Y + t I feasible with margin t on every "<=" row.

    Lifted variable diag(Y, t): row i becomes <diag(A_i, tr A_i + 1), .> <= c_i
    for inequalities (the +1 charges the margin) and <diag(A_i, tr A_i), .> = c_i
    for equalities; extra rows cap t <= 1 and tr Y to keep the search bounded.
    """
    _, mats = _embedded_data(inst)
    k = mats[0].shape[0]
    bounds = [c.bound for c in inst.constraints]
    big = 100.0 * k * (1.0 + max(abs(b) for b in bounds))

    def lifted(mat, t_coeff):
        out = np.zeros((k + 1, k + 1))
        out[:k, :k] = mat
        out[k, k] = t_coeff
        return out

    C = np.zeros((k + 1, k + 1))
    C[k, k] = -1.0
    rows = []
    for con, mat in zip(inst.constraints, mats):
        tr = float(np.trace(mat))
        if con.sense == SENSE_LE:
            rows.append((lifted(mat, tr + 1.0), con.bound, SENSE_LE))
        else:
            rows.append((lifted(mat, tr), con.bound, SENSE_EQ))
    rows.append((lifted(np.zeros((k, k)), 1.0), 1.0, SENSE_LE))
    rows.append((lifted(np.eye(k), 0.0), big, SENSE_LE))
    res = solve_cone_sdp(C, rows, tol=1e-9)
    t = float(res.X[k, k])
    Y = res.X[:k, :k]
    point = Y + t * np.eye(k)
    if inst.field == COMPLEX:
        point = restrict_embedded(point)
    return t, hermitian(point, inst.field)


def _dual_slater(inst: QcqpInstance):
    """max t s.t. A0 + sum mu_i A_i >= t I, mu_i >= t on "<=" rows, t <= 1.

    Substituting mu_i = nu_i + t on inequality rows turns this into a dual
    problem the cone solver produces directly: LMI block
    A0 + sum nu_i A_i + t (sum_le A_i - I) >= 0 plus a 1x1 block 1 - t >= 0,
    with nu_i >= 0 on inequality rows and (nu EQ rows, t) free.
    """
    obj, mats = _embedded_data(inst)
    k = obj.shape[0]
    is_le = [c.sense == SENSE_LE for c in inst.constraints]
    sum_le = sum((m for m, f in zip(mats, is_le) if f),
                 start=np.zeros((k, k)))

    def blocked(mat, corner):
        out = np.zeros((k + 1, k + 1))
        out[:k, :k] = mat
        out[k, k] = corner
        return out

    C = blocked(obj, 1.0)
    rows = [(blocked(mat, 0.0), 0.0, SENSE_LE if f else SENSE_EQ)
            for mat, f in zip(mats, is_le)]
    rows.append((blocked(sum_le - np.eye(k), -1.0), -1.0, SENSE_EQ))
    res = solve_cone_sdp(C, rows, tol=1e-9)
    t = float(res.nu[-1])
    mu = np.array(res.nu[:-1])
    mu[is_le] += t
    zmat = inst.objective.mat + sum(
        m_i * con.matrix.mat for m_i, con in zip(mu, inst.constraints))
    return t, mu, hermitian(zmat, inst.field)


def check_slater(inst: QcqpInstance, margin: float = 1e-6) -> SlaterReport:
    """Look for strict interior points of (SP) and (SD).

    Each side solves a small margin-maximizing SDP; a side whose solve
    fails or whose best margin is below ``margin`` is reported absent.
    """
    primal_point, primal_margin = None, -np.inf
    try:
        t, point = _primal_slater(inst)
        primal_margin = t
        if t >= margin:
            primal_point = point
    except SdpSolverError:
        pass
    dual_point, dual_margin = None, -np.inf
    try:
        t, mu, zmat = _dual_slater(inst)
        dual_margin = t
        if t >= margin:
            dual_point = (mu, zmat)
    except SdpSolverError:
        pass
    return SlaterReport(primal_point, float(primal_margin),
                        dual_point, float(dual_margin))
