"""Self-contained dense primal-dual interior-point solver for small SDPs.

Solves the conic pair

    (P)  minimize    <C, X>
         subject to  <A_i, X> + s_i = c_i,  s_i >= 0   (inequality rows)
                     <A_i, X> = c_i                    (equality rows)
                     X >= 0   (positive semidefinite, real symmetric)

    (D)  maximize   -sum_i c_i nu_i
         subject to  C + sum_i nu_i A_i = Z >= 0,
                     nu_i >= 0 on inequality rows, free on equality rows.

The method is an infeasible-start Mehrotra predictor-corrector with
Nesterov-Todd scaling on the semidefinite block and the usual s.nu
complementarity handling for the scalar slacks.  Everything is dense and
real; complex problems are embedded upstream.  Problem sizes here are tiny
(one PSD block of order <= ~50 and at most a handful of rows), so all
linear algebra is direct.

Notation in the comments: W is the NT scaling point (W Z W = X), G = W^{1/2},
Lambda = G Z G = G^{-1} X G^{-1} is the common scaled variable, and the
central equation for a search direction is  DX + W DZ W = G U G  with U
solved in Lambda's eigenbasis.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import numpy.linalg as la
import scipy.linalg as sla

SENSE_LE = "le"
SENSE_EQ = "eq"


class SdpSolverError(RuntimeError):
    """Base class for solver failures."""


class SdpInfeasibleError(SdpSolverError):
    """Divergence heuristics flagged the problem as infeasible.

    ``side`` is ``"primal"`` or ``"dual"`` (dual infeasibility = primal
    objective unbounded below).  Best-effort detection only.
    """

    def __init__(self, side: str, message: str):
        super().__init__(message)
        self.side = side


class SdpConvergenceError(SdpSolverError):
    """Iteration cap or stall before reaching tolerance; carries the best
    iterate seen so far (may be ``None`` if the very first scaling failed)."""

    def __init__(self, message: str, best: "IpmResult | None" = None):
        super().__init__(message)
        self.best = best


@dataclass
class IpmResult:
    X: np.ndarray
    Z: np.ndarray
    nu: np.ndarray
    slack: np.ndarray
    primal_value: float
    dual_value: float
    iterations: int
    residuals: dict = field(default_factory=dict)


def _sym(a: np.ndarray) -> np.ndarray:
    return (a + a.T) / 2.0


def _sqrt_and_inv(a: np.ndarray, floor: float = 1e-14):
    """Symmetric square root and inverse square root via eigendecomposition.

    Returns (sqrt, inv_sqrt, min_eigenvalue_before_flooring); tiny or
    negative eigenvalues are floored so the factors stay usable and the
    caller can decide whether the original matrix had degraded.
    """
    vals, vecs = la.eigh(a)
    raw_min = vals[0]
    if raw_min <= 0:
        vals = np.maximum(vals, floor * max(1.0, vals[-1]))
    r = np.sqrt(vals)
    return _sym((vecs * r) @ vecs.T), _sym((vecs / r) @ vecs.T), raw_min


def _step_to_boundary(p: np.ndarray, d: np.ndarray) -> float:
    """Largest alpha with p + alpha*d >= 0, via lambda_min(L^-1 d L^-T)."""
    try:
        chol = la.cholesky(p)
    except la.LinAlgError:
        vals, vecs = la.eigh(p)
        vals = np.maximum(vals, 1e-14 * max(1.0, abs(vals[-1])))
        chol = (vecs * np.sqrt(vals)) @ vecs.T
    b = sla.solve_triangular(chol, d, lower=True)
    b = sla.solve_triangular(chol, b.T, lower=True)
    lam_min = la.eigvalsh(_sym(b))[0]
    if lam_min >= -1e-16:
        return np.inf
    return -1.0 / lam_min


def solve_cone_sdp(C, rows, tol: float = 1e-8, max_iter: int = 200,
                   comp_tol: float | None = None) -> IpmResult:
    """Solve the conic pair (P)/(D) above.

    Parameters
    ----------
    C : (k, k) symmetric ndarray.
    rows : sequence of (A_i, c_i, sense) with sense "le" or "eq".
    tol : target for scaled feasibility/gap residuals.
    max_iter : iteration cap before SdpConvergenceError.
    comp_tol : optional absolute target for total complementarity
        <X, Z> + s.nu.  The scaled residuals are relative to the problem
        data and objective size, so on problems whose optimal value dwarfs
        the data norm the iteration would otherwise stop with more
        absolute complementarity than a caller can accept.

    Returns an IpmResult whose `residuals` dict holds the final scaled
    primal/dual feasibility, relative gap, and complementarity measures.
    """
    C = _sym(np.asarray(C, dtype=float))
    k = C.shape[0]
    m = len(rows)
    if m == 0:
        raise ValueError("at least one constraint row is required")
    A = np.empty((m, k, k))
    c = np.empty(m)
    is_le = np.zeros(m, dtype=bool)
    for i, (ai, ci, sense) in enumerate(rows):
        A[i] = _sym(np.asarray(ai, dtype=float))
        c[i] = float(ci)
        if sense == SENSE_LE:
            is_le[i] = True
        elif sense != SENSE_EQ:
            raise ValueError(f"unknown sense {sense!r}")
    le = np.flatnonzero(is_le)
    n_le = le.size

    norm_c = la.norm(c, np.inf)
    norm_C = la.norm(C, "fro")
    norm_A = np.array([la.norm(A[i], "fro") for i in range(m)])

    # Cold start, scale-aware (SDPT3-flavoured).
    xi = max(10.0, np.sqrt(k), k * np.max((1.0 + np.abs(c)) / (1.0 + norm_A)))
    eta = max(10.0, np.sqrt(k), (1.0 + max(norm_C, norm_A.max())) / np.sqrt(k))
    X = xi * np.eye(k)
    Z = eta * np.eye(k)
    nu = np.where(is_le, eta, 0.0)
    s = np.full(m, xi)
    s[~is_le] = 0.0

    def evaluate(X, Z, nu, s):
        ax = np.einsum("iab,ab->i", A, X)
        rp = c - ax - s
        Rd = Z - C - np.einsum("i,iab->ab", nu, A)
        pv = float(np.sum(C * X))
        dv = float(-c @ nu)
        comp = float(np.sum(X * Z) + s[le] @ nu[le]) if n_le else float(np.sum(X * Z))
        pinf = la.norm(rp, np.inf) / (1.0 + norm_c)
        dinf = la.norm(Rd, "fro") / (1.0 + norm_C)
        gap = abs(pv - dv) / (1.0 + abs(pv) + abs(dv))
        return rp, Rd, pv, dv, comp, pinf, dinf, gap

    best = None
    best_score = np.inf
    best_iter = 0
    result = None

    for it in range(max_iter):
        X = _sym(X)
        Z = _sym(Z)
        if not (np.isfinite(X).all() and np.isfinite(Z).all()
                and np.isfinite(nu).all() and np.isfinite(s).all()):
            raise SdpConvergenceError("iterates left the representable "
                                      "range", best)
        rp, Rd, pv, dv, comp, pinf, dinf, gap = evaluate(X, Z, nu, s)
        if not np.isfinite([pv, dv, comp, pinf, dinf, gap]).all():
            raise SdpConvergenceError("residuals left the representable "
                                      "range", best)
        score = max(pinf, dinf, gap)
        if comp_tol is not None:
            score = max(score, tol * comp / comp_tol)
        if score < best_score:
            best_score = score
            best_iter = it
            best = IpmResult(X.copy(), Z.copy(), nu.copy(), s.copy(), pv, dv, it,
                             {"primal_infeas": pinf, "dual_infeas": dinf,
                              "relative_gap": gap, "complementarity": comp})
        if (pinf <= tol and dinf <= tol and gap <= tol
                and (comp_tol is None or comp <= comp_tol)):
            result = IpmResult(X, Z, nu, s, pv, dv, it,
                               {"primal_infeas": pinf, "dual_infeas": dinf,
                                "relative_gap": gap, "complementarity": comp})
            break
        # Divergence heuristics (best effort; Slater problems never get here).
        blowup = 1e13 * (1.0 + norm_c + norm_C)
        if dv > blowup and dinf <= 1e-6:
            raise SdpInfeasibleError("primal", "dual objective diverging: "
                                     "primal problem appears infeasible")
        if pv < -blowup and pinf <= 1e-6:
            raise SdpInfeasibleError("dual", "primal objective diverging: "
                                     "dual problem appears infeasible")
        if it - best_iter > 60:
            raise SdpConvergenceError(
                f"stalled after {it} iterations (best residual {best_score:.3e})",
                best)

        mu = comp / (k + n_le)

        # Nesterov-Todd scaling point:  W = Z^-1/2 (Z^1/2 X Z^1/2)^1/2 Z^-1/2.
        scale_z = max(1.0, la.norm(Z, "fro"))
        try:
            Zh, Zih, z_min = _sqrt_and_inv(Z)
            if z_min <= -1e-10 * scale_z:
                raise la.LinAlgError("Z lost definiteness")
            Sh, _, _ = _sqrt_and_inv(_sym(Zh @ X @ Zh))
            W = _sym(Zih @ Sh @ Zih)
            G, Gi, w_min = _sqrt_and_inv(W)
            if w_min <= -1e-12:
                raise la.LinAlgError("W lost definiteness")
            Lam = _sym(G @ Z @ G)
            lam, Ql = la.eigh(Lam)
            lam = np.maximum(lam, 1e-300)
        except la.LinAlgError as exc:
            raise SdpConvergenceError(f"scaling breakdown: {exc}", best) from exc

        with np.errstate(over="ignore", invalid="ignore"):
            WRdW = _sym(W @ Rd @ W)
            WAW = np.einsum("ab,ibc,cd->iad", W, A, W)
            M = np.einsum("iab,jab->ij", A, WAW)
            M = _sym(M)
        if not (np.isfinite(M).all() and np.isfinite(WRdW).all()):
            raise SdpConvergenceError(
                "scaled system left the representable range", best)
        if n_le:
            M[le, le] += s[le] / np.maximum(nu[le], 1e-300)
        try:
            M_fac = sla.cho_factor(M + 1e-14 * np.trace(M) / m * np.eye(m))
            M_ld = M.astype(np.longdouble)

            def solve_schur(rhs):
                # cond(M) ~ 1/mu^2 near the end; two rounds of extended
                # precision refinement keep the direction usable anyway.
                d = sla.cho_solve(M_fac, rhs)
                r_ld = np.asarray(rhs, dtype=np.longdouble)
                for _ in range(2):
                    resid = r_ld - M_ld @ d.astype(np.longdouble)
                    d = d + sla.cho_solve(M_fac, resid.astype(np.float64))
                return d
        except la.LinAlgError:
            solve_schur = lambda rhs: la.lstsq(M, rhs, rcond=None)[0]

        denom = (lam[:, None] + lam[None, :]) / 2.0

        def direction(Rc, rc):
            """Newton step given the scaled central residual and LP residual."""
            with np.errstate(over="ignore", invalid="ignore"):
                rhs = np.einsum("iab,ab->i", A, Rc + WRdW) - rp
                if n_le:
                    rhs[le] += rc[le] / np.maximum(nu[le], 1e-300)
                if not np.isfinite(rhs).all():
                    raise SdpConvergenceError(
                        "search direction left the representable range", best)
                dnu = solve_schur(rhs)
                dZ = np.einsum("i,iab->ab", dnu, A) - Rd
                dX = Rc - _sym(W @ dZ @ W)
                ds = np.zeros(m)
                if n_le:
                    ds[le] = (rc[le] - s[le] * dnu[le]) / np.maximum(
                        nu[le], 1e-300)
            if not (np.isfinite(dX).all() and np.isfinite(dZ).all()
                    and np.isfinite(dnu).all() and np.isfinite(ds).all()):
                raise SdpConvergenceError(
                    "search direction left the representable range", best)
            return _sym(dX), _sym(dZ), dnu, ds

        # Predictor: pure Newton towards complementarity zero.  With NT
        # scaling the matrix part collapses to Rc = -X exactly.
        rc_aff = np.zeros(m)
        if n_le:
            rc_aff[le] = -s[le] * nu[le]
        dXa, dZa, dnua, dsa = direction(-X, rc_aff)

        def max_steps(dX, dZ, dnu, ds):
            ap = _step_to_boundary(X, dX)
            ad = _step_to_boundary(Z, dZ)
            if n_le:
                neg = ds[le] < 0
                if np.any(neg):
                    ap = min(ap, np.min(-s[le][neg] / ds[le][neg]))
                neg = dnu[le] < 0
                if np.any(neg):
                    ad = min(ad, np.min(-nu[le][neg] / dnu[le][neg]))
            return ap, ad

        ap_a, ad_a = max_steps(dXa, dZa, dnua, dsa)
        ap_a, ad_a = min(1.0, ap_a), min(1.0, ad_a)
        comp_aff = float(np.sum((X + ap_a * dXa) * (Z + ad_a * dZa)))
        if n_le:
            comp_aff += float((s[le] + ap_a * dsa[le]) @ (nu[le] + ad_a * dnua[le]))
        mu_aff = max(comp_aff, 0.0) / (k + n_le)
        sigma = float(np.clip((mu_aff / mu) ** 3, 1e-6, 0.9999))

        # Corrector in the scaled space: H = sym(G^-1 dXa G^-1 . G dZa G).
        with np.errstate(over="ignore", invalid="ignore"):
            dXt = Gi @ dXa @ Gi
            dZt = G @ dZa @ G
            H = _sym(dXt @ dZt)
            T = sigma * mu * np.eye(k) - Lam @ Lam - H
            Ut = (Ql.T @ T @ Ql) / denom
            Rc = _sym(G @ _sym(Ql @ Ut @ Ql.T) @ G)
            rc = np.zeros(m)
            if n_le:
                rc[le] = sigma * mu - s[le] * nu[le] - dsa[le] * dnua[le]
        dX, dZ, dnu, ds = direction(Rc, rc)

        ap, ad = max_steps(dX, dZ, dnu, ds)
        # Fixed 0.99 leaves the last digits of complementarity on the table;
        # once the residuals are small the iterates are well inside the
        # quadratic convergence zone and longer steps are safe.
        if gap < 1e-6:
            boundary_frac = 0.9999
        elif gap < 1e-4:
            boundary_frac = 0.999
        else:
            boundary_frac = 0.99
        ap = min(1.0, boundary_frac * ap)
        ad = min(1.0, boundary_frac * ad)
        if ap <= 1e-10 and ad <= 1e-10:
            raise SdpConvergenceError(
                f"step collapsed at iteration {it} "
                f"(residual {score:.3e})", best)

        X = X + ap * dX
        s = s + ap * ds
        Z = Z + ad * dZ
        nu = nu + ad * dnu
        if n_le:
            s[le] = np.maximum(s[le], 1e-300)
            nu[le] = np.maximum(nu[le], 1e-300)

    if result is None:
        # The final update was never inspected inside the loop.
        X = _sym(X)
        Z = _sym(Z)
        rp, Rd, pv, dv, comp, pinf, dinf, gap = evaluate(X, Z, nu, s)
        if pinf <= tol and dinf <= tol and gap <= tol:
            result = IpmResult(X, Z, nu, s, pv, dv, max_iter,
                               {"primal_infeas": pinf, "dual_infeas": dinf,
                                "relative_gap": gap, "complementarity": comp})
        else:
            score = max(pinf, dinf, gap)
            if score < best_score:
                best_score = score
                best = IpmResult(X, Z, nu, s, pv, dv, max_iter,
                                 {"primal_infeas": pinf, "dual_infeas": dinf,
                                  "relative_gap": gap, "complementarity": comp})
            raise SdpConvergenceError(
                f"no convergence within {max_iter} iterations "
                f"(best residual {best_score:.3e})", best)
    return result
