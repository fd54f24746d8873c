"""Certificates deciding S-lemma/Yuan-lemma questions on three real or
four complex quadratic forms.

The classical S-lemma and Yuan's lemma both break beyond two real forms.
They become exact again once a third alternative is admitted: a *witness
structure* -- positive multipliers whose combination with the identity is
singular on exactly a two-dimensional subspace, on which the forms
interleave in a fixed sign pattern (diagonal annihilation, nonvanishing
cross terms, one straddling form).  Each procedure here consequently
returns one of three mutually exclusive certificate kinds, and every
returned object is re-verified by direct substitution first:

* ``psd_certificate`` -- nonnegative multipliers mu0 with
  A0 + sum mu0_i A_i (or a convex combination, for the Yuan variants)
  positive semidefinite: the classical conclusion holds;
* ``property_witness`` -- the rank-two structure (mu_breve, x1, x2)
  explaining why no such multipliers exist even though the strict
  system is unsolvable;
* ``system_solvable`` -- a vector strictly solving the target system.

The decision route embeds the forms into a homogeneous relaxation with a
unit-ball row appended and reuses the exactness test / recovery pipeline
on it; the Yuan variants first run a small eigenvalue-optimization SDP
over the convex hull of the forms.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.linalg as la
import scipy.optimize as opt

from .ipm import SENSE_EQ, SENSE_LE, SdpConvergenceError, solve_cone_sdp
from .linalg import (COMPLEX, REAL, HermitianMatrix, cross_form, eig,
                     hermitian, identity, psd_rank, quad_form)
from .sdp import (DEFAULT_EPS1, DEFAULT_EPS2, Constraint, QcqpInstance,
                  embed_hermitian, purify, solve_sdp)
from .tightness import diagnose_gap, recover_optimum

KIND_PSD_CERTIFICATE = "psd_certificate"
KIND_PROPERTY_WITNESS = "property_witness"
KIND_SYSTEM_SOLVABLE = "system_solvable"

#: Verification floor for returned PSD combinations.
PSD_EIG_FLOOR = -1e-7
#: Strict-inequality margin for returned system solutions (unit vectors).
SOLVABLE_MARGIN = 1e-6
#: Acceptance level for the convex-combination eigenvalue SDP.
_CONVEX_LEVEL = -1e-9


class CertificateError(RuntimeError):
    """A certificate failed its substitution check, or no constructive
    certificate exists at the working tolerance."""


@dataclass(frozen=True)
class CertificateResult:
    """One verified certificate; exactly one kind of payload is set.

    ``mu0`` (psd_certificate): multipliers of the constraint forms, or of
    all forms including the objective when ``convex`` is set (then they
    sum to one).  ``mu_breve``/``x1``/``x2`` (property_witness): the
    positive multipliers -- last entry belonging to the identity -- and
    the two-dimensional null-space witnesses.  ``x`` (system_solvable):
    a unit vector solving the system whose senses are listed in
    ``system`` ("lt" strict, "le", "eq").  ``permutation`` marks which
    form ordering a Yuan-variant result refers to.
    """

    kind: str
    mu0: tuple | None = None
    convex: bool = False
    mu_breve: tuple | None = None
    x1: np.ndarray | None = None
    x2: np.ndarray | None = None
    x: np.ndarray | None = None
    system: tuple | None = None
    permutation: tuple | None = None


# ---------------------------------------------------------------------------
# input plumbing


def _coerce(mats, field) -> list[HermitianMatrix]:
    out = [a if isinstance(a, HermitianMatrix) else hermitian(a, field)
           for a in mats]
    n = out[0].n
    for a in out:
        if a.field != field:
            raise ValueError(f"expected {field} matrices, got {a.field}")
        if a.n != n:
            raise ValueError("matrices must share one dimension")
    return out


def _check_slater_point(constraint_mats, x0) -> np.ndarray:
    x0 = np.asarray(x0).ravel()
    if la.norm(x0) == 0:
        raise ValueError("x0 must be nonzero")
    for i, a in enumerate(constraint_mats, start=1):
        v = quad_form(a, x0)
        if v >= 0:
            raise ValueError(
                f"x0 is not strictly feasible: form {i} gives {v:.3e} >= 0")
    return x0


# ---------------------------------------------------------------------------
# substitution checks (every certificate passes one before being returned)


def _verify_psd(combo: np.ndarray, label: str) -> None:
    lo = float(la.eigvalsh(combo)[0])
    if lo < PSD_EIG_FLOOR:
        raise CertificateError(
            f"{label}: smallest eigenvalue {lo:.3e} below {PSD_EIG_FLOOR}")


def _verify_witness(mats, mu_breve, x1, x2, eps2: float) -> None:
    """Substitute a witness structure into its defining clauses."""
    n = mats[0].n
    if len(mu_breve) != len(mats) or any(v <= 0 for v in mu_breve):
        raise CertificateError("witness multipliers must all be positive")
    z = mats[0].mat + sum(v * a.mat for v, a in zip(mu_breve, mats[1:]))
    z = z + mu_breve[-1] * np.eye(n)
    _verify_psd(z, "witness combination")
    if psd_rank(z, eps2) != n - 2:
        raise CertificateError(
            f"witness combination has rank {psd_rank(z, eps2)}, "
            f"expected {n - 2}")
    zscale = max(1.0, float(la.norm(z, 2)))
    for tag, piece in (("x1", x1), ("x2", x2)):
        drift = float(la.norm(z @ piece)) / max(la.norm(piece), 1e-30)
        if drift > eps2 * zscale:
            raise CertificateError(
                f"witness {tag} leaves the null space (residual {drift:.3e})")
    stack = np.column_stack([x1, x2])
    sv = la.svd(stack, compute_uv=False)
    if sv[-1] <= 1e-9 * sv[0]:
        raise CertificateError("witness vectors are numerically dependent")

    complex_field = mats[0].field == COMPLEX
    first = mats[1]
    for tag, piece in (("x1", x1), ("x2", x2)):
        v = quad_form(first, piece)
        if abs(v) > eps2:
            raise CertificateError(
                f"first form does not vanish on {tag} ({v:.3e})")
    cr = cross_form(first, x1, x2)
    if abs(cr.real) <= eps2:
        raise CertificateError(
            f"first-form cross term too small ({cr.real:.3e})")
    if complex_field:
        second = mats[2]
        for tag, piece in (("x1", x1), ("x2", x2)):
            v = quad_form(second, piece)
            if abs(v) > eps2:
                raise CertificateError(
                    f"second form does not vanish on {tag} ({v:.3e})")
        cr2 = cross_form(second, x1, x2)
        if abs(cr2.real) > eps2 or abs(cr2.imag) <= eps2:
            raise CertificateError(
                f"second-form cross term off axis "
                f"(re {cr2.real:.3e}, im {cr2.imag:.3e})")
    v1 = quad_form(mats[-1], x1)
    v2 = quad_form(mats[-1], x2)
    if not v1 * v2 < -eps2 ** 2:
        raise CertificateError(
            f"last form does not straddle zero ({v1:.3e}, {v2:.3e})")


def _verify_solvable(mats, x, system) -> np.ndarray:
    x = np.asarray(x).ravel()
    x = x / la.norm(x)
    for a, sense in zip(mats, system):
        v = quad_form(a, x)
        if sense == "lt" and v > -SOLVABLE_MARGIN:
            raise CertificateError(
                f"strict inequality missed its margin ({v:.3e})")
        if sense == "le" and v > 0:
            raise CertificateError(f"inequality violated ({v:.3e})")
        if sense == "eq" and abs(v) > SOLVABLE_MARGIN:
            raise CertificateError(f"equality off by {v:.3e}")
    return x


# ---------------------------------------------------------------------------
# the ball-augmented pipeline shared by both S-lemma variants


def _ball_instance(field: str, mats) -> QcqpInstance:
    cons = tuple(Constraint(a, 0.0, SENSE_LE) for a in mats[1:])
    cons = cons + (Constraint(identity(mats[0].n, field), 1.0, SENSE_LE),)
    return QcqpInstance(field, mats[0], cons)


def _strictify(mats, x, x0) -> np.ndarray:
    """Mix a recovered solution with the strictly feasible x0 until every
    constraint form goes strictly negative (the objective keeps its
    margin); homogeneity makes any nonzero scaling equivalent."""
    x = np.asarray(x).ravel()
    x = x / la.norm(x)
    x0 = np.asarray(x0).ravel()
    x0 = x0 / la.norm(x0)

    def forms(y):
        return [quad_form(a, y) for a in mats]

    taus = [0.0] + [10.0 ** -k for k in range(8, 0, -1)] + [0.2, 0.3]
    for strict in (True, False):
        for tau in taus:
            for sig in (1.0, -1.0):
                y = (1.0 - tau) * x + tau * sig * x0
                nrm = la.norm(y)
                if nrm < 1e-12:
                    continue
                y = y / nrm
                f = forms(y)
                good = (all(v < 0 for v in f[1:]) if strict
                        else all(v <= 0 for v in f[1:]))
                if f[0] <= -SOLVABLE_MARGIN and good:
                    return y
                if tau == 0.0:
                    break
    raise CertificateError(
        "could not make the recovered solution strictly feasible")


def _certify(field: str, mats, x0, eps1: float, eps2: float,
             permutation=None) -> CertificateResult:
    """Solve the ball-augmented relaxation and route on the ball
    multiplier and the exactness test; see the module docstring."""
    inst = _ball_instance(field, mats)
    pair = purify(solve_sdp(inst, eps1), eps2)
    diag = diagnose_gap(inst, pair, eps2)
    mu = np.asarray(pair.mu, dtype=float)

    if diag.holds:
        x1, x2 = diag.witnesses
        mu_breve = tuple(float(v) for v in mu)
        _verify_witness(mats, mu_breve, x1, x2, eps2)
        return CertificateResult(KIND_PROPERTY_WITNESS, mu_breve=mu_breve,
                                 x1=x1, x2=x2, permutation=permutation)

    if mu[-1] <= eps2:
        mu0 = tuple(float(max(v, 0.0)) for v in mu[:-1])
        combo = mats[0].mat + sum(v * a.mat for v, a in zip(mu0, mats[1:]))
        _verify_psd(combo, "certificate combination")
        return CertificateResult(KIND_PSD_CERTIFICATE, mu0=mu0,
                                 permutation=permutation)

    verdict = recover_optimum(inst, pair, eps2)
    x = _strictify(mats, verdict.x, x0)
    system = ("lt",) + ("le",) * (len(mats) - 1)
    x = _verify_solvable(mats, x, system)
    return CertificateResult(KIND_SYSTEM_SOLVABLE, x=x, system=system,
                             permutation=permutation)


def s_lemma_three(A0, A1, A2, x0, eps1: float = DEFAULT_EPS1,
                  eps2: float = DEFAULT_EPS2) -> CertificateResult:
    """Decide the three-real-form alternative given a point x0 strictly
    negative on both constraint forms.

    Exactly one of: nonnegative mu0 with A0 + mu0_1 A1 + mu0_2 A2 psd;
    a witness structure over (A1, A2); or a vector making A0 strictly
    negative while keeping A1, A2 nonpositive.
    """
    mats = _coerce((A0, A1, A2), REAL)
    x0 = _check_slater_point([mats[1], mats[2]], x0)
    return _certify(REAL, mats, x0, eps1, eps2)


def s_lemma_four_complex(A0, A1, A2, A3, x0, eps1: float = DEFAULT_EPS1,
                         eps2: float = DEFAULT_EPS2) -> CertificateResult:
    """Four-complex-form analog of :func:`s_lemma_three`; x0 must be
    strictly negative on all three constraint forms."""
    mats = _coerce((A0, A1, A2, A3), COMPLEX)
    x0 = _check_slater_point(mats[1:], x0)
    return _certify(COMPLEX, mats, x0, eps1, eps2)


# ---------------------------------------------------------------------------
# Yuan variants: convex-combination search first, then the constructive side


def _convex_combination(mats_sym):
    """max lambda s.t. sum mu_k A_k >= lambda I, mu in the simplex.

    Solved through its primal form min_X max_k A_k . X over trace-one
    psd X.  The epigraph scalar is written t = T - s with s >= 0 a tail
    diagonal entry and T a bound strictly above any attainable t, which
    keeps both sides strictly feasible.  Returns (lambda*, mu, X-block).
    """
    k = len(mats_sym)
    n = mats_sym[0].shape[0]
    T = max(float(la.norm(a, 2)) for a in mats_sym) + 1.0
    dim = n + 1
    C = np.zeros((dim, dim))
    C[n, n] = -1.0
    rows = []
    for a in mats_sym:
        r = np.zeros((dim, dim))
        r[:n, :n] = a
        r[n, n] = 1.0
        rows.append((r, T, SENSE_LE))
    tr = np.zeros((dim, dim))
    tr[:n, :n] = np.eye(n)
    rows.append((tr, 1.0, SENSE_EQ))
    try:
        res = solve_cone_sdp(C, rows, tol=1e-9)
    except SdpConvergenceError as exc:
        res = exc.best
        if res is None:
            raise
        worst = max(res.residuals.get("primal_infeas", np.inf),
                    res.residuals.get("dual_infeas", np.inf),
                    res.residuals.get("relative_gap", np.inf))
        if worst > 1e-6:
            raise
    mu = np.clip(np.asarray(res.nu[:k], dtype=float), 0.0, None)
    total = float(mu.sum())
    if total <= 0:
        raise CertificateError("degenerate simplex multipliers")
    return float(res.primal_value) + T, mu / total, res.X[:n, :n]


def _as_vector(params: np.ndarray, n: int, field: str) -> np.ndarray:
    if field == COMPLEX:
        return params[:n] + 1j * params[n:]
    return params


def _common_negative_direction(mats, field: str, rng, seeds=()):
    """Search for a unit x making every form strictly negative.

    Candidate starts (eigenvector and random) are polished by a direct
    simplex descent on the worst normalized form value; returns None
    when nothing reaches the margin.
    """
    n = mats[0].n if isinstance(mats[0], HermitianMatrix) else mats[0].shape[0]
    raw = [a.mat if isinstance(a, HermitianMatrix) else a for a in mats]

    def worst(x):
        s = float(np.real(np.vdot(x, x)))
        if s < 1e-20:
            return np.inf
        return max(quad_form(a, x) for a in raw) / s

    starts = []
    for a in raw:
        starts.append(eig(a).vectors[:, -1])
    starts.append(eig(sum(raw)).vectors[:, -1])
    starts.extend(np.asarray(s) for s in seeds)
    for _ in range(8):
        s = rng.standard_normal(n)
        if field == COMPLEX:
            s = s + 1j * rng.standard_normal(n)
        starts.append(s)

    dof = 2 * n if field == COMPLEX else n
    best_x, best_v = None, np.inf
    for x in starts:
        x = np.asarray(x, dtype=complex if field == COMPLEX else float).ravel()
        p0 = np.concatenate([x.real, x.imag]) if field == COMPLEX else x.real
        if la.norm(p0) < 1e-12:
            continue
        p0 = p0 / la.norm(p0)
        sol = opt.minimize(lambda p: worst(_as_vector(p, n, field)), p0,
                           method="Nelder-Mead",
                           options={"maxiter": 200 * dof, "xatol": 1e-10,
                                    "fatol": 1e-12})
        cand = _as_vector(sol.x, n, field)
        v = worst(cand)
        if v < best_v:
            best_v, best_x = v, cand / la.norm(cand)
        if best_v <= -10 * SOLVABLE_MARGIN:
            break
    if best_v <= -SOLVABLE_MARGIN:
        return best_x
    return None


def _cyclic_permutations(k: int):
    return [tuple((start + i) % k for i in range(k)) for start in range(k)]


def _yuan(field: str, mats, eps1: float, eps2: float,
          rng) -> CertificateResult:
    sym = [a.mat if field == REAL else embed_hermitian(a.mat) for a in mats]
    level, mu, xblk = _convex_combination(sym)
    if level >= _CONVEX_LEVEL:
        combo = sum(v * a.mat for v, a in zip(mu, mats))
        _verify_psd(combo, "convex combination")
        return CertificateResult(KIND_PSD_CERTIFICATE,
                                 mu0=tuple(float(v) for v in mu), convex=True)

    # No convex combination exists.  Try the direct refutation first: a
    # single direction on which every form is strictly negative.
    seeds = []
    vecs = eig(xblk).vectors
    for j in range(min(3, vecs.shape[1])):
        col = vecs[:, j]
        if field == COMPLEX:
            half = col.shape[0] // 2
            seeds.append(col[:half] + 1j * col[half:])
        else:
            seeds.append(col)
    x = _common_negative_direction(mats, field, rng, seeds=seeds)
    if x is not None:
        system = ("lt",) * len(mats)
        x = _verify_solvable(mats, x, system)
        return CertificateResult(KIND_SYSTEM_SOLVABLE, x=x, system=system)

    # Permutation route: place each form in the objective slot in turn
    # and decide the resulting three/four-form alternative.
    for perm in _cyclic_permutations(len(mats)):
        sub = [mats[j] for j in perm]
        x0 = _common_negative_direction(sub[1:], field, rng)
        if x0 is None:
            continue
        try:
            res = _certify(field, sub, x0, eps1, eps2, permutation=perm)
        except CertificateError:
            continue
        if res.kind == KIND_PSD_CERTIFICATE:
            # A one-sided certificate contradicts the negative simplex
            # level unless we are at the tolerance boundary; renormalize
            # it into the convex form and re-verify.
            weights = (1.0,) + res.mu0
            total = sum(weights)
            mu0 = [0.0] * len(mats)
            for j, w in zip(perm, weights):
                mu0[j] = w / total
            combo = sum(v * a.mat for v, a in zip(mu0, mats))
            try:
                _verify_psd(combo, "convex combination (via permutation)")
            except CertificateError:
                continue
            return CertificateResult(KIND_PSD_CERTIFICATE,
                                     mu0=tuple(mu0), convex=True)
        return res
    raise CertificateError(
        "no constructive certificate at the working tolerance")


def yuan_lemma_three(A0, A1, A2, eps1: float = DEFAULT_EPS1,
                     eps2: float = DEFAULT_EPS2, seed: int = 0
                     ) -> CertificateResult:
    """Decide the three-real-form Yuan alternative: a convex combination
    mu0 (summing to one) with sum mu0_k A_k psd, or a constructive
    refutation -- a direction with every form strictly negative, or a
    witness/solution for some cyclic reordering of the forms."""
    mats = _coerce((A0, A1, A2), REAL)
    return _yuan(REAL, mats, eps1, eps2, np.random.default_rng(seed))


def yuan_lemma_four_complex(A0, A1, A2, A3, eps1: float = DEFAULT_EPS1,
                            eps2: float = DEFAULT_EPS2, seed: int = 0
                            ) -> CertificateResult:
    """Four-complex-form analog of :func:`yuan_lemma_three`."""
    mats = _coerce((A0, A1, A2, A3), COMPLEX)
    return _yuan(COMPLEX, mats, eps1, eps2, np.random.default_rng(seed))


# ---------------------------------------------------------------------------
# planted families (each construction forces one certificate kind)


def _rand_herm(rng, n: int, field: str, radius: float) -> np.ndarray:
    w = rng.uniform(-radius, radius, (n, n))
    if field == COMPLEX:
        w = w + 1j * rng.uniform(-radius, radius, (n, n))
    return (w + w.conj().T) / 2.0


def _rand_unit(rng, n: int, field: str) -> np.ndarray:
    x = rng.standard_normal(n)
    if field == COMPLEX:
        x = x + 1j * rng.standard_normal(n)
    return x / la.norm(x)


def _pin_value(a: np.ndarray, v: np.ndarray, target: float) -> np.ndarray:
    """Rank-one correction forcing v^H a v = target (v unit)."""
    return a - (quad_form(a, v) - target) * np.outer(v, v.conj())


def plant_psd_instance(rng, n: int, field: str):
    """(mats, x0) whose alternative is a psd certificate: the objective
    is a planted positive combination plus a positive definite part, so
    no direction can make it negative on the feasible cone."""
    m = 2 if field == REAL else 3
    x0 = _rand_unit(rng, n, field)
    cons = []
    for _ in range(m):
        a = _rand_herm(rng, n, field, 2.0)
        cons.append(_pin_value(a, x0, -rng.uniform(0.5, 1.5)))
    g = rng.standard_normal((n, n))
    if field == COMPLEX:
        g = g + 1j * rng.standard_normal((n, n))
    pos = g @ g.conj().T / n + 0.5 * np.eye(n)
    mu = rng.uniform(0.3, 1.5, m)
    a0 = pos - sum(w * a for w, a in zip(mu, cons))
    mats = tuple(hermitian(a, field) for a in (a0, *cons))
    return mats, x0


def plant_witness_instance(rng, n: int, field: str):
    """(mats, x0) planted so the witness structure exists: a frame where
    the combination vanishes on two directions carrying the interleaving
    sign pattern, with a third direction strictly inside the constraint
    cone."""
    if n < 3:
        raise ValueError("witness plants need n >= 3")
    m = 2 if field == REAL else 3
    g = rng.standard_normal((n, n))
    if field == COMPLEX:
        g = g + 1j * rng.standard_normal((n, n))
    q = la.qr(g)[0]
    u, v = q[:, :2], q[:, 2]

    def pin_block(a, target):
        s = u.conj().T @ a @ u - target
        return a - u @ s @ u.conj().T

    gam = rng.uniform(0.5, 1.5) * rng.choice([-1.0, 1.0])
    straddle = np.diag([-rng.uniform(0.5, 1.5), rng.uniform(0.5, 1.5)])
    targets = [np.array([[0.0, gam], [gam, 0.0]])]
    if field == COMPLEX:
        eta = rng.uniform(0.5, 1.5) * rng.choice([-1.0, 1.0])
        targets.append(np.array([[0.0, 1j * eta], [-1j * eta, 0.0]]))
    targets.append(straddle.astype(complex if field == COMPLEX else float))

    cons = []
    for t in targets:
        a = pin_block(_rand_herm(rng, n, field, 2.0), t)
        cons.append(_pin_value(a, v, -rng.uniform(0.5, 1.5)))
    mu = rng.uniform(0.5, 1.5, m + 1)
    rest = q[:, 2:]
    z = (rest * rng.uniform(1.0, 3.0, n - 2)) @ rest.conj().T
    a0 = z - sum(w * a for w, a in zip(mu, cons)) - mu[-1] * np.eye(n)
    mats = tuple(hermitian(a, field) for a in (a0, *cons))
    return mats, v.copy()


def plant_negative_instance(rng, n: int, field: str):
    """(mats, x0) with a planted direction on which every form, the
    objective included, is strongly negative -- the system is solvable.
    """
    m = 2 if field == REAL else 3
    w = _rand_unit(rng, n, field)
    mats = [_pin_value(_rand_herm(rng, n, field, 2.0), w,
                       -rng.uniform(3.0, 6.0)) for _ in range(m + 1)]
    return tuple(hermitian(a, field) for a in mats), w.copy()
