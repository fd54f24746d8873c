"""Constructive rank-one decompositions of PSD matrices against quadratic
forms.

Three levels, each adding one more form to control:

* decompose_two_forms -- split X into rank-one pieces so that every piece
  carries an equal share of one form value (real) or two (complex).
* extract_three_forms -- a single nonzero vector matching the values of
  three forms at X (real inputs follow the duplicated-first-form
  convention; three genuinely distinct real forms are attempted as an
  extension when the geometry allows it).
* extract_four_forms -- same for four forms inside a subspace on which no
  nonzero PSD matrix annihilates all four (see check_joint_definiteness).

All outputs are meant to be verified by substitution; the procedures are
deterministic.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.linalg as la
from scipy.optimize import brentq

from .ipm import SENSE_EQ, SENSE_LE, SdpSolverError, solve_cone_sdp
from .linalg import COMPLEX, REAL, HermitianMatrix, eig, hermitian


class DecompositionError(RuntimeError):
    """A constructive procedure could not complete."""


class JointDefinitenessError(DecompositionError):
    """The four-form extraction hypothesis failed; carries the violating
    PSD matrix (nonzero, supported on the subspace, annihilating every
    form) discovered as a by-product."""

    def __init__(self, message: str, violator: HermitianMatrix):
        super().__init__(message)
        self.violator = violator


@dataclass(frozen=True)
class RankOneDecomposition:
    """X = sum of x_k x_k^H with per-piece form-value guarantees."""

    vectors: tuple
    field: str

    @property
    def r(self) -> int:
        return len(self.vectors)

    def reconstruct(self) -> np.ndarray:
        n = self.vectors[0].shape[0]
        out = np.zeros((n, n), dtype=self.vectors[0].dtype)
        for v in self.vectors:
            out += np.outer(v, v.conj())
        return out


@dataclass(frozen=True)
class JointDefiniteness:
    """Outcome of the subspace joint-definiteness test.

    ``certified`` comes with a real combination vector whose weighted form
    sum is positive definite on the subspace; otherwise ``counterexample``
    holds a unit-trace PSD matrix annihilating every form there.
    """

    certified: bool
    counterexample: HermitianMatrix | None = None
    combination: np.ndarray | None = None


def _mat(a) -> np.ndarray:
    return a.mat if isinstance(a, HermitianMatrix) else np.asarray(a)


def _sym(a: np.ndarray) -> np.ndarray:
    return (a + a.conj().T) / 2


def _value(b: np.ndarray, v: np.ndarray) -> float:
    return float(np.vdot(v, b @ v).real)


def _cross(b: np.ndarray, u: np.ndarray, v: np.ndarray) -> complex:
    return complex(np.vdot(u, b @ v))


def _pieces_of(X: HermitianMatrix):
    """Eigen-split of PSD X into rank-one piece vectors sqrt(l_j) q_j."""
    d = eig(X)
    top = d.values[0] if d.values.size else 0.0
    if top <= 1e-13 * max(1.0, la.norm(_mat(X), "fro")) or top <= 0:
        raise DecompositionError("matrix is numerically zero")
    if d.values[-1] < -1e-9 * max(1.0, top):
        raise DecompositionError("matrix is not positive semidefinite")
    cut = 1e-9 * max(1.0, top)
    return [d.vectors[:, j] * np.sqrt(d.values[j])
            for j in range(X.n) if d.values[j] > cut]


def _both_gammas(a0: float, c: float, a2: float):
    """Real roots of a2 g^2 + 2 c g + a0 = 0, smaller magnitude first."""
    disc = c * c - a0 * a2
    if disc < 0:
        return []
    root = np.sqrt(disc)
    if a2 == 0.0:
        return [-a0 / (2 * c)] if c != 0 else []
    s = 1.0 if c >= 0 else -1.0
    big = (-c - s * root) / a2
    small = a0 / (a2 * big) if big != 0 else 0.0
    if abs(small) > abs(big):
        small, big = big, small
    return [small, big]


def _rotation_gamma(a0: float, c: float, a2: float) -> float:
    roots = _both_gammas(a0, c, a2)
    if not roots:
        raise DecompositionError("degenerate rotation (no real root)")
    small, big = roots[0], roots[-1]
    if abs(abs(small) - abs(big)) <= 1e-15 * (1 + abs(small)):
        return max(small, big)
    return small


def _equalize(pieces, form: np.ndarray, target: float, phase_lock=None):
    """Rotate piece pairs until every piece's form value hits target.

    With phase_lock = B (complex mode) each rotation uses the unit phase
    that keeps B's per-piece values invariant, so an earlier equalization
    against B survives.  Rotation pair: lowest-index piece above target
    with lowest-index piece below, per the determinism convention.
    """
    pieces = list(pieces)
    r = len(pieces)
    scale = max(1.0, max(abs(_value(form, p)) for p in pieces), abs(target))
    stop = 1e-12 * scale
    for _ in range(r * r + 1):
        vals = [_value(form, p) for p in pieces]
        above = [k for k, v in enumerate(vals) if v > target + stop]
        below = [k for k, v in enumerate(vals) if v < target - stop]
        if not above or not below:
            if max(abs(v - target) for v in vals) > 1e-9 * scale:
                raise DecompositionError("equalization stalled")
            return pieces
        i, j = above[0], below[0]
        pi, pj = pieces[i], pieces[j]
        c12 = _cross(form, pi, pj)
        if phase_lock is None:
            phase = 1.0
            c = c12.real
        else:
            lock = _cross(phase_lock, pi, pj)
            if abs(lock) > 1e-300:
                phase = np.exp(1j * (np.pi / 2 - np.angle(lock)))
            else:
                phase = 1.0
            c = (phase * c12).real
        g = _rotation_gamma(vals[i] - target, c, vals[j] - target)
        den = np.sqrt(1.0 + g * g)
        pieces[i] = (pi + g * phase * pj) / den
        pieces[j] = (-g * np.conj(phase) * pi + pj) / den
    raise DecompositionError("equalization exceeded its rotation budget")


def decompose_two_forms(X: HermitianMatrix, forms) -> RankOneDecomposition:
    """Split PSD X into rank-one pieces with equal per-piece form values.

    One form for real X, two for complex; every returned piece x_k then
    satisfies  A_j . (r x_k x_k^H) = A_j . X  for each supplied form.
    """
    forms = [forms] if isinstance(forms, HermitianMatrix) else list(forms)
    want = 1 if X.field == REAL else 2
    if len(forms) != want:
        raise ValueError(f"{X.field} decomposition takes exactly {want} "
                         f"form(s), got {len(forms)}")
    mats = [_mat(f) for f in forms]
    for m in mats:
        if m.shape != (X.n, X.n):
            raise ValueError("form dimension mismatch")
    pieces = _pieces_of(X)
    r = len(pieces)
    b1 = mats[0]
    pieces = _equalize(pieces, b1, float(np.vdot(X.mat, b1).real) / r)
    if X.field == COMPLEX:
        b2 = mats[1]
        pieces = _equalize(pieces, b2, float(np.vdot(X.mat, b2).real) / r,
                           phase_lock=b1)
    else:
        pieces = [np.ascontiguousarray(p.real, dtype=float) for p in pieces]
    return RankOneDecomposition(tuple(pieces), X.field)


# ---------------------------------------------------------------------------
# simultaneous zeros of two real quadratic forms in a small space


def _plane_mix(b2: np.ndarray, u: np.ndarray, v: np.ndarray):
    """Combinations of u and v annihilating b2, assuming both already
    annihilate the companion form along with their cross term."""
    a = _value(b2, u)
    c = _value(b2, v)
    x = _cross(b2, u, v).real
    cands = [(u + g * v) / np.sqrt(1 + g * g) for g in _both_gammas(a, x, c)]
    sc = max(abs(a), abs(c), abs(x), 1e-30)
    if abs(a) <= 1e-10 * sc:
        cands.append(u.copy())
    if abs(c) <= 1e-10 * sc:
        cands.append(v.copy())
    return cands


def _indefinite_mix(basis: np.ndarray, b2: np.ndarray):
    """Zeros of b2 inside the span of an isotropic basis of the other
    form (every vector there annihilates it)."""
    bb = _sym(basis.conj().T @ b2 @ basis)
    w, q = la.eigh(bb)
    out = []
    if w[0] < 0 < w[-1]:
        out.append(basis @ (q[:, -1] * np.sqrt(-w[0])
                            + q[:, 0] * np.sqrt(w[-1])))
    j = int(np.argmin(abs(w)))
    if abs(w[j]) <= 1e-9 * max(1.0, abs(w).max()):
        out.append(basis @ q[:, j])
    return out


def _double_zero_real(b1: np.ndarray, b2: np.ndarray, p1: np.ndarray,
                      p2: np.ndarray):
    """Vectors u in a real 3-space with u'B1u = 0 and u'B2u = 0.

    p1, p2 are known zeros of B1 with B2-values of opposite sign.  The
    isotropic set of B1 is walked exactly: the kernel when B1 is
    semidefinite, a pair of planes when B1 is indefinite of rank 2, and
    one nappe of a genuine cone (sign change of B2 bracketed on it) when
    B1 is indefinite of full rank.  Returns candidate vectors.
    """
    b1 = _sym(b1).real
    b2 = _sym(b2).real
    w, Q = la.eigh(b1)
    scale = max(1.0, abs(w).max())
    zero = abs(w) <= 1e-10 * scale
    pos = w > 1e-10 * scale
    neg = w < -1e-10 * scale
    if not pos.any() or not neg.any():
        kern = Q[:, zero]
        if kern.shape[1] == 0:
            return []
        cands = list(_indefinite_mix(kern, b2)) if kern.shape[1] >= 2 else []
        if kern.shape[1] == 1:
            cands.append(kern[:, 0])
        u = kern @ (kern.T @ p1)
        v = kern @ (kern.T @ p2)
        if la.norm(u) > 1e-10 and la.norm(v) > 1e-10:
            cands.extend(_plane_mix(b2, u / la.norm(u), v / la.norm(v)))
        return cands
    if zero.any():
        ip = int(np.where(pos)[0][-1])
        ineg = int(np.where(neg)[0][0])
        wp, wn = Q[:, ip], Q[:, ineg]
        sp, sn = np.sqrt(w[ip]), np.sqrt(-w[ineg])
        kvec = Q[:, zero][:, 0]
        cands = []
        for gen in (sn * wp + sp * wn, sn * wp - sp * wn):
            gen = gen / la.norm(gen)
            cands.extend(_indefinite_mix(np.stack([gen, kvec], axis=1), b2))
        return cands
    if b1.shape[0] < 3:
        # a 2-space with full-rank indefinite B1: isotropic directions are
        # the two cone lines; test each against b2
        sp, sn = np.sqrt(w[-1]), np.sqrt(-w[0])
        cands = []
        for gen in (sn * Q[:, -1] + sp * Q[:, 0], sn * Q[:, -1] - sp * Q[:, 0]):
            gen = gen / la.norm(gen)
            if abs(_value(b2, gen)) <= 1e-9 * max(1.0, la.norm(b2, 2)):
                cands.append(gen)
        return cands
    flip = pos.sum() < neg.sum()
    w, Q = la.eigh(-b1 if flip else b1)   # two positive, one negative
    l1, l2, l3 = w[2], w[1], w[0]
    w1, w2, w3 = Q[:, 2], Q[:, 1], Q[:, 0]

    def nappe(phi):
        return (np.cos(phi) * w1 / np.sqrt(l1)
                + np.sin(phi) * w2 / np.sqrt(l2) + w3 / np.sqrt(-l3))

    def g(phi):
        return _value(b2, nappe(phi))

    def witness_angle(p):
        s = 1.0 if float(w3 @ p) >= 0 else -1.0
        return float(np.arctan2(s * (w2 @ p) * np.sqrt(l2),
                                s * (w1 @ p) * np.sqrt(l1))) % (2 * np.pi)

    for npts in (65, 1025):
        grid = np.linspace(0.0, 2 * np.pi, npts)
        grid = np.sort(np.concatenate(
            [grid, [witness_angle(p1), witness_angle(p2)]]))
        gv = np.array([g(t) for t in grid])
        hits = [grid[k] for k in range(len(grid)) if gv[k] == 0.0]
        for k in range(len(grid) - 1):
            if gv[k] * gv[k + 1] < 0:
                hits.append(brentq(g, grid[k], grid[k + 1], xtol=1e-15))
        if hits:
            return [nappe(t) for t in hits]
    return []


# ---------------------------------------------------------------------------
# simultaneous zeros of three complex Hermitian forms in a 3-space


def _gauss_newton_zero(bmats, start: np.ndarray, iters: int = 80):
    u = start / la.norm(start)
    scale = max(1.0, max(la.norm(b, 2) for b in bmats))
    for _ in range(iters):
        f = np.array([_value(b, u) for b in bmats])
        if abs(f).max() <= 1e-13 * scale:
            break
        grads = [2.0 * (b @ u) for b in bmats]
        J = np.stack([np.concatenate([gr.real, gr.imag]) for gr in grads])
        h, *_ = la.lstsq(J, -f, rcond=None)
        d = u.shape[0]
        nxt = u + h[:d] + 1j * h[d:]
        nn = la.norm(nxt)
        if nn < 1e-14:
            break
        u = nxt / nn
    return u


def _triple_zero_complex(bmats, p1: np.ndarray, p2: np.ndarray):
    """Nonzero u in a complex space annihilating three Hermitian forms.

    p1 and p2 annihilate the first two forms, with third-form values of
    opposite sign.  Mixing them with a shared phase solves the system in
    closed form when the two cross terms are collinear; otherwise a
    deterministic multistart Gauss-Newton runs on the projective sphere,
    seeded by phase-grid mixes that already annihilate the third form.
    """
    b1, b2, b3 = bmats
    c1 = _cross(b1, p1, p2)
    c2 = _cross(b2, p1, p2)
    v1, v2 = _value(b3, p1), _value(b3, p2)
    scale = max(1.0, max(la.norm(b, 2) for b in bmats))

    def verified(u):
        return max(abs(_value(b, u)) for b in bmats) <= 1e-9 * scale

    denom = abs(c1) * abs(c2)
    if min(abs(c1), abs(c2)) <= 1e-11 * scale or \
            abs((c1 * np.conj(c2)).imag) <= 1e-11 * denom:
        ref = c1 if abs(c1) >= abs(c2) else c2
        phase = np.exp(1j * (np.pi / 2 - np.angle(ref))) if abs(ref) > 0 \
            else 1.0
        q2 = phase * p2
        x3 = _cross(b3, p1, q2).real
        for gcand in _both_gammas(v1, x3, v2):
            u = (p1 + gcand * q2) / np.sqrt(1 + gcand * gcand)
            if verified(u):
                return u
    starts = []
    for phi in np.linspace(0.0, 2 * np.pi, 17)[:-1]:
        q2 = np.exp(1j * phi) * p2
        x3 = _cross(b3, p1, q2).real
        for gcand in _both_gammas(v1, x3, v2):
            starts.append((p1 + gcand * q2) / np.sqrt(1 + gcand * gcand))
    rng = np.random.default_rng(20230228)
    d = p1.shape[0]
    for _ in range(12):
        z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        starts.append(z / la.norm(z))
    best, best_res = None, np.inf
    for s in starts:
        u = _gauss_newton_zero(bmats, s)
        res = max(abs(_value(b, u)) for b in bmats)
        if res < best_res:
            best, best_res = u, res
        if best_res <= 1e-11 * scale:
            break
    if best is None or best_res > 1e-9 * scale:
        raise DecompositionError(
            f"joint-zero search left residual {best_res:.2e}")
    return best


# ---------------------------------------------------------------------------


def _orthobasis(cols):
    """Orthonormal basis of span(cols), robust to near-dependence."""
    M = np.stack(cols, axis=1)
    U, s, _ = la.svd(M, full_matrices=False)
    keep = s > 1e-10 * (s[0] if s.size else 1.0)
    return U[:, keep]


def _third_direction(X: HermitianMatrix, pieces, V):
    """A unit vector extending span(pieces) by one dimension, drawn from
    Range(X) when possible, else from the supplied subspace basis."""
    B = _orthobasis(pieces)
    d = eig(X)
    cut = 1e-9 * max(1.0, d.values[0])
    pool = [d.vectors[:, j] for j in range(X.n) if d.values[j] > cut]
    if V is not None:
        Vm = np.asarray(V)
        pool.extend(Vm[:, j] for j in range(Vm.shape[1]))
    for q in pool:
        resid = q - B @ (B.conj().T @ q)
        nr = la.norm(resid)
        if nr > 1e-8:
            return resid / nr
    return None


def _zero_value_vector(X: HermitianMatrix, mats, V):
    """Nonzero x with all form values zero, given all values vanish at X.

    Equalizes the first field-many forms across the pieces (their shares
    are zero), then clears the last form by piece mixing: directly when a
    piece already annihilates it, else through the exact real cone walk /
    complex joint-zero search in a 3-space spanned inside V.
    """
    field = X.field
    pieces = _equalize(_pieces_of(X), mats[0], 0.0)
    if field == COMPLEX and len(mats) > 2:
        pieces = _equalize(pieces, mats[1], 0.0, phase_lock=mats[0])
    if field == REAL:
        pieces = [np.ascontiguousarray(p.real, dtype=float) for p in pieces]
    rest = mats[-1]
    scale = max(1.0, max(la.norm(m, 2) for m in mats)) * \
        max(la.norm(p) ** 2 for p in pieces)
    vals = [_value(rest, p) for p in pieces]
    k0 = int(np.argmin([abs(v) for v in vals]))
    if abs(vals[k0]) <= 1e-10 * scale:
        return pieces[k0]
    ip = [k for k, v in enumerate(vals) if v > 0]
    ineg = [k for k, v in enumerate(vals) if v < 0]
    if not ip or not ineg:
        raise DecompositionError("piece values do not bracket zero; the "
                                 "form values at X are inconsistent")
    p1 = pieces[ip[0]] / la.norm(pieces[ip[0]])
    p2 = pieces[ineg[0]] / la.norm(pieces[ineg[0]])
    q = _third_direction(X, [p1, p2], V)
    if q is None:
        raise DecompositionError("no third direction available; the "
                                 "subspace is effectively 2-dimensional")
    W = _orthobasis([p1, p2, q])
    if W.shape[1] < 3:
        raise DecompositionError("working basis collapsed below three "
                                 "dimensions")
    small = [_sym(W.conj().T @ m @ W) for m in mats]
    w1 = W.conj().T @ p1
    w2 = W.conj().T @ p2
    if field == REAL:
        cands = _double_zero_real(small[0].real, small[-1].real,
                                  w1.real, w2.real)
        best, best_res = None, np.inf
        for u in cands:
            res = max(abs(_value(b.real, u)) for b in small)
            if res < best_res:
                best, best_res = u, res
        if best is None or best_res > 1e-8 * scale:
            raise DecompositionError("no simultaneous zero found in the "
                                     "working 3-space")
        return np.ascontiguousarray(W.real @ best, dtype=float)
    u = _triple_zero_complex(small[:3] if len(small) >= 3 else
                             [small[0], small[0], small[-1]], w1, w2)
    return W @ u


def _distinct_nonzero(mats, scale):
    """Drop zero matrices, then deduplicate, preserving order."""
    keep = []
    for m in mats:
        if la.norm(m, "fro") <= 1e-12 * scale:
            continue
        if not any(np.allclose(m, k, atol=1e-12 * scale) for k in keep):
            keep.append(m)
    return keep


def _piece_route(X: HermitianMatrix, relatives, pivot: np.ndarray,
                 dpivot: float) -> np.ndarray:
    """Equalize the relative forms to zero over all pieces, then scale the
    piece with the largest positive pivot share (the shares sum to one,
    so one is always at least 1/r)."""
    if X.field == REAL:
        dec = decompose_two_forms(X, hermitian(relatives[0], REAL))
    else:
        pair = [relatives[0], relatives[1 % len(relatives)]] \
            if len(relatives) >= 2 else [relatives[0], relatives[0]]
        dec = decompose_two_forms(X, [hermitian(pair[0], COMPLEX),
                                      hermitian(pair[1], COMPLEX)])
    t = np.array([_value(pivot, p) for p in dec.vectors]) / dpivot
    k0 = int(np.argmax(t))
    if t[k0] <= 0:
        raise DecompositionError("no piece carries a positive pivot share")
    return dec.vectors[k0] / np.sqrt(t[k0])


def _distinct_real_route(X: HermitianMatrix, relatives, pivot: np.ndarray,
                         dpivot: float) -> np.ndarray:
    """Two genuinely distinct real relative forms: drive both to zero
    along Range(X), then rescale against the pivot — feasible only when
    some simultaneous zero has a pivot value of the right sign."""
    pieces = _equalize(_pieces_of(X), relatives[0], 0.0)
    pieces = [np.ascontiguousarray(p.real, dtype=float) for p in pieces]
    scale = max(1.0, max(la.norm(m, 2) for m in relatives)) * \
        max(la.norm(p) ** 2 for p in pieces)
    vals = [_value(relatives[1], p) for p in pieces]
    cands = []
    k0 = int(np.argmin([abs(v) for v in vals]))
    if abs(vals[k0]) <= 1e-10 * scale:
        cands.append(pieces[k0])
    else:
        ip = [k for k, v in enumerate(vals) if v > 0]
        ineg = [k for k, v in enumerate(vals) if v < 0]
        if not ip or not ineg:
            raise DecompositionError("relative values do not bracket zero")
        p1 = pieces[ip[0]] / la.norm(pieces[ip[0]])
        p2 = pieces[ineg[0]] / la.norm(pieces[ineg[0]])
        q = _third_direction(X, [p1, p2], None)
        basis = [p1, p2] + ([q.real] if q is not None else [])
        W = _orthobasis(basis).real
        got = _double_zero_real(W.T @ relatives[0] @ W,
                                W.T @ relatives[1] @ W, W.T @ p1, W.T @ p2)
        cands.extend(W @ u for u in got)
    for u in cands:
        if max(abs(_value(b, u)) for b in relatives) > 1e-8 * scale:
            continue
        s = _value(pivot, u) / dpivot
        if s > 1e-12:
            return u / np.sqrt(s)
    raise DecompositionError("no simultaneous zero matched the pivot sign; "
                             "three distinct real forms admit no scaling "
                             "here")


def extract_three_forms(X: HermitianMatrix, forms, V=None) -> np.ndarray:
    """Nonzero x whose three form values match those of X.

    When the value triple at X is nonzero the vector comes from Range(X);
    when it is identically zero a basis V containing Range(X) with at
    least three dimensions is required (Range(X) itself is used when its
    rank suffices and V is omitted), and x may use those directions.
    """
    forms = list(forms)
    if len(forms) != 3:
        raise ValueError("exactly three forms are required")
    dtype = complex if X.field == COMPLEX else float
    mats = [np.asarray(_mat(f), dtype=dtype) for f in forms]
    for m in mats:
        if m.shape != (X.n, X.n):
            raise ValueError("form dimension mismatch")
    delta = np.array([float(np.vdot(X.mat, m).real) for m in mats])
    scale = max(1.0, max(la.norm(m, "fro") for m in mats)) * \
        max(1.0, la.norm(X.mat, "fro"))
    if abs(delta).max() <= 1e-11 * scale:
        if V is None:
            d = eig(X)
            cut = 1e-9 * max(1.0, d.values[0])
            rank = int((d.values > cut).sum())
            if rank < 3:
                raise ValueError("zero value triple requires a subspace "
                                 "basis of dimension at least 3")
            V = d.vectors[:, :rank]
        Vm = np.asarray(V)
        if Vm.ndim != 2 or Vm.shape[1] < 3:
            raise ValueError("subspace dimension must be at least 3")
        if X.field == REAL:
            work = [mats[0], mats[-1]]
        else:
            work = mats
        return _zero_value_vector(X, work, Vm)
    j = int(np.argmax(abs(delta)))
    rel = [mats[k] - (delta[k] / delta[j]) * mats[j]
           for k in range(3) if k != j]
    rel = _distinct_nonzero(rel, scale)
    if not rel:
        rel = [np.zeros_like(mats[j])]
    if X.field == COMPLEX or len(rel) == 1:
        return _piece_route(X, rel, mats[j], delta[j])
    return _distinct_real_route(X, rel, mats[j], delta[j])


def extract_four_forms(X: HermitianMatrix, forms, V) -> np.ndarray:
    """Nonzero x in span(V) matching the four form values of X.

    Requires dim(V) >= 3 and the joint-definiteness hypothesis on V
    (no nonzero PSD matrix supported there annihilates all four forms);
    when the reduction itself refutes that hypothesis the violating
    matrix is raised inside a JointDefinitenessError.
    """
    forms = list(forms)
    if len(forms) != 4:
        raise ValueError("exactly four forms are required")
    Vm = np.asarray(V)
    if Vm.ndim != 2 or Vm.shape[1] < 3:
        raise ValueError("subspace dimension must be at least 3")
    dtype = complex if X.field == COMPLEX else float
    mats = [np.asarray(_mat(f), dtype=dtype) for f in forms]
    delta = np.array([float(np.vdot(X.mat, m).real) for m in mats])
    scale = max(1.0, max(la.norm(m, "fro") for m in mats)) * \
        max(1.0, la.norm(X.mat, "fro"))
    if abs(delta).max() <= 1e-11 * scale:
        raise JointDefinitenessError("X itself annihilates all four forms",
                                     X)
    j = int(np.argmax(abs(delta)))
    rel = [mats[k] - (delta[k] / delta[j]) * mats[j]
           for k in range(4) if k != j]
    rel = _distinct_nonzero(rel, scale)
    if not rel:
        # every form is proportional to the pivot; any direction with a
        # pivot value of the right sign works
        comp = _sym(Vm.conj().T @ mats[j] @ Vm)
        w, Q = la.eigh(comp)
        idx = int(np.argmax(np.sign(delta[j]) * w))
        if np.sign(delta[j]) * w[idx] <= 0:
            raise JointDefinitenessError(
                "pivot form is semidefinite against its own value sign",
                X)
        u = Vm @ Q[:, idx]
        return u / np.sqrt(_value(mats[j], u) / delta[j])
    if X.field == REAL:
        if len(rel) > 2:
            raise ValueError("real four-form extraction expects the "
                             "duplicated-first-form convention")
        work = [rel[0], rel[-1]]
    else:
        work = rel[:3] if len(rel) >= 3 else \
            ([rel[0], rel[1 % len(rel)], rel[-1]])
    u = _zero_value_vector(X, work, Vm)
    t0 = _value(mats[j], u) / delta[j]
    if t0 <= 1e-12:
        xt = _sym(np.outer(u, u.conj()) - t0 * X.mat)
        raise JointDefinitenessError(
            "reduction produced a PSD matrix annihilating all four forms",
            hermitian(xt, X.field))
    return u / np.sqrt(t0)


def check_joint_definiteness(forms, V, trials: int = 3) -> JointDefiniteness:
    """Decide whether the forms admit a definite combination on span(V).

    Solves  min sum_i t_i  over PSD diag(Y, t) with trace-one Y and
    |B_i . Y| <= t_i for the compressed forms B_i = V^H A_i V.  A strictly
    positive optimum certifies definiteness (the dual multipliers supply a
    combination with sum lambda_i B_i >= value I, checked numerically),
    while a zero optimum yields the annihilating unit-trace PSD
    counterexample lifted back to the full space.
    """
    forms = list(forms)
    if not forms or len(forms) > 4:
        raise ValueError("between one and four forms are expected")
    Vm = np.asarray(V)
    if Vm.ndim != 2 or Vm.shape[1] == 0:
        raise ValueError("subspace basis must have at least one column")
    if not np.allclose(Vm.conj().T @ Vm, np.eye(Vm.shape[1]), atol=1e-8):
        raise ValueError("subspace basis must be orthonormal")
    mats = [_mat(f) for f in forms]
    comp = [_sym(Vm.conj().T @ m @ Vm) for m in mats]
    is_cx = np.iscomplexobj(Vm) or any(np.iscomplexobj(c) for c in comp)
    if is_cx:
        from .sdp import embed_hermitian
        small = [embed_hermitian(np.asarray(c, dtype=complex)) / 2.0
                 for c in comp]
    else:
        small = [c.real for c in comp]
    d = small[0].shape[0]
    k = len(small)
    size = d + k

    def blocked(mat, slot, coeff):
        out = np.zeros((size, size))
        out[:d, :d] = mat
        out[d + slot, d + slot] = coeff
        return out

    C = np.zeros((size, size))
    for i in range(k):
        C[d + i, d + i] = 1.0
    rows = []
    for i, b in enumerate(small):
        rows.append((blocked(b, i, -1.0), 0.0, SENSE_LE))
        rows.append((blocked(-b, i, -1.0), 0.0, SENSE_LE))
    tr = np.zeros((size, size))
    tr[:d, :d] = np.eye(d)
    rows.append((tr, 1.0, SENSE_EQ))
    res, last_err = None, None
    for attempt in range(max(1, trials)):
        try:
            res = solve_cone_sdp(C, rows, tol=1e-9 * (10 ** attempt))
            break
        except SdpSolverError as exc:
            last_err = exc
            res = getattr(exc, "best", None)
    if res is None:
        raise DecompositionError(
            f"joint-definiteness test did not converge: {last_err}")
    value = float(res.primal_value)
    scale = max(1.0, max(la.norm(b, 2) for b in small))
    lam = np.array(res.nu[:2 * k]).reshape(k, 2)
    lam = lam[:, 0] - lam[:, 1]
    if value > 1e-8 * scale:
        combo = sum(l * b for l, b in zip(lam, small))
        if la.eigvalsh(combo)[0] >= 0.25 * value:
            return JointDefiniteness(True, combination=lam)
    Y = res.X[:d, :d]
    if is_cx:
        from .sdp import restrict_embedded
        Y = restrict_embedded(Y)
    w, Q = la.eigh(_sym(Y))
    w = np.where(w > 1e-9 * max(1.0, w[-1]), w, 0.0)
    Y = (Q * w) @ Q.conj().T
    trace = float(np.trace(Y).real)
    if trace <= 1e-12:
        raise DecompositionError("joint-definiteness test inconclusive: "
                                 "counterexample collapsed to zero")
    Y = Y / trace
    worst = max(abs(float(np.vdot(Y, c).real)) for c in comp)
    if worst > 1e-6 * scale:
        raise DecompositionError(
            f"joint-definiteness test inconclusive: candidate "
            f"counterexample leaves residual {worst:.2e}")
    lifted = _sym(Vm @ Y @ Vm.conj().T)
    field = COMPLEX if np.iscomplexobj(lifted) else REAL
    return JointDefiniteness(False, counterexample=hermitian(lifted, field))
