"""Exactness analysis of the relaxation and constructive recovery.

For instances with mf + 2 constraints the relaxation admits a complete
dichotomy, decided on a purified optimal pair: either a clause test holds
-- certifying that the relaxation value is strictly below every feasible
objective value of the original problem, or that the problem is infeasible
-- or a global optimizer of the original problem can be assembled from the
pair.  ``diagnose_gap`` implements the test, ``recover_optimum`` the
assembly; exactly one of ``diagnosis.holds`` / ``outcome == "recovered"``
applies to any analyzed pair.

The clause test works against the *relative forms*

    R_i = A_i - (c_i / c_m) A_m,

whose values vanish at any optimum with fully active constraints; the
clauses probe how a canonical two-piece split of X* sits against them.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.linalg as la

from .decomposition import (
    DecompositionError,
    JointDefinitenessError,
    check_joint_definiteness,
    decompose_two_forms,
    extract_three_forms,
    extract_four_forms,
)
from .ipm import SENSE_EQ, SENSE_LE
from .linalg import (
    COMPLEX,
    REAL,
    cross_form,
    eig,
    hermitian,
    null_basis,
    psd_rank,
    quad_form,
    zeros,
)
from .sdp import (
    DEFAULT_EPS1,
    DEFAULT_EPS2,
    Constraint,
    QcqpInstance,
    SdpPair,
    purify,
    solve_sdp,
)

OUTCOME_RECOVERED = "recovered"
OUTCOME_GAP = "gap_or_infeasible"

#: Verification gates every recovered point must pass (see TightnessVerdict).
FEASIBILITY_TOL = 1e-6
VALUE_TOL = 1e-5


class RecoveryError(RuntimeError):
    """A recovery construction failed a condition the theory guarantees.

    In practice this signals that the solver accuracy (eps1) was too loose
    for the rank and threshold decisions taken at eps2 -- a borderline
    instance -- not that the wrong branch ran.
    """


@dataclass(frozen=True)
class GapDiagnosis:
    """Clause-by-clause outcome of the exactness test on a purified pair.

    ``holds`` -- the conjunction of every applicable clause -- certifies
    that the relaxation value is unattainable for the original problem:
    its optimum is strictly worse, or it has no feasible point at all
    (the test cannot tell the two apart).  Any failed clause marks a
    recovery route instead.

    Clause meanings:

    * ``multipliers_ok``: every inequality multiplier exceeds eps2
      (equality rows are exempt);
    * ``dual_rank_ok``: rank(Z*, eps2) == n - 2;
    * ``primal_rank_ok``: rank(X*, eps2) == 2;
    * ``first_cross_ok``: the canonical split annihilates the first
      relative form on each witness (|values| <= eps2) while the real
      part of its cross term stays above eps2;
    * ``second_cross_ok`` (complex instances only, else None): same for
      the second relative form, whose cross term is phase-normalized onto
      the imaginary axis -- real part <= eps2, imaginary part > eps2;
    * ``split_ok``: the last relative form takes strictly opposite signs
      on the witnesses (product of values < -eps2**2).

    ``witnesses`` holds the canonical split (x1, x2) whenever
    rank(X*) == 2; the cross/split scalars next to it are the numbers the
    three decomposition clauses were decided on.
    """

    eps2: float
    field: str
    multipliers_ok: bool
    dual_rank_ok: bool
    primal_rank_ok: bool
    first_cross_ok: bool
    second_cross_ok: bool | None
    split_ok: bool
    rank_primal: int
    rank_dual: int
    witnesses: tuple | None = None
    first_cross: float = 0.0
    second_cross: float = 0.0
    split_values: tuple = (0.0, 0.0)

    @property
    def holds(self) -> bool:
        ok = (self.multipliers_ok and self.dual_rank_ok
              and self.primal_rank_ok and self.first_cross_ok
              and self.split_ok)
        if self.field == COMPLEX:
            ok = ok and bool(self.second_cross_ok)
        return ok


@dataclass(frozen=True)
class TightnessVerdict:
    """Final answer for one instance.

    ``outcome`` is either OUTCOME_RECOVERED -- with ``x`` a verified
    global optimizer (feasible within 1e-6 per constraint, objective
    within 1e-5 relative of the relaxation value) and ``value`` its
    objective -- or OUTCOME_GAP with no point, exactly when
    ``diagnosis.holds``.
    """

    diagnosis: GapDiagnosis
    outcome: str
    x: np.ndarray | None = None
    value: float | None = None

    @property
    def recovered(self) -> bool:
        return self.outcome == OUTCOME_RECOVERED


def _require_family(inst: QcqpInstance) -> None:
    if inst.m != inst.mf + 2:
        raise ValueError(
            f"the exactness analysis covers instances with {inst.mf + 2} "
            f"constraints over the {inst.field} field, got {inst.m}")


def _relative_forms(inst: QcqpInstance):
    """R_i = A_i - (c_i/c_m) A_m for every constraint but the last."""
    mats = [con.matrix.mat for con in inst.constraints]
    cs = np.array([con.bound for con in inst.constraints])
    return [mats[i] - (cs[i] / cs[-1]) * mats[-1] for i in range(inst.m - 1)]


def _canonical_split(inst: QcqpInstance, X, eps2: float):
    """The witness pair (x1, x2) of a rank-2 X.

    Both pieces carry equal shares of the leading relative form(s); on a
    complex instance the second relative form's cross term is then pushed
    onto the imaginary axis by a unit phase on x2 (left alone when its
    magnitude is already below eps2 -- nothing to normalize).
    """
    rel = _relative_forms(inst)
    if inst.field == REAL:
        dec = decompose_two_forms(X, hermitian(rel[0], REAL))
        return dec.vectors
    dec = decompose_two_forms(
        X, [hermitian(rel[0], COMPLEX), hermitian(rel[1], COMPLEX)])
    x1, x2 = dec.vectors
    cr = cross_form(rel[1], x1, x2)
    if abs(cr) > eps2:
        x2 = x2 * np.exp(1j * (np.pi / 2 - np.angle(cr)))
    return x1, x2


def diagnose_gap(inst: QcqpInstance, pair: SdpPair,
                 eps2: float = DEFAULT_EPS2) -> GapDiagnosis:
    """Run the exactness test on a purified optimal pair.

    The pair must come from ``purify`` at the same eps2 so the rank
    decisions are stable.  Witnesses are attached whenever rank(X*) == 2
    -- regardless of the earlier clauses -- so callers can reuse the
    canonical split.
    """
    _require_family(inst)
    if eps2 <= 0:
        raise ValueError("eps2 must be positive")
    mu_ok = all(pair.mu[i] > eps2
                for i, con in enumerate(inst.constraints)
                if con.sense == SENSE_LE)
    rz = psd_rank(pair.Z, eps2)
    rx = psd_rank(pair.X, eps2)
    dual_ok = rz == inst.n - 2
    primal_ok = rx == 2
    if rx != 2:
        return GapDiagnosis(eps2, inst.field, mu_ok, dual_ok, primal_ok,
                            False, None if inst.field == REAL else False,
                            False, rx, rz)
    x1, x2 = _canonical_split(inst, pair.X, eps2)
    rel = _relative_forms(inst)
    cr1 = cross_form(rel[0], x1, x2)
    first_ok = (abs(quad_form(rel[0], x1)) <= eps2
                and abs(quad_form(rel[0], x2)) <= eps2
                and abs(cr1.real) > eps2)
    if inst.field == COMPLEX:
        cr2 = cross_form(rel[1], x1, x2)
        second_ok = (abs(quad_form(rel[1], x1)) <= eps2
                     and abs(quad_form(rel[1], x2)) <= eps2
                     and abs(cr2.real) <= eps2 and abs(cr2.imag) > eps2)
        second_val = cr2.imag
    else:
        second_ok, second_val = None, 0.0
    v1 = quad_form(rel[-1], x1)
    v2 = quad_form(rel[-1], x2)
    return GapDiagnosis(eps2, inst.field, mu_ok, dual_ok, primal_ok,
                        first_ok, second_ok, v1 * v2 < -eps2 * eps2, rx, rz,
                        witnesses=(x1, x2), first_cross=float(cr1.real),
                        second_cross=float(second_val),
                        split_values=(v1, v2))


# ---------------------------------------------------------------------------
# recovery constructions


def recover_zero_multiplier(inst: QcqpInstance, pair: SdpPair,
                            i0: int) -> np.ndarray:
    """Rank-<=1 optimal recovery when inequality multiplier i0 vanishes.

    Dropping the slack row leaves mf + 1 active forms -- few enough for
    the two-form splitter to zero all their relative forms piece by piece
    -- and one piece rescales onto the original form values.  Returns the
    recovered vector, possibly the zero vector; the result reproduces the
    active form values of X*, respects the dropped row's slack, and keeps
    the objective value (all verified before return).
    """
    _require_family(inst)
    if inst.constraints[i0].sense != SENSE_LE:
        raise ValueError("the dropped constraint must be an inequality")
    dtype = complex if inst.field == COMPLEX else float
    X = pair.X
    mats = [c.matrix.mat for c in inst.constraints]
    delta = inst.constraint_values(X)
    others = [i for i in range(inst.m) if i != i0]
    scale = max(1.0, la.norm(X.mat, "fro")) * max(
        1.0, max(la.norm(m, "fro") for m in mats))

    def checked(x):
        vals = inst.point_values(x)
        for i in others:
            if abs(vals[i] - delta[i]) > 1e-6 * max(1.0, abs(delta[i])):
                raise RecoveryError(
                    f"recovered point misses the active form value of "
                    f"constraint {i} by {abs(vals[i] - delta[i]):.2e}")
        if vals[i0] > delta[i0] + 1e-6 * max(1.0, abs(delta[i0])):
            raise RecoveryError(
                "recovered point overshoots the dropped row's slack")
        obj = quad_form(inst.objective, x)
        if abs(obj - pair.primal_value) > \
                1e-6 * max(1.0, abs(pair.primal_value)):
            raise RecoveryError(
                f"recovered point shifts the objective by "
                f"{abs(obj - pair.primal_value):.2e}")
        return x

    if max(abs(delta[i]) for i in others) <= 1e-9 * scale:
        # every active form vanishes at X*; the slack row is nonnegative
        # there, so the zero vector inherits feasibility and the (zero)
        # objective value
        if delta[i0] < -1e-7 * scale:
            raise RecoveryError(
                "the dropped inequality is negative at the optimum while "
                "all active forms vanish; the pair is inconsistent")
        return checked(np.zeros(inst.n, dtype=dtype))
    j = max(others, key=lambda i: abs(delta[i]))
    relatives = [mats[i] - (delta[i] / delta[j]) * mats[j]
                 for i in others if i != j]
    if inst.field == REAL:
        dec = decompose_two_forms(X, hermitian(relatives[0], REAL))
    else:
        dec = decompose_two_forms(
            X, [hermitian(r, COMPLEX) for r in relatives])
    dropped = mats[i0] - (delta[i0] / delta[j]) * mats[j]
    # the dropped row's relative values sum to ~0 across pieces, so the
    # smallest one is the nonpositive share the construction needs
    k0 = min(range(dec.r), key=lambda k: quad_form(dropped, dec.vectors[k]))
    piece = dec.vectors[k0]
    t0 = quad_form(mats[j], piece) / delta[j]
    if t0 <= 1e-12:
        raise RecoveryError(
            "no piece carries a positive share of the pivot form; this "
            "contradicts the strict dual interior the model assumes")
    return checked(piece / np.sqrt(t0))


def _rank_one_vector(X, eps2: float, dtype) -> np.ndarray:
    """The vector of a rank-<=1 purified X (zero vector for rank 0)."""
    d = eig(X)
    if d.values.size == 0 or d.values[0] <= eps2:
        return np.zeros(X.n, dtype=dtype)
    return (np.sqrt(d.values[0]) * d.vectors[:, 0]).astype(dtype)


def _polish_on_values(inst: QcqpInstance, pair: SdpPair, x: np.ndarray,
                      eps2: float, iters: int = 8) -> np.ndarray:
    """Least-squares corrector steps pushing a candidate onto the bounds
    of the active constraints (objective value included as a row).

    Truncating eigenvalue mass between the solver noise floor and eps2
    leaks a few parts in 1e-6 into the constraint values when that mass
    is genuine; the corrector absorbs it.  Active bounds -- not the
    truncated matrix's form values, which inherit the leak -- are the
    right targets: rows with a multiplier above eps2 hold with equality
    at any optimum, and equality rows always do.
    """
    mats = [inst.objective.mat]
    target = [pair.primal_value]
    for i, con in enumerate(inst.constraints):
        if con.sense == SENSE_EQ or pair.mu[i] > eps2:
            mats.append(con.matrix.mat)
            target.append(con.bound)
    target = np.array(target)
    stop = 1e-11 * np.abs(target).max() if target.size else 0.0
    y = x.copy()
    for _ in range(iters):
        resid = np.array([float(np.real(np.vdot(y, a @ y)))
                          for a in mats]) - target
        if np.abs(resid).max() <= stop:
            break
        grads = np.stack([2.0 * (a @ y) for a in mats])
        if inst.field == REAL:
            step, *_ = la.lstsq(grads.real, resid, rcond=None)
            y = y - step
        else:
            jac = np.concatenate([grads.real, grads.imag], axis=1)
            step, *_ = la.lstsq(jac, resid, rcond=None)
            y = y - (step[:inst.n] + 1j * step[inst.n:])
        if not np.isfinite(y).all():
            return x
    return y


def _null_space_recovery(inst: QcqpInstance, pair: SdpPair) -> np.ndarray:
    """Optimizer from a dual null space of dimension >= 3.

    All constraint forms are matched at once inside Null(Z*), which is
    possible exactly because no nonzero PSD matrix supported there
    annihilates every form (screened first; its absence would contradict
    the strict dual interior).
    """
    cut = 1e-9 * max(1.0, float(la.norm(pair.Z.mat, 2)))
    V = null_basis(pair.Z, cut)
    if V.shape[1] < 3:
        raise RecoveryError(
            "the dual matrix leaves fewer than three null directions; the "
            "subspace recovery step cannot run at this accuracy")
    mats = [con.matrix for con in inst.constraints]
    try:
        screen = check_joint_definiteness(mats, V)
    except DecompositionError as exc:
        raise RecoveryError(
            f"joint-definiteness screen did not settle: {exc}") from exc
    if not screen.certified:
        raise RecoveryError(
            "a nonzero PSD matrix on the dual null space annihilates every "
            "constraint form; the strict dual interior the model assumes "
            "is numerically absent")
    forms = [mats[0], mats[0], mats[1], mats[2]] if inst.field == REAL \
        else mats
    try:
        return extract_four_forms(pair.X, forms, V)
    except JointDefinitenessError as exc:
        raise RecoveryError(
            "the subspace extraction surfaced a PSD annihilator the screen "
            "missed; solver accuracy is too loose for this instance"
        ) from exc
    except DecompositionError as exc:
        raise RecoveryError(f"subspace extraction failed: {exc}") from exc


def _rotation_root(a: float, b: float, c: float, scale: float,
                   strict: bool) -> float:
    """Root of  a t^2 + 2 b t + c = 0  for the witness rotation.

    Strict mode (used when the split clause holds) insists on the
    guaranteed configuration -- two real roots of opposite signs -- and
    returns the positive one.  Lenient mode serves the nearly-degenerate
    call where a and c both sit at noise level; any real root (or 0 when
    the equation is trivial) zeroes the target form on the first piece.
    """
    tiny = 1e-13 * scale
    if abs(a) <= tiny:
        if strict:
            raise RecoveryError(
                "the split rotation equation degenerated (leading "
                "coefficient at noise level)")
        if abs(b) <= tiny:
            if abs(c) > tiny:
                raise RecoveryError(
                    "the split rotation equation is infeasible")
            return 0.0
        if abs(c) <= tiny:
            return 0.0
        return -c / (2.0 * b)
    disc = b * b - a * c
    if disc <= 0:
        raise RecoveryError("the split rotation equation has no real roots")
    s = 1.0 if b >= 0 else -1.0
    q = -(b + s * np.sqrt(disc))
    roots = [q / a]
    if q != 0:
        roots.append(c / q)
    pos = [t for t in roots if t > 0]
    if strict:
        if not pos or len(pos) == len(roots):
            raise RecoveryError(
                "the split rotation equation lost its opposite-sign roots")
        return min(pos)
    if pos:
        return min(pos)
    return min(roots, key=abs)


def _split_candidates(inst: QcqpInstance, diag: GapDiagnosis):
    """Candidate optimizers built from the witness pair.

    A witness that annihilates every relative form rescales onto the
    bound pattern directly.  When the split clause held (the last
    relative form changed sign across the pair) the guaranteed rotation
    through its quadratic is applied first; when it failed, the raw pair
    is tried as-is, plus -- if the first relative form's cross term is
    small enough not to be disturbed -- the same rotation as a repair.
    """
    x1, x2 = diag.witnesses
    rel = _relative_forms(inst)
    a = quad_form(rel[-1], x1)
    b = cross_form(rel[-1], x1, x2).real
    c = quad_form(rel[-1], x2)
    scale = max(1.0, abs(a), abs(b), abs(c))

    def rotated(t):
        den = np.sqrt(1.0 + t * t)
        return (t * x1 + x2) / den, (-x1 + t * x2) / den

    pairs = []
    if diag.split_ok:
        pairs.append(rotated(_rotation_root(a, b, c, scale, strict=True)))
    else:
        pairs.append((x1, x2))
        lock = abs(cross_form(rel[0], x1, x2).real)
        lock_scale = max(1.0, float(la.norm(rel[0], 2))
                         * max(la.norm(x1), la.norm(x2)) ** 2)
        if lock <= 1e-7 * lock_scale:
            t = _rotation_root(a, b, c, scale, strict=False)
            if t != 0.0:
                pairs.append(rotated(t))
    last = inst.constraints[-1]
    out = []
    for y1, y2 in pairs:
        t1 = quad_form(last.matrix, y1) / last.bound
        t2 = quad_form(last.matrix, y2) / last.bound
        if t1 <= 1e-12 or t2 <= 1e-12:
            continue
        out.append(y1 / np.sqrt(t1))
    if not out:
        raise RecoveryError(
            "no witness carries a positive share of the bound form; the "
            "strict dual interior the model assumes is numerically absent")
    return out


def _range_recovery(inst: QcqpInstance, pair: SdpPair) -> np.ndarray:
    """Complex-only route when the second relative form is flat on
    Range(X*): match the other three form values there directly; the
    second one then follows from flatness (and is re-verified by the
    caller's feasibility gate)."""
    mats = [con.matrix.mat for con in inst.constraints]
    try:
        return extract_three_forms(pair.X, [mats[0], mats[2], mats[3]])
    except DecompositionError as exc:
        raise RecoveryError(
            f"three-form extraction on the optimal range failed: {exc}"
        ) from exc


def _verdict(inst: QcqpInstance, pair: SdpPair, diag: GapDiagnosis,
             candidates) -> TightnessVerdict:
    """Verify candidates in order; first one through the gates wins."""
    worst = None
    for x in candidates:
        viol = inst.feasibility_violation(x)
        val = quad_form(inst.objective, x)
        verr = abs(val - pair.primal_value) \
            / max(1.0, abs(pair.primal_value))
        if viol <= FEASIBILITY_TOL and verr <= VALUE_TOL:
            return TightnessVerdict(diag, OUTCOME_RECOVERED, x, val)
        score = max(viol / FEASIBILITY_TOL, verr / VALUE_TOL)
        if worst is None or score < worst[0]:
            worst = (score, viol, verr)
    raise RecoveryError(
        f"recovered point failed verification: constraint violation "
        f"{worst[1]:.2e} (gate {FEASIBILITY_TOL:.0e}), relative value "
        f"error {worst[2]:.2e} (gate {VALUE_TOL:.0e})")


def recover_optimum(inst: QcqpInstance, pair: SdpPair,
                    eps2: float = DEFAULT_EPS2) -> TightnessVerdict:
    """Decide exactness; when the test fails, build a global optimizer.

    Dispatch follows the constructive argument, earliest applicable
    branch first: slack multiplier, rank of X* below 2, oversized dual
    null space, sign-split failure, vanished first cross term, vanished
    imaginary cross term (complex).  Every recovered point is verified
    against the instance's own senses and the relaxation value before
    return; a guaranteed condition failing numerically raises
    RecoveryError naming the step.
    """
    diag = diagnose_gap(inst, pair, eps2)
    if diag.holds:
        return TightnessVerdict(diag, OUTCOME_GAP)
    dtype = complex if inst.field == COMPLEX else float
    slack = [i for i, con in enumerate(inst.constraints)
             if con.sense == SENSE_LE and pair.mu[i] <= eps2]
    if slack:
        i0 = min(slack, key=lambda i: pair.mu[i])
        return _verdict(inst, pair, diag,
                        [recover_zero_multiplier(inst, pair, i0)])
    if diag.rank_primal < 2:
        x = _rank_one_vector(pair.X, eps2, dtype)
        cands = [x] if not np.any(x) else \
            [_polish_on_values(inst, pair, x, eps2), x]
        return _verdict(inst, pair, diag, cands)
    if diag.rank_dual <= inst.n - 3 or diag.rank_primal >= 3:
        return _verdict(inst, pair, diag, [_null_space_recovery(inst, pair)])
    if not diag.split_ok or not diag.first_cross_ok:
        return _verdict(inst, pair, diag, _split_candidates(inst, diag))
    if inst.field == COMPLEX and not diag.second_cross_ok:
        return _verdict(inst, pair, diag, [_range_recovery(inst, pair)])
    raise RecoveryError(
        "no recovery branch applies: the clause pattern is inconsistent "
        "with complementarity at this accuracy")


# ---------------------------------------------------------------------------
# public pipelines


def solve_and_diagnose(inst: QcqpInstance, eps1: float = DEFAULT_EPS1,
                       eps2: float = DEFAULT_EPS2):
    """Solve, purify, and analyze one instance.

    Returns ``(pair, verdict)`` with the purified pair.
    """
    _require_family(inst)
    pair = purify(solve_sdp(inst, eps1), eps2)
    return pair, recover_optimum(inst, pair, eps2)


def solve_exact(inst: QcqpInstance, eps1: float = DEFAULT_EPS1,
                eps2: float = DEFAULT_EPS2) -> TightnessVerdict:
    """Globally solve an instance with one constraint fewer than the
    exactness family (mf + 1) by padding it with a trivial equality.

    The padded instance can never pass the exactness test -- its first
    relative form is identically zero, so the first cross clause always
    fails -- hence the pipeline always lands in a recovery branch: the
    relaxation is tight for this family and the verdict carries a
    verified optimizer.
    """
    if inst.m != inst.mf + 1:
        raise ValueError(
            f"expected {inst.mf + 1} constraints over the {inst.field} "
            f"field, got {inst.m}")
    pad = Constraint(zeros(inst.n, inst.field), 0.0, SENSE_EQ)
    aug = QcqpInstance(inst.field, inst.objective,
                       (pad,) + tuple(inst.constraints))
    pair = purify(solve_sdp(aug, eps1), eps2)
    return recover_optimum(aug, pair, eps2)
