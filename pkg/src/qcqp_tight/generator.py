"""Random instance family for the exactness experiments.

Construction, per instance: draw the objective and all but the last
constraint matrix entrywise uniform and Hermitian-symmetrized; make the
last matrix special so the all-ones multiplier vector is a strict dual
interior point (their total is a positive definite matrix with smallest
eigenvalue >= 1); draw the bounds as form values at a random point plus a
positive slack so that point is a strict primal interior point.  Both
Slater conditions therefore hold by construction.  Every constraint is an
inequality.

Instances are deterministic in (seed, index): each index gets its own
generator stream (seed XOR index), so any single instance can be
regenerated without replaying the sweep.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.linalg as la

from .ipm import SENSE_LE
from .linalg import COMPLEX, REAL, hermitian
from .sdp import Constraint, QcqpInstance

#: Bounds whose magnitude falls below this are redrawn: the exactness
#: analysis divides by the last bound, and a zero there is degenerate.
MIN_LAST_BOUND = 1e-6

_RESAMPLE_CAP = 100


class GenerationError(RuntimeError):
    """The bound resampling loop exhausted its draw budget."""


@dataclass(frozen=True)
class GeneratorConfig:
    """Knobs of the random family.

    ``entry_range`` scales the uniform entries of the free matrices,
    ``z_range`` those of the matrix seeding the positive definite total.
    ``constraint_count`` overrides the exactness-family constraint count
    (three real / four complex), e.g. one fewer for the always-exact
    reduced family; the construction is the same at any count.
    """

    field: str
    n: int
    seed: int
    count: int
    entry_range: float = 10.0
    z_range: float = 40.0
    constraint_count: int | None = None

    def __post_init__(self):
        if self.field not in (REAL, COMPLEX):
            raise ValueError(f"unknown field {self.field!r}")
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if self.count < 1:
            raise ValueError("count must be at least 1")
        if self.entry_range <= 0 or self.z_range <= 0:
            raise ValueError("entry ranges must be positive")
        if self.constraint_count is not None and self.constraint_count < 1:
            raise ValueError("constraint_count must be at least 1")


def _uniform_hermitian(rng: np.random.Generator, n: int, field: str,
                       radius: float) -> np.ndarray:
    w = rng.uniform(-radius, radius, (n, n))
    if field == COMPLEX:
        w = w + 1j * rng.uniform(-radius, radius, (n, n))
    return (w + w.conj().T) / 2.0


def _uniform_vector(rng: np.random.Generator, n: int, field: str) -> np.ndarray:
    x = rng.uniform(-1.0, 1.0, n)
    if field == COMPLEX:
        x = x + 1j * rng.uniform(-1.0, 1.0, n)
    return x


def generate_instance(cfg: GeneratorConfig, index: int) -> QcqpInstance:
    """Instance number ``index`` of the family described by ``cfg``.

    The constraint count defaults to the exactness-family size for the
    field (three real, four complex); all senses are "<=".
    """
    if not 0 <= index:
        raise ValueError("index must be nonnegative")
    rng = np.random.default_rng(np.uint64(cfg.seed) ^ np.uint64(index))
    n = cfg.n
    m = cfg.constraint_count
    if m is None:
        m = 3 if cfg.field == REAL else 4

    free = [_uniform_hermitian(rng, n, cfg.field, cfg.entry_range)
            for _ in range(m)]  # objective plus the first m-1 constraints
    w = _uniform_hermitian(rng, n, cfg.field, cfg.z_range)
    lo = float(la.eigvalsh(w)[0])
    z = w if lo >= 1.0 else w + (1.0 - lo) * np.eye(n)
    special = z - sum(free)

    forms = free[1:] + [special]
    for _ in range(_RESAMPLE_CAP):
        x = _uniform_vector(rng, n, cfg.field)
        bounds = [float(np.real(np.vdot(x, a @ x))) + rng.uniform(0.5, 1.5)
                  for a in forms]
        if abs(bounds[-1]) >= MIN_LAST_BOUND:
            break
    else:
        raise GenerationError(
            f"no usable last bound in {_RESAMPLE_CAP} draws for "
            f"(seed={cfg.seed}, index={index})")

    cons = tuple(Constraint(hermitian(a, cfg.field), b, SENSE_LE)
                 for a, b in zip(forms, bounds))
    return QcqpInstance(cfg.field, hermitian(free[0], cfg.field), cons)
