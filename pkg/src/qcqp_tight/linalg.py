"""Dense Hermitian matrix primitives: construction, inner products,
eigendecomposition, numerical rank and null spaces.

All matrices carry an explicit scalar-field tag (``"real"`` or
``"complex"``).  Real-field matrices are stored with float entries and are
guaranteed to stay exactly real through every operation; complex-field
matrices are Hermitian complex arrays.  Hermitian symmetry is enforced by
construction: only the lower triangle of the input is used, the upper
triangle is mirrored and the diagonal is projected onto the reals.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

REAL = "real"
COMPLEX = "complex"

#: tolerance for the eigendecomposition reconstruction contract
TOL_EIG = 1e-10


class FieldMismatchError(ValueError):
    """Raised when operands carry different scalar fields or dimensions."""


def _square_array(entries) -> np.ndarray:
    a = np.asarray(entries)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] == 0:
        raise ValueError("empty matrix")
    if not np.all(np.isfinite(a.view(np.float64) if a.dtype == np.complex128 else a)):
        raise ValueError("matrix entries must be finite")
    return a


def _mirror_lower(a: np.ndarray) -> np.ndarray:
    """Rebuild a Hermitian matrix from the lower triangle of ``a``."""
    lower = np.tril(a, -1)
    return lower + lower.conj().T + np.diag(a.diagonal().real)


@dataclass(frozen=True)
class HermitianMatrix:
    """An n-by-n Hermitian matrix tagged with its scalar field.

    ``mat`` is always exactly Hermitian (``mat == mat.conj().T`` entrywise)
    because construction mirrors the lower triangle; for the real field the
    storage dtype is float64, so imaginary parts are structurally zero.
    """

    field: str
    mat: np.ndarray

    def __post_init__(self):
        if self.field not in (REAL, COMPLEX):
            raise ValueError(f"unknown field {self.field!r}")
        a = _square_array(self.mat)
        if self.field == REAL:
            if np.iscomplexobj(a):
                if np.any(a.imag != 0.0):
                    raise FieldMismatchError(
                        "real-field matrix has nonzero imaginary entries")
                a = a.real
            a = a.astype(np.float64, copy=True)
        else:
            a = a.astype(np.complex128, copy=True)
        a = _mirror_lower(a)
        a.setflags(write=False)
        object.__setattr__(self, "mat", a)

    @property
    def n(self) -> int:
        return self.mat.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.mat, dtype=dtype)


def hermitian(entries, field: str | None = None) -> HermitianMatrix:
    """Build a :class:`HermitianMatrix`, inferring the field from the dtype.

    A complex array with an exactly-zero imaginary part is still complex
    unless ``field="real"`` is forced.
    """
    a = _square_array(entries)
    if field is None:
        field = COMPLEX if np.iscomplexobj(a) else REAL
    return HermitianMatrix(field, a)


def identity(n: int, field: str = REAL) -> HermitianMatrix:
    return HermitianMatrix(field, np.eye(n))


def zeros(n: int, field: str = REAL) -> HermitianMatrix:
    return HermitianMatrix(field, np.zeros((n, n)))


def _mat(a) -> np.ndarray:
    return a.mat if isinstance(a, HermitianMatrix) else np.asarray(a)


def inner_product(a, b) -> float:
    """Trace inner product ``tr(B^H A)``, real for Hermitian arguments.

    The imaginary part (pure roundoff for Hermitian inputs) is dropped.
    """
    am, bm = _mat(a), _mat(b)
    if am.shape != bm.shape:
        raise FieldMismatchError(
            f"dimension mismatch: {am.shape} vs {bm.shape}")
    if isinstance(a, HermitianMatrix) and isinstance(b, HermitianMatrix):
        if a.field != b.field:
            raise FieldMismatchError(f"field mismatch: {a.field} vs {b.field}")
    # tr(B^H A) = sum_ij conj(B_ij) A_ij
    return float(np.vdot(bm, am).real)


def quad_form(a, x: np.ndarray) -> float:
    """Quadratic form ``x^H A x`` (real for Hermitian ``A``)."""
    am = _mat(a)
    x = np.asarray(x)
    return float(np.real(np.vdot(x, am @ x)))


def cross_form(a, x: np.ndarray, y: np.ndarray) -> complex:
    """Sesquilinear cross term ``x^H A y`` (complex in general)."""
    am = _mat(a)
    return complex(np.vdot(np.asarray(x), am @ np.asarray(y)))


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues in descending order with matching orthonormal columns."""

    values: np.ndarray
    vectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        q = self.vectors
        return (q * self.values) @ q.conj().T


def eig(a) -> EigenDecomposition:
    """Full eigendecomposition of a Hermitian matrix, descending order.

    Deterministic for a fixed input: after sorting, each eigenvector is
    normalized so its largest-magnitude entry is real and positive.
    """
    am = _mat(a)
    vals, vecs = np.linalg.eigh(am)
    order = np.argsort(vals)[::-1]
    vals = np.ascontiguousarray(vals[order])
    vecs = np.ascontiguousarray(vecs[:, order])
    for j in range(vecs.shape[1]):
        col = vecs[:, j]
        k = int(np.argmax(np.abs(col)))
        pivot = col[k]
        if np.abs(pivot) > 0:
            vecs[:, j] = col * (np.conj(pivot) / np.abs(pivot))
    if not np.iscomplexobj(am):
        vecs = vecs.real
    vals.setflags(write=False)
    vecs.setflags(write=False)
    return EigenDecomposition(vals, vecs)


def psd_rank(a, eps: float) -> int:
    """Number of eigenvalues strictly greater than ``eps``."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    return int(np.count_nonzero(eig(a).values > eps))


def null_basis(a, eps: float) -> np.ndarray:
    """Orthonormal columns spanning the eigenspaces with ``|lambda| <= eps``.

    Intended for (approximately) PSD matrices such as purified duals; the
    returned block can be empty (shape ``(n, 0)``).
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    d = eig(a)
    keep = np.abs(d.values) <= eps
    return np.ascontiguousarray(d.vectors[:, keep])


def project_psd(a: np.ndarray, floor: float = 0.0) -> np.ndarray:
    """Clip eigenvalues below ``floor`` (used to tidy nearly-PSD iterates)."""
    d = eig(a)
    vals = np.maximum(d.values, floor)
    return (d.vectors * vals) @ d.vectors.conj().T
