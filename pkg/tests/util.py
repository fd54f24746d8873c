"""Shared helpers for the test suite."""
import numpy as np

from qcqp_tight import COMPLEX, hermitian


def rand_herm(rng, n, field, scale=1.0):
    """Dense Hermitian draw with entries of size ~scale."""
    w = rng.uniform(-scale, scale, (n, n))
    if field == COMPLEX:
        w = w + 1j * rng.uniform(-scale, scale, (n, n))
    return (w + w.conj().T) / 2.0


def rand_psd(rng, n, rank, field):
    """Random PSD matrix of exact rank, as a HermitianMatrix."""
    g = rng.standard_normal((n, rank))
    if field == COMPLEX:
        g = g + 1j * rng.standard_normal((n, rank))
    return hermitian(g @ g.conj().T, field)


def rand_frame(rng, n, k, field):
    """Orthonormal n x k basis."""
    g = rng.standard_normal((n, k))
    if field == COMPLEX:
        g = g + 1j * rng.standard_normal((n, k))
    q, _ = np.linalg.qr(g)
    return q[:, :k]
