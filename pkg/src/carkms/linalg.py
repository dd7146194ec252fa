"""Dense complex-matrix kernel.

All operator-algebra code in this package funnels through the few routines
here, so that functional calculus of Hermitian matrices is always done via
eigendecomposition (exact on the spectrum) rather than series expansion.
"""

import numpy as np
import scipy.linalg

from .errors import DegenerateSpectrum, DimensionMismatch, NoConvergence, NotHermitian

DEFAULT_TOL = 1e-10


def as_square(a):
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DimensionMismatch("matrix contains non-finite entries")
    return a


def herm_eig(a, tol=DEFAULT_TOL):
    """Eigendecomposition of a Hermitian matrix.

    Returns (eigenvalues ascending, unitary of eigenvectors as columns).
    """
    a = as_square(a)
    dev = np.max(np.abs(a - a.conj().T)) if a.size else 0.0
    if dev > tol:
        raise NotHermitian(f"max |A - A*| entry = {dev:.3e} > tol {tol:.3e}")
    try:
        vals, vecs = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc
    return vals, vecs


def herm_fun(a, fun, tol=DEFAULT_TOL):
    """Apply a scalar function to a Hermitian matrix via its spectrum."""
    vals, vecs = herm_eig(a, tol=tol)
    return (vecs * fun(vals)) @ vecs.conj().T


def mat_exp(a):
    """Matrix exponential; Hermitian and anti-Hermitian inputs go through
    the spectral route, everything else through scipy's Pade code."""
    a = as_square(a)
    if np.max(np.abs(a - a.conj().T), initial=0.0) <= 1e-12 * max(1.0, np.max(np.abs(a), initial=0.0)):
        return herm_fun(a, np.exp, tol=np.inf)
    ih = -1j * a
    if np.max(np.abs(ih - ih.conj().T), initial=0.0) <= 1e-12 * max(1.0, np.max(np.abs(a), initial=0.0)):
        vals, vecs = np.linalg.eigh(ih)
        return (vecs * np.exp(1j * vals)) @ vecs.conj().T
    return scipy.linalg.expm(a)


def op_norm(a):
    """Largest singular value."""
    a = as_square(a)
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def nullspace(l, tol=DEFAULT_TOL):
    """Orthonormal basis (columns) of the kernel of L.

    Kernel dimension is the count of singular values <= tol relative to the
    largest singular value (absolute when L is numerically zero).
    """
    l = np.atleast_2d(np.asarray(l, dtype=complex))
    if l.size == 0:
        return np.zeros((l.shape[1], l.shape[1]), dtype=complex)
    _, s, vh = np.linalg.svd(l)
    cutoff = tol * max(1.0, s[0] if s.size else 0.0)
    rank = int(np.sum(s > cutoff))
    return vh[rank:].conj().T


def is_psd(a, tol=DEFAULT_TOL):
    """True iff the Hermitian part check passes and all eigenvalues >= -tol."""
    a = as_square(a)
    if np.max(np.abs(a - a.conj().T), initial=0.0) > 100 * tol:
        return False
    vals = np.linalg.eigvalsh(0.5 * (a + a.conj().T))
    return bool(vals.min(initial=0.0) >= -tol)


def safe_inv_one_minus_exp(x, tol=1e-8):
    """(1 - e^x)^{-1} with a guard against the pole at x = 0."""
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) < tol):
        raise DegenerateSpectrum("spectral value with |beta*lambda| below 1e-8")
    return 1.0 / (1.0 - np.exp(x))
