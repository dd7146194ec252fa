"""Finite-mode CAR algebra on the antisymmetric Fock space.

The n modes act on C^(2^n) via the Jordan-Wigner construction.  Mode 0 is
the least significant occupation bit, and the Z-string of mode k runs over
the lower-index modes, which pins every matrix below bit-exactly.
"""

from dataclasses import dataclass
from functools import reduce

import numpy as np

from . import linalg
from .errors import DimensionMismatch, NotUnitary

_LOWER = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)  # a|1> = |0>
_PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
_ID2 = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class ModeBasis:
    """One-particle data: eigenvalues of H and parities (eigenvalues of G),
    simultaneously diagonal by assumption."""

    lambdas: tuple
    parities: tuple

    def __post_init__(self):
        object.__setattr__(self, "lambdas", tuple(float(x) for x in self.lambdas))
        object.__setattr__(self, "parities", tuple(int(g) for g in self.parities))
        if len(self.lambdas) != len(self.parities):
            raise DimensionMismatch("lambdas and parities must have equal length")
        if any(g not in (1, -1) for g in self.parities):
            raise ValueError("parities must be +1 or -1")
        if not all(np.isfinite(self.lambdas)):
            raise ValueError("non-finite eigenvalue")

    @property
    def n(self):
        return len(self.lambdas)

    @property
    def fock_dim(self):
        return 2 ** self.n

    @property
    def odd_modes(self):
        return tuple(k for k, g in enumerate(self.parities) if g == -1)

    def h_matrix(self):
        return np.diag(np.array(self.lambdas, dtype=complex))

    def g_matrix(self):
        return np.diag(np.array(self.parities, dtype=complex))


def _check_vector(basis, phi):
    phi = np.asarray(phi, dtype=complex).reshape(-1)
    if phi.shape[0] != basis.n:
        raise DimensionMismatch(f"vector length {phi.shape[0]} != {basis.n} modes")
    return phi


def occupations(basis):
    """(2^n, n) array of occupation bits; mode k is bit k of the basis index."""
    idx = np.arange(basis.fock_dim)
    return (idx[:, None] >> np.arange(basis.n)[None, :]) & 1


def lowering(basis, k):
    """Jordan-Wigner lowering operator of mode k (Z-string on modes < k)."""
    if not 0 <= k < basis.n:
        raise DimensionMismatch(f"mode index {k} out of range")
    factors = []
    for j in reversed(range(basis.n)):  # leading kron factor = highest mode
        if j > k:
            factors.append(_ID2)
        elif j == k:
            factors.append(_LOWER)
        else:
            factors.append(_PAULI_Z)
    return reduce(np.kron, factors)


def annihilator(basis, phi):
    """a(phi) = sum_k conj(phi_k) a_k; antilinear in phi."""
    phi = _check_vector(basis, phi)
    out = np.zeros((basis.fock_dim, basis.fock_dim), dtype=complex)
    for k, c in enumerate(phi):
        if c != 0:
            out += np.conj(c) * lowering(basis, k)
    return out


def creator(basis, phi):
    """a*(phi); linear in phi."""
    return annihilator(basis, phi).conj().T


def field(basis, xi):
    """Phi(xi) = a*(xi) + a(xi); self-adjoint and real-linear in xi."""
    a = annihilator(basis, xi)
    return a.conj().T + a


def parity_operator(basis):
    """(-1)^N as a diagonal matrix."""
    occ = occupations(basis).sum(axis=1)
    return np.diag(((-1.0) ** occ).astype(complex))


def dual_field(basis, xi):
    """Phi'(xi) = (a*(xi) - a(xi)) (-1)^N."""
    a = annihilator(basis, xi)
    return (a.conj().T - a) @ parity_operator(basis)


def number_operator(basis, k):
    """P_k = a*_k a_k, diagonal in the occupation basis."""
    occ = occupations(basis)[:, k]
    return np.diag(occ.astype(complex))


def dgamma(basis):
    """Second-quantized Hamiltonian sum_k lambda_k a*_k a_k (diagonal)."""
    occ = occupations(basis)
    energies = occ @ np.array(basis.lambdas)
    return np.diag(energies.astype(complex))


def dgamma_of(basis, k_matrix):
    """dGamma(K) = sum_jk K_jk a*_j a_k for an n x n one-particle matrix."""
    k_matrix = np.asarray(k_matrix, dtype=complex)
    if k_matrix.shape != (basis.n, basis.n):
        raise DimensionMismatch("one-particle matrix has wrong shape")
    low = [lowering(basis, k) for k in range(basis.n)]
    out = np.zeros((basis.fock_dim, basis.fock_dim), dtype=complex)
    for j in range(basis.n):
        for k in range(basis.n):
            if k_matrix[j, k] != 0:
                out += k_matrix[j, k] * (low[j].conj().T @ low[k])
    return out


def second_quantize(basis, v, tol=1e-10):
    """Gamma(V) for a unitary V on the one-particle space.

    Computed as exp(i dGamma(K)) with V = e^{iK}; this fixes the vacuum
    phase to 1 and gives Gamma(V)Gamma(W) = Gamma(VW) exactly.
    """
    v = np.asarray(v, dtype=complex)
    if v.shape != (basis.n, basis.n):
        raise DimensionMismatch("one-particle unitary has wrong shape")
    if linalg.op_norm(v @ v.conj().T - np.eye(basis.n)) > tol:
        raise NotUnitary("input is not unitary within tol")
    vals, vecs = np.linalg.eig(v)
    thetas = np.angle(vals)
    k_matrix = (vecs * thetas) @ np.linalg.inv(vecs)
    k_matrix = 0.5 * (k_matrix + k_matrix.conj().T)
    return linalg.mat_exp(1j * dgamma_of(basis, k_matrix))


def grading_unitary(basis):
    """Gamma(G) = prod over odd modes of (1 - 2 P_k), diagonal."""
    occ = occupations(basis)
    odd = np.array([1 if g == -1 else 0 for g in basis.parities])
    signs = (-1.0) ** (occ @ odd)
    return np.diag(signs.astype(complex))


def gamma_conjugate(basis, a):
    """The grading automorphism gamma_G = Ad_{Gamma(G)}."""
    g = grading_unitary(basis)
    return g @ a @ g
