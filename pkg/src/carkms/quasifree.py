"""Quasifree states and hermitian quasifree functionals.

A functional is stored as (weight, T) where T is the two-point operator on
the one-particle space: per unit weight,

    mu_T(Phi(xi) Phi(eta)) = Re<xi, eta> + i Re<xi, T eta>.

The KMS covariance uses T = -i tanh(beta H / 2); the twisted covariance
uses T = i (1 - G e^{beta H}) / (1 + G e^{beta H}).  Both are diagonal in
the mode basis, and one pairing-expansion evaluation path serves both.
"""

from dataclasses import dataclass

import numpy as np

from . import fock, linalg
from .errors import DegenerateSpectrum, DimensionMismatch, IndexOutOfRange

ZERO_MODE_TOL = 1e-8


@dataclass(frozen=True)
class QuasifreeFunctional:
    basis: fock.ModeBasis
    weight: float
    tmatrix: np.ndarray

    def pair(self, xi, eta):
        """Per-unit-weight two-point value mu(Phi(xi)Phi(eta))."""
        xi = np.asarray(xi, dtype=complex).reshape(-1)
        eta = np.asarray(eta, dtype=complex).reshape(-1)
        if xi.shape[0] != self.basis.n or eta.shape[0] != self.basis.n:
            raise DimensionMismatch("vector length does not match mode count")
        return np.real(np.vdot(xi, eta)) + 1j * np.real(np.vdot(xi, self.tmatrix @ eta))


@dataclass(frozen=True)
class LinearFunctional:
    """Functional on the 2^n matrix algebra, phi(x) = trace(F x)."""

    density: np.ndarray

    def __call__(self, x):
        x = np.asarray(x, dtype=complex)
        if x.shape != self.density.shape:
            raise DimensionMismatch("operator dimension does not match density")
        return complex(np.trace(self.density @ x))

    def scaled(self, c):
        return LinearFunctional(c * self.density)


@dataclass(frozen=True)
class SpectrumReport:
    c_partial: list
    trace_partial: list
    verdict: str  # "Holds" | "Fails" | "Undetermined"

    @property
    def c_value(self):
        return self.c_partial[-1] if self.c_partial else 1.0


def kms_covariance(basis, beta):
    """The unique KMS state omega_beta as a quasifree functional."""
    t = np.diag(-1j * np.tanh(0.5 * beta * np.array(basis.lambdas)))
    return QuasifreeFunctional(basis=basis, weight=1.0, tmatrix=t)


def twisted_covariance(basis, beta):
    """Per-unit-weight twisted covariance mu_{T_beta^G}.

    Requires ker H = {0} and no odd mode with beta*lambda ~ 0, where the
    two-point operator has a pole.
    """
    lam = np.array(basis.lambdas)
    g = np.array(basis.parities, dtype=float)
    if np.any(np.abs(lam) < ZERO_MODE_TOL):
        raise DegenerateSpectrum("zero one-particle eigenvalue (ker H != {0})")
    if np.any((g < 0) & (np.abs(beta * lam) < ZERO_MODE_TOL)):
        raise DegenerateSpectrum("odd mode with beta*lambda ~ 0: T_beta^G unbounded")
    e = np.exp(beta * lam)
    t = np.diag(1j * (1.0 - g * e) / (1.0 + g * e))
    return QuasifreeFunctional(basis=basis, weight=1.0, tmatrix=t)


def eval_quasifree(f, points):
    """Evaluate f on Phi(xi_1) ... Phi(xi_m) by the pairing expansion.

    Recursive first-element contraction; odd-length strings give 0 and the
    empty string gives the weight.
    """
    vecs = [np.asarray(p, dtype=complex).reshape(-1) for p in points]
    for v in vecs:
        if v.shape[0] != f.basis.n:
            raise DimensionMismatch("vector length does not match mode count")
    if len(vecs) % 2 == 1:
        return 0.0 + 0.0j
    return f.weight * _pairing_sum(f, vecs)


def _pairing_sum(f, vecs):
    if not vecs:
        return 1.0 + 0.0j
    head, rest = vecs[0], vecs[1:]
    total = 0.0 + 0.0j
    sign = 1.0
    for j, other in enumerate(rest):
        total += sign * f.pair(head, other) * _pairing_sum(f, rest[:j] + rest[j + 1:])
        sign = -sign
    return total


def c_beta_h(basis, beta):
    """Partial products of c_{beta H} and partial sums of Tr e^{-|beta H_odd|}."""
    odd_lams = [basis.lambdas[k] for k in basis.odd_modes]
    c_partial, trace_partial = [], []
    c, tr = 1.0, 0.0
    degenerate = False
    for lam in odd_lams:
        x = abs(beta * lam)
        if x < ZERO_MODE_TOL:
            degenerate = True
        c *= (1.0 - np.exp(-x)) / (1.0 + np.exp(-x))
        tr += np.exp(-x)
        c_partial.append(c)
        trace_partial.append(tr)
    verdict = "Fails" if degenerate else "Holds"
    return SpectrumReport(c_partial=c_partial, trace_partial=trace_partial, verdict=verdict)


def grading_approximants(basis, beta, n):
    """u_n = prod over the first n odd modes of sgn(beta lambda_k)(1 - 2 P_k)."""
    odd = basis.odd_modes
    if n < 0 or n > len(odd):
        raise IndexOutOfRange(f"n={n} but only {len(odd)} odd modes")
    out = np.eye(basis.fock_dim, dtype=complex)
    for k in odd[:n]:
        x = beta * basis.lambdas[k]
        if abs(x) < ZERO_MODE_TOL:
            raise DegenerateSpectrum("odd mode with beta*lambda ~ 0 in u_n")
        out = out @ (np.sign(x) * (np.eye(basis.fock_dim) - 2.0 * fock.number_operator(basis, k)))
    return out


def gibbs_functional(basis, beta):
    """omega_beta as a density functional: Tr(e^{-beta Hhat} . )/Z."""
    w = linalg.mat_exp(-beta * fock.dgamma(basis))
    return LinearFunctional(w / np.trace(w))


def twisted_gibbs_functional(basis, beta):
    """The extremal twisted functional c_{beta H} mu_{T_beta^G} realized as
    the density e^{-beta Hhat} U_G / Z, with U_G the signed odd-mode parity
    product (finite-mode R operator)."""
    u = grading_approximants(basis, beta, len(basis.odd_modes))
    w = linalg.mat_exp(-beta * fock.dgamma(basis))
    return LinearFunctional(w @ u / np.trace(w))


def domination_check(rho, omega, tol=1e-10):
    """True iff rho is hermitian and omega +- rho are positive."""
    fr, fw = rho.density, omega.density
    if fr.shape != fw.shape:
        raise DimensionMismatch("functionals live on different algebras")
    if np.max(np.abs(fr - fr.conj().T), initial=0.0) > tol:
        return False
    return linalg.is_psd(fw - fr, tol=tol) and linalg.is_psd(fw + fr, tol=tol)


def tracial_twisted_check(basis):
    """Extremal twisted weight in the trace case: mu_0(Gamma(G)).

    Each odd mode contributes a factor 0, each even mode a factor 1.
    """
    return 0.0 if basis.odd_modes else 1.0
