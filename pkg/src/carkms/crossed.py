"""The Z2-crossed product of the finite-mode CAR algebra.

Elements are pairs (a, b) ~ a + b u with u the self-adjoint unitary
implementing the grading.  The C*-norm is computed from the faithful
representation pi(a, b) = a (x) 1 + b Gamma(G) (x) sigma on Fock (x) C^2,
block-diagonalized into a +- b Gamma(G).
"""

from dataclasses import dataclass

import numpy as np

from . import fock, linalg
from .errors import DimensionMismatch, NotDominated, NotGammaInvariant


@dataclass(frozen=True)
class CrossedElement:
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=complex)
        b = np.asarray(self.b, dtype=complex)
        if a.shape != b.shape or a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionMismatch("both parts must be square matrices of one size")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def dim(self):
        return self.a.shape[0]


class CrossedAlgebra:
    """Crossed product over the Fock representation of a mode basis."""

    def __init__(self, basis):
        self.basis = basis
        self.dim = basis.fock_dim
        self._g = fock.grading_unitary(basis)

    def gamma(self, x):
        return self._g @ x @ self._g

    def unit(self):
        d = self.dim
        return CrossedElement(np.eye(d), np.zeros((d, d)))

    def generator(self):
        d = self.dim
        return CrossedElement(np.zeros((d, d)), np.eye(d))

    def embed(self, a):
        return CrossedElement(a, np.zeros_like(np.asarray(a, dtype=complex)))

    def multiply(self, x, y):
        if x.dim != self.dim or y.dim != self.dim:
            raise DimensionMismatch("element dimension does not match algebra")
        return CrossedElement(
            x.a @ y.a + x.b @ self.gamma(y.b),
            x.a @ y.b + x.b @ self.gamma(y.a),
        )

    def star(self, x):
        return CrossedElement(x.a.conj().T, self.gamma(x.b.conj().T))

    def norm(self, x):
        bg = x.b @ self._g
        return max(linalg.op_norm(x.a + bg), linalg.op_norm(x.a - bg))

    @staticmethod
    def cond_expectation(x):
        """Canonical conditional expectation (a, b) -> a."""
        return x.a


@dataclass(frozen=True)
class ExtensionPair:
    """A gamma-invariant KMS state omega and a dominated hermitian twisted
    functional rho, both as density functionals on the Fock algebra."""

    omega: "quasifree.LinearFunctional"
    rho: "quasifree.LinearFunctional"


class ExtendedState:
    """The crossed-product state (a, b) -> omega(a) + rho(b)."""

    def __init__(self, algebra, pair, tol=1e-10):
        from .quasifree import domination_check

        g = fock.grading_unitary(algebra.basis)
        fw = pair.omega.density
        if linalg.op_norm(g @ fw @ g - fw) > tol:
            raise NotGammaInvariant("omega is not gamma-invariant within tol")
        if not domination_check(pair.rho, pair.omega, tol=tol):
            raise NotDominated("rho is not dominated by omega")
        self.algebra = algebra
        self.pair = pair

    def __call__(self, x):
        return self.pair.omega(x.a) + self.pair.rho(x.b)

    def restrict_state(self):
        return self.pair.omega

    def restrict_twisted(self):
        return self.pair.rho


def extend_state(algebra, pair, tol=1e-10):
    return ExtendedState(algebra, pair, tol=tol)


def analytic_continuation(hamiltonian, beta, b):
    """alpha_{i beta}(b) = e^{-beta Hhat} b e^{beta Hhat}."""
    em = linalg.mat_exp(-beta * hamiltonian)
    ep = linalg.mat_exp(beta * hamiltonian)
    return em @ b @ ep


def verify_kms(phi, algebra, hamiltonian, beta, pairs):
    """Max residual |phi(x alpha_{i beta}(y)) - phi(y x)| over crossed pairs."""
    worst = 0.0
    for x, y in pairs:
        y_shift = CrossedElement(
            analytic_continuation(hamiltonian, beta, y.a),
            analytic_continuation(hamiltonian, beta, y.b),
        )
        lhs = phi(algebra.multiply(x, y_shift))
        rhs = phi(algebra.multiply(y, x))
        worst = max(worst, abs(lhs - rhs))
    return worst


def verify_twisted_kms(rho, gamma, hamiltonian, beta, pairs):
    """Max residual of rho(a alpha_{i beta}(b)) = rho(b gamma(a))."""
    worst = 0.0
    for a, b in pairs:
        lhs = rho(a @ analytic_continuation(hamiltonian, beta, b))
        rhs = rho(b @ gamma(a))
        worst = max(worst, abs(lhs - rhs))
    return worst


def random_car_element(basis, rng, max_word_len=4, n_terms=6):
    """Gaussian combination of words of length <= max_word_len in a_k, a*_k."""
    d = basis.fock_dim
    low = [fock.lowering(basis, k) for k in range(basis.n)]
    gens = low + [m.conj().T for m in low]
    out = np.zeros((d, d), dtype=complex)
    for _ in range(n_terms):
        word = np.eye(d, dtype=complex)
        length = int(rng.integers(0, max_word_len + 1))
        for _ in range(length):
            word = word @ gens[int(rng.integers(0, len(gens)))]
        coeff = rng.standard_normal() + 1j * rng.standard_normal()
        out += coeff * word
    return out


def random_crossed_element(algebra, rng, **kwargs):
    return CrossedElement(
        random_car_element(algebra.basis, rng, **kwargs),
        random_car_element(algebra.basis, rng, **kwargs),
    )
