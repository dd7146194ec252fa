"""Quasifree functionals against the independent Fock-trace oracle.

The oracle evaluates every expectation as Tr(W X)/Tr(W) with W built
directly from matrix exponentials on Fock space, never via the pairing
expansion, so the two paths share no code beyond the representation.
"""

import numpy as np
import pytest

from carkms import fock, linalg, quasifree
from carkms.errors import DegenerateSpectrum, IndexOutOfRange

LN3 = np.log(3.0)


def trace_oracle(basis, beta, x):
    """Gibbs expectation by direct trace."""
    w = linalg.mat_exp(-beta * fock.dgamma(basis))
    return np.trace(w @ x) / np.trace(w)


def field_word(basis, vecs):
    out = np.eye(basis.fock_dim, dtype=complex)
    for v in vecs:
        out = out @ fock.field(basis, v)
    return out


def spectra():
    return [
        fock.ModeBasis(lambdas=(LN3,), parities=(-1,)),
        fock.ModeBasis(lambdas=(0.4, -1.3), parities=(-1, 1)),
        fock.ModeBasis(lambdas=(0.9, 2.1, -0.6), parities=(1, -1, -1)),
    ]


@pytest.mark.parametrize("basis", spectra())
def test_two_point_against_trace(basis):
    rng = np.random.default_rng(5)
    mu = quasifree.kms_covariance(basis, 1.0)
    for _ in range(30):
        xi = rng.standard_normal(basis.n) + 1j * rng.standard_normal(basis.n)
        eta = rng.standard_normal(basis.n) + 1j * rng.standard_normal(basis.n)
        lhs = quasifree.eval_quasifree(mu, [xi, eta])
        rhs = trace_oracle(basis, 1.0, field_word(basis, [xi, eta]))
        assert abs(lhs - rhs) < 1e-10


@pytest.mark.parametrize("basis", spectra())
@pytest.mark.parametrize("beta", [0.0, 0.7, 1.0, -0.5])
def test_pairing_expansion_against_trace(basis, beta):
    rng = np.random.default_rng(17)
    mu = quasifree.kms_covariance(basis, beta)
    for _ in range(25):
        length = int(rng.integers(0, 7))
        vecs = [rng.standard_normal(basis.n) + 1j * rng.standard_normal(basis.n)
                for _ in range(length)]
        lhs = quasifree.eval_quasifree(mu, vecs)
        rhs = trace_oracle(basis, beta, field_word(basis, vecs))
        assert abs(lhs - rhs) < 1e-9


def test_single_mode_golden_values():
    basis = fock.ModeBasis(lambdas=(LN3,), parities=(-1,))
    a = fock.lowering(basis, 0)
    omega = quasifree.gibbs_functional(basis, 1.0)
    assert omega(a.conj().T @ a).real == pytest.approx(0.25, abs=1e-12)
    rho = quasifree.twisted_gibbs_functional(basis, 1.0)
    assert rho(np.eye(2)).real == pytest.approx(0.5, abs=1e-12)
    assert rho(a @ a.conj().T).real == pytest.approx(0.75, abs=1e-12)
    # per-unit twisted value of a a* is 1.5
    mu = quasifree.twisted_covariance(basis, 1.0)
    e = np.array([1.0])
    # a a* = (Phi(e) - i Phi(ie)) (Phi(e) + i Phi(ie)) / 4 ... direct expansion:
    val = 0.25 * (quasifree.eval_quasifree(mu, [e, e])
                  - 1j * quasifree.eval_quasifree(mu, [e, 1j * e])
                  + 1j * quasifree.eval_quasifree(mu, [1j * e, e])
                  + quasifree.eval_quasifree(mu, [1j * e, 1j * e]))
    assert val.real == pytest.approx(1.5, abs=1e-12)


def test_c_beta_h_partials():
    basis = fock.ModeBasis(lambdas=(LN3, 2 * LN3), parities=(-1, -1))
    sr = quasifree.c_beta_h(basis, 1.0)
    assert sr.verdict == "Holds"
    assert sr.c_partial[0] == pytest.approx(0.5)
    assert sr.c_partial[1] == pytest.approx(0.5 * (1 - 1 / 9) / (1 + 1 / 9))
    assert sr.trace_partial[1] == pytest.approx(1 / 3 + 1 / 9)


def test_c_beta_h_even_modes_only():
    basis = fock.ModeBasis(lambdas=(1.0, 2.0), parities=(1, 1))
    sr = quasifree.c_beta_h(basis, 1.0)
    assert sr.c_partial == [] and sr.c_value == 1.0
    assert sr.verdict == "Holds"


def test_c_beta_h_degenerate_reports_fails():
    basis = fock.ModeBasis(lambdas=(1.0,), parities=(-1,))
    sr = quasifree.c_beta_h(basis, 0.0)
    assert sr.verdict == "Fails"
    assert sr.c_value == pytest.approx(0.0)


def test_twisted_covariance_degenerate_guard():
    basis = fock.ModeBasis(lambdas=(1.0,), parities=(-1,))
    with pytest.raises(DegenerateSpectrum):
        quasifree.twisted_covariance(basis, 0.0)
    even = fock.ModeBasis(lambdas=(1.0,), parities=(1,))
    quasifree.twisted_covariance(even, 0.0)  # even modes are fine at beta=0


def test_grading_approximants_signs_and_range():
    basis = fock.ModeBasis(lambdas=(-LN3, LN3), parities=(-1, -1))
    u2 = quasifree.grading_approximants(basis, 1.0, 2)
    g = fock.grading_unitary(basis)
    np.testing.assert_allclose(u2, -g, atol=1e-13)  # one negative eigenvalue flips the sign
    with pytest.raises(IndexOutOfRange):
        quasifree.grading_approximants(basis, 1.0, 3)


def test_twisted_gibbs_weight_is_c():
    basis = fock.ModeBasis(lambdas=(0.8, -1.7, 0.4), parities=(-1, -1, 1))
    rho = quasifree.twisted_gibbs_functional(basis, 1.0)
    c = quasifree.c_beta_h(basis, 1.0).c_value
    assert rho(np.eye(basis.fock_dim)).real == pytest.approx(c, abs=1e-12)
    assert c > 0


def test_domination_boundary():
    basis = fock.ModeBasis(lambdas=(LN3,), parities=(-1,))
    omega = quasifree.gibbs_functional(basis, 1.0)
    rho = quasifree.twisted_gibbs_functional(basis, 1.0)
    assert quasifree.domination_check(rho, omega)
    assert quasifree.domination_check(rho.scaled(-1.0), omega)
    assert not quasifree.domination_check(rho.scaled(1.05), omega)
    assert not quasifree.domination_check(rho.scaled(1.2), omega)


def test_tracial_twisted_check():
    odd = fock.ModeBasis(lambdas=(1.0,), parities=(-1,))
    even = fock.ModeBasis(lambdas=(1.0,), parities=(1,))
    assert quasifree.tracial_twisted_check(odd) == 0.0
    assert quasifree.tracial_twisted_check(even) == 1.0
