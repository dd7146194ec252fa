"""Standard form, twisted center, and the functional bijection.

The GNS representation of a faithful state on a matrix algebra lives on
Hilbert-Schmidt space with cyclic vector D^{1/2}.  Twisted KMS functionals
dominated by the state correspond exactly to self-adjoint elements R of
the twisted center {x : J x* J = x V} with |R| <= 1, via
rho(a) = <Omega, a R Omega>.

Run:  python3 demos/modular_structure.py
"""

import numpy as np

from carkms import fock, gns, linalg, quasifree

basis = fock.ModeBasis(lambdas=(0.7, 1.9), parities=(-1, -1))
beta = 1.0
d = basis.fock_dim

density = quasifree.gibbs_functional(basis, beta).density
data = gns.build_gns(gns.full_matrix_algebra(d), density,
                     fock.grading_unitary(basis))

tc = gns.twisted_center(data)
print(f"twisted center dimension: {tc.dim}")
print(f"extreme points of its self-adjoint unit ball: {len(tc.selfadjoint_unit_ball_extremes)}")

split = gns.kallman_split(data)
print(f"inner part of the grading: ||p - 1|| = {linalg.op_norm(split.p - np.eye(d)):.1e}"
      " (the grading is inner on a factor)")

# The signed parity product lies in the twisted center and maps to the
# extremal twisted functional under the bijection.
u = quasifree.grading_approximants(basis, beta, len(basis.odd_modes))
rho = gns.xi_map(data, u)
c = quasifree.c_beta_h(basis, beta).c_value
print(f"\nxi_map weight rho(1) = {rho(np.eye(d)).real:.6f}  vs  c = {c:.6f}")

back = gns.xi_inverse(data, rho)
print(f"bijection roundtrip error: {linalg.op_norm(back - u):.1e}")

# The same state in the doubled (two-sided thermal) representation:
rep = gns.araki_wyss(basis, beta)
mu = quasifree.kms_covariance(basis, beta)
phi = np.array([1.0, 0.5j])
psi = np.array([0.25, -1.0])
print(f"\ndoubled two-point:  {rep.two_point(phi, psi):.6f}")
print(f"covariance pairing: {quasifree.eval_quasifree(mu, [phi, psi]):.6f}")
print(f"truncated R expectation at m=2: {rep.r_expectation(2).real:.6f} "
      f"(= partial product {quasifree.c_beta_h(basis, beta).c_partial[1]:.6f})")
