"""How many KMS states does the crossed product carry?

For a single fermionic mode with energy ln 3 at inverse temperature 1 the
base algebra has its unique thermal state omega.  Whether omega extends
uniquely to the Z2-crossed product depends on the odd-spectrum product
c = prod (1 - e^{-|beta lambda|})/(1 + e^{-|beta lambda|}): whenever c > 0
there is a whole interval of extensions, with extreme points given by the
twisted functional at weights +c and -c.

Run:  python3 demos/extension_dichotomy.py
"""

import numpy as np

from carkms import crossed, fock, quasifree

basis = fock.ModeBasis(lambdas=(np.log(3.0),), parities=(-1,))
beta = 1.0

omega = quasifree.gibbs_functional(basis, beta)
rho = quasifree.twisted_gibbs_functional(basis, beta)
sr = quasifree.c_beta_h(basis, beta)
print(f"odd-spectrum product c = {sr.c_value:.4f}  (condition {sr.verdict})")

alg = crossed.CrossedAlgebra(basis)
u = alg.generator()
print("\nextension values at the grading unitary u:")
for name, r in [("canonical", rho.scaled(0.0)), ("plus", rho), ("minus", rho.scaled(-1.0))]:
    state = crossed.extend_state(alg, crossed.ExtensionPair(omega, r))
    print(f"  {name:10s} state(u) = {state(u).real:+.4f}")

# All three satisfy the KMS condition for the lifted dynamics:
hham = fock.dgamma(basis)
rng = np.random.default_rng(0)
pairs = [(crossed.random_crossed_element(alg, rng),
          crossed.random_crossed_element(alg, rng)) for _ in range(10)]
state = crossed.extend_state(alg, crossed.ExtensionPair(omega, rho))
print(f"\nKMS residual of the plus extension: "
      f"{crossed.verify_kms(state, alg, hham, beta, pairs):.2e}")

# The weight interval is sharp: 1.05 * rho is no longer dominated by omega.
print("domination at  c  :", quasifree.domination_check(rho, omega))
print("domination at 1.05c:", quasifree.domination_check(rho.scaled(1.05), omega))

# At infinite temperature (beta = 0) the twisted weight collapses to zero
# and the extension is unique at this scale.
print(f"\nbeta = 0 twisted weight: {quasifree.tracial_twisted_check(basis):.1f}")
