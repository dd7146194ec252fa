"""GNS standard form, twisted center, Kallman split, and the doubled
thermal representation.

The GNS carrier for a faithful state with density D on a matrix algebra is
the Hilbert-Schmidt space with cyclic vector Omega = D^{1/2}.  In this
realization J is the adjoint map, Delta is the two-sided similarity
X -> D X D^{-1}, and the grading acts by conjugation with a unitary G.
The twisted-center condition J x* J = x V then reduces to the complex
linear system {x y = G y G x for all y in the algebra, [x, D] = 0}, which
we solve by vectorization restricted to the algebra span.
"""

from dataclasses import dataclass

import numpy as np

from . import fock, linalg
from .errors import (
    CapExceeded,
    CarKmsError,
    DimensionMismatch,
    GradingNotInvariant,
    NotDominated,
    NotFaithful,
    NotInTwistedCenter,
)

_MEMBERSHIP_TOL = 1e-9


def _vec(x):
    return np.asarray(x, dtype=complex).reshape(-1)


def _unvec(v, d):
    return np.asarray(v, dtype=complex).reshape(d, d)


class MatrixAlgebra:
    """Unital *-subalgebra of M_d given by a spanning set of operators."""

    def __init__(self, ambient_dim, basis_ops, tol=_MEMBERSHIP_TOL, verify=True):
        self.ambient_dim = int(ambient_dim)
        ops = [np.asarray(b, dtype=complex) for b in basis_ops]
        for b in ops:
            if b.shape != (self.ambient_dim, self.ambient_dim):
                raise DimensionMismatch("basis operator has wrong shape")
        raw = np.column_stack([_vec(b) for b in ops])
        q, r = np.linalg.qr(raw)
        keep = np.abs(np.diag(r)) > tol * max(1.0, np.abs(r).max(initial=0.0))
        self.span = q[:, keep]  # orthonormal columns in the HS inner product
        self.basis_ops = [_unvec(self.span[:, i], self.ambient_dim)
                          for i in range(self.span.shape[1])]
        if verify:
            self._verify_structure(tol)

    @property
    def dim(self):
        return self.span.shape[1]

    def contains(self, x, tol=_MEMBERSHIP_TOL):
        v = _vec(x)
        resid = v - self.span @ (self.span.conj().T @ v)
        return np.linalg.norm(resid) <= tol * max(1.0, np.linalg.norm(v))

    def project(self, x):
        v = _vec(x)
        return _unvec(self.span @ (self.span.conj().T @ v), self.ambient_dim)

    def _verify_structure(self, tol):
        # the HS projection of the ambient identity onto a *-closed span is
        # the algebra's unit (its support projection); it must act as one
        unit = self.project(np.eye(self.ambient_dim))
        for b in self.basis_ops:
            if linalg.op_norm(unit @ b - b) > tol * 10 or linalg.op_norm(b @ unit - b) > tol * 10:
                raise CarKmsError("spanning set has no unit")
        for b in self.basis_ops:
            if not self.contains(b.conj().T, tol):
                raise CarKmsError("spanning set is not star-closed")
            for c in self.basis_ops:
                if not self.contains(b @ c, tol):
                    raise CarKmsError("spanning set is not closed under products")

    def solve_intertwiners(self, images, extra_constraints=(), tol=_MEMBERSHIP_TOL):
        """Orthonormal basis of {x in span : x y_i = images_i x for all i},
        with optional extra constraint matrices acting on vec(x).

        The joint nullspace is found from the accumulated Gram matrix of the
        span-restricted constraints, which keeps memory flat in the number
        of constraints.
        """
        d = self.ambient_dim
        eye = np.eye(d)
        gram = np.zeros((self.dim, self.dim), dtype=complex)
        for y, gy in images:
            c = (np.kron(eye, y.T) - np.kron(gy, eye)) @ self.span
            gram += c.conj().T @ c
        for m in extra_constraints:
            c = np.asarray(m, dtype=complex) @ self.span
            gram += c.conj().T @ c
        vals, vecs = np.linalg.eigh(gram)
        top = max(vals.max(initial=0.0), 0.0)
        # rounding while accumulating the Gram lifts true nullvectors to
        # O(eps * top), so the cutoff cannot sit at (tol * sqrt(top))^2
        cutoff = max((tol * max(1.0, np.sqrt(top))) ** 2, 1e-12 * top)
        coeffs = vecs[:, vals <= cutoff]
        return [_unvec(self.span @ coeffs[:, i], d) for i in range(coeffs.shape[1])]

    def center(self, tol=_MEMBERSHIP_TOL):
        return self.solve_intertwiners([(y, y) for y in self.basis_ops], tol=tol)


def full_matrix_algebra(d):
    ops = []
    for i in range(d):
        for j in range(d):
            e = np.zeros((d, d), dtype=complex)
            e[i, j] = 1.0
            ops.append(e)
    # closure of the full matrix algebra needs no verification pass
    return MatrixAlgebra(d, ops, verify=(d <= 4))


def diagonal_algebra(d):
    ops = []
    for i in range(d):
        e = np.zeros((d, d), dtype=complex)
        e[i, i] = 1.0
        ops.append(e)
    return MatrixAlgebra(d, ops)


def direct_sum_algebra(blocks):
    """Block-diagonal algebra from a list of ("full" | "diag", size) specs."""
    sizes = [size for _, size in blocks]
    d = sum(sizes)
    ops = []
    offset = 0
    for kind, size in blocks:
        if kind == "diag":
            idx = [(i, i) for i in range(size)]
        elif kind == "full":
            idx = [(i, j) for i in range(size) for j in range(size)]
        else:
            raise ValueError(f"unknown block kind {kind!r}")
        for i, j in idx:
            e = np.zeros((d, d), dtype=complex)
            e[offset + i, offset + j] = 1.0
            ops.append(e)
        offset += size
    return MatrixAlgebra(d, ops)


@dataclass(frozen=True)
class GnsData:
    """Standard-form data of (algebra, density D, grading unitary G)."""

    algebra: MatrixAlgebra
    density: np.ndarray
    grading: np.ndarray
    sqrt_density: np.ndarray
    inv_density: np.ndarray

    @property
    def gns_dim(self):
        return self.algebra.ambient_dim ** 2

    @property
    def omega_vec(self):
        return self.sqrt_density

    def expectation(self, a):
        return complex(np.trace(self.density @ a))

    def delta_map(self, x):
        return self.density @ x @ self.inv_density

    def j_map(self, x):
        return np.asarray(x, dtype=complex).conj().T

    def v_map(self, x):
        return self.grading @ x @ self.grading

    def modular_flow(self, t, x):
        u = linalg.herm_fun(self.density, lambda s: s ** (1j * t))
        return u @ x @ u.conj().T


def build_gns(algebra, density, g_unitary, tol=1e-9):
    d = algebra.ambient_dim
    density = np.asarray(density, dtype=complex)
    g = np.asarray(g_unitary, dtype=complex)
    if density.shape != (d, d) or g.shape != (d, d):
        raise DimensionMismatch("density / grading shape mismatch")
    vals = np.linalg.eigvalsh(0.5 * (density + density.conj().T))
    if np.max(np.abs(density - density.conj().T)) > tol or vals.min() <= tol:
        raise NotFaithful("density must be Hermitian positive definite")
    if abs(np.trace(density) - 1.0) > 1e-8:
        density = density / np.trace(density)
    if linalg.op_norm(g @ g.conj().T - np.eye(d)) > tol or linalg.op_norm(g - g.conj().T) > tol:
        raise GradingNotInvariant("grading must be a self-adjoint unitary")
    if linalg.op_norm(g @ density @ g - density) > tol:
        raise GradingNotInvariant("density is not invariant under the grading")
    for b in algebra.basis_ops:
        if not algebra.contains(g @ b @ g, tol):
            raise GradingNotInvariant("grading does not preserve the algebra")
    sqrt_d = linalg.herm_fun(density, np.sqrt)
    inv_d = linalg.herm_fun(density, lambda s: 1.0 / s)
    for b in algebra.basis_ops:
        if not algebra.contains(density @ b @ inv_d, tol):
            raise CarKmsError("modular flow does not preserve the algebra")
    return GnsData(algebra=algebra, density=density, grading=g,
                   sqrt_density=sqrt_d, inv_density=inv_d)


@dataclass(frozen=True)
class TwistedCenterBasis:
    dim: int
    basis: list
    selfadjoint_unit_ball_extremes: list


def _twisted_constraints(g):
    images = [(y, g.v_map(y)) for y in g.algebra.basis_ops]
    d = g.algebra.ambient_dim
    eye = np.eye(d)
    flow = [np.kron(eye, g.density.T) - np.kron(g.density, eye)]
    return images, flow


def twisted_center(g, tol=_MEMBERSHIP_TOL):
    """Orthonormal basis of {x in M : J x* J = x V}, plus the extreme
    points of its self-adjoint unit ball."""
    images, flow = _twisted_constraints(g)
    basis = g.algebra.solve_intertwiners(images, extra_constraints=flow, tol=tol)
    for x in basis:
        if linalg.op_norm(g.v_map(x) - x) > 1e-6:
            raise CarKmsError("twisted-center solution not grading-invariant")
        if linalg.op_norm(g.delta_map(x) - x) > 1e-6:
            raise CarKmsError("twisted-center solution not flow-invariant")
    extremes = []
    if basis:
        split = kallman_split(g, tol=tol)
        qs = split.inner_blocks
        for mask in range(2 ** len(qs)):
            signs = [1.0 if (mask >> i) & 1 == 0 else -1.0 for i in range(len(qs))]
            extremes.append(split.u_p @ sum(s * q for s, q in zip(signs, qs)))
    return TwistedCenterBasis(dim=len(basis), basis=basis,
                              selfadjoint_unit_ball_extremes=extremes)


def in_twisted_center(g, x, tol=1e-8):
    if not g.algebra.contains(x, tol):
        return False
    for y in g.algebra.basis_ops:
        if linalg.op_norm(x @ y - g.v_map(y) @ x) > tol:
            return False
    return linalg.op_norm(x @ g.density - g.density @ x) <= tol


def freely_acting_test(algebra, gamma, tol=_MEMBERSHIP_TOL):
    """True iff x y = gamma(y) x for all y forces x = 0."""
    sols = algebra.solve_intertwiners([(y, gamma(y)) for y in algebra.basis_ops], tol=tol)
    return len(sols) == 0


def _minimal_central_projections(algebra, rng, tol=1e-8):
    center = algebra.center(tol=tol)
    h = np.zeros((algebra.ambient_dim,) * 2, dtype=complex)
    for z in center:
        c = rng.standard_normal() + 1j * rng.standard_normal()
        h += c * z + np.conj(c) * z.conj().T
    vals, vecs = np.linalg.eigh(h)
    projections = []
    i = 0
    scale = max(1.0, np.abs(vals).max(initial=0.0))
    while i < len(vals):
        j = i
        while j + 1 < len(vals) and vals[j + 1] - vals[j] < 1e-6 * scale:
            j += 1
        block = vecs[:, i:j + 1]
        projections.append(block @ block.conj().T)
        i = j + 1
    # Split any cluster whose compressed algebra still has a nontrivial center.
    out = []
    for p in projections:
        sub_ops = [p @ b @ p for b in algebra.basis_ops]
        try:
            sub = MatrixAlgebra(algebra.ambient_dim, sub_ops + [p], tol=tol)
        except CarKmsError:
            out.append(p)
            continue
        if len(sub.center(tol=tol)) > 1:
            out.extend(_minimal_central_projections_sub(algebra, p, rng, tol))
        else:
            out.append(p)
    return out


def _minimal_central_projections_sub(algebra, p, rng, tol):
    sub_ops = [p @ b @ p for b in algebra.basis_ops] + [p]
    sub = MatrixAlgebra(algebra.ambient_dim, sub_ops, tol=tol)
    return [q @ p for q in _minimal_central_projections(sub, rng, tol)
            if linalg.op_norm(q @ p) > tol]


@dataclass(frozen=True)
class KallmanSplit:
    p: np.ndarray
    u_p: np.ndarray
    inner_blocks: list
    free_blocks: list


def kallman_split(g, tol=1e-8):
    """Maximal central projection p on which the grading acts innerly.

    Minimal central projections are grouped into grading orbits; swapped
    pairs form the freely acting part, fixed blocks carry an implementing
    partial isometry found by solving the intertwiner equation.
    """
    rng = np.random.default_rng(20240817)
    d = g.algebra.ambient_dim
    projections = _minimal_central_projections(g.algebra, rng, tol)
    fixed, free = [], []
    for q in projections:
        if linalg.op_norm(g.v_map(q) - q) <= 1e-6:
            fixed.append(q)
        else:
            free.append(q)
    p = np.zeros((d, d), dtype=complex)
    u_p = np.zeros((d, d), dtype=complex)
    inner_blocks = []
    for q in fixed:
        block_ops = [q @ b @ q for b in g.algebra.basis_ops] + [q]
        block = MatrixAlgebra(d, block_ops, tol=tol)
        sols = block.solve_intertwiners([(y, g.v_map(y)) for y in block.basis_ops], tol=tol)
        w = _normalize_block_isometry(sols, q, g.density, tol)
        if w is None:
            free.append(q)
            continue
        p += q
        u_p += w
        inner_blocks.append(q)
    return KallmanSplit(p=p, u_p=u_p, inner_blocks=inner_blocks, free_blocks=free)


def _normalize_block_isometry(sols, q, density, tol):
    for x in sols:
        if linalg.op_norm(x) <= tol:
            continue
        # polar part on the block support
        w = x @ linalg.herm_fun(x.conj().T @ x,
                                lambda s: np.where(s > tol, 1.0 / np.sqrt(np.maximum(s, tol)), 0.0))
        if linalg.op_norm(w.conj().T @ w - q) > 1e-6:
            continue
        rank = np.trace(q).real
        c = np.trace(w @ w @ q) / rank  # w^2 = c q on a factor block
        w = w * np.exp(-0.5j * np.angle(c))
        if np.real(np.trace(density @ w)) < 0:
            w = -w
        return w
    return None


def xi_map(g, r, tol=1e-8):
    """Twisted functional rho(a) = <Omega, a R Omega> = Tr(a R D)."""
    from .quasifree import LinearFunctional

    r = np.asarray(r, dtype=complex)
    if not in_twisted_center(g, r, tol):
        raise NotInTwistedCenter("R fails the twisted-center equation")
    if linalg.op_norm(r - r.conj().T) > tol:
        raise NotInTwistedCenter("R must be self-adjoint")
    if linalg.op_norm(r) > 1.0 + tol:
        raise NotDominated("R must lie in the unit ball")
    return LinearFunctional(r @ g.density)


def xi_inverse(g, rho, tol=1e-8):
    """Recover R from a dominated hermitian twisted functional."""
    r = rho.density @ g.inv_density
    if not in_twisted_center(g, r, tol):
        raise NotInTwistedCenter("functional does not come from the twisted center")
    if linalg.op_norm(r - r.conj().T) > tol:
        raise NotInTwistedCenter("recovered R is not self-adjoint")
    if linalg.op_norm(r) > 1.0 + tol:
        raise NotDominated("recovered R lies outside the unit ball")
    return r


def graded_commutator(x, y, gamma):
    """[x, y]_gamma = x y - gamma(y) x."""
    return x @ y - gamma(y) @ x


def graded_commutator_norm(hamiltonian, t, x, y, gamma):
    """Diagnostic ||[alpha_t(x), y]_gamma|| under the Heisenberg flow."""
    u = linalg.mat_exp(1j * t * hamiltonian)
    return linalg.op_norm(graded_commutator(u @ x @ u.conj().T, y, gamma))


# ---------------------------------------------------------------------------
# Doubled (thermal two-sided) representation


@dataclass(frozen=True)
class DoubledRepresentation:
    basis: fock.ModeBasis
    beta: float
    t_matrix: np.ndarray  # (1 + e^{-beta H})^{-1} on the one-particle space
    omega_vec: np.ndarray
    v_matrix: np.ndarray
    phase: np.ndarray  # diagonal of (-1)^{N(N-1)/2} on one Fock factor

    @property
    def dim(self):
        return self.basis.fock_dim ** 2

    def annihilator(self, phi):
        phi = np.asarray(phi, dtype=complex).reshape(-1)
        sq_t = np.sqrt(np.diag(self.t_matrix).real)
        sq_c = np.sqrt(1.0 - np.diag(self.t_matrix).real)
        left = fock.annihilator(self.basis, sq_t * phi)
        right = fock.creator(self.basis, sq_c * phi).conj()
        par = fock.parity_operator(self.basis)
        eye = np.eye(self.basis.fock_dim)
        return np.kron(left, eye) + np.kron(par, right)

    def creator(self, phi):
        phi = np.asarray(phi, dtype=complex).reshape(-1)
        sq_t = np.sqrt(np.diag(self.t_matrix).real)
        sq_c = np.sqrt(1.0 - np.diag(self.t_matrix).real)
        left = fock.creator(self.basis, sq_t * phi)
        right = fock.annihilator(self.basis, sq_c * phi).conj()
        par = fock.parity_operator(self.basis)
        eye = np.eye(self.basis.fock_dim)
        return np.kron(left, eye) + np.kron(par, right)

    def field(self, phi):
        return self.annihilator(phi) + self.creator(phi)

    def two_point(self, phi, psi):
        """<Omega_beta, Phi(phi) Phi(psi) Omega_beta> in the doubled space."""
        vec = self.field(psi) @ self.omega_vec
        vec = self.field(phi) @ vec
        return complex(np.vdot(self.omega_vec, vec))

    def j_apply(self, vec):
        d = self.basis.fock_dim
        w = np.asarray(vec, dtype=complex).reshape(d, d)
        k = self.phase
        return (k[:, None] * w.conj().T * k[None, :]).reshape(-1)

    def r_truncated(self, m):
        """prod over the first m odd modes of sgn(beta lambda) e^{i pi a* a}."""
        odd = self.basis.odd_modes
        if m > len(odd):
            raise CapExceeded(f"m={m} exceeds {len(odd)} odd modes")
        out = np.eye(self.dim, dtype=complex)
        for k in odd[:m]:
            e_k = np.zeros(self.basis.n)
            e_k[k] = 1.0
            num = self.creator(e_k) @ self.annihilator(e_k)
            out = out @ (np.sign(self.beta * self.basis.lambdas[k])
                         * linalg.herm_fun(num, lambda s: np.exp(1j * np.pi * s)))
        return out

    def r_expectation(self, m):
        return complex(np.vdot(self.omega_vec, self.r_truncated(m) @ self.omega_vec))


def araki_wyss(basis, beta, max_modes=5):
    """Doubled GNS-type representation of the thermal state."""
    if basis.n > max_modes:
        raise CapExceeded(f"{basis.n} modes exceed the doubled-representation cap {max_modes}")
    lam = np.array(basis.lambdas)
    t = np.diag(1.0 / (1.0 + np.exp(-beta * lam)))
    d = basis.fock_dim
    omega = np.zeros(d * d, dtype=complex)
    omega[0] = 1.0
    g = fock.grading_unitary(basis)
    v = np.kron(g, g.conj())
    occ = fock.occupations(basis).sum(axis=1)
    phase = ((-1.0) ** (occ * (occ - 1) // 2)).astype(complex)
    return DoubledRepresentation(basis=basis, beta=beta, t_matrix=t,
                                 omega_vec=omega, v_matrix=v, phase=phase)
