"""Batch front end.

Subcommands:

    kms-check       build the KMS state, the extremal twisted functional and
                    all three crossed-product extensions; verify residuals.
    scan-condition  refine a generated spectrum (or walk a discrete one) and
                    report the trend of the odd-spectrum product c.
    gns-center      build the GNS standard form, compute the twisted center,
                    the inner/freely-acting split and the bijection roundtrip.
    un-limit        evaluate the grading-approximant residuals
                    |omega(a u_n) - rho(a)| over a schedule of n.

Exit codes: 0 all verdicts pass, 2 some check failed, 3 input error.
"""

import argparse
import sys

import numpy as np

from . import crossed, fock, gns, linalg, quasifree
from .errors import CarKmsError, CapExceeded, IndexOutOfRange
from .modelspec import SpecError, load_model_spec, mode_basis, spec_echo
from .report import Report

DEFAULT_TOL = 1e-9
DEFAULT_CAP = 2 ** 10

_N_RANDOM_PAIRS = 20
_N_POSITIVITY_SAMPLES = 20
_N_CROSSCHECK_STRINGS = 100


def _extremal_twisted(basis, beta):
    """Density functional of the extremal twisted KMS functional.

    At beta = 0 this is the twisted trace x -> Tr(Gamma(G) x)/2^n, whose
    weight is 0 as soon as one odd mode exists; otherwise the signed
    Gibbs density e^{-beta H} U_G / Z.
    """
    if beta == 0.0:
        g = fock.grading_unitary(basis)
        return quasifree.LinearFunctional(g / basis.fock_dim)
    return quasifree.twisted_gibbs_functional(basis, beta)


def cmd_kms_check(spec, tol, cap, seed):
    basis = mode_basis(spec)
    if basis.fock_dim > cap:
        raise CapExceeded(f"Fock dimension {basis.fock_dim} exceeds cap {cap}")
    rep = Report("kms-check", spec_echo(spec))
    beta = spec.beta
    rng = np.random.default_rng(seed)

    hham = fock.dgamma(basis)
    g = fock.grading_unitary(basis)
    algebra = crossed.CrossedAlgebra(basis)
    omega = quasifree.gibbs_functional(basis, beta)
    rho = _extremal_twisted(basis, beta)
    weight = rho(np.eye(basis.fock_dim)).real

    spectrum = quasifree.c_beta_h(basis, beta)
    rep.section("c_partial", spectrum.c_partial)
    rep.section("trace_partial", spectrum.trace_partial)
    rep.section("gibbs_type_condition", spectrum.verdict)

    extensions = {
        "canonical": crossed.ExtensionPair(omega, rho.scaled(0.0)),
        "plus": crossed.ExtensionPair(omega, rho),
        "minus": crossed.ExtensionPair(omega, rho.scaled(-1.0)),
    }
    states = {name: crossed.extend_state(algebra, pair, tol=max(tol, 1e-10))
              for name, pair in extensions.items()}

    rep.section("extension_table", {
        name: st(algebra.generator()).real for name, st in states.items()})
    rep.section("omega_of_grading", omega(g).real)

    pairs = [(crossed.random_crossed_element(algebra, rng),
              crossed.random_crossed_element(algebra, rng))
             for _ in range(_N_RANDOM_PAIRS)]
    for name, st in states.items():
        rep.add_residual(f"kms_residual_{name}",
                         crossed.verify_kms(st, algebra, hham, beta, pairs), tol)

    mat_pairs = [(crossed.random_car_element(basis, rng),
                  crossed.random_car_element(basis, rng))
                 for _ in range(_N_RANDOM_PAIRS)]
    rep.add_residual(
        "twisted_kms_residual",
        crossed.verify_twisted_kms(rho, algebra.gamma, hham, beta, mat_pairs), tol)

    rep.add_flag("domination_at_weight",
                 quasifree.domination_check(rho, omega, tol=max(tol, 1e-10)),
                 value=weight)
    if linalg.op_norm(rho.density) > tol:
        rep.add_flag(
            "domination_fails_above_weight",
            not quasifree.domination_check(rho.scaled(1.05), omega, tol=max(tol, 1e-10)),
            value=1.05 * weight)

    for name in ("plus", "minus"):
        st = states[name]
        worst = 0.0
        for _ in range(_N_POSITIVITY_SAMPLES):
            x = crossed.random_crossed_element(algebra, rng, max_word_len=3, n_terms=4)
            val = st(algebra.multiply(algebra.star(x), x)).real
            worst = min(worst, val)
        rep.add_flag(f"positivity_min_{name}", worst >= -tol, value=worst,
                     tolerance=tol)
    return rep


def cmd_scan_condition(spec, tol, refinements):
    rep = Report("scan-condition", spec_echo(spec))
    beta = spec.beta
    if spec.generator is not None:
        rows = []
        c_values = []
        points = spec.generator.points
        for _ in range(refinements + 1):
            basis = mode_basis(spec, points=points)
            sr = quasifree.c_beta_h(basis, beta)
            rows.append({"points": points,
                         "c": sr.c_value,
                         "trace_partial_final": sr.trace_partial[-1] if sr.trace_partial else 0.0})
            c_values.append(sr.c_value)
            points *= 2
        rep.section("refinements", rows)
        decreasing = all(b < a for a, b in zip(c_values, c_values[1:]))
        rep.add_trend("c_refinement_trend",
                      c_values[-1] / c_values[0] if c_values[0] else 0.0,
                      "strictly-decreasing" if decreasing else "not-monotone")
    else:
        basis = mode_basis(spec)
        sr = quasifree.c_beta_h(basis, beta)
        rep.section("c_partial", sr.c_partial)
        rep.section("trace_partial", sr.trace_partial)
        diffs = [abs(b - a) for a, b in zip(sr.c_partial, sr.c_partial[1:])]
        rep.section("c_successive_diffs", diffs)
        if not sr.c_partial:
            annotation = "constant-one"
        elif diffs and diffs[-1] < max(tol, 1e-4) and sr.c_value > 0:
            annotation = "stabilizing-above-zero"
        else:
            annotation = "inconclusive"
        rep.add_trend("c_stabilization", sr.c_value, annotation)
    rep.section("gibbs_type_condition",
                quasifree.c_beta_h(mode_basis(spec), beta).verdict)
    return rep


def _demo_checks(rep, tol):
    """Built-in small examples pinning down the split and the twisted center."""
    # grading that swaps the two summands of C + C: freely acting, p = 0
    flip_alg = gns.direct_sum_algebra([("diag", 1), ("diag", 1)])
    flip = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    flip_gns = gns.build_gns(flip_alg, np.eye(2) / 2.0, flip)
    tc = gns.twisted_center(flip_gns)
    rep.add_flag("demo_flip_twisted_center_dim", tc.dim == 0, value=tc.dim)
    split = gns.kallman_split(flip_gns)
    rep.add_residual("demo_flip_p_norm", linalg.op_norm(split.p), tol)

    # trivial grading on M_2: twisted center equals the center (dim 1)
    full_alg = gns.full_matrix_algebra(2)
    ident_gns = gns.build_gns(full_alg, np.diag([0.75, 0.25]), np.eye(2))
    tc = gns.twisted_center(ident_gns)
    center_dim = len(full_alg.center())
    rep.add_flag("demo_identity_center_match", tc.dim == center_dim,
                 value=tc.dim)


def cmd_gns_center(spec, tol, cap, seed):
    basis = mode_basis(spec)
    if basis.fock_dim ** 2 > cap:
        raise CapExceeded(
            f"GNS dimension {basis.fock_dim ** 2} exceeds cap {cap}")
    rep = Report("gns-center", spec_echo(spec))
    beta = spec.beta
    rng = np.random.default_rng(seed)
    d = basis.fock_dim

    density = quasifree.gibbs_functional(basis, beta).density
    g_unitary = fock.grading_unitary(basis)
    algebra = gns.full_matrix_algebra(d)
    data = gns.build_gns(algebra, density, g_unitary, tol=max(tol, 1e-9))

    tc = gns.twisted_center(data)
    rep.add_flag("twisted_center_dim", tc.dim == 1, value=tc.dim)
    split = gns.kallman_split(data)
    rep.add_residual("kallman_inner_projection",
                     linalg.op_norm(split.p - np.eye(d)), tol)

    roundtrip = 0.0
    for r in tc.selfadjoint_unit_ball_extremes:
        back = gns.xi_inverse(data, gns.xi_map(data, r))
        roundtrip = max(roundtrip, linalg.op_norm(back - r))
    rep.add_residual("xi_roundtrip", roundtrip, tol)

    degenerate = (beta == 0.0 and basis.odd_modes) or any(
        abs(beta * basis.lambdas[k]) < quasifree.ZERO_MODE_TOL
        for k in basis.odd_modes)
    if degenerate:
        rep.add_trend("xi_quasifree_crosscheck", 0.0,
                      "skipped-degenerate-odd-spectrum")
    else:
        u_g = quasifree.grading_approximants(basis, beta, len(basis.odd_modes))
        rho_matrix = gns.xi_map(data, u_g)
        mu = quasifree.twisted_covariance(basis, beta)
        c = quasifree.c_beta_h(basis, beta).c_value
        worst = 0.0
        for _ in range(_N_CROSSCHECK_STRINGS):
            length = 2 * int(rng.integers(0, 4))
            vecs = [rng.standard_normal(basis.n) + 1j * rng.standard_normal(basis.n)
                    for _ in range(length)]
            word = np.eye(d, dtype=complex)
            for v in vecs:
                word = word @ fock.field(basis, v)
            lhs = rho_matrix(word)
            rhs = c * quasifree.eval_quasifree(mu, vecs)
            worst = max(worst, abs(lhs - rhs))
        rep.add_residual("xi_quasifree_crosscheck", worst, tol)

    _demo_checks(rep, tol)
    return rep


def cmd_un_limit(spec, tol, schedule, seed):
    basis = mode_basis(spec)
    rep = Report("un-limit", spec_echo(spec))
    rep.section("schedule", list(schedule))
    if not schedule:
        rep.section("rows", [])
        return rep
    n_odd = len(basis.odd_modes)
    if max(schedule) > n_odd or min(schedule) < 0:
        raise IndexOutOfRange(
            f"schedule entries must lie in [0, {n_odd}]")
    beta = spec.beta
    rng = np.random.default_rng(seed)
    d = basis.fock_dim

    omega = quasifree.gibbs_functional(basis, beta)
    rho = _extremal_twisted(basis, beta)

    e1 = np.zeros(basis.n)
    e1[0] = 1.0
    probes = {
        "identity": np.eye(d, dtype=complex),
        "mode1_quadratic": fock.field(basis, e1) @ fock.field(basis, 1j * e1),
        "random": crossed.random_car_element(basis, rng),
    }
    rows = []
    residuals = {name: [] for name in probes}
    for n in schedule:
        u_n = quasifree.grading_approximants(basis, beta, n)
        for name, a in probes.items():
            val = abs(omega(a @ u_n) - rho(a))
            rows.append({"n": n, "probe": name, "residual": val})
            residuals[name].append(val)
    rep.section("rows", rows)
    for name, vals in residuals.items():
        ok = all(b <= a + tol for a, b in zip(vals, vals[1:]))
        rep.add_flag(f"non_increasing_{name}", ok, value=vals[-1],
                     tolerance=tol)
    return rep


def _parse_schedule(text):
    if text is None or text.strip() == "":
        return []
    try:
        return [int(part) for part in text.split(",")]
    except ValueError as exc:
        raise SpecError(f"bad schedule {text!r}: comma-separated ints") from exc


def build_parser():
    parser = argparse.ArgumentParser(
        prog="carkms",
        description="KMS states and twisted functionals on Z2-crossed CAR algebras")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("kms-check", "scan-condition", "gns-center", "un-limit"):
        p = sub.add_parser(name)
        p.add_argument("--spec", required=True, help="model spec file (YAML)")
        p.add_argument("--out", default=None, help="report output path (default stdout)")
        p.add_argument("--csv", default=None, help="optional per-check CSV path")
        p.add_argument("--tol", type=float, default=DEFAULT_TOL)
        p.add_argument("--seed", type=int, default=None,
                       help="override the spec seed")
        p.add_argument("--cap", type=int, default=DEFAULT_CAP,
                       help="dimension cap")
        if name == "scan-condition":
            p.add_argument("--refinements", type=int, default=2,
                           help="number of point-doubling refinements")
        if name == "un-limit":
            p.add_argument("--schedule", default=None,
                           help="comma-separated truncation levels n")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        spec = load_model_spec(args.spec)
        seed = spec.seed if args.seed is None else args.seed
        if args.command == "kms-check":
            rep = cmd_kms_check(spec, args.tol, args.cap, seed)
        elif args.command == "scan-condition":
            rep = cmd_scan_condition(spec, args.tol, args.refinements)
        elif args.command == "gns-center":
            rep = cmd_gns_center(spec, args.tol, args.cap, seed)
        else:
            schedule = _parse_schedule(args.schedule)
            if args.schedule is None:
                basis = mode_basis(spec)
                schedule = list(range(1, len(basis.odd_modes) + 1))
            rep = cmd_un_limit(spec, args.tol, schedule, seed)
    except (SpecError, CapExceeded, IndexOutOfRange, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except CarKmsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    rep.write(args.out)
    if args.csv:
        rep.write_csv(args.csv)
    return rep.exit_code()


if __name__ == "__main__":
    sys.exit(main())
