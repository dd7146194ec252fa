"""Model specification files.

A spec is a single YAML document:

    modes:
      - {lambda: 1.0986, parity: "-1"}
    beta: 1.0
    generator:            # optional; replaces explicit modes
      kind: ising
      mass: 1.0
      theta_min: -3.0
      theta_max: 3.0
      points: 8
    tolerances:
      residual: 1.0e-9
    seed: 7
"""

from dataclasses import dataclass, field

import numpy as np
import yaml

from .errors import CarKmsError
from .fock import ModeBasis


class SpecError(CarKmsError):
    """Malformed model specification (CLI exit code 3)."""


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    mass: float
    theta_min: float
    theta_max: float
    points: int


@dataclass(frozen=True)
class ModelSpec:
    modes: tuple  # of (lambda, parity)
    beta: float
    generator: GeneratorSpec | None = None
    tolerances: dict = field(default_factory=dict)
    seed: int = 0

    def tol(self, name, default):
        return float(self.tolerances.get(name, default))


def _parse_parity(raw):
    value = int(str(raw).replace("+", ""))
    if value not in (1, -1):
        raise SpecError(f"parity must be +1 or -1, got {raw!r}")
    return value


def parse_model_spec(data):
    if not isinstance(data, dict):
        raise SpecError("spec document must be a key/value mapping")
    try:
        beta = float(data["beta"])
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecError("missing or invalid 'beta'") from exc
    if not np.isfinite(beta):
        raise SpecError("beta must be finite")
    modes = []
    for entry in data.get("modes") or []:
        try:
            modes.append((float(entry["lambda"]), _parse_parity(entry["parity"])))
        except (KeyError, TypeError, ValueError) as exc:
            raise SpecError(f"invalid mode entry {entry!r}") from exc
    generator = None
    if "generator" in data and data["generator"] is not None:
        gen = data["generator"]
        try:
            generator = GeneratorSpec(
                kind=str(gen["kind"]),
                mass=float(gen.get("mass", 1.0)),
                theta_min=float(gen.get("theta_min", -3.0)),
                theta_max=float(gen.get("theta_max", 3.0)),
                points=int(gen.get("points", 8)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise SpecError(f"invalid generator block {gen!r}") from exc
        if generator.kind != "ising":
            raise SpecError(f"unknown generator kind {generator.kind!r}")
        if generator.points < 1:
            raise SpecError("generator points must be >= 1")
        if generator.mass <= 0:
            raise SpecError("generator mass must be positive")
    tolerances = dict(data.get("tolerances") or {})
    seed = int(data.get("seed", 0))
    if not modes and generator is None:
        raise SpecError("spec needs either explicit modes or a generator")
    return ModelSpec(modes=tuple(modes), beta=beta, generator=generator,
                     tolerances=tolerances, seed=seed)


def load_model_spec(path):
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = yaml.safe_load(fh)
        except yaml.YAMLError as exc:
            raise SpecError(f"cannot parse spec file: {exc}") from exc
    return parse_model_spec(data)


def generated_lambdas(gen, points=None):
    """Ising spectrum m cosh(theta) on a uniform rapidity grid."""
    points = gen.points if points is None else points
    thetas = np.linspace(gen.theta_min, gen.theta_max, points)
    return [gen.mass * np.cosh(th) for th in thetas]


def mode_basis(spec, points=None):
    """Resolve a spec to a ModeBasis, expanding the generator if present."""
    if spec.generator is not None:
        lams = generated_lambdas(spec.generator, points=points)
        return ModeBasis(lambdas=lams, parities=[-1] * len(lams))
    lams = [lam for lam, _ in spec.modes]
    pars = [g for _, g in spec.modes]
    return ModeBasis(lambdas=lams, parities=pars)


def spec_echo(spec):
    """Plain-dict echo of a spec, suitable for embedding in reports."""
    out = {"beta": spec.beta, "seed": spec.seed}
    if spec.modes:
        out["modes"] = [{"lambda": lam, "parity": f"{g:+d}"} for lam, g in spec.modes]
    if spec.generator is not None:
        g = spec.generator
        out["generator"] = {"kind": g.kind, "mass": g.mass, "theta_min": g.theta_min,
                            "theta_max": g.theta_max, "points": g.points}
    if spec.tolerances:
        out["tolerances"] = dict(spec.tolerances)
    return out
