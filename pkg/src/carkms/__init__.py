"""Numerical operator-algebra toolkit for KMS states on Z2-crossed
products of finite-mode CAR algebras."""

from . import crossed, errors, fock, gns, linalg, modelspec, quasifree, report
from .fock import ModeBasis

__all__ = ["crossed", "errors", "fock", "gns", "linalg", "modelspec",
           "quasifree", "report", "ModeBasis"]

__version__ = "0.1.0"
