"""Exact Fourier coefficients of paramodular Siegel Eisenstein series.

Starting from a primitive Dirichlet character eta of conductor N and a
weight k >= 4 of matching parity, the package computes the coefficients
a(T) of the associated degree-2 Eisenstein series of paramodular level N^2
-- exactly (rational arithmetic) for N = 1 and in high-precision complex
arithmetic otherwise -- together with all constituent local quantities,
and verifies every closed-form local formula against independent
brute-force oracles.
"""

__version__ = "0.1.0"

from .arith import DiscriminantSplit, HalfIntegralForm, LevelSplit
from .characters import DirichletCharacter, LocalCharacterData
from .fourier import (
    CoefficientRecord,
    EisensteinSpec,
    UnsupportedPlaceError,
    coefficient,
    eichler_zagier_coefficient,
    expand,
)

__all__ = [
    "__version__",
    "DiscriminantSplit",
    "HalfIntegralForm",
    "LevelSplit",
    "DirichletCharacter",
    "LocalCharacterData",
    "CoefficientRecord",
    "EisensteinSpec",
    "UnsupportedPlaceError",
    "coefficient",
    "eichler_zagier_coefficient",
    "expand",
]
