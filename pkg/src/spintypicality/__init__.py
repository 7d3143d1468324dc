"""Typicality of pure-state ensembles for n noninteracting spin-1 systems."""
from .containers import EntropyStats, RdmDiagonal, ThermoState
from .estimators import EquationOfState, FeeeProfile, RpseProfile
from .exceptions import (
    CapacityError,
    DimensionError,
    DomainError,
    EmptyActiveSpaceError,
    EvaluationError,
    NumericalError,
    SingularityError,
    SpinTypicalityError,
    ValidityError,
)
from .feee import FeeeSpec
from .rpse import RpseSpec
from .spectrum import LogNumber, SpinSystem, full_spectrum

__version__ = "0.1.0"

__all__ = [
    "CapacityError", "DimensionError", "DomainError", "EmptyActiveSpaceError",
    "EntropyStats", "EquationOfState", "EvaluationError", "FeeeProfile", "FeeeSpec",
    "LogNumber", "NumericalError", "RdmDiagonal", "RpseProfile", "RpseSpec",
    "SingularityError", "SpinSystem", "SpinTypicalityError", "ThermoState",
    "ValidityError", "full_spectrum",
]
