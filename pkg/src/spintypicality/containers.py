"""Small result types shared by the ensemble modules."""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np


class RdmDiagonal(NamedTuple):
    """Diagonal of a single spin's equilibrium reduced density matrix.

    Ordered by spin projection -1, 0, +1.
    """

    mu_minus: float
    mu_zero: float
    mu_plus: float

    def as_array(self) -> np.ndarray:
        return np.array(self, dtype=float)

    @property
    def trace(self) -> float:
        return math.fsum(self)

    @property
    def entropy(self) -> float:
        return -math.fsum(m * math.log(m) for m in self if m > 0)


class EntropyStats(NamedTuple):
    mean: float
    std: float
    domain_width: float


class ThermoState(NamedTuple):
    """Per-spin internal energy, per-spin entropy and inverse temperature."""

    u: float
    s: float
    beta: float
