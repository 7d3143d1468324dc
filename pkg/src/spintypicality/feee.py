"""Fixed Expectation Energy Ensemble (FEEE) statistics.

The ensemble is handled through its factorized approximation: the ground
population is pinned at its mean and every other population is an
independent exponential variate. Means of the populations depend only on
the energy gap to the ground state, so every sum over the 3**n basis states
collapses to a degeneracy-weighted sum over the 2n+1 levels.

Energies are in units of hbar*omega_0, entropies in units of k_B.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import logsumexp

from .containers import EntropyStats, RdmDiagonal
from .exceptions import DomainError, SingularityError, ValidityError
from .spectrum import _check_n, log_degeneracies

EULER_GAMMA = 0.5772156649015329
LN3 = math.log(3.0)


@dataclass(frozen=True)
class FeeeSpec:
    """n spins at fixed expectation energy U (total, not per spin)."""

    n: int
    U: float

    def __post_init__(self):
        _check_n(self.n)
        if not (-self.n <= self.U <= self.n):
            raise DomainError(f"U={self.U} outside the spectrum [-{self.n}, {self.n}]")

    @property
    def ground_energy(self) -> int:
        return -self.n

    @property
    def u(self) -> float:
        return self.U / self.n

    @classmethod
    def from_energy_per_spin(cls, n: int, u: float) -> "FeeeSpec":
        return cls(n, u * n)


class PopulationMeans(NamedTuple):
    """Mean FEEE populations.

    ``means[j]`` is the mean population of *each* basis state in level
    ``levels[j]``; ``means[0]`` is the ground population <P_1>.
    """

    p1: float
    levels: np.ndarray
    means: np.ndarray


def _log_dimension_minus_one(n: int) -> float:
    return n * LN3 + math.log1p(-math.exp(-n * LN3))


def _log_gap_sum(n: int, power: int) -> float:
    # ln sum_{k>=2} 1/(E_k - E_1)^power, gaps are i + n = 1..2n
    gaps = np.arange(1, 2 * n + 1, dtype=float)
    return float(logsumexp(log_degeneracies(n)[1:] - power * np.log(gaps)))


def _log_scale(spec: FeeeSpec) -> float:
    # ln[(U - E_1)/(N - 1)]
    excess = spec.U + spec.n
    return -math.inf if excess == 0 else math.log(excess) - _log_dimension_minus_one(spec.n)


def _ground_population(spec: FeeeSpec) -> float:
    log_scale = _log_scale(spec)
    p1 = 1.0 if log_scale == -math.inf else 1.0 - math.exp(log_scale + _log_gap_sum(spec.n, 1))
    if not (0.0 <= p1 <= 1.0):
        raise ValidityError(
            f"FEEE approximate distribution outside its domain "
            f"(n={spec.n}, U={spec.U}: <P_1>={p1:.6g} not in [0, 1])"
        )
    return p1


def feee_population_means(spec: FeeeSpec) -> PopulationMeans:
    p1 = _ground_population(spec)
    n = spec.n
    levels = np.arange(-n, n + 1)
    means = np.empty(2 * n + 1)
    means[0] = p1
    means[1:] = np.exp(_log_scale(spec) - np.log(np.arange(1, 2 * n + 1, dtype=float)))
    return PopulationMeans(p1, levels, means)


def feee_entropy_stats(spec: FeeeSpec, exact_mean: bool = False) -> EntropyStats:
    """Mean and standard deviation of the pure-state entropy.

    By default the mean keeps only the leading order in N = 3**n. With
    ``exact_mean=True`` it is the exact average over the factorized
    distribution, ``-sum <P_k> ln <P_k> - (1 - gamma)(1 - <P_1>)``.
    """
    p1 = _ground_population(spec)
    n = spec.n
    width = n * LN3
    excess = spec.U + n
    if excess == 0:
        return EntropyStats(0.0, 0.0, width)
    log_prefactor = math.log(excess) + math.log(n * LN3) - n * LN3
    std = math.exp(log_prefactor + 0.5 * _log_gap_sum(n, 2))
    if not exact_mean:
        return EntropyStats(math.exp(log_prefactor + _log_gap_sum(n, 1)), std, width)

    log_scale = _log_scale(spec)
    gaps = np.arange(1, 2 * n + 1, dtype=float)
    # -sum_{k>=2} m_k ln m_k with m_k = c/gap; each -ln m_k > 0 while <P_1> is valid
    weights = np.log(gaps) - log_scale
    excited = math.exp(log_scale + logsumexp(log_degeneracies(n)[1:] - np.log(gaps), b=weights))
    ground = -p1 * math.log(p1) if p1 > 0 else 0.0
    mean = ground + excited - (1.0 - EULER_GAMMA) * (1.0 - p1)
    return EntropyStats(mean, std, width)


def feee_entropy_asymptotic(spec: FeeeSpec) -> EntropyStats:
    """Large-n limit: mean (U + n) ln 3, std mean / sqrt(3**n)."""
    mean = (spec.U + spec.n) * LN3
    return EntropyStats(mean, mean * math.exp(-0.5 * spec.n * LN3), spec.n * LN3)


def feee_rdm_mean(spec: FeeeSpec) -> RdmDiagonal:
    """Reduced density matrix of spin 1 built from the mean FEEE populations.

    For n = 1 there is no environment; the result is then just the
    population means and a warning is issued.
    """
    _ground_population(spec)
    n = spec.n
    if n == 1:
        warnings.warn("n=1: no environment, reduced density matrix is formal", stacklevel=2)
        env_energies = np.zeros(1)
        env_logs = np.zeros(1)
    else:
        env_energies = np.arange(-(n - 1), n, dtype=float)
        env_logs = log_degeneracies(n - 1)
    log_scale = _log_scale(spec)
    mu = {}
    for s in (0, 1):
        gaps = s + env_energies + n
        mu[s] = math.exp(log_scale + logsumexp(env_logs - np.log(gaps))) if log_scale > -math.inf else 0.0
    return RdmDiagonal(1.0 - mu[0] - mu[1], mu[0], mu[1])


def _check_u(u: float) -> None:
    if not (-1.0 <= u <= 0.0):
        raise DomainError(f"energy per spin u={u} outside the FEEE range [-1, 0]")


def feee_rdm_asymptotic(u: float) -> RdmDiagonal:
    _check_u(u)
    return RdmDiagonal((1.0 - 2.0 * u) / 3.0, (u + 1.0) / 3.0, (u + 1.0) / 3.0)


def r_parameter(rdm) -> float:
    """mu_+1 mu_-1 / mu_0^2 - 1; zero for any Boltzmann-form diagonal."""
    mu_minus, mu_zero, mu_plus = rdm
    if mu_zero == 0:
        raise SingularityError("R parameter undefined for mu_0 = 0")
    return mu_plus * mu_minus / mu_zero**2 - 1.0


def r_asymptotic(u: float) -> float:
    _check_u(u)
    if u == -1.0:
        raise SingularityError("R parameter diverges at u = -1")
    return -3.0 * u / (u + 1.0)
