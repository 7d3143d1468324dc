"""Random Pure State Ensemble (RPSE) statistics.

The active space is spanned by all product states with energy at most the
cutoff ``e_max``; populations are uniform on its simplex. The dimension of
the active space is available on four routes (exact level sum, Gaussian
density of states, continuum integral of ``exp(dhat)``, leading-order
asymptotics) and drives the entropy, internal energy and reduced density
matrix of a single spin.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import integrate
from scipy.special import digamma, log_ndtr, logsumexp

from . import charfun
from .containers import RdmDiagonal, ThermoState
from .exceptions import DomainError, EmptyActiveSpaceError, NumericalError, SingularityError, ValidityError
from .feee import EULER_GAMMA, LN3
from .spectrum import EXACT_MAX_N, LogNumber, _check_n, exact_degeneracy, full_spectrum, log_degeneracies, log_level_sum


@dataclass(frozen=True)
class RpseSpec:
    """n spins with active space {k : E_k <= e_max}."""

    n: int
    e_max: float

    def __post_init__(self):
        _check_n(self.n)
        if self.e_max < -self.n:
            raise EmptyActiveSpaceError(f"e_max={self.e_max} below the ground energy -{self.n}")
        if self.e_max > self.n:
            raise DomainError(f"e_max={self.e_max} above the top of the spectrum {self.n}")

    @property
    def q_max(self) -> float:
        return self.e_max / self.n

    @property
    def top_level(self) -> int:
        """Highest level inside the active space (cutoff is inclusive)."""
        return int(math.floor(self.e_max))

    @classmethod
    def from_scaled_cutoff(cls, n: int, q_max: float) -> "RpseSpec":
        return cls(n, q_max * n)


class InternalEnergy(NamedTuple):
    u: float  # per spin
    energy: float
    variance: float  # ensemble variance of the expectation energy


def _log_count(n: int, e_max: float) -> float:
    # ln N_RPSE(n, e_max); cutoffs above the spectrum saturate, below it give -inf
    if n == 0:
        return 0.0 if e_max >= 0 else -math.inf
    top = min(int(math.floor(e_max)), n)
    if top < -n:
        return -math.inf
    return float(logsumexp(log_degeneracies(n)[: top + n + 1]))


def rpse_count(n: int, e_max: float) -> int:
    """Exact integer dimension of the active space (any n, cutoff clipped to the band)."""
    if n == 0:
        return 1 if e_max >= 0 else 0
    _check_n(n)
    top = min(int(math.floor(e_max)), n)
    return sum(exact_degeneracy(n, i) for i in range(-n, top + 1))


def rpse_dimension_exact(spec: RpseSpec) -> LogNumber:
    return LogNumber(_log_count(spec.n, spec.e_max))


def rpse_dimension_gaussian(spec: RpseSpec) -> LogNumber:
    """Active-space dimension from the Gaussian density of states.

    N [1 - erfc(e_max / sqrt(4n/3)) / 2] is the normal CDF at e_max / sigma.
    """
    sigma = math.sqrt(2.0 * spec.n / 3.0)
    return LogNumber(spec.n * LN3 + float(log_ndtr(spec.e_max / sigma)))


def rpse_dimension_integral(spec: RpseSpec, epsrel: float = 1e-10) -> LogNumber:
    """n^2 times the integral of exp(dhat(n, q)) over [-1, q_max].

    The integrand is scaled by its maximum before integration so the
    result is assembled in the log domain.
    """
    n, q_max = spec.n, spec.q_max
    if q_max <= -1.0:
        raise DomainError("the continuum dimension needs q_max > -1")
    peak_q = min(q_max, 0.0)
    peak = charfun.dhat(n, peak_q)

    def integrand(q):
        return math.exp(charfun.dhat(n, q) - peak)

    # break points at the scales of the peak (1/sqrt(n)) and of the edge slope (1/n)
    width = 1.0 / math.sqrt(n)
    candidates = {peak_q - k * width for k in (1, 4, 8)} | {q_max - k / n for k in (1, 10, 40)}
    if q_max > 0:
        candidates |= {0.0, min(4 * width, q_max)}
    points = sorted(p for p in candidates if -1.0 < p < q_max)
    value, abserr, info = integrate.quad(
        integrand, -1.0, q_max, points=points or None, epsabs=0.0, epsrel=epsrel, limit=500, full_output=1
    )[:3]
    if value <= 0 or not math.isfinite(value) or abserr > 1e3 * epsrel * value:
        raise NumericalError(
            f"quadrature did not converge for n={n}, q_max={q_max}: "
            f"value={value!r}, abserr={abserr!r}, evaluations={info.get('neval')}"
        )
    return LogNumber(2.0 * math.log(n) + peak + math.log(value))


def rpse_log_dimension_asymptotic(n: int, q_max: float, prefactor: bool = False) -> float:
    """Leading-order ln(N_RPSE / 3**n).

    Zero for q_max >= 0, dhat(n, q_max) - n ln 3 below. ``prefactor`` adds the
    O(ln n) term ln[sqrt(|dhat''(n,0)|/2pi) / dhat'(n,q_max)] for q_max < 0.
    """
    _check_n(n)
    if not (-1.0 <= q_max <= 1.0):
        raise DomainError(f"q_max={q_max} outside [-1, 1]")
    if q_max >= 0:
        return 0.0
    value = charfun.dhat_deficit(n, q_max)
    if prefactor:
        curvature = abs(charfun.dhat_second(n, 0.0))
        value += 0.5 * math.log(curvature / (2 * math.pi)) - math.log(charfun.dhat_prime(n, q_max))
    return value


def rpse_internal_energy_exact(spec: RpseSpec) -> InternalEnergy:
    """Mean expectation energy over the active space and its ensemble variance.

    The variance is sum_i i^2 D(n, i) / N_RPSE^2 (moments of the factorized
    population distribution).
    """
    spectrum = full_spectrum(spec.n)
    top = spec.top_level
    log_count = _log_count(spec.n, spec.e_max)
    sign, log_first = log_level_sum(spectrum, lambda e: e, include=lambda i: i <= top)
    _, log_second = log_level_sum(spectrum, lambda e: e * e, include=lambda i: i <= top)
    energy = sign * math.exp(log_first - log_count) if sign else 0.0
    variance = math.exp(log_second - 2 * log_count) if log_second > -math.inf else 0.0
    return InternalEnergy(energy / spec.n, energy, variance)


def rpse_internal_energy_asymptotic(n: int, q_max: float, corrected: bool = False) -> float:
    """Large-n internal energy per spin: 0 above the band centre, q_max below.

    ``corrected`` subtracts the exponential-tail offset 1/dhat'(n, q_max);
    the finite-n exact energy lies below the cutoff, which fixes the sign.
    """
    _check_n(n)
    if not (-1.0 <= q_max <= 1.0):
        raise DomainError(f"q_max={q_max} outside [-1, 1]")
    if q_max >= 0:
        return 0.0
    if not corrected:
        return q_max
    return q_max - 1.0 / charfun.dhat_prime(n, q_max)


def rpse_entropy_mean(spec: RpseSpec) -> float:
    """Typical entropy ln N_RPSE - (1 - gamma), in units of k_B."""
    log_count = _log_count(spec.n, spec.e_max)
    if log_count < math.log(2.0):
        raise ValidityError(f"entropy formula needs N_RPSE >= 2 (n={spec.n}, e_max={spec.e_max})")
    return log_count - (1.0 - EULER_GAMMA)


def simplex_entropy_mean(log_count: float) -> float:
    """Exact mean of -sum P ln P for populations uniform on an N-simplex.

    Equals H_N - 1 (harmonic number); approaches ln N - (1 - gamma) as N grows.
    """
    if log_count > 600:
        return log_count - (1.0 - EULER_GAMMA)
    count = round(math.exp(log_count))
    return float(digamma(count + 1.0) - digamma(2.0))


def entropy_equation_of_state(n: int, u: float) -> ThermoState:
    """Entropy per spin and inverse temperature at internal energy per spin u.

    At u = -1 the entropy is 0 but the temperature vanishes; a
    SingularityError is raised whose ``partial`` carries s = 0.
    """
    _check_n(n)
    if not (-1.0 <= u <= 0.0):
        raise DomainError(f"internal energy per spin u={u} outside [-1, 0]")
    s = charfun.dhat(n, u) / n
    if abs(u) > 1.0 - charfun.EDGE_EPS:
        raise SingularityError(
            f"inverse temperature diverges at u={u}", partial=ThermoState(u, s, math.inf)
        )
    beta = charfun.dhat_prime(n, u) / n
    return ThermoState(u, s, beta)


def rpse_rdm_exact(spec: RpseSpec) -> RdmDiagonal:
    """Reduced density matrix of spin 1: N_RPSE(n-1, e_max - s) / N_RPSE(n, e_max)."""
    n = spec.n
    if n < 2:
        raise DomainError("the reduced density matrix needs n >= 2 (an environment)")
    if n <= EXACT_MAX_N:
        counts = [rpse_count(n - 1, spec.e_max - s) for s in (-1, 0, 1)]
        total = sum(counts)
        return RdmDiagonal(*(c / total for c in counts))
    logs = np.array([_log_count(n - 1, spec.e_max - s) for s in (-1, 0, 1)])
    mu = np.exp(logs - logsumexp(logs))
    return RdmDiagonal(*(float(m) for m in mu / mu.sum()))


def _boltzmann_form(q_max: float) -> np.ndarray:
    # f_0 exp(-s beta), with beta = dhat'/n
    f_zero = charfun.alpha(q_max)
    beta = charfun.dhat_prime(1, q_max)
    return f_zero * np.exp(-np.array([-1.0, 0.0, 1.0]) * beta)


def rpse_rdm_asymptotic(q_max: float) -> RdmDiagonal:
    """Large-n reduced density matrix: the elementary functions at q_max.

    Above the band centre the state stays at the q_max = 0 (uniform) value.
    """
    if not (-1.0 <= q_max <= 1.0):
        raise DomainError(f"q_max={q_max} outside [-1, 1]")
    q = min(q_max, 0.0)
    rdm = RdmDiagonal(*charfun.elementary_f(q))
    if abs(q) < 1.0 - 1e-6:
        gap = np.max(np.abs(_boltzmann_form(q) - rdm.as_array()))
        if gap > 1e-12:
            raise NumericalError(f"canonical cross-check failed at q_max={q_max} (gap {gap:.3g})")
    return rdm


def canonical_rdm(beta: float) -> RdmDiagonal:
    """Boltzmann populations exp(-s beta)/Q for s = -1, 0, +1."""
    if not math.isfinite(beta):
        raise DomainError(f"beta must be finite, got {beta}")
    exponents = np.array([beta, 0.0, -beta])
    weights = np.exp(exponents - exponents.max())
    return RdmDiagonal(*(float(w) for w in weights / weights.sum()))


def canonical_entropy_check(q_max: float) -> tuple:
    """(global entropy per spin, entropy of the single-spin asymptotic state)."""
    if not (-1.0 <= q_max <= 0.0):
        raise DomainError(f"q_max={q_max} outside [-1, 0]")
    s_global = charfun.dhat(1, q_max)
    s_canonical = rpse_rdm_asymptotic(q_max).entropy
    return s_global, s_canonical
