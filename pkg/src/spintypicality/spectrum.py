"""Energy spectrum of n non-interacting J=1 spins in a Zeeman field.

Energies are in reduced units (hbar*omega_0 = k_B = 1), so the energy of a
product state is the sum of its spin projections and level ``i`` runs over
``-n..n``. Degeneracies are available on two routes:

* an exact route with Python integers, used as the oracle, and
* a log route built on ``gammaln``/``logsumexp`` that works for any ``n``.

The two routes agree to ~1e-14 relative wherever both are evaluated.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, NamedTuple, Optional

import numpy as np
from scipy.special import gammaln, logsumexp

from .exceptions import CapacityError, DomainError, EvaluationError

# Single-spin constants. Only J=1 is implemented; everything J-specific lives here.
SPIN_PROJECTIONS = (-1, 0, 1)
SINGLE_SPIN_VARIANCE = 2.0 / 3.0

EXACT_MAX_N = 30
ENUMERATION_MAX_N = 12


@dataclass(frozen=True, order=True)
class LogNumber:
    """A nonnegative real stored as its natural logarithm.

    ``LogNumber.zero()`` (log = -inf) represents zero. Addition is
    log-sum-exp, so sums stay finite far beyond the float range.
    """

    log: float

    @classmethod
    def zero(cls) -> "LogNumber":
        return cls(-math.inf)

    @classmethod
    def from_value(cls, x: float) -> "LogNumber":
        if x < 0:
            raise DomainError(f"LogNumber cannot hold a negative value ({x})")
        return cls(math.log(x) if x > 0 else -math.inf)

    @property
    def is_zero(self) -> bool:
        return self.log == -math.inf

    def __add__(self, other: "LogNumber") -> "LogNumber":
        return LogNumber(float(np.logaddexp(self.log, other.log)))

    def __mul__(self, other: "LogNumber") -> "LogNumber":
        if self.is_zero or other.is_zero:
            return LogNumber.zero()
        return LogNumber(self.log + other.log)

    def __truediv__(self, other: "LogNumber") -> "LogNumber":
        if other.is_zero:
            raise ZeroDivisionError("division by LogNumber zero")
        if self.is_zero:
            return LogNumber.zero()
        return LogNumber(self.log - other.log)

    def __float__(self) -> float:
        # may overflow to inf for huge values; use .log in that case
        with np.errstate(over="ignore"):
            return float(np.exp(self.log))


@dataclass(frozen=True)
class SpinSystem:
    """n identical J=1 spins."""

    n: int

    def __post_init__(self):
        _check_n(self.n)

    @property
    def dimension(self) -> int:
        return 3 ** self.n

    @property
    def log_dimension(self) -> float:
        return self.n * math.log(3.0)

    @property
    def energy_variance(self) -> float:
        return SINGLE_SPIN_VARIANCE * self.n


class Level(NamedTuple):
    i: int
    log_degeneracy: float
    exact_degeneracy: Optional[int]


@dataclass(frozen=True)
class Spectrum:
    """All 2n+1 levels of an n-spin system, ordered by energy."""

    system: SpinSystem
    levels: tuple
    energies: np.ndarray = field(repr=False)
    log_degeneracies: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return self.system.n

    @property
    def exact_degeneracies(self) -> Optional[list]:
        if self.levels[0].exact_degeneracy is None:
            return None
        return [lvl.exact_degeneracy for lvl in self.levels]


class OccupationTriple(NamedTuple):
    """Numbers of spins with projection -1, 0 and +1."""

    i_minus: int
    i_zero: int
    i_plus: int

    @property
    def i(self) -> int:
        return self.i_plus - self.i_minus

    @property
    def multiplicity(self) -> int:
        n = self.i_minus + self.i_zero + self.i_plus
        return math.comb(n, self.i_zero) * math.comb(n - self.i_zero, self.i_plus)


class BasisState(NamedTuple):
    m: tuple
    energy: int


def _check_n(n) -> None:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise DomainError(f"number of spins must be a positive integer, got {n!r}")


def _check_level(n: int, i: int) -> None:
    _check_n(n)
    if abs(i) > n:
        raise DomainError(f"level index i={i} outside [-{n}, {n}]")


def exact_degeneracy(n: int, i: int) -> int:
    """Number of product states of ``n`` spins with total projection ``i``.

    Sums the multinomial ``n!/(i_-! i_0! i_+!)`` over the admissible i_0;
    pairs (i, i_0) with the wrong parity contribute nothing.
    """
    _check_level(n, i)
    total = 0
    for i_zero in range(n - abs(i), -1, -2):
        i_plus = (n - i_zero + i) // 2
        total += math.comb(n, i_zero) * math.comb(n - i_zero, i_plus)
    return total


@lru_cache(maxsize=256)
def _log_degeneracy_table(n: int) -> np.ndarray:
    # levels i >= 0 only; i_0 = n - i - 2j, i_+ = i + j, i_- = j
    i = np.arange(n + 1)[:, None]
    j = np.arange(n // 2 + 1)[None, :]
    i_zero = n - i - 2 * j
    valid = i_zero >= 0
    with np.errstate(invalid="ignore"):
        terms = (
            gammaln(n + 1.0)
            - gammaln(np.where(valid, i_zero, 0) + 1.0)
            - gammaln(i + j + 1.0)
            - gammaln(j + 1.0)
        )
    terms = np.where(valid, terms, -np.inf)
    half = logsumexp(terms, axis=1)
    # mirror so that D(n, i) and D(n, -i) are bitwise identical
    table = np.concatenate([half[:0:-1], half])
    table.setflags(write=False)
    return table


def log_degeneracies(n: int) -> np.ndarray:
    """ln D(n, i) for i = -n..n as a read-only array."""
    _check_n(n)
    return _log_degeneracy_table(int(n))


def degeneracy(n: int, i: int) -> Level:
    """Degeneracy of level ``i`` on both routes (exact only for n <= 30)."""
    _check_level(n, i)
    exact = exact_degeneracy(n, i) if n <= EXACT_MAX_N else None
    return Level(int(i), float(log_degeneracies(n)[i + n]), exact)


@lru_cache(maxsize=64)
def _full_spectrum(n: int) -> Spectrum:
    logs = log_degeneracies(n)
    energies = np.arange(-n, n + 1, dtype=float)
    energies.setflags(write=False)
    levels = tuple(
        Level(i, float(logs[i + n]), exact_degeneracy(n, i) if n <= EXACT_MAX_N else None)
        for i in range(-n, n + 1)
    )
    return Spectrum(SpinSystem(n), levels, energies, logs)


def full_spectrum(n: int) -> Spectrum:
    _check_n(n)
    return _full_spectrum(int(n))


def _signed_logsumexp(log_abs: np.ndarray, signs: np.ndarray) -> tuple:
    # sorting makes mirror-symmetric cancellations exact
    pos = logsumexp(np.sort(log_abs[signs > 0])) if np.any(signs > 0) else -np.inf
    neg = logsumexp(np.sort(log_abs[signs < 0])) if np.any(signs < 0) else -np.inf
    if pos == neg:
        return 0, -math.inf
    if pos > neg:
        return 1, float(pos + np.log1p(-np.exp(neg - pos)))
    return -1, float(neg + np.log1p(-np.exp(pos - neg)))


def log_level_sum(
    spectrum: Spectrum,
    f: Callable[[float], float],
    include: Optional[Callable[[int], bool]] = None,
) -> tuple:
    """Return ``(sign, ln|sum|)`` of ``sum_i D(n, i) f(i)``.

    ``include`` is an optional predicate on the level index; excluded levels
    are never passed to ``f``.
    """
    log_abs, signs = [], []
    for level in spectrum.levels:
        if include is not None and not include(level.i):
            continue
        value = float(f(float(level.i)))
        if not math.isfinite(value):
            raise EvaluationError(f"f is not finite at level i={level.i} (got {value})")
        if value == 0.0:
            continue
        log_abs.append(level.log_degeneracy + math.log(abs(value)))
        signs.append(1 if value > 0 else -1)
    if not log_abs:
        return 0, -math.inf
    return _signed_logsumexp(np.asarray(log_abs), np.asarray(signs))


def level_sum(spectrum, f, include=None) -> float:
    """``sum_k f(E_k)`` over all basis states, computed level by level."""
    sign, log_abs = log_level_sum(spectrum, f, include)
    if sign == 0:
        return 0.0
    with np.errstate(over="ignore"):
        return sign * float(np.exp(log_abs))


def log_gaussian_dos(n: int, energy):
    """Log of the central-limit density of states (mean 0, variance 2n/3)."""
    _check_n(n)
    var = SINGLE_SPIN_VARIANCE * n
    energy = np.asarray(energy, dtype=float)
    out = n * math.log(3.0) - 0.5 * math.log(2 * math.pi * var) - energy**2 / (2 * var)
    return float(out) if out.ndim == 0 else out


def gaussian_dos(n: int, energy):
    with np.errstate(over="ignore"):
        return np.exp(log_gaussian_dos(n, energy))


@lru_cache(maxsize=16)
def basis_energies(n: int) -> np.ndarray:
    """Energies of all 3**n product states in lexicographic trit order."""
    _check_n(n)
    if n > ENUMERATION_MAX_N:
        raise CapacityError(f"refusing to enumerate 3**{n} states (limit n <= {ENUMERATION_MAX_N})")
    single = np.array(SPIN_PROJECTIONS, dtype=np.int64)
    energies = single
    for _ in range(n - 1):
        energies = np.add.outer(single, energies).ravel()
    energies.setflags(write=False)
    return energies


def enumerate_basis(n: int) -> list:
    _check_n(n)
    if n > ENUMERATION_MAX_N:
        raise CapacityError(f"refusing to enumerate 3**{n} states (limit n <= {ENUMERATION_MAX_N})")
    return [BasisState(m, sum(m)) for m in itertools.product(SPIN_PROJECTIONS, repeat=n)]


def occupation_domain(n: int) -> list:
    """All occupation triples of ``n`` spins, ordered by (i, i_0)."""
    _check_n(n)
    triples = [
        OccupationTriple(i_minus, i_zero, n - i_minus - i_zero)
        for i_minus in range(n + 1)
        for i_zero in range(n - i_minus + 1)
    ]
    return sorted(triples, key=lambda t: (t.i, t.i_zero))
