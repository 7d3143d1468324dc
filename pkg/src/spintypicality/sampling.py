"""Monte Carlo sampling of population vectors from the FEEE and the RPSE.

Spin 1 is the subsystem and spins 2..n are the environment. A basis state
is addressed by its lexicographic index ``k`` in the trit order
(-1, 0, +1), so ``k = (s + 1) * 3**(n-1) + env``.

Random numbers come from a counter-based generator keyed by
``(seed, stream, sample index)``: sample ``i`` is the same no matter which
thread draws it or in what order.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.special import xlogy

from .containers import RdmDiagonal
from .exceptions import CapacityError, DimensionError, DomainError, EmptyActiveSpaceError
from .feee import FeeeSpec, feee_population_means
from .rpse import rpse_count
from .spectrum import ENUMERATION_MAX_N, basis_energies

RPSE_STREAM = 0
FEEE_STREAM = 1
FEEE_MAX_N = 8


def make_rng(seed: int, index: int, stream: int = RPSE_STREAM) -> np.random.Generator:
    """Philox generator for one sample; depends only on (seed, stream, index)."""
    if not (0 <= int(seed) < 2**64):
        raise DomainError(f"seed must be a 64-bit unsigned integer, got {seed}")
    if index < 0:
        raise DomainError(f"sample index must be nonnegative, got {index}")
    sequence = np.random.SeedSequence(int(seed), spawn_key=(int(stream), int(index)))
    return np.random.Generator(np.random.Philox(sequence))


@dataclass(frozen=True, eq=False)
class ActiveSpace:
    """Product states of n spins with energy <= e_max.

    States are ordered by energy, ties in lexicographic trit order. Arrays
    are read-only and aligned: ``index[j]``, ``s[j]``, ``env[j]`` and
    ``energy[j]`` describe state ``j``.
    """

    n: int
    e_max: int
    index: np.ndarray = field(repr=False)
    s: np.ndarray = field(repr=False)
    env: np.ndarray = field(repr=False)
    energy: np.ndarray = field(repr=False)
    split_counts: tuple = ()

    @property
    def count(self) -> int:
        return len(self.index)

    @property
    def environment_dimension(self) -> int:
        return 3 ** (self.n - 1)


@lru_cache(maxsize=32)
def _space(n: int, e_max: int) -> ActiveSpace:
    energies = basis_energies(n)
    (index,) = np.nonzero(energies <= e_max)
    index = index[np.argsort(energies[index], kind="stable")]
    env_dim = 3 ** (n - 1)
    s = (index // env_dim - 1).astype(np.int64)
    env = (index % env_dim).astype(np.int64)
    energy = energies[index].astype(np.int64)
    for arr in (index, s, env, energy):
        arr.setflags(write=False)
    splits = tuple(int(np.count_nonzero(s == v)) for v in (-1, 0, 1))
    return ActiveSpace(n, e_max, index, s, env, energy, splits)


def build_active_space(n: int, e_max: int) -> ActiveSpace:
    if n > ENUMERATION_MAX_N:
        raise CapacityError(f"active space enumeration limited to n <= {ENUMERATION_MAX_N}, got {n}")
    if n < 2:
        raise DomainError(f"need n >= 2 so that spin 1 has an environment, got {n}")
    e_max = int(math.floor(e_max))
    if e_max < -n:
        raise EmptyActiveSpaceError(f"e_max={e_max} below the ground energy -{n}")
    return _space(int(n), min(e_max, n))


def sample_rpse(space: ActiveSpace, seed: int, index: int, normalize: bool = True) -> np.ndarray:
    """One RPSE population vector over ``space``.

    Normalized i.i.d. standard exponentials are exactly uniform on the
    simplex. With ``normalize=False`` the exponentials are only scaled by
    1/N_RPSE, i.e. drawn from the factorized approximation of the ensemble.
    """
    x = make_rng(seed, index, RPSE_STREAM).standard_exponential(space.count)
    if normalize:
        return x / x.sum()
    return x / space.count


def _feee_state_means(spec: FeeeSpec, space: ActiveSpace) -> np.ndarray:
    means = feee_population_means(spec)
    return means.means[space.energy + spec.n]


def sample_feee(spec: FeeeSpec, seed: int, index: int, renormalize: bool = False) -> np.ndarray:
    """One FEEE population vector over the full basis (ordered as ``build_active_space(n, n)``).

    The ground population is fixed at its mean; all others are independent
    exponentials with their mean populations. Raw samples are not normalized.
    """
    if spec.n > FEEE_MAX_N:
        raise CapacityError(f"FEEE sampling materializes 3**n populations; limited to n <= {FEEE_MAX_N}")
    space = build_active_space(spec.n, spec.n)
    means = _feee_state_means(spec, space)
    p = make_rng(seed, index, FEEE_STREAM).standard_exponential(space.count) * means
    p[space.energy == -spec.n] = means[0]
    if renormalize:
        p /= p.sum()
    return p


def _check_dims(p: np.ndarray, space: ActiveSpace) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.shape != (space.count,):
        raise DimensionError(f"population vector has shape {p.shape}, active space has {space.count} states")
    return p


def pure_state_entropy(p) -> float:
    """-sum p ln p with 0 ln 0 = 0, in units of k_B."""
    p = np.asarray(p, dtype=float)
    if np.any(p < 0):
        raise DomainError("populations must be nonnegative")
    return float(-np.sum(xlogy(p, p)))


def expectation_energy(p, space: ActiveSpace) -> float:
    p = _check_dims(p, space)
    return float(np.sum(p * space.energy))


def reduced_dm(p, space: ActiveSpace) -> RdmDiagonal:
    """Diagonal of spin 1's reduced density matrix: populations summed per s."""
    p = _check_dims(p, space)
    mu = np.bincount(space.s + 1, weights=p, minlength=3)
    return RdmDiagonal(*(float(m) for m in mu))


@dataclass(frozen=True, eq=False)
class SubsystemObservable:
    """Hermitian 3x3 operator on spin 1, in the basis |-1>, |0>, |+1>."""

    a: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=complex)
        if a.shape != (3, 3):
            raise DimensionError(f"subsystem observable must be 3x3, got {a.shape}")
        if np.max(np.abs(a - a.conj().T)) > 1e-12:
            raise DomainError("subsystem observable must be Hermitian")
        object.__setattr__(self, "a", a)


def spin_operator(axis: str) -> SubsystemObservable:
    """Spin-1 component S_x, S_y or S_z (hbar = 1)."""
    r = 1.0 / math.sqrt(2.0)
    ops = {
        "x": r * np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]]),
        "y": r * np.array([[0, 1j, 0], [-1j, 0, 1j], [0, -1j, 0]]),
        "z": np.diag([-1.0, 0.0, 1.0]),
    }
    try:
        return SubsystemObservable(ops[axis.lower()])
    except KeyError:
        raise DomainError(f"unknown spin axis {axis!r}") from None


def fluctuation_amplitude(p, obs: SubsystemObservable, space: ActiveSpace) -> float:
    """Temporal fluctuation amplitude sum_{k != k'} |A_kk'|^2 P_k P_k'.

    A subsystem operator only couples states sharing the environment index,
    so the sum runs over environments with a 3x3 form each.
    """
    p = _check_dims(p, space)
    grouped = np.zeros((space.environment_dimension, 3))
    grouped[space.env, space.s + 1] = p
    weights = np.abs(obs.a) ** 2
    np.fill_diagonal(weights, 0.0)
    return float(np.einsum("es,st,et->", grouped, weights, grouped))


def fluctuation_bound(obs: SubsystemObservable, rdm, n_rpse: float) -> float:
    """Upper bound Tr_S{A A^dagger <mu>} / N_RPSE on the mean fluctuation amplitude."""
    if n_rpse < 1:
        raise DomainError(f"active-space dimension must be >= 1, got {n_rpse}")
    aa = obs.a @ obs.a.conj().T
    return float(np.real(np.sum(np.diag(aa) * np.asarray(rdm, dtype=float)))) / n_rpse


@dataclass(frozen=True)
class SampleStats:
    count: int
    mean: object
    variance: object
    std_error: object


def ensemble_values(
    sampler: Callable[[int, int], np.ndarray],
    statistic: Callable[[np.ndarray], object],
    count: int,
    seed: int,
    threads: int = 1,
) -> np.ndarray:
    """statistic(sampler(seed, i)) for i = 0..count-1, stacked in index order."""
    if count < 1:
        raise DomainError(f"sample count must be positive, got {count}")

    def one(i):
        return statistic(sampler(seed, i))

    if threads <= 1:
        values = [one(i) for i in range(count)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            values = list(pool.map(one, range(count)))
    return np.asarray(values, dtype=float)


def summarize(values) -> SampleStats:
    values = np.asarray(values, dtype=float)
    count = values.shape[0]
    if count < 2:
        raise DomainError(f"need at least 2 samples for a variance, got {count}")
    # numpy reductions use pairwise summation; values are in index order
    mean = values.sum(axis=0) / count
    variance = ((values - mean) ** 2).sum(axis=0) / (count - 1)
    return SampleStats(count, mean, variance, np.sqrt(variance / count))


def ensemble_estimate(sampler, statistic, count: int, seed: int, threads: int = 1) -> SampleStats:
    """Mean, unbiased variance and standard error of a statistic over the ensemble."""
    if count < 2:
        raise DomainError(f"need at least 2 samples for a variance, got {count}")
    return summarize(ensemble_values(sampler, statistic, count, seed, threads))


def split_counts_exact(n: int, e_max: int) -> tuple:
    """N_RPSE(n-1, e_max - s) for s = -1, 0, +1."""
    return tuple(rpse_count(n - 1, e_max - s) for s in (-1, 0, 1))
