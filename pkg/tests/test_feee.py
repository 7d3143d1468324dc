import itertools
import math
import warnings
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spintypicality import feee
from spintypicality.exceptions import DomainError, SingularityError, ValidityError
from spintypicality.feee import FeeeSpec
from spintypicality.rpse import canonical_rdm
from spintypicality.spectrum import exact_degeneracy

LN3 = math.log(3)


def brute_means(n, U):
    """Per-state means over the full basis with exact rationals."""
    U = Fraction(U)
    states = list(itertools.product((-1, 0, 1), repeat=n))
    N = len(states)
    scale = (U + n) / (N - 1)
    excited = [Fraction(1, sum(m) + n) for m in states if sum(m) > -n]
    p1 = 1 - scale * sum(excited)
    return states, p1, scale


def test_single_spin_hand_values():
    pm = feee.feee_population_means(FeeeSpec(1, -0.5))
    assert pm.p1 == pytest.approx(0.625, abs=1e-15)
    assert pm.means == pytest.approx([0.625, 0.25, 0.125], abs=1e-15)
    assert float(np.dot(pm.means, pm.levels)) == pytest.approx(-0.5, abs=1e-15)


def test_ground_state_energy():
    pm = feee.feee_population_means(FeeeSpec(1, -1))
    assert pm.p1 == 1.0
    assert pm.means[1:].tolist() == [0.0, 0.0]


@pytest.mark.parametrize("n,U", [(2, -1.5), (3, -2), (4, -3.5), (5, -4)])
def test_population_means_match_brute_force(n, U):
    _, p1, scale = brute_means(n, U)
    pm = feee.feee_population_means(FeeeSpec(n, U))
    assert pm.p1 == pytest.approx(float(p1), rel=1e-12)
    for i, m in zip(pm.levels[1:], pm.means[1:]):
        assert m == pytest.approx(float(scale / (i + n)), rel=1e-12)


@pytest.mark.parametrize("n,U", [(5, -4), (8, -7), (12, -11.5), (15, -14.2)])
def test_normalization_and_energy_reconstruction(n, U):
    pm = feee.feee_population_means(FeeeSpec(n, U))
    degs = np.array([exact_degeneracy(n, i) for i in range(-n, n + 1)], dtype=float)
    assert math.fsum(degs * pm.means) == pytest.approx(1.0, abs=1e-12)
    assert math.fsum(degs * pm.means * pm.levels) == pytest.approx(U, abs=1e-10)


def test_validity_gate():
    with pytest.raises(ValidityError, match="FEEE approximate distribution outside its domain"):
        feee.feee_population_means(FeeeSpec(5, -0.5))
    with pytest.raises(DomainError):
        FeeeSpec(3, 3.5)


def test_entropy_stats_ground_state():
    stats = feee.feee_entropy_stats(FeeeSpec(4, -4))
    assert stats.mean == 0.0 and stats.std == 0.0
    assert stats.domain_width == pytest.approx(4 * LN3)


@pytest.mark.parametrize("n,U", [(2, -1.5), (3, -2.5), (4, -3)])
def test_entropy_formulas_against_brute_force(n, U):
    states, p1, scale = brute_means(n, U)
    N = len(states)
    gap_sum = sum(1.0 / (sum(m) + n) for m in states if sum(m) > -n)
    gap_sq = sum(1.0 / (sum(m) + n) ** 2 for m in states if sum(m) > -n)
    stats = feee.feee_entropy_stats(FeeeSpec(n, U))
    assert stats.mean == pytest.approx((U + n) * math.log(N) / N * gap_sum, rel=1e-12)
    assert stats.std == pytest.approx((U + n) * math.log(N) / N * math.sqrt(gap_sq), rel=1e-12)
    means = [float(scale / (sum(m) + n)) for m in states if sum(m) > -n]
    exact = -float(p1) * math.log(float(p1)) - math.fsum(m * math.log(m) for m in means)
    exact -= (1 - feee.EULER_GAMMA) * (1 - float(p1))
    assert feee.feee_entropy_stats(FeeeSpec(n, U), exact_mean=True).mean == pytest.approx(exact, rel=1e-12)


def test_entropy_convergence_to_asymptote():
    gaps = []
    for n in (5, 8, 10, 12, 50):
        stats = feee.feee_entropy_stats(FeeeSpec.from_energy_per_spin(n, -0.5))
        gaps.append(abs(stats.mean / n - 0.5 * LN3))
    assert all(a > b for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] < 0.1 * 0.5 * LN3


def test_entropy_std_relative_to_width_decreases():
    ratios = []
    for n in (5, 8, 10):
        stats = feee.feee_entropy_stats(FeeeSpec.from_energy_per_spin(n, -0.5))
        ratios.append(stats.std / stats.domain_width)
    assert ratios[0] > ratios[1] > ratios[2]


def test_entropy_asymptotic():
    assert feee.feee_entropy_asymptotic(FeeeSpec(6, -6)).mean == 0.0
    assert feee.feee_entropy_asymptotic(FeeeSpec(6, 0)).mean == pytest.approx(6 * LN3)
    a = feee.feee_entropy_asymptotic(FeeeSpec(6, -4)).mean
    b = feee.feee_entropy_asymptotic(FeeeSpec(6, -3)).mean
    assert b - a == pytest.approx(LN3, rel=1e-14)
    s = feee.feee_entropy_asymptotic(FeeeSpec(6, -3))
    assert s.std == pytest.approx(s.mean / 27, rel=1e-12)


@pytest.mark.parametrize("n,U", [(2, -1.5), (3, -2.5), (4, -3.5)])
def test_rdm_mean_against_brute_force(n, U):
    states, p1, scale = brute_means(n, U)
    mu = {-1: Fraction(0), 0: Fraction(0), 1: Fraction(0)}
    for m in states:
        mu[m[0]] += p1 if sum(m) == -n else scale / (sum(m) + n)
    rdm = feee.feee_rdm_mean(FeeeSpec(n, U))
    assert rdm == pytest.approx([float(mu[-1]), float(mu[0]), float(mu[1])], rel=1e-12)
    assert rdm.trace == pytest.approx(1.0, abs=1e-15)


def test_rdm_mean_limits():
    with pytest.warns(UserWarning, match="n=1"):
        rdm = feee.feee_rdm_mean(FeeeSpec(1, -0.5))
    assert rdm == pytest.approx((0.625, 0.25, 0.125), abs=1e-15)
    assert feee.feee_rdm_mean(FeeeSpec(5, -5)) == (1.0, 0.0, 0.0)


def test_rdm_mean_approaches_asymptote():
    target = np.array([2 / 3, 1 / 6, 1 / 6])
    dist = [np.max(np.abs(feee.feee_rdm_mean(FeeeSpec.from_energy_per_spin(n, -0.5)).as_array() - target))
            for n in (5, 10)]
    assert dist[1] < dist[0]


def test_rdm_asymptotic():
    assert feee.feee_rdm_asymptotic(0.0) == pytest.approx((1 / 3, 1 / 3, 1 / 3))
    assert feee.feee_rdm_asymptotic(-0.5) == pytest.approx((2 / 3, 1 / 6, 1 / 6))
    assert feee.feee_rdm_asymptotic(-1.0) == (1.0, 0.0, 0.0)
    with pytest.raises(DomainError):
        feee.feee_rdm_asymptotic(0.2)


def test_r_parameter():
    assert feee.r_parameter((1 / 3, 1 / 3, 1 / 3)) == pytest.approx(0.0, abs=1e-15)
    assert feee.r_parameter((2 / 3, 1 / 6, 1 / 6)) == pytest.approx(3.0, rel=1e-14)
    for beta in (-2.0, 0.0, 0.4, 3.0):
        assert abs(feee.r_parameter(canonical_rdm(beta))) < 1e-12
    with pytest.raises(SingularityError):
        feee.r_parameter((1.0, 0.0, 0.0))


def test_r_asymptotic():
    assert feee.r_asymptotic(0.0) == 0.0
    assert feee.r_asymptotic(-0.5) == pytest.approx(3.0)
    with pytest.raises(SingularityError):
        feee.r_asymptotic(-1.0)
    for u in np.linspace(-0.9, 0, 50):
        assert feee.r_parameter(feee.feee_rdm_asymptotic(u)) == pytest.approx(feee.r_asymptotic(u), abs=1e-12)
    assert all(feee.r_asymptotic(u) != 0 for u in np.linspace(-0.89, -0.06, 40))


def test_r_parameter_converges_to_three():
    values = [feee.r_parameter(feee.feee_rdm_mean(FeeeSpec.from_energy_per_spin(n, -0.5))) for n in (5, 8, 10, 12)]
    gaps = [abs(v - 3) for v in values]
    assert all(a > b for a, b in zip(gaps, gaps[1:]))


@given(st.integers(min_value=2, max_value=14), st.floats(min_value=0.0, max_value=1.0))
@settings(max_examples=80, deadline=None)
def test_rdm_trace_property(n, frac):
    # low energies near the ground state keep <P_1> valid
    U = -n + frac
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        rdm = feee.feee_rdm_mean(FeeeSpec(n, U))
    assert rdm.mu_minus + rdm.mu_zero + rdm.mu_plus == pytest.approx(1.0, abs=1e-14)
    assert min(rdm) >= 0
