"""scikit-learn style transformers over energy grids.

Each transformer maps a single input column (an energy per spin) to the
ensemble observables at that energy, so profiles can be assembled with the
usual ``fit``/``transform`` calls, cloned, and placed in pipelines or
``FeatureUnion`` objects.

>>> from spintypicality.estimators import RpseProfile
>>> RpseProfile(n=30).fit_transform([[-0.5], [0.0]]).shape
(2, 14)
"""
from __future__ import annotations

import math

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from . import feee, rpse
from .exceptions import DomainError, SingularityError, ValidityError
from .spectrum import _check_n


class _GridTransformer(TransformerMixin, BaseEstimator):
    """Shared validation: one column of finite values in [-1, 1]."""

    feature_names = ()

    def _validate_params(self):
        _check_n(self.n)

    def fit(self, X, y=None):
        self._validate_params()
        X = self._check_grid(X)
        self.n_features_in_ = 1
        self.fitted_ = True
        return self

    def _check_grid(self, X):
        X = check_array(X, dtype=float, ensure_2d=True)
        if X.shape[1] != 1:
            raise ValueError(f"expected a single column of energies per spin, got {X.shape[1]} columns")
        if np.any(np.abs(X) > 1.0):
            raise DomainError("energies per spin must lie in [-1, 1]")
        return X

    def transform(self, X):
        check_is_fitted(self, "fitted_")
        X = self._check_grid(X)
        return np.array([self._row(float(x)) for x in X[:, 0]], dtype=float)

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "fitted_")
        return np.asarray(self.feature_names, dtype=object)

    def _row(self, x):  # pragma: no cover - abstract
        raise NotImplementedError


def _or_nan(fn, *args, **kwargs):
    # grid scans report points outside a formula's validity as NaN
    try:
        return fn(*args, **kwargs)
    except (ValidityError, SingularityError):
        return math.nan


class FeeeProfile(_GridTransformer):
    """FEEE entropy and reduced density matrix versus internal energy per spin.

    Parameters
    ----------
    n : int
        Number of spins.
    exact_mean : bool, default=False
        Use the exact factorized-distribution mean of the entropy instead of
        its leading order in 3**n.

    Points where the factorized distribution is invalid come out as NaN.
    """

    feature_names = (
        "u", "s_mean", "s_std", "s_asymptotic",
        "mu_minus", "mu_zero", "mu_plus", "r", "r_asymptotic",
    )

    def __init__(self, n=10, exact_mean=False):
        self.n = n
        self.exact_mean = exact_mean

    def _row(self, u):
        if not (-1.0 <= u <= 0.0):
            raise DomainError(f"FEEE profiles are defined for u in [-1, 0], got {u}")
        spec = feee.FeeeSpec.from_energy_per_spin(self.n, u)
        asym = feee.feee_entropy_asymptotic(spec).mean / self.n
        r_asym = _or_nan(feee.r_asymptotic, u)
        try:
            stats = feee.feee_entropy_stats(spec, exact_mean=self.exact_mean)
            rdm = feee.feee_rdm_mean(spec)
        except ValidityError:
            return [u, math.nan, math.nan, asym, math.nan, math.nan, math.nan, math.nan, r_asym]
        r = _or_nan(feee.r_parameter, rdm)
        return [u, stats.mean / self.n, stats.std / self.n, asym, *rdm, r, r_asym]


class RpseProfile(_GridTransformer):
    """RPSE observables versus the scaled cutoff q_max = e_max / n.

    Exact columns floor the cutoff to the level grid, so they are step
    functions of q_max; the asymptotic columns are smooth.
    """

    feature_names = (
        "q_max", "log_dim_per_spin", "log_dim_per_spin_asymptotic",
        "log_ratio", "log_ratio_gaussian", "log_ratio_asymptotic",
        "u", "u_asymptotic",
        "mu_minus", "mu_zero", "mu_plus",
        "mu_minus_asymptotic", "mu_zero_asymptotic", "mu_plus_asymptotic",
    )

    def __init__(self, n=10):
        self.n = n

    def _row(self, q):
        n = self.n
        # nudge q*n up by a few ulps so e.g. -0.3 * 10 lands on level -3
        spec = rpse.RpseSpec(n, max(-n, min(n, q * n + 1e-9)))
        log_total = n * math.log(3.0)
        log_dim = rpse.rpse_dimension_exact(spec).log
        log_gauss = rpse.rpse_dimension_gaussian(spec).log
        log_asym = rpse.rpse_log_dimension_asymptotic(n, q)
        energy = rpse.rpse_internal_energy_exact(spec)
        rdm = rpse.rpse_rdm_exact(spec) if n >= 2 else (math.nan,) * 3
        return [
            q, log_dim / n, (log_asym + log_total) / n,
            log_dim - log_total, log_gauss - log_total, log_asym,
            energy.u, rpse.rpse_internal_energy_asymptotic(n, q),
            *rdm, *rpse.rpse_rdm_asymptotic(q),
        ]


class EquationOfState(_GridTransformer):
    """Entropy per spin and inverse temperature versus internal energy per spin."""

    feature_names = ("u", "s", "beta")

    def __init__(self, n=1):
        self.n = n

    def _row(self, u):
        try:
            state = rpse.entropy_equation_of_state(self.n, u)
        except SingularityError as err:
            state = err.partial
        return list(state)
