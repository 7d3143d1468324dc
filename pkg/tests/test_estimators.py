import math

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import FeatureUnion

from spintypicality import charfun, feee, rpse
from spintypicality.estimators import EquationOfState, FeeeProfile, RpseProfile
from spintypicality.exceptions import DomainError


def test_rpse_profile_shape_and_names():
    est = RpseProfile(n=30)
    out = est.fit_transform([[-0.5], [0.0]])
    assert out.shape == (2, 14)
    names = list(est.get_feature_names_out())
    assert len(names) == 14 and names[0] == "q_max"


def test_rpse_profile_values():
    est = RpseProfile(n=10).fit([[0.0]])
    row = dict(zip(est.get_feature_names_out(), est.transform([[-0.3]])[0]))
    spec = rpse.RpseSpec(10, -3)
    assert row["log_dim_per_spin"] == pytest.approx(rpse.rpse_dimension_exact(spec).log / 10)
    assert row["u"] == pytest.approx(rpse.rpse_internal_energy_exact(spec).u)
    assert row["mu_zero"] == pytest.approx(rpse.rpse_rdm_exact(spec).mu_zero)
    assert row["mu_minus_asymptotic"] == pytest.approx(charfun.elementary_f(-0.3).f_minus)


def test_feee_profile_values_and_invalid_points():
    est = FeeeProfile(n=6)
    out = est.fit_transform([[-0.9], [-0.1]])
    names = list(est.get_feature_names_out())
    spec = feee.FeeeSpec.from_energy_per_spin(6, -0.9)
    assert out[0, names.index("s_mean")] == pytest.approx(feee.feee_entropy_stats(spec).mean / 6)
    assert out[0, names.index("r_asymptotic")] == pytest.approx(feee.r_asymptotic(-0.9))
    # u = -0.1 puts the ground population outside [0, 1] at n = 6
    assert math.isnan(out[1, names.index("s_mean")])
    assert not math.isnan(out[1, names.index("s_asymptotic")])
    with pytest.raises(DomainError):
        est.transform([[0.5]])


def test_equation_of_state_transformer():
    out = EquationOfState().fit_transform(np.array([[-1.0], [-0.5], [0.0]]))
    assert out[0, 1] == 0.0 and math.isinf(out[0, 2])
    assert out[1, 2] == pytest.approx(0.8341151943524012, rel=1e-12)
    assert out[2, 1] == pytest.approx(math.log(3))


def test_sklearn_protocol():
    est = RpseProfile(n=12)
    assert est.get_params() == {"n": 12}
    twin = clone(est).set_params(n=20)
    assert twin.n == 20 and est.n == 12
    with pytest.raises(NotFittedError):
        est.transform([[0.0]])
    with pytest.raises(ValueError):
        est.fit([[0.0, 0.1]])
    with pytest.raises(DomainError):
        est.fit([[1.5]])
    with pytest.raises(DomainError):
        RpseProfile(n=0).fit([[0.0]])


def test_feature_union():
    union = FeatureUnion([("eos", EquationOfState()), ("feee", FeeeProfile(n=5))])
    grid = np.linspace(-0.95, -0.6, 4).reshape(-1, 1)
    out = union.fit_transform(grid)
    assert out.shape == (4, 3 + 9)
    assert out[:, 0] == pytest.approx(out[:, 3])
