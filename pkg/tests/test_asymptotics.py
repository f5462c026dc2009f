import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from numgls import build_matrix, negative_power, tabulated, white_noise
from numgls.asymptotics import decay_study, mu_limit
from numgls.kriging import DegenerateSchurError, KrigingSystem


def test_mu_limit_identity():
    assert mu_limit(np.eye(4)) == -1 / 8


def test_mu_limit_single_point():
    assert mu_limit([[1.0]]) == -0.5


def test_mu_limit_negative_power():
    system = KrigingSystem(build_matrix(negative_power(183), 20))
    xi = 1 / (2 * system.fxf)
    assert abs(mu_limit(system) + xi) <= 1e-12


def test_mu_limit_degenerate():
    with pytest.raises(DegenerateSchurError):
        mu_limit(np.diag([1.0, -1.0]))


def test_white_noise_ladder():
    rep = decay_study(white_noise(), [2, 4, 8, 16])
    assert rep.fxf_inv == [0.5, 0.25, 0.125, 0.0625]
    assert rep.statistic_variance_limit == [0.5, 0.25, 0.125, 0.0625]
    assert rep.prediction_variance_limit == [1.0] * 4
    assert rep.decreasing
    assert rep.xi_signs == [1, 1, 1, 1]


@pytest.mark.parametrize("n", [1, 7, 33, 100])
def test_white_noise_exact(n):
    rep = decay_study(white_noise(), [n])
    assert rep.fxf_inv[0] == 1 / n
    assert rep.statistic_variance_limit[0] == 1 / n


def test_negative_power_ladder():
    model = negative_power(400)
    ns = [10, 20, 40, 80]
    rep = decay_study(model, ns)
    for n, inv, xi in zip(ns, rep.fxf_inv, rep.xi):
        system = KrigingSystem(build_matrix(model, n))
        assert inv == pytest.approx(1 / system.fxf, rel=1e-14)
        assert xi == pytest.approx(1 / (2 * system.fxf), rel=1e-14)
    assert all(s == -1 for s in rep.xi_signs)
    mags = np.abs(rep.fxf_inv)
    assert rep.decreasing == bool(np.all(np.diff(mags) < 0))
    np.testing.assert_allclose(rep.prediction_variance_limit, 1.0, rtol=0, atol=1e-9)
    np.testing.assert_allclose(rep.statistic_variance_limit, mags, rtol=1e-15)


def test_ladder_must_increase():
    with pytest.raises(ValueError):
        decay_study(white_noise(), [4, 2])
    with pytest.raises(ValueError):
        decay_study(white_noise(), [])


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2), st.floats(1.5, 600), st.integers(1, 40), st.floats(0.05, 0.7))
def test_xi_identity(kind, t, n, a):
    model = [negative_power(t), white_noise(), tabulated({k: (-a) ** k for k in range(1, 50)})][kind]
    try:
        system = KrigingSystem(build_matrix(model, n))
    except np.linalg.LinAlgError:
        assume(False)
    assume(abs(system.fxf) > 1e-12)
    xi = 1 / (2 * system.fxf)
    assert abs(2 * xi * system.fxf - 1) <= 1e-12
    assert abs(mu_limit(system) + xi) <= 1e-12 * max(1.0, abs(xi))
    rep = decay_study(model, [n])
    assert abs(rep.prediction_variance_limit[0] - 1) <= 1e-9
