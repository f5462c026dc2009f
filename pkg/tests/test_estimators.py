import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from scipy.linalg import lu_factor, lu_solve

from numgls import build_matrix, build_vector, eval_rho, negative_power, tabulated, white_noise
from numgls.corr import OutOfRegimeError
from numgls.estimators import (
    classic,
    classic_limit_consistency,
    find_root,
    scan_residual,
    sweep,
)
from numgls.kriging import KrigingSystem, constraint_residual
from numgls.series import demo_series
from oracles import gauss_jordan_solve

V = demo_series().values


# -------------------------------------------------------------------- classic


@pytest.mark.parametrize("n", [1, 3, 10, 50])
def test_classic_identity_is_mean(n, rng):
    v = rng.normal(10, 3, n)
    sol = classic(np.eye(n), v)
    np.testing.assert_allclose(sol.weights, np.full(n, 1 / n), rtol=1e-15)
    assert sol.estimate == pytest.approx(v.mean(), rel=1e-13)
    assert sol.xi == 1 / (2 * n)


@pytest.mark.parametrize("a", [-0.95, -0.3, 0.0, 0.4, 0.99])
def test_classic_two_exchangeable_points(a):
    sol = classic([[1, a], [a, 1]], [3.0, 8.0])
    np.testing.assert_allclose(sol.weights, [0.5, 0.5], rtol=1e-12)
    assert sol.estimate == pytest.approx(5.5, rel=1e-12)


def test_classic_n182_matches_gauss_jordan():
    lam = build_matrix(negative_power(183), 182)
    v = V[:182]
    sol = classic(lam, v)
    x_v, x_f = gauss_jordan_solve(lam.tolist(), [v.tolist(), [1.0] * 182])
    expected = sum(x_v) / sum(x_f)
    assert sol.estimate == pytest.approx(expected, rel=1e-8)
    assert sol.fxf == pytest.approx(sum(x_f), rel=1e-8)
    assert sol.fxf < 0
    assert sol.statistic_variance == pytest.approx(-1 / sol.fxf, rel=1e-14)
    assert sol.estimate == pytest.approx(sol.weights @ v, rel=1e-10)
    assert abs(sol.weights.sum() - 1) <= 1e-10


def test_classic_uses_first_n_values():
    lam = np.eye(3)
    assert classic(lam, [1.0, 2.0, 3.0, 100.0]).estimate == pytest.approx(2.0)
    with pytest.raises(ValueError):
        classic(lam, [1.0, 2.0])


@pytest.mark.parametrize("c", [0.5, 2.0])
def test_classic_scale_invariance(c):
    lam = build_matrix(negative_power(250), 60)
    a, b = classic(lam, V), classic(c * lam, V)
    np.testing.assert_allclose(a.weights, b.weights, rtol=0, atol=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.floats(1.5, 400), st.integers(1, 40), st.floats(-1e3, 1e3))
def test_classic_translation_equivariance(t, n, c):
    lam = build_matrix(negative_power(t), n)
    system = KrigingSystem(lam)
    assume(abs(system.fxf) > 1e-6 and np.linalg.cond(lam) < 1e8)
    v = V[:n] / 1000
    shifted = classic(system, v + c).estimate
    assert shifted == pytest.approx(classic(system, v).estimate + c, abs=1e-9 * max(1, abs(c)))


# ------------------------------------------------------ classic limit checks


def test_classic_limit_identity():
    rep = classic_limit_consistency(np.eye(5))
    assert rep.mu == pytest.approx(-0.1, rel=1e-14)
    assert rep.prediction_variance == pytest.approx(1.0, abs=1e-14)
    assert rep.passed


def test_classic_limit_single_point():
    rep = classic_limit_consistency([[1.0]])
    assert rep.xi == 0.5
    assert rep.mu == pytest.approx(-0.5, abs=1e-15)
    assert rep.prediction_variance == pytest.approx(1.0, abs=1e-15)
    assert rep.passed


def test_classic_limit_negative_power():
    rep = classic_limit_consistency(build_matrix(negative_power(183), 20))
    assert rep.xi < 0
    assert rep.passed, rep


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2), st.floats(1.5, 600), st.integers(1, 30), st.floats(0.05, 0.7))
def test_classic_limit_property(kind, t, n, a):
    model = [negative_power(t), white_noise(), tabulated({k: (-a) ** k for k in range(1, 40)})][kind]
    lam = build_matrix(model, n)
    system = KrigingSystem(lam)
    assume(abs(system.fxf) > 1e-3 and np.linalg.cond(lam) < 1e6)
    assert classic_limit_consistency(system).passed


# ----------------------------------------------------------------------- scan


def test_scan_white_noise_constant():
    pts = scan_residual(white_noise(), 5, V, [6, 7, 10.5, 40])
    for p in pts:
        assert p.residual == pytest.approx(-0.2, rel=1e-14)
        assert p.statistic_variance == pytest.approx(0.2, rel=1e-14)
        assert p.estimate == pytest.approx(V[:5].mean(), rel=1e-14)


@pytest.mark.parametrize("t", [2.0, 183.0])
def test_scan_single_point(t):
    model = negative_power(t)
    pts = scan_residual(model, 1, V, [2, 3])
    for p in pts:
        rho = eval_rho(model, p.j - 1)
        assert p.residual == pytest.approx(2 * rho - 1, abs=1e-14)
        assert p.estimate == V[0]


def test_scan_rejects_grid_below_regime():
    with pytest.raises(OutOfRegimeError):
        scan_residual(white_noise(), 5, V, [5, 6])


def test_scan_matches_direct_solves():
    model = negative_power(200)
    pts = scan_residual(model, 182, V, range(183, 601, 17))
    system = KrigingSystem(build_matrix(model, 182))
    for p in pts:
        r = build_vector(model, 182, p.j)
        sol = system.solve(r)
        assert p.residual == pytest.approx(constraint_residual(sol, r), abs=1e-12)
        assert p.estimate == pytest.approx(sol.weights @ V[:182], rel=1e-12)


# ------------------------------------------------------------------ find_root


def test_find_root_classic_limit_synthetic():
    n = 10
    xi = 1 / (2 * n)
    est = find_root(white_noise(), n, V, (11, 40), vector_fn=lambda j: np.full(n, xi))
    assert est.bracketed
    assert est.j_star == 11
    assert est.residual == pytest.approx(0, abs=1e-15)


def test_find_root_white_noise_no_bracket():
    est = find_root(white_noise(), 5, V, (6, 50))
    assert not est.bracketed
    assert est.j_star == 6
    assert est.residual == pytest.approx(-0.2, rel=1e-14)


def fine_scan_oracle(model, n, lo, hi, step):
    """First sign change of w'r + mu on a fine grid, using dense bordered LU solves."""
    big = np.ones((n + 1, n + 1))
    big[n, n] = 0.0
    i = np.arange(1, n + 1)
    big[:n, :n] = [[eval_rho(model, abs(a - b)) for b in i] for a in i]
    lu = lu_factor(big)
    grid = np.arange(lo, hi + step / 2, step)
    prev = None
    for chunk in np.array_split(grid, max(1, grid.size // 20000)):
        lags = np.abs(chunk[None, :] - i[:, None])
        r = -np.power(model.t, -model.beta * (lags / model.t) ** 2)
        x = lu_solve(lu, np.vstack([r, np.ones(chunk.size)]))
        res = np.einsum("ik,ik->k", x[:n], r) + x[n]
        if prev is not None:
            res = np.concatenate([[prev[1]], res])
            chunk = np.concatenate([[prev[0]], chunk])
        flips = np.flatnonzero(np.sign(res[:-1]) != np.sign(res[1:]))
        if flips.size:
            return chunk[flips[0]], chunk[flips[0] + 1]
        prev = (chunk[-1], res[-1])
    return None


def test_find_root_matches_fine_grid_oracle():
    model = negative_power(300)
    est = find_root(model, 182, V, (183, 600))
    assert est.bracketed
    assert abs(est.residual) <= 1e-8
    a, b = fine_scan_oracle(model, 182, 183, 600, 1e-3)
    assert abs(est.j_star - 0.5 * (a + b)) <= 1e-2
    assert 416 < est.j_star <= 417


def test_find_root_final_parameter_lands_before_577():
    # reported endpoint: final t = 321 corresponds to final j = 577
    est = find_root(negative_power(321), 182, V, (183, 600))
    assert est.bracketed
    assert 576 < est.j_star <= 577
    assert np.ceil(est.j_star) == 577


def test_find_root_integer_mode():
    model = negative_power(321)
    est = find_root(model, 182, V, (183, 600), integer_only=True)
    assert est.bracketed
    assert est.j_star in (576.0, 577.0)
    assert est.j_star == float(int(est.j_star))


def test_find_root_takes_smallest_bracket():
    # n = 1 residual is 2 rho(j) - 1; rho rises through 0.5 near j = 2.56, 4.44 and 6.56
    knots_j = [2, 3, 4, 5, 6, 7, 8]
    knots_rho = [0.0, 0.9, 0.9, 0.0, 0.0, 0.9, 0.9]

    def vector_fn(j):
        return np.array([np.interp(j, knots_j, knots_rho)])

    est = find_root(white_noise(), 1, V, (2, 8), vector_fn=vector_fn)
    assert est.bracketed
    assert est.j_star == pytest.approx(2 + 0.5 / 0.9, abs=1e-8)


def test_find_root_range_errors():
    with pytest.raises(OutOfRegimeError):
        find_root(white_noise(), 5, V, (5, 20))
    with pytest.raises(ValueError):
        find_root(white_noise(), 5, V, (20, 10))


def test_find_root_translation_equivariance():
    model = negative_power(250)
    a = find_root(model, 182, V, (183, 600))
    b = find_root(model, 182, V + 123.0, (183, 600))
    assert a.j_star == b.j_star
    assert b.estimate == pytest.approx(a.estimate + 123.0, rel=1e-12)


@pytest.mark.parametrize("t", [183, 200, 250, 300, 321])
def test_variance_at_root_is_twice_wr(t):
    model = negative_power(t)
    est = find_root(model, 182, V, (183, 600))
    assert est.bracketed
    system = KrigingSystem(build_matrix(model, 182))
    r = build_vector(model, 182, est.j_star)
    sol = system.solve(r)
    assert abs(est.statistic_variance - 2 * abs(sol.weights @ r)) <= 1e-6


# ---------------------------------------------------------------------- sweep


def test_sweep_139_parameters():
    out = sweep(182, V, range(183, 322))
    assert len(out) == 139
    assert [e.t for e in out] == list(map(float, range(183, 322)))
    assert all(e.ok and e.bracketed for e in out)


def test_sweep_singleton_delegates():
    (a,) = sweep(182, V, [240], (183, 600))
    b = find_root(negative_power(240), 182, V, (183, 600))
    assert a == b


def test_sweep_composition_and_order(rng):
    v = rng.standard_normal(8)
    out = sweep(8, v, [14, 10, 12], (9, 40))
    assert [e.t for e in out] == [10.0, 12.0, 14.0]
    for e in out:
        assert e == find_root(negative_power(e.t), 8, v, (9, 40))


def test_sweep_parallel_is_deterministic():
    ts = range(183, 200)
    assert sweep(182, V, ts, workers=4) == sweep(182, V, ts, workers=1)


def test_sweep_records_failures():
    def family(t):
        return negative_power(t) if t != 12 else tabulated({1: 0.1})

    out = sweep(8, V, [10, 12, 14], (9, 30), family=family)
    assert [e.ok for e in out] == [True, False, True]
    assert "MissingLagError" in out[1].error
    assert np.isnan(out[1].estimate)


def test_sweep_white_noise_family_keeps_t():
    out = sweep(5, V, [1, 2], (6, 10), family=lambda t: white_noise())
    assert [e.t for e in out] == [1.0, 2.0]
    assert all(e.statistic_variance == pytest.approx(0.2) for e in out)


def test_sweep_empty():
    with pytest.raises(ValueError):
        sweep(5, V, [])
