"""Classic and numerical GLS estimators of an unknown constant mean.

The classic estimator is the j -> infinity limit of the kriging weights,
w = Lambda^-1 F / (F' Lambda^-1 F). The numerical estimator instead picks the
finite prediction index j* at which the prediction variance equals the field
variance, i.e. the root of w'r(j) + mu(j) = 0, and reports w(j*)'v.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from . import corr
from .kriging import KrigingSystem, variances

log = logging.getLogger(__name__)

ROOT_TOL = 1e-8
DEFAULT_J_MAX = 600.0
MAX_BISECTIONS = 200


@dataclass(frozen=True)
class ClassicSolution:
    weights: np.ndarray
    xi: float
    fxf: float
    estimate: float
    statistic_variance: float


@dataclass(frozen=True)
class ClassicLimitReport:
    """Result of solving the kriging system with r = xi F."""

    xi: float
    mu: float
    mu_error: float
    weights_error: float
    prediction_variance: float
    statistic_variance: float
    tol_mu: float = 1e-9
    tol_weights: float = 1e-9
    tol_prediction: float = 1e-8
    tol_statistic: float = 1e-9

    @property
    def statistic_error(self) -> float:
        return abs(self.statistic_variance - abs(2.0 * self.xi))

    @property
    def passed(self) -> bool:
        return (
            self.mu_error <= self.tol_mu
            and self.weights_error <= self.tol_weights
            and abs(self.prediction_variance - 1.0) <= self.tol_prediction
            and self.statistic_error <= self.tol_statistic
        )


@dataclass(frozen=True)
class ScanPoint:
    j: float
    residual: float
    estimate: float
    statistic_variance: float


@dataclass(frozen=True)
class NumericalEstimate:
    """Numerical GLS estimate for one correlation parameter.

    ``bracketed`` is False when the residual never changed sign on the scan;
    ``j_star`` is then the scan point with the smallest |residual|.
    ``sign_case`` is the variance sign regime at ``j_star`` (see
    :func:`numgls.kriging.variances`). ``error`` is set (and the numbers are
    NaN) when the computation failed.
    """

    t: float
    n: int
    j_star: float
    estimate: float
    statistic_variance: float
    prediction_variance: float
    residual: float
    bracketed: bool
    sign_case: str = ""
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


def _sample(v, n: int) -> np.ndarray:
    v = np.asarray(v, dtype=float).reshape(-1)
    if v.size < n:
        raise ValueError(f"series has {v.size} values, need at least n={n}")
    return v[:n]


def _system(lam) -> KrigingSystem:
    return lam if isinstance(lam, KrigingSystem) else KrigingSystem(lam)


def classic(lam, v) -> ClassicSolution:
    """Classic GLS estimate F'Lambda^-1 v / F'Lambda^-1 F.

    ``lam`` may be a correlation matrix or a prebuilt :class:`KrigingSystem`.
    Only the first n values of ``v`` are used.
    """
    system = _system(lam)
    system._check_schur()
    v = _sample(v, system.n)
    fxf = system.fxf
    weights = system.lam_inv_f / fxf
    estimate = float(system.lam_inv_f @ v) / fxf
    return ClassicSolution(
        weights=weights,
        xi=1.0 / (2.0 * fxf),
        fxf=fxf,
        estimate=estimate,
        statistic_variance=abs(1.0 / fxf),
    )


def classic_limit_consistency(lam) -> ClassicLimitReport:
    """Check that r = xi F reproduces mu = -xi and the classic weights."""
    system = _system(lam)
    ref = classic(system, np.zeros(system.n))
    r = np.full(system.n, ref.xi)
    sol = system.solve(r)
    rep = variances(sol, system.lam, r)
    return ClassicLimitReport(
        xi=ref.xi,
        mu=sol.mu,
        mu_error=abs(sol.mu + ref.xi),
        weights_error=float(np.abs(sol.weights - ref.weights).max()),
        prediction_variance=rep.prediction_variance,
        statistic_variance=rep.statistic_variance,
    )


def _scan_arrays(system: KrigingSystem, rs: np.ndarray, v: np.ndarray):
    weights, mu = system.solve_many(rs)
    residual = np.einsum("ik,ik->k", weights, rs) + mu
    wlw = np.einsum("ik,ik->k", weights, system.lam @ weights)
    return residual, v @ weights, np.abs(wlw)


def _vectors(model, n, js, vector_fn):
    if vector_fn is None:
        return corr.build_vectors(model, n, js)
    return np.column_stack([np.asarray(vector_fn(j), dtype=float) for j in js])


def scan_residual(
    model: corr.CorrelationModel,
    n: int,
    v,
    j_grid: Sequence[float],
    *,
    system: KrigingSystem | None = None,
    vector_fn: Callable[[float], np.ndarray] | None = None,
) -> list[ScanPoint]:
    """Constraint residual, estimate and estimator variance at each j of a grid.

    The correlation matrix is factored once and every j is solved against it.
    ``vector_fn(j)`` overrides the model's correlation vector.
    """
    v = _sample(v, n)
    js = np.asarray(j_grid, dtype=float).reshape(-1)
    if js.size and not js.min() >= n + 1:
        raise corr.OutOfRegimeError(f"grid contains j={js.min()!r} < n+1={n + 1}")
    system = system or KrigingSystem(corr.build_matrix(model, n))
    res, est, var = _scan_arrays(system, _vectors(model, n, js, vector_fn), v)
    return [ScanPoint(float(a), float(b), float(c), float(d)) for a, b, c, d in zip(js, res, est, var)]


def _bisect(f, a: float, b: float, fa: float, tol: float) -> tuple[float, float, bool]:
    """Bisect a sign change of f on [a, b]; returns (x, f(x), converged)."""
    best = (a, fa)
    for _ in range(MAX_BISECTIONS):
        m = 0.5 * (a + b)
        if m <= a or m >= b:
            break
        fm = f(m)
        if abs(fm) < abs(best[1]):
            best = (m, fm)
        if abs(fm) <= tol:
            return m, fm, True
        if (fm < 0) == (fa < 0):
            a, fa = m, fm
        else:
            b = m
    return best[0], best[1], False


def find_root(
    model: corr.CorrelationModel,
    n: int,
    v,
    j_range: tuple[float, float] | None = None,
    *,
    integer_only: bool = False,
    root_tol: float = ROOT_TOL,
    system: KrigingSystem | None = None,
    vector_fn: Callable[[float], np.ndarray] | None = None,
) -> NumericalEstimate:
    """Locate the smallest j >= n+1 where w'r(j) + mu(j) = 0.

    The residual is scanned at j_lo, j_lo + 1, ... <= j_hi. The first scan
    point with |residual| <= root_tol, or the first adjacent pair with a sign
    change, is taken; a sign change is refined by bisection over real j
    unless ``integer_only`` is set, in which case the better of the two
    integers is returned. Without any bracket the scan point with smallest
    |residual| (first one on ties) is returned with ``bracketed=False``.

    Tabulated models only know integer lags; use ``integer_only`` with them.
    """
    if j_range is None:
        j_range = (n + 1, DEFAULT_J_MAX)
    j_lo, j_hi = map(float, j_range)
    if not j_lo >= n + 1:
        raise corr.OutOfRegimeError(f"j_lo={j_lo!r} must be >= n+1={n + 1}")
    if not j_hi >= j_lo:
        raise ValueError(f"empty j range [{j_lo}, {j_hi}]")
    v = _sample(v, n)
    system = system or KrigingSystem(corr.build_matrix(model, n))

    js = j_lo + np.arange(math.floor(j_hi - j_lo) + 1)
    res, _, _ = _scan_arrays(system, _vectors(model, n, js, vector_fn), v)

    def residual_at(j):
        r = _vectors(model, n, [j], vector_fn)
        return float(_scan_arrays(system, r, v)[0][0])

    j_star, bracketed = None, False
    for k in range(js.size):
        if abs(res[k]) <= root_tol:
            j_star, bracketed = float(js[k]), True
            break
        if k + 1 < js.size and (res[k] < 0) != (res[k + 1] < 0) and res[k + 1] != 0:
            if integer_only:
                j_star = float(js[k] if abs(res[k]) <= abs(res[k + 1]) else js[k + 1])
                bracketed = True
            else:
                j_star, _, bracketed = _bisect(residual_at, js[k], js[k + 1], res[k], root_tol)
                if not bracketed:
                    log.warning("bisection stalled on [%g, %g] for %s", js[k], js[k + 1], model.describe())
            break
    if j_star is None:
        j_star = float(js[np.argmin(np.abs(res))])

    r = _vectors(model, n, [j_star], vector_fn)[:, 0]
    sol = system.solve(r, j=j_star)
    rep = variances(sol, system.lam, r, warn=False)
    t = model.t if model.t is not None else float("nan")
    return NumericalEstimate(
        t=float(t),
        n=n,
        j_star=float(j_star),
        estimate=float(sol.weights @ v),
        statistic_variance=rep.statistic_variance,
        prediction_variance=rep.prediction_variance,
        residual=float(sol.weights @ r + sol.mu),
        bracketed=bracketed,
        sign_case=rep.sign_case,
    )


def _failed(t: float, n: int, exc: Exception) -> NumericalEstimate:
    nan = float("nan")
    return NumericalEstimate(float(t), n, nan, nan, nan, nan, nan, False, error=f"{type(exc).__name__}: {exc}")


def sweep(
    n: int,
    v,
    t_list: Sequence[float],
    j_range: tuple[float, float] | None = None,
    *,
    beta: float = corr.BETA,
    family: Callable[[float], corr.CorrelationModel] | None = None,
    integer_only: bool = False,
    root_tol: float = ROOT_TOL,
    workers: int = 1,
) -> list[NumericalEstimate]:
    """Run :func:`find_root` for every correlation parameter in ``t_list``.

    ``family(t)`` builds the model for one parameter and defaults to the
    negative-power model with exponent ``beta``. A failure at one t is
    recorded in that entry's ``error`` field. Results are sorted by t and do
    not depend on ``workers``.
    """
    ts = sorted(float(t) for t in t_list)
    if not ts:
        raise ValueError("t_list is empty")
    if family is None:
        def family(t):
            return corr.negative_power(t, beta)
    v = _sample(v, n)

    def one(t):
        try:
            est = find_root(family(t), n, v, j_range, integer_only=integer_only, root_tol=root_tol)
        except (ArithmeticError, ValueError, np.linalg.LinAlgError) as exc:
            log.warning("t=%g failed: %s", t, exc)
            return _failed(t, n, exc)
        if math.isnan(est.t):
            est = replace(est, t=t)
        return est

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(one, ts))
    return [one(t) for t in ts]

