"""Large-j limits of the kriging solution and their behaviour as n grows.

With r = xi F and xi = 1 / (2 F'Lambda^-1 F), the multiplier tends to
xi - (F'Lambda^-1 F)^-1 = -xi, the estimator variance to |(F'Lambda^-1 F)^-1|
and the prediction variance to exactly sigma^2. Whether (F'Lambda^-1 F)^-1
actually shrinks with n is model dependent; :func:`decay_study` only reports it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import corr
from .kriging import KrigingSystem

IDENTITY_TOL = 1e-12


@dataclass(frozen=True)
class AsymptoticReport:
    n_values: list[int]
    fxf_inv: list[float]
    xi: list[float]
    mu_limit: list[float]
    statistic_variance_limit: list[float]
    prediction_variance_limit: list[float]
    model: str = ""
    decreasing: bool = field(init=False)

    def __post_init__(self):
        mags = np.abs(self.fxf_inv)
        object.__setattr__(self, "decreasing", bool(np.all(np.diff(mags) < 0)))

    @property
    def xi_signs(self) -> list[int]:
        return [int(np.sign(x)) for x in self.xi]

    def rows(self):
        return zip(
            self.n_values,
            self.fxf_inv,
            self.xi,
            self.mu_limit,
            self.statistic_variance_limit,
            self.prediction_variance_limit,
        )


def _limits(system: KrigingSystem):
    system._check_schur()
    fxf = system.fxf
    inv = 1.0 / fxf
    xi = 1.0 / (2.0 * fxf)
    mu = xi - inv
    # upper sign of -/+ and +/- for the negative-correlation regime
    sign = 1.0 if fxf < 0 else -1.0
    return inv, xi, mu, -sign * inv, 1.0 + sign * (2.0 * xi - inv)


def mu_limit(lam) -> float:
    """Limit of the Lagrange multiplier as j -> infinity.

    Raises ``ArithmeticError`` if it is not -xi to within 1e-12.
    """
    system = lam if isinstance(lam, KrigingSystem) else KrigingSystem(lam)
    _, xi, mu, _, _ = _limits(system)
    if abs(mu + xi) > IDENTITY_TOL:
        raise ArithmeticError(f"mu limit {mu!r} differs from -xi={-xi!r}")
    return mu


def decay_study(model: corr.CorrelationModel, n_values) -> AsymptoticReport:
    """Tabulate the j -> infinity limits for each sample size in ``n_values``."""
    ns = [int(n) for n in n_values]
    if not ns:
        raise ValueError("n_values is empty")
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise ValueError(f"n_values must be strictly increasing, got {ns}")
    cols = [_limits(KrigingSystem(corr.build_matrix(model, n))) for n in ns]
    inv, xi, mu, stat, pred = (list(map(float, c)) for c in zip(*cols))
    return AsymptoticReport(ns, inv, xi, mu, stat, pred, model=model.describe())
