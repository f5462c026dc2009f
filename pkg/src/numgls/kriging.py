"""Ordinary kriging system with a constant unknown mean.

The bordered system

    [ Lambda  F ] [ w  ]   [ r ]
    [ F'      0 ] [ mu ] = [ 1 ]

is solved through the Schur complement of Lambda:

    mu = (F' Lambda^-1 r - 1) / (F' Lambda^-1 F),   w = Lambda^-1 (r - F mu)

so that one factorization of Lambda serves every right-hand side r.
All variances are in units of the field variance sigma^2.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import symsolve

DEGENERATE_TOL = 1e-12
SIGN_RULE_TOL = 1e-6

NEGATIVE_CORRELATION = "negative-correlation"
NONNEGATIVE_CORRELATION = "nonnegative-correlation"
WHITE_NOISE = "white-noise"
MIXED = "mixed"


class DegenerateSchurError(ArithmeticError):
    """F' Lambda^-1 F is numerically zero, so the Lagrange multiplier is undefined."""


class SignRuleError(ArithmeticError):
    """Absolute-value and sign-resolved variance formulas disagree."""


class MixedSignWarning(UserWarning):
    pass


@dataclass(frozen=True)
class KrigingSolution:
    weights: np.ndarray
    mu: float
    system_residual: float
    j: float = float("nan")

    @property
    def weight_sum(self) -> float:
        return float(self.weights.sum())


@dataclass(frozen=True)
class VarianceReport:
    """Estimator and prediction variances in units of sigma^2.

    ``statistic_variance`` is E[(w'V - m)^2] and ``prediction_variance`` is
    E[(V_j - w'V)^2]. ``wr`` and ``wlw`` are the raw quadratic terms w'r and
    w'Lambda w whose signs select ``sign_case``.
    """

    statistic_variance: float
    prediction_variance: float
    sign_case: str
    wr: float
    wlw: float
    warning: str | None = None


class KrigingSystem:
    """Factorized correlation matrix ready for repeated kriging solves.

    Holds Lambda, its LDL' factorization and the j-independent pieces
    Lambda^-1 F and F' Lambda^-1 F. Immutable, so one instance can be shared
    across threads.
    """

    def __init__(self, lam, factorization: symsolve.Factorization | None = None):
        lam = np.array(lam, dtype=float)
        lam.setflags(write=False)
        self.lam = lam
        self.n = lam.shape[0]
        self.factorization = factorization or symsolve.factor(lam)
        ones = np.ones(self.n)
        lam_inv_f = symsolve.solve(self.factorization, ones)
        lam_inv_f.setflags(write=False)
        self.lam_inv_f = lam_inv_f
        self.fxf = float(ones @ lam_inv_f)

    def _check_schur(self):
        if not abs(self.fxf) >= DEGENERATE_TOL:
            raise DegenerateSchurError(
                f"F' Lambda^-1 F = {self.fxf:.3e} is below {DEGENERATE_TOL:g} in magnitude"
            )

    def solve_many(self, rs) -> tuple[np.ndarray, np.ndarray]:
        """Weights (n x k) and multipliers (k,) for the columns of ``rs``."""
        self._check_schur()
        rs = np.asarray(rs, dtype=float).reshape(self.n, -1)
        lam_inv_r = symsolve.solve(self.factorization, rs)
        mu = (lam_inv_r.sum(axis=0) - 1.0) / self.fxf
        weights = lam_inv_r - np.outer(self.lam_inv_f, mu)
        return weights, mu

    def residual(self, weights, mu, r) -> float:
        """Infinity norm of Lambda w + F mu - r."""
        return float(np.abs(self.lam @ weights + mu - r).max())

    def solve(self, r, j: float = float("nan")) -> KrigingSolution:
        r = np.asarray(r, dtype=float)
        if r.shape != (self.n,):
            raise ValueError(f"correlation vector of shape {r.shape} does not match n={self.n}")
        weights, mu = self.solve_many(r)
        w = weights[:, 0]
        m = float(mu[0])
        return KrigingSolution(w, m, self.residual(w, m, r), float(j))


def solve_system(lam, r, system: KrigingSystem | None = None) -> KrigingSolution:
    """Solve the bordered kriging system for one correlation vector.

    Pass a prebuilt ``system`` to reuse the factorization of ``lam``.
    """
    if system is None:
        system = KrigingSystem(lam)
    return system.solve(r)


def variances(sol: KrigingSolution, lam, r, *, warn: bool = True) -> VarianceReport:
    """Estimator and prediction variances with sign resolution.

    The absolute-value forms |w'Lambda w| and 1 - 2|w'r| + |w'Lambda w| are
    authoritative. They are cross-checked against the signed forms
    -/+(w'r - mu) and 1 +/- (w'r + mu): the upper sign applies when w'r < 0
    and w'Lambda w < 0, the lower one when both are nonnegative. For r = 0
    (white noise) the sign follows w'Lambda w. Mixed signs only produce a
    :class:`MixedSignWarning` (suppressed with ``warn=False``) and
    ``sign_case == "mixed"``.
    """
    w = sol.weights
    r = np.asarray(r, dtype=float)
    lam = np.asarray(lam, dtype=float)
    wr = float(w @ r)
    wlw = float(w @ lam @ w)
    stat = abs(wlw)
    pred = 1.0 - 2.0 * abs(wr) + abs(wlw)

    if not r.any():
        # w'r = 0, so only the sign of w'Lambda w matters
        case, sign = WHITE_NOISE, (-1.0 if wlw >= 0 else 1.0)
    elif wr < 0 and wlw < 0:
        case, sign = NEGATIVE_CORRELATION, 1.0
    elif wr >= 0 and wlw >= 0:
        case, sign = NONNEGATIVE_CORRELATION, -1.0
    else:
        msg = f"mixed signs w'r={wr:.3e}, w'Lambda w={wlw:.3e}; using absolute-value form"
        if warn:
            warnings.warn(msg, MixedSignWarning, stacklevel=2)
        return VarianceReport(stat, pred, MIXED, wr, wlw, msg)

    stat_signed = -sign * (wr - sol.mu)
    pred_signed = 1.0 + sign * (wr + sol.mu)
    gap = max(abs(stat - stat_signed), abs(pred - pred_signed))
    if gap > SIGN_RULE_TOL:
        raise SignRuleError(
            f"{case}: absolute and signed variance forms differ by {gap:.3e}"
        )
    return VarianceReport(stat, pred, case, wr, wlw)


def constraint_residual(sol: KrigingSolution, r) -> float:
    """w'r + mu; zero exactly when the prediction variance equals sigma^2."""
    r = np.asarray(r, dtype=float)
    if r.shape != sol.weights.shape:
        raise ValueError(f"correlation vector of shape {r.shape} does not match weights")
    return float(sol.weights @ r + sol.mu)
