"""Correlation models on a one-dimensional lattice.

Three kinds are supported:

* ``negative-power``: rho(0) = 1 and rho(d) = -t ** (-beta * (d / t) ** 2) for d > 0.
* ``white-noise``: rho(0) = 1 and rho(d) = 0 for d > 0.
* ``tabulated``: rho(0) = 1 and rho(d) looked up in a user table. Meant for
  injecting hand-built matrices in tests; no decay or sign checks are made.

Lags are distances between lattice indices ``i = 1..n`` and a (possibly
real-valued) prediction index ``j``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

import numpy as np
from scipy.linalg import toeplitz

BETA = 0.62590

NEGATIVE_POWER = "negative-power"
WHITE_NOISE = "white-noise"
TABULATED = "tabulated"
KINDS = (NEGATIVE_POWER, WHITE_NOISE, TABULATED)


class CorrelationError(ValueError):
    """Base class for invalid correlation inputs."""


class InvalidParameterError(CorrelationError):
    pass


class MissingLagError(CorrelationError, KeyError):
    def __init__(self, lag):
        self.lag = lag
        super().__init__(f"no tabulated correlation for lag {lag!r}")

    def __str__(self):
        return self.args[0]


class EmptySampleError(CorrelationError):
    pass


class OutOfRegimeError(CorrelationError):
    pass


@dataclass(frozen=True)
class CorrelationModel:
    """Parametric correlation rule rho(lag).

    Use :func:`negative_power`, :func:`white_noise` or :func:`tabulated`
    rather than calling the constructor directly.
    """

    kind: str
    t: float | None = None
    beta: float = BETA
    table: Mapping[float, float] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidParameterError(f"unknown correlation kind {self.kind!r}")
        if self.kind == NEGATIVE_POWER:
            if self.t is None or not np.isfinite(self.t) or self.t <= 1:
                raise InvalidParameterError(
                    f"negative-power model needs t > 1, got t={self.t!r}"
                )
            if not np.isfinite(self.beta) or self.beta <= 0:
                raise InvalidParameterError(f"beta must be positive, got {self.beta!r}")
        if self.kind == TABULATED:
            if self.table is None:
                raise InvalidParameterError("tabulated model needs a table")
            frozen = MappingProxyType({float(k): float(v) for k, v in self.table.items()})
            object.__setattr__(self, "table", frozen)

    def __call__(self, delta):
        return eval_rho(self, delta)

    def describe(self) -> str:
        if self.kind == NEGATIVE_POWER:
            return f"{self.kind}(t={self.t:g}, beta={self.beta:g})"
        return self.kind


def negative_power(t: float, beta: float = BETA) -> CorrelationModel:
    return CorrelationModel(NEGATIVE_POWER, t=float(t), beta=float(beta))


def white_noise() -> CorrelationModel:
    return CorrelationModel(WHITE_NOISE)


def tabulated(table: Mapping[float, float]) -> CorrelationModel:
    """Model whose positive-lag values come from ``table`` (lag -> rho)."""
    return CorrelationModel(TABULATED, table=table)


def rho_values(model: CorrelationModel, deltas) -> np.ndarray:
    """Vectorised :func:`eval_rho` over an array of nonnegative lags."""
    d = np.abs(np.asarray(deltas, dtype=float))
    out = np.ones_like(d)
    pos = d > 0
    if model.kind == NEGATIVE_POWER:
        out[pos] = -np.power(model.t, -model.beta * (d[pos] / model.t) ** 2)
    elif model.kind == WHITE_NOISE:
        out[pos] = 0.0
    else:
        flat = out.reshape(-1)
        for k, lag in enumerate(d.reshape(-1)):
            if lag > 0:
                try:
                    flat[k] = model.table[float(lag)]
                except KeyError:
                    raise MissingLagError(float(lag)) from None
    return out


def eval_rho(model: CorrelationModel, delta: float) -> float:
    """Correlation at a single nonnegative lag.

    Raises
    ------
    InvalidParameterError
        If ``delta`` is negative or not finite.
    MissingLagError
        For a tabulated model without an entry for ``delta``.
    """
    if not np.isfinite(delta) or delta < 0:
        raise InvalidParameterError(f"lag must be finite and >= 0, got {delta!r}")
    return float(rho_values(model, [delta])[0])


def build_matrix(model: CorrelationModel, n: int) -> np.ndarray:
    """n x n correlation matrix Lambda[i, l] = rho(|i - l|).

    Lags only depend on ``|i - l|``, so the n distinct values are evaluated
    once and laid out as a symmetric Toeplitz matrix. Symmetry and the unit
    diagonal are therefore exact.
    """
    if n < 1:
        raise EmptySampleError(f"sample size must be >= 1, got {n}")
    col = rho_values(model, np.arange(n))
    col[0] = 1.0
    return toeplitz(col)


def build_vector(model: CorrelationModel, n: int, j: float) -> np.ndarray:
    """Correlations rho(|i - j|) between sample points i = 1..n and index j."""
    if n < 1:
        raise EmptySampleError(f"sample size must be >= 1, got {n}")
    if not j >= n + 1:
        raise OutOfRegimeError(f"prediction index j={j!r} must be >= n+1={n + 1}")
    return rho_values(model, j - np.arange(1, n + 1))


def build_vectors(model: CorrelationModel, n: int, js) -> np.ndarray:
    """Stack :func:`build_vector` for several j as columns of an n x k array."""
    js = np.atleast_1d(np.asarray(js, dtype=float))
    if n < 1:
        raise EmptySampleError(f"sample size must be >= 1, got {n}")
    if js.size and not js.min() >= n + 1:
        raise OutOfRegimeError(f"prediction index j={js.min()!r} must be >= n+1={n + 1}")
    return rho_values(model, js[None, :] - np.arange(1, n + 1)[:, None])
