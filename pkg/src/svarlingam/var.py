"""Reduced-form VAR(p) estimation by per-equation least squares."""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass

import numpy as np

from ._validation import as_float_matrix, lstsq_full_rank
from .exceptions import InsufficientDataError
from .ingest import Panel

__all__ = ["VarModel", "fit_var", "select_var_lag_sic", "companion_matrix"]


@dataclass(frozen=True)
class VarModel:
    """Reduced-form VAR: y_t = gamma + sum_h pi[h] y_{t-h} + eps_t."""

    p: int
    gamma: np.ndarray
    pi: tuple[np.ndarray, ...]
    residuals: np.ndarray
    sigma: np.ndarray
    names: tuple[str, ...]
    dates: tuple[dt.date, ...]

    @property
    def n_vars(self) -> int:
        return self.gamma.size

    @property
    def t_eff(self) -> int:
        return self.residuals.shape[0]

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "names": list(self.names),
            "gamma": self.gamma.tolist(),
            "pi": [m.tolist() for m in self.pi],
            "sigma": self.sigma.tolist(),
        }


def _coerce_panel(panel) -> tuple[np.ndarray, tuple[str, ...], tuple[dt.date, ...]]:
    if isinstance(panel, Panel):
        return panel.values, panel.names, panel.dates
    y = as_float_matrix(panel, "panel")
    names = tuple(f"y{j + 1}" for j in range(y.shape[1]))
    return y, names, ()


def _lag_design(y: np.ndarray, p: int, start: int) -> tuple[np.ndarray, np.ndarray]:
    """Regression blocks for rows t = start..T-1: intercept plus p lags."""
    t = y.shape[0]
    rows = np.arange(start, t)
    cols = [np.ones(rows.size)]
    for h in range(1, p + 1):
        cols.append(y[rows - h])
    return np.column_stack(cols), y[rows]


def fit_var(panel, p: int) -> VarModel:
    """Estimate a VAR(p) equation by equation over rows p+1..T.

    Coefficients are exact least-squares solutions; the residual
    covariance uses the effective-sample divisor.
    """
    y, names, dates = _coerce_panel(panel)
    t, n = y.shape
    if p < 1:
        raise ValueError("p must be at least 1")
    if t <= n * p + n + 1:
        raise InsufficientDataError(
            f"need more than n*p + n + 1 = {n * p + n + 1} rows for VAR({p}), got {t}"
        )
    X, Y = _lag_design(y, p, start=p)
    coef = lstsq_full_rank(X, Y, context=f"VAR({p})")
    resid = Y - X @ coef
    gamma = coef[0].copy()
    pi = tuple(coef[1 + (h - 1) * n : 1 + h * n].T.copy() for h in range(1, p + 1))
    sigma = resid.T @ resid / resid.shape[0]
    return VarModel(
        p=p,
        gamma=gamma,
        pi=pi,
        residuals=resid,
        sigma=sigma,
        names=names,
        dates=dates,
    )


def select_var_lag_sic(panel, max_p: int) -> int:
    """Lag order in [1, max_p] minimizing the Schwarz criterion.

    All candidates are fitted on the common sample the largest order
    allows; the penalty counts the p*n^2 lag coefficients.
    """
    y, _, _ = _coerce_panel(panel)
    t, n = y.shape
    if max_p < 1:
        raise ValueError("max_p must be at least 1")
    if t <= n * max_p + n + 10:
        raise InsufficientDataError(
            f"need more than n*max_p + n + 10 = {n * max_p + n + 10} rows, got {t}"
        )
    best_p, best_sic = 1, np.inf
    for p in range(1, max_p + 1):
        X, Y = _lag_design(y, p, start=max_p)
        coef = lstsq_full_rank(X, Y, context=f"VAR({p})")
        resid = Y - X @ coef
        t_eff = resid.shape[0]
        sigma = resid.T @ resid / t_eff
        sign, logdet = np.linalg.slogdet(sigma)
        if sign <= 0:
            raise InsufficientDataError("residual covariance is singular during lag selection")
        sic = logdet + p * n * n * np.log(t_eff) / t_eff
        if sic < best_sic:
            best_p, best_sic = p, sic
    return best_p


def companion_matrix(pi: tuple[np.ndarray, ...] | list[np.ndarray]) -> np.ndarray:
    """Stacked first-order form of the lag polynomial; used for stability."""
    p = len(pi)
    n = pi[0].shape[0]
    comp = np.zeros((n * p, n * p))
    for h, mat in enumerate(pi):
        comp[:n, h * n : (h + 1) * n] = mat
    if p > 1:
        comp[n:, : n * (p - 1)] = np.eye(n * (p - 1))
    return comp
