"""Augmented Dickey-Fuller unit-root tests with SIC lag selection."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._validation import as_float_vector
from .exceptions import DegenerateRegressionError, InsufficientDataError
from .ingest import RawSeries

__all__ = ["AdfReport", "adf_test", "select_lag_sic", "ADF_CRITICAL_VALUES"]

# Asymptotic critical values for the t-ratio on the lagged level,
# MacKinnon-style, by deterministic specification. Reject (stationarity)
# when the statistic falls below the value.
ADF_CRITICAL_VALUES = {
    "constant": {"1%": -3.43, "5%": -2.86, "10%": -2.57},
    "trend": {"1%": -3.96, "5%": -3.41, "10%": -3.13},
}


@dataclass(frozen=True)
class AdfReport:
    variable: str
    lag: int
    spec: str
    statistic: float
    critical_values: dict[str, float]
    reject_at: str | None

    def to_dict(self) -> dict:
        return {
            "variable": self.variable,
            "lag": self.lag,
            "spec": self.spec,
            "statistic": self.statistic,
            "critical_values": dict(self.critical_values),
            "reject_at": self.reject_at,
        }


def _coerce_series(series) -> tuple[str, np.ndarray]:
    if isinstance(series, RawSeries):
        return series.name, np.asarray(series.values, dtype=float)
    return "series", as_float_vector(series, "series")


def _check_spec(spec: str) -> str:
    if spec not in ("constant", "trend"):
        raise ValueError(f"spec must be 'constant' or 'trend', got {spec!r}")
    return spec


def _adf_regression(y: np.ndarray, lag: int, spec: str, start: int):
    """Fit the Dickey-Fuller regression using rows t = start..N-1.

    Response is the first difference at t; regressors are a constant
    (plus a trend term under the trend spec), the lagged level, and
    `lag` lagged differences. Returns the t-ratio of the lagged level,
    the residual sum of squares, the effective sample size, and the
    coefficient count.
    """
    n = y.size
    t_idx = np.arange(start, n)
    t_eff = t_idx.size
    dy = np.diff(y)
    z = dy[t_idx - 1]
    cols = [np.ones(t_eff)]
    if spec == "trend":
        cols.append(t_idx.astype(float))
    cols.append(y[t_idx - 1])
    for i in range(1, lag + 1):
        cols.append(dy[t_idx - i - 1])
    X = np.column_stack(cols)
    k = X.shape[1]
    if t_eff <= k:
        raise InsufficientDataError(
            f"ADF regression needs more than {k} effective observations, got {t_eff}"
        )

    xtx = X.T @ X
    try:
        xtx_inv = np.linalg.inv(xtx)
    except np.linalg.LinAlgError:
        raise DegenerateRegressionError("ADF regressors are collinear") from None
    # guard against near-singular systems inv() still "solves"
    if np.linalg.cond(xtx) > 1e12:
        raise DegenerateRegressionError("ADF regressors are collinear")
    beta = xtx_inv @ (X.T @ z)
    resid = z - X @ beta
    ssr = float(resid @ resid)
    rho_pos = 2 if spec == "trend" else 1
    s2 = ssr / (t_eff - k)
    se_rho = np.sqrt(s2 * xtx_inv[rho_pos, rho_pos])
    if se_rho == 0.0:
        raise DegenerateRegressionError("zero standard error for the lagged level")
    stat = float(beta[rho_pos] / se_rho)
    return stat, ssr, t_eff, k


def adf_test(series, lag: int, spec: str = "constant") -> AdfReport:
    """ADF test for a unit root at a fixed augmentation lag.

    The null is a unit root; it is rejected when the t-ratio of the
    lagged level is below the embedded critical value. `reject_at`
    holds the strongest such level, or None.
    """
    name, y = _coerce_series(series)
    spec = _check_spec(spec)
    if lag < 0:
        raise ValueError("lag must be nonnegative")
    min_len = lag + (4 if spec == "constant" else 5)
    if y.size < min_len:
        raise InsufficientDataError(
            f"{name}: ADF with lag {lag} and spec {spec} needs at least {min_len} observations"
        )
    stat, _, _, _ = _adf_regression(y, lag, spec, start=lag + 1)
    crit = ADF_CRITICAL_VALUES[spec]
    reject_at = None
    for level in ("1%", "5%", "10%"):
        if stat < crit[level]:
            reject_at = level
            break
    return AdfReport(name, lag, spec, stat, dict(crit), reject_at)


def select_lag_sic(series, max_lag: int, spec: str = "constant") -> int:
    """Augmentation lag in [0, max_lag] minimizing the Schwarz criterion.

    Every candidate is fitted on the same effective sample (the one the
    largest lag allows) so the criterion values are comparable.
    """
    name, y = _coerce_series(series)
    spec = _check_spec(spec)
    if max_lag < 0:
        raise ValueError("max_lag must be nonnegative")
    if y.size <= max_lag + 10:
        raise InsufficientDataError(
            f"{name}: need more than {max_lag + 10} observations for max_lag {max_lag}"
        )
    best_lag, best_sic = 0, np.inf
    for lag in range(max_lag + 1):
        _, ssr, t_eff, k = _adf_regression(y, lag, spec, start=max_lag + 1)
        if ssr <= 0.0:
            raise DegenerateRegressionError("perfect fit in ADF regression")
        sic = np.log(ssr / t_eff) + k * np.log(t_eff) / t_eff
        if sic < best_sic:
            best_lag, best_sic = lag, sic
    return best_lag
