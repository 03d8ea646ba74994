"""Residual diagnostics: normality and serial-correlation tests."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats

from ._validation import as_float_vector
from .exceptions import DegeneracyError, InsufficientDataError, UnsupportedSizeError
from .var import VarModel

__all__ = [
    "DiagnosticsReport",
    "ColumnDiagnostics",
    "jarque_bera",
    "shapiro_wilk",
    "shapiro_francia",
    "ljung_box",
    "diagnose_residuals",
]

_SW_MIN, _SW_MAX = 12, 5000


def _moments(x: np.ndarray) -> tuple[float, float]:
    """Divisor-N standardized skewness and excess kurtosis."""
    centered = x - x.mean()
    m2 = float(np.mean(centered**2))
    if m2 == 0.0:
        raise DegeneracyError("zero variance")
    skew = float(np.mean(centered**3) / m2**1.5)
    kurt = float(np.mean(centered**4) / m2**2 - 3.0)
    return skew, kurt


def jarque_bera(x) -> tuple[float, float]:
    """Jarque-Bera normality test: N/6 (S^2 + K^2/4) against chi-square(2)."""
    x = as_float_vector(x, "x", min_len=8)
    n = x.size
    skew, kurt = _moments(x)
    stat = n / 6.0 * (skew**2 + kurt**2 / 4.0)
    p = float(stats.chi2.sf(stat, 2))
    return float(stat), p


def _check_sw_size(x: np.ndarray, test: str) -> None:
    if not (_SW_MIN <= x.size <= _SW_MAX):
        raise UnsupportedSizeError(
            f"{test} supports {_SW_MIN} <= N <= {_SW_MAX}, got {x.size}"
        )


def shapiro_wilk(x) -> tuple[float, float]:
    """Shapiro-Wilk W via the Royston large-sample approximation."""
    x = as_float_vector(x, "x")
    _check_sw_size(x, "Shapiro-Wilk")
    if np.ptp(x) == 0.0:
        raise DegeneracyError("all values identical")
    stat, p = stats.shapiro(x)
    return float(stat), float(p)


def shapiro_francia(x) -> tuple[float, float]:
    """Shapiro-Francia: squared correlation with expected normal scores.

    P-value from the Royston (1993) lognormal approximation of 1 - W'.
    """
    x = as_float_vector(x, "x")
    _check_sw_size(x, "Shapiro-Francia")
    if np.ptp(x) == 0.0:
        raise DegeneracyError("all values identical")
    n = x.size
    ordered = np.sort(x)
    scores = stats.norm.ppf((np.arange(1, n + 1) - 0.375) / (n + 0.25))
    w = float(np.corrcoef(ordered, scores)[0, 1] ** 2)
    nu = np.log(n)
    mu = -1.2725 + 1.0521 * (np.log(nu) - nu)
    sigma = 1.0308 - 0.26758 * (np.log(nu) + 2.0 / nu)
    z = (np.log(1.0 - w) - mu) / sigma
    return w, float(stats.norm.sf(z))


def ljung_box(x, h: int, df_adjust: int = 0) -> tuple[float, float]:
    """Ljung-Box portmanteau test for serial correlation up to lag h."""
    x = as_float_vector(x, "x")
    n = x.size
    if h < 1:
        raise ValueError("h must be at least 1")
    if n <= h + 1:
        raise InsufficientDataError(f"need more than h + 1 = {h + 1} observations, got {n}")
    centered = x - x.mean()
    denom = float(centered @ centered)
    if denom == 0.0:
        raise DegeneracyError("zero variance")
    q = 0.0
    for k in range(1, h + 1):
        rho = float(centered[k:] @ centered[:-k]) / denom
        q += rho * rho / (n - k)
    stat = n * (n + 2.0) * q
    df = h - df_adjust
    if df < 1:
        raise ValueError("df_adjust leaves no degrees of freedom")
    return float(stat), float(stats.chi2.sf(stat, df))


@dataclass(frozen=True)
class ColumnDiagnostics:
    name: str
    kurtosis: float
    shapiro_wilk_p: float | None
    shapiro_francia_p: float | None
    jarque_bera_p: float
    ljung_box_p: float


@dataclass(frozen=True)
class DiagnosticsReport:
    ljung_box_lags: int
    columns: tuple[ColumnDiagnostics, ...]

    def to_dict(self) -> dict:
        return {
            "ljung_box_lags": self.ljung_box_lags,
            "columns": [
                {
                    "name": c.name,
                    "kurtosis": c.kurtosis,
                    "shapiro_wilk_p": c.shapiro_wilk_p,
                    "shapiro_francia_p": c.shapiro_francia_p,
                    "jarque_bera_p": c.jarque_bera_p,
                    "ljung_box_p": c.ljung_box_p,
                }
                for c in self.columns
            ],
        }


def diagnose_residuals(model: VarModel, lb_lags: int = 10) -> DiagnosticsReport:
    """Normality and serial-correlation diagnostics per residual column.

    Shapiro tests are skipped (None) when the sample size is outside
    their supported range; the other tests always run.
    """
    cols = []
    for j, name in enumerate(model.names):
        x = model.residuals[:, j]
        _, kurt = _moments(x)
        _, jb_p = jarque_bera(x)
        _, lb_p = ljung_box(x, lb_lags)
        if _SW_MIN <= x.size <= _SW_MAX:
            _, sw_p = shapiro_wilk(x)
            _, sf_p = shapiro_francia(x)
        else:
            sw_p, sf_p = None, None
        cols.append(
            ColumnDiagnostics(
                name=name,
                kurtosis=kurt,
                shapiro_wilk_p=sw_p,
                shapiro_francia_p=sf_p,
                jarque_bera_p=jb_p,
                ljung_box_p=lb_p,
            )
        )
    return DiagnosticsReport(ljung_box_lags=lb_lags, columns=tuple(cols))
