"""Johansen trace and maximum-eigenvalue cointegration tests.

Levels enter the test; the deterministic specification is an
unrestricted constant in the error-correction regression, matching the
constant-only unit-root testing elsewhere in the pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._validation import as_float_matrix
from .exceptions import DegeneracyError, InsufficientDataError, UnsupportedDimensionError
from .ingest import Panel

__all__ = ["CointReport", "johansen_test"]

# 90/95/99 percent critical values for the unrestricted-constant case
# with driftless data, indexed by the number of common trends n-r
# (1..12). Simulated from the exact statistic under k independent
# random walks (T = 1000, 50k replications; tools/gen_johansen_cv.py);
# they agree with the published Osterwald-Lenum (1992) case-1 table to
# within simulation error (e.g. 8.17/11.77 here vs 8.18/11.65 there for
# n-r = 1).
_TRACE_CV = (
    (6.5922, 8.1679, 11.7658),
    (15.9198, 18.1152, 22.8341),
    (29.0466, 31.9349, 37.6996),
    (46.3053, 49.7018, 56.7171),
    (67.4658, 71.6494, 79.4970),
    (92.8578, 97.7779, 106.8623),
    (122.0454, 127.3554, 137.8303),
    (155.7533, 161.7087, 173.7131),
    (193.2853, 199.7274, 212.7672),
    (234.4520, 241.6808, 255.7376),
    (280.2389, 288.1309, 303.3958),
    (329.6914, 337.9104, 354.4035),
)
_MAXEIG_CV = (
    (6.5922, 8.1679, 11.7658),
    (13.0507, 15.0086, 19.2038),
    (19.2838, 21.4716, 26.4047),
    (25.3643, 27.8699, 32.9282),
    (31.4035, 34.0685, 39.5042),
    (37.4762, 40.2880, 46.3174),
    (43.4524, 46.3189, 52.4357),
    (49.5708, 52.5741, 58.6544),
    (55.5849, 58.9597, 65.6860),
    (61.5463, 64.9179, 71.8191),
    (67.5223, 70.9211, 77.8019),
    (73.6263, 77.0736, 84.2566),
)
_LEVELS = ("10%", "5%", "1%")


@dataclass(frozen=True)
class CointReport:
    lag: int
    eigenvalues: np.ndarray
    trace_stats: np.ndarray
    maxeig_stats: np.ndarray
    trace_critical_values: tuple[dict[str, float], ...]
    maxeig_critical_values: tuple[dict[str, float], ...]
    selected_rank: int
    t_eff: int

    def to_dict(self) -> dict:
        return {
            "lag": self.lag,
            "eigenvalues": self.eigenvalues.tolist(),
            "trace_stats": self.trace_stats.tolist(),
            "maxeig_stats": self.maxeig_stats.tolist(),
            "trace_critical_values": [dict(c) for c in self.trace_critical_values],
            "maxeig_critical_values": [dict(c) for c in self.maxeig_critical_values],
            "selected_rank": self.selected_rank,
            "t_eff": self.t_eff,
        }


def _ols_residuals(y: np.ndarray, x: np.ndarray) -> np.ndarray:
    coef, _, _, _ = np.linalg.lstsq(x, y, rcond=None)
    return y - x @ coef


def johansen_test(panel, lag: int, det_spec: str = "constant", level: str = "5%") -> CointReport:
    """Cointegration rank tests for an n-variable system in levels.

    Concentrates out the constant and lag-1 difference terms, solves the
    canonical-correlation eigenproblem of the residual product-moment
    matrices, and compares trace and maximum-eigenvalue statistics
    against embedded critical values. The selected rank is the smallest
    r whose null "rank <= r" the trace test does not reject at `level`.
    """
    if det_spec != "constant":
        raise ValueError(f"only the 'constant' deterministic case is supported, got {det_spec!r}")
    if level not in _LEVELS:
        raise ValueError(f"level must be one of {_LEVELS}")
    if lag < 1:
        raise ValueError("lag must be at least 1")
    y = panel.values if isinstance(panel, Panel) else as_float_matrix(panel, "panel")
    t, n = y.shape
    if n > len(_TRACE_CV):
        raise UnsupportedDimensionError(
            f"critical values embedded for up to {len(_TRACE_CV)} variables, got {n}"
        )
    if t <= n * lag + n + 10:
        raise InsufficientDataError(
            f"need more than n*lag + n + 10 = {n * lag + n + 10} rows, got {t}"
        )

    dy = np.diff(y, axis=0)
    t_eff = t - lag
    # blocks over t = lag+1..T: differences, lagged levels, and the
    # conditioning set (constant + lag-1 difference lags)
    z0 = dy[lag - 1 :]
    z1 = y[lag - 1 : t - 1]
    cond = [np.ones((t_eff, 1))]
    for i in range(1, lag):
        cond.append(dy[lag - 1 - i : t - 1 - i])
    z2 = np.hstack(cond)

    r0 = _ols_residuals(z0, z2)
    r1 = _ols_residuals(z1, z2)
    s00 = r0.T @ r0 / t_eff
    s11 = r1.T @ r1 / t_eff
    s01 = r0.T @ r1 / t_eff

    try:
        s00_inv = np.linalg.inv(s00)
        chol = np.linalg.cholesky(s11)
    except np.linalg.LinAlgError:
        raise DegeneracyError("singular product-moment matrix") from None
    chol_inv = np.linalg.inv(chol)
    m = chol_inv @ s01.T @ s00_inv @ s01 @ chol_inv.T
    eigvals = np.linalg.eigvalsh((m + m.T) / 2.0)[::-1]
    eigvals = np.clip(eigvals, 0.0, 1.0 - 1e-15)

    log_terms = np.log(1.0 - eigvals)
    trace_stats = -t_eff * np.cumsum(log_terms[::-1])[::-1]
    maxeig_stats = -t_eff * log_terms

    trace_cv = tuple(
        dict(zip(_LEVELS, _TRACE_CV[n - r - 1])) for r in range(n)
    )
    maxeig_cv = tuple(
        dict(zip(_LEVELS, _MAXEIG_CV[n - r - 1])) for r in range(n)
    )

    selected_rank = n
    for r in range(n):
        if trace_stats[r] <= trace_cv[r][level]:
            selected_rank = r
            break

    return CointReport(
        lag=lag,
        eigenvalues=eigvals,
        trace_stats=trace_stats,
        maxeig_stats=maxeig_stats,
        trace_critical_values=trace_cv,
        maxeig_critical_values=maxeig_cv,
        selected_rank=selected_rank,
        t_eff=t_eff,
    )
