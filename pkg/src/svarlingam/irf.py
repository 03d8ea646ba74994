"""Structural impulse-response functions with bootstrap bands."""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass

import numpy as np

from .exceptions import InsufficientDataError, NumericalError, SvarLingamError
from .ingest import Panel, slice_period
from .svar import SvarLingamModel, _bootstrap_replicates, fit_svar_lingam

__all__ = ["IrfResult", "ma_coefficients", "structural_irf", "irf_bootstrap_bands", "compare_subperiods"]


@dataclass(frozen=True)
class IrfResult:
    """theta[h, i, j]: response of variable i at horizon h to a unit shock in j."""

    horizon: int
    theta: np.ndarray
    names: tuple[str, ...]
    level: float | None = None
    lower: np.ndarray | None = None
    upper: np.ndarray | None = None

    def to_dict(self) -> dict:
        out = {
            "horizon": self.horizon,
            "names": list(self.names),
            "theta": self.theta.tolist(),
        }
        if self.lower is not None:
            out["level"] = self.level
            out["lower"] = self.lower.tolist()
            out["upper"] = self.upper.tolist()
        return out


def ma_coefficients(pi, horizon: int) -> list[np.ndarray]:
    """Moving-average matrices of the reduced form by recursion.

    Phi_0 = I and Phi_h accumulates pi_j Phi_{h-j} over available lags.
    """
    if horizon < 0:
        raise ValueError("horizon must be nonnegative")
    pi = [np.asarray(m, dtype=float) for m in pi]
    n = pi[0].shape[0] if pi else 0
    if not pi:
        raise ValueError("need at least one lag matrix")
    phi = [np.eye(n)]
    for h in range(1, horizon + 1):
        acc = np.zeros((n, n))
        for j in range(1, min(h, len(pi)) + 1):
            acc += pi[j - 1] @ phi[h - j]
        phi.append(acc)
    return phi


def _impact_matrix(b0: np.ndarray) -> np.ndarray:
    i_minus = np.eye(b0.shape[0]) - b0
    if abs(np.linalg.det(i_minus)) < 1e-12:
        raise NumericalError("I - B0 is singular")
    return np.linalg.inv(i_minus)


def _theta(pi, b0: np.ndarray, horizon: int) -> np.ndarray:
    impact = _impact_matrix(b0)
    phi = ma_coefficients(pi, horizon)
    return np.stack([p @ impact for p in phi])


def structural_irf(model: SvarLingamModel, horizon: int, shock: str = "unit") -> IrfResult:
    """Responses to structural shocks: theta[h] = Phi_h (I - B0)^{-1}.

    The default shock is one unit of u_j; `shock="sd"` rescales columns
    by the standard deviation of the fitted structural shocks.
    """
    theta = _theta(model.var.pi, model.b0, horizon)
    if shock == "sd":
        theta = theta * model.shocks.std(axis=0, ddof=1)[None, None, :]
    elif shock != "unit":
        raise ValueError("shock must be 'unit' or 'sd'")
    return IrfResult(horizon=horizon, theta=theta, names=model.names)


def irf_bootstrap_bands(
    model: SvarLingamModel,
    panel,
    horizon: int,
    level: float = 0.99,
    iterations: int = 1000,
    seed=None,
    refit_order: bool = False,
) -> IrfResult:
    """Equal-tail percentile bands around the structural responses.

    Uses the same residual-resampling scheme and replicate seeding as
    the coefficient bootstrap. Bands are widened, if needed, to include
    the point estimate.
    """
    if not (0.5 < level < 1.0):
        raise ValueError("level must be in (0.5, 1)")
    if iterations < 100:
        raise ValueError("iterations must be at least 100")
    point = _theta(model.var.pi, model.b0, horizon)
    n = point.shape[1]
    draws = np.empty((iterations, horizon + 1, n, n))
    kept = 0
    for _gamma, pi_star, b0_star in _bootstrap_replicates(
        model, panel, iterations, seed, refit_order
    ):
        draws[kept] = _theta(pi_star, b0_star, horizon)
        kept += 1
    draws = draws[:kept]
    alpha = 100.0 * (1.0 - level)
    lower = np.percentile(draws, alpha / 2.0, axis=0)
    upper = np.percentile(draws, 100.0 - alpha / 2.0, axis=0)
    lower = np.minimum(lower, point)
    upper = np.maximum(upper, point)
    return IrfResult(
        horizon=horizon,
        theta=point,
        names=model.names,
        level=level,
        lower=lower,
        upper=upper,
    )


def compare_subperiods(
    panel: Panel,
    split_date: dt.date,
    p: int,
    horizon: int,
    nonlinearity: str = "tanh",
    max_iter: int = 200,
    tol: float = 1e-4,
    seed=None,
    level: float | None = None,
    iterations: int = 1000,
) -> tuple[IrfResult, IrfResult, IrfResult]:
    """IRFs for the whole sample and the periods before/after a split date.

    The split date belongs to the first subperiod. Passing a band level
    adds bootstrap bands to all three results with the same settings.
    """
    if not isinstance(panel, Panel):
        raise TypeError("compare_subperiods needs a Panel (dates drive the split)")

    def one(sub: Panel, label: str) -> IrfResult:
        try:
            model = fit_svar_lingam(
                sub, p, nonlinearity=nonlinearity, max_iter=max_iter, tol=tol, seed=seed
            )
        except InsufficientDataError as exc:
            raise InsufficientDataError(f"{label}: {exc}") from exc
        if level is None:
            return structural_irf(model, horizon)
        return irf_bootstrap_bands(
            model, sub, horizon, level=level, iterations=iterations, seed=seed
        )

    first_start, last = panel.dates[0], panel.dates[-1]
    if split_date < first_start or split_date >= last:
        raise InsufficientDataError(
            f"split date {split_date} leaves an empty subperiod of [{first_start}, {last}]"
        )

    def subpanel(start: dt.date, end: dt.date, label: str) -> Panel:
        try:
            return slice_period(panel, start, end)
        except SvarLingamError as exc:
            raise InsufficientDataError(f"{label}: {exc}") from exc

    first = subpanel(first_start, split_date, "first subperiod")
    second = subpanel(split_date + dt.timedelta(days=1), last, "second subperiod")
    return one(panel, "whole period"), one(first, "first subperiod"), one(second, "second subperiod")
