"""The full pipeline: VAR residuals -> LiNGAM -> structural model.

The structural form used throughout is y_t = c + B0 y_t + sum_{h>=1}
B_h y_{t-h} + u_t with zero-diagonal B0, so the reduced form satisfies
Pi_h = (I - B0)^{-1} B_h and the structural shocks are u_t =
(I - B0) eps_t.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator

from ._validation import check_square
from .diagnostics import jarque_bera
from .exceptions import (
    BootstrapReliabilityError,
    NumericalError,
    SvarLingamError,
)
from .lingam import ica_lingam
from .var import VarModel, fit_var, _coerce_panel

__all__ = [
    "SvarLingamModel",
    "BootstrapSummary",
    "CausalGraph",
    "GraphEdge",
    "structural_to_reduced",
    "reduced_to_structural",
    "fit_svar_lingam",
    "bootstrap_significance",
    "build_causal_graph",
    "to_causal_graph",
    "SVARLiNGAM",
]

_STAR_LEVELS = (("99%", "***"), ("95%", "**"), ("90%", "*"))
_PCT = {"90%": (5.0, 95.0), "95%": (2.5, 97.5), "99%": (0.5, 99.5)}


@dataclass(frozen=True)
class SvarLingamModel:
    """Structural VAR with data-driven instantaneous effects."""

    p: int
    c: np.ndarray
    b: tuple[np.ndarray, ...]
    order: np.ndarray
    shocks: np.ndarray
    var: VarModel
    upper_mass: float
    ica_converged: bool

    @property
    def b0(self) -> np.ndarray:
        return self.b[0]

    @property
    def names(self) -> tuple[str, ...]:
        return self.var.names

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "names": list(self.names),
            "c": self.c.tolist(),
            "b": [m.tolist() for m in self.b],
            "order": self.order.tolist(),
            "upper_mass": self.upper_mass,
            "ica_converged": self.ica_converged,
            "var": self.var.to_dict(),
        }


@dataclass(frozen=True)
class BootstrapSummary:
    """Percentile intervals and significance stars per coefficient.

    Arrays are indexed [h, i, j] over B_0..B_p; stars follow the usual
    convention (*, **, *** for zero outside the 90/95/99% interval).
    """

    iterations: int
    successes: int
    dropped: int
    point: np.ndarray
    se: np.ndarray
    lower: dict[str, np.ndarray]
    upper: dict[str, np.ndarray]
    stars: np.ndarray
    names: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "iterations": self.iterations,
            "successes": self.successes,
            "dropped": self.dropped,
            "names": list(self.names),
            "point": self.point.tolist(),
            "se": self.se.tolist(),
            "lower": {k: v.tolist() for k, v in self.lower.items()},
            "upper": {k: v.tolist() for k, v in self.upper.items()},
            "stars": self.stars.tolist(),
        }


@dataclass(frozen=True)
class GraphEdge:
    source: str
    target: str
    lag: int
    weight: float
    significant: bool


@dataclass(frozen=True)
class CausalGraph:
    nodes: tuple[str, ...]
    edges: tuple[GraphEdge, ...]

    def to_dict(self) -> dict:
        return {
            "nodes": list(self.nodes),
            "edges": [
                {
                    "source": e.source,
                    "target": e.target,
                    "lag": e.lag,
                    "weight": e.weight,
                    "significant": e.significant,
                }
                for e in self.edges
            ],
        }


def structural_to_reduced(b0, b_lags) -> list[np.ndarray]:
    """Reduced-form lag matrices Pi_h = (I - B0)^{-1} B_h."""
    b0 = check_square(b0, "b0")
    i_minus = np.eye(b0.shape[0]) - b0
    if abs(np.linalg.det(i_minus)) < 1e-12:
        raise NumericalError("I - B0 is singular")
    return [np.linalg.solve(i_minus, np.asarray(bh, dtype=float)) for bh in b_lags]


def reduced_to_structural(pi, b0) -> list[np.ndarray]:
    """Structural lag matrices B_h = (I - B0) Pi_h; inverse of the above."""
    b0 = check_square(b0, "b0")
    i_minus = np.eye(b0.shape[0]) - b0
    if abs(np.linalg.det(i_minus)) < 1e-12:
        raise NumericalError("I - B0 is singular")
    return [i_minus @ np.asarray(p, dtype=float) for p in pi]


def _all_gaussian_looking(residuals: np.ndarray) -> bool:
    return all(jarque_bera(residuals[:, j])[1] > 0.05 for j in range(residuals.shape[1]))


def fit_svar_lingam(
    panel,
    p: int,
    nonlinearity: str = "tanh",
    max_iter: int = 200,
    tol: float = 1e-4,
    seed=None,
) -> SvarLingamModel:
    """Fit the structural model: VAR, then LiNGAM on its residuals.

    The VAR residuals inherit the instantaneous structure, so the
    LiNGAM connection matrix estimated from them is B0; lagged
    structural matrices, the structural intercept, and the shocks all
    follow by multiplying with (I - B0). Deterministic given the seed.
    """
    var = fit_var(panel, p)
    if _all_gaussian_looking(var.residuals):
        warnings.warn(
            "all residual columns look Gaussian (Jarque-Bera p > 0.05); "
            "the instantaneous structure is not identifiable from such data",
            UserWarning,
            stacklevel=2,
        )
    lingam = ica_lingam(
        var.residuals, nonlinearity=nonlinearity, max_iter=max_iter, tol=tol, seed=seed
    )
    if not lingam.ica_converged:
        warnings.warn("FastICA did not converge; estimates may be unstable", UserWarning, stacklevel=2)
    b0 = lingam.b
    i_minus = np.eye(var.n_vars) - b0
    b = (b0, *(i_minus @ pi_h for pi_h in var.pi))
    c = i_minus @ var.gamma
    shocks = var.residuals @ i_minus.T
    return SvarLingamModel(
        p=p,
        c=c,
        b=b,
        order=lingam.order,
        shocks=shocks,
        var=var,
        upper_mass=lingam.upper_mass,
        ica_converged=lingam.ica_converged,
    )


def _b0_given_order(residuals: np.ndarray, order: np.ndarray) -> np.ndarray:
    """Instantaneous effects by least squares under a known causal order."""
    n = residuals.shape[1]
    b0 = np.zeros((n, n))
    for pos in range(1, n):
        var_idx = order[pos]
        preds = order[:pos]
        design = residuals[:, preds]
        coef, _, rank, _ = np.linalg.lstsq(design, residuals[:, var_idx], rcond=None)
        if rank < design.shape[1]:
            raise NumericalError("degenerate instantaneous-effect regression")
        b0[var_idx, preds] = coef
    return b0


def _rebuild_series(
    y: np.ndarray, gamma: np.ndarray, pi: tuple[np.ndarray, ...], eps_star: np.ndarray, p: int
) -> np.ndarray:
    """Recursively rebuild a series from observed initial rows and resampled residuals."""
    t, n = y.shape
    out = np.empty_like(y)
    out[:p] = y[:p]
    for t_idx in range(p, t):
        acc = gamma + eps_star[t_idx - p]
        for h, pi_h in enumerate(pi, start=1):
            acc = acc + pi_h @ out[t_idx - h]
        out[t_idx] = acc
    return out


def _bootstrap_replicates(
    model: SvarLingamModel,
    panel,
    iterations: int,
    seed,
    refit_order: bool,
    nonlinearity: str = "tanh",
    max_iter: int = 200,
    tol: float = 1e-4,
):
    """Yield (gamma*, pi*, b0*) per successful replicate; raise if >5% fail.

    Each replicate resamples residual rows with replacement, rebuilds
    the series from the observed initial p rows, refits the VAR, and
    re-estimates B0 — by least squares with the causal order held fixed
    to the point estimate's order, or by a full re-identification when
    refit_order is set. Replicate r uses the RNG stream derived from
    (seed, r), so results do not depend on evaluation order.
    """
    y, _, _ = _coerce_panel(panel)
    eps = model.var.residuals
    t_eff = eps.shape[0]
    if seed is None:
        seed = int(np.random.SeedSequence().generate_state(1)[0])
    dropped = 0
    for r in range(iterations):
        rng = np.random.default_rng([seed, r])
        idx = rng.integers(0, t_eff, size=t_eff)
        y_star = _rebuild_series(y, model.var.gamma, model.var.pi, eps[idx], model.p)
        try:
            var_star = fit_var(y_star, model.p)
            if refit_order:
                lingam_star = ica_lingam(
                    var_star.residuals,
                    nonlinearity=nonlinearity,
                    max_iter=max_iter,
                    tol=tol,
                    seed=int(rng.integers(0, 2**31)),
                )
                b0_star = lingam_star.b
            else:
                b0_star = _b0_given_order(var_star.residuals, model.order)
        except (SvarLingamError, np.linalg.LinAlgError):
            dropped += 1
            continue
        yield var_star.gamma, var_star.pi, b0_star
    if dropped > 0.05 * iterations:
        raise BootstrapReliabilityError(
            f"{dropped} of {iterations} bootstrap replicates were degenerate"
        )


def bootstrap_significance(
    model: SvarLingamModel,
    panel,
    iterations: int = 1000,
    seed=None,
    refit_order: bool = False,
) -> BootstrapSummary:
    """Residual-resampling bootstrap for all structural coefficients.

    Reports the bootstrap standard error and equal-tail percentile
    intervals at 90/95/99% for every entry of B_0..B_p, with stars when
    zero falls outside an interval.
    """
    if iterations < 100:
        raise ValueError("iterations must be at least 100")
    n = model.var.n_vars
    draws = np.empty((iterations, model.p + 1, n, n))
    kept = 0
    i_eye = np.eye(n)
    for _gamma, pi_star, b0_star in _bootstrap_replicates(
        model, panel, iterations, seed, refit_order
    ):
        i_minus = i_eye - b0_star
        draws[kept, 0] = b0_star
        for h, pi_h in enumerate(pi_star, start=1):
            draws[kept, h] = i_minus @ pi_h
        kept += 1
    draws = draws[:kept]

    point = np.stack(model.b)
    se = draws.std(axis=0, ddof=1)
    lower = {}
    upper = {}
    for level, (lo_pct, hi_pct) in _PCT.items():
        lower[level] = np.percentile(draws, lo_pct, axis=0)
        upper[level] = np.percentile(draws, hi_pct, axis=0)
    stars = np.full(point.shape, "", dtype="<U3")
    for level, mark in _STAR_LEVELS:
        outside = (lower[level] > 0.0) | (upper[level] < 0.0)
        blank = stars == ""
        stars[outside & blank] = mark
    return BootstrapSummary(
        iterations=iterations,
        successes=kept,
        dropped=iterations - kept,
        point=point,
        se=se,
        lower=lower,
        upper=upper,
        stars=stars,
        names=model.names,
    )


def build_causal_graph(names, order, b, significant) -> CausalGraph:
    """Assemble a graph from names, causal order, B matrices, and a
    significance predicate (h, i, j) -> bool.

    Instantaneous edges keep only coefficients consistent with the
    causal order (anything anti-causal is identification noise), so the
    lag-0 subgraph is acyclic by construction. Nodes are listed in
    causal order.
    """
    names = tuple(names)
    n = len(names)
    position = {int(v): pos for pos, v in enumerate(order)}
    edges = []
    lag0 = [
        (position[j], position[i], i, j)
        for i in range(n)
        for j in range(n)
        if b[0][i, j] != 0.0 and position[j] < position[i]
    ]
    for _, _, i, j in sorted(lag0):
        edges.append(GraphEdge(names[j], names[i], 0, float(b[0][i, j]), significant(0, i, j)))
    for h in range(1, len(b)):
        for i in range(n):
            for j in range(n):
                w = b[h][i, j]
                if w != 0.0:
                    edges.append(GraphEdge(names[j], names[i], h, float(w), significant(h, i, j)))
    nodes = tuple(names[int(v)] for v in order)
    return CausalGraph(nodes=nodes, edges=tuple(edges))


def to_causal_graph(
    model: SvarLingamModel,
    summary: BootstrapSummary | None = None,
    significance_level: str = "95%",
) -> CausalGraph:
    """Edge list of the fitted structure.

    Without a bootstrap summary every edge is marked significant.
    """
    if significance_level not in _PCT:
        raise ValueError(f"significance_level must be one of {sorted(_PCT)}")
    if summary is not None and summary.point.shape != (model.p + 1, *model.b0.shape):
        raise ValueError("bootstrap summary does not match model dimensions")

    def significant(h: int, i: int, j: int) -> bool:
        if summary is None:
            return True
        return bool(
            summary.lower[significance_level][h, i, j] > 0.0
            or summary.upper[significance_level][h, i, j] < 0.0
        )

    return build_causal_graph(model.names, model.order, model.b, significant)


class SVARLiNGAM(BaseEstimator):
    """Estimator interface to the structural pipeline.

    Attributes after fit: ``b0_``, ``lagged_effects_`` (B_1..B_p),
    ``intercept_``, ``causal_order_``, ``shocks_``, ``var_model_``,
    and the full ``model_``.
    """

    def __init__(self, lags=1, nonlinearity="tanh", max_iter=200, tol=1e-4, random_state=None):
        self.lags = lags
        self.nonlinearity = nonlinearity
        self.max_iter = max_iter
        self.tol = tol
        self.random_state = random_state

    def fit(self, X, y=None):
        model = fit_svar_lingam(
            X,
            self.lags,
            nonlinearity=self.nonlinearity,
            max_iter=self.max_iter,
            tol=self.tol,
            seed=self.random_state,
        )
        self.model_ = model
        self.b0_ = model.b0
        self.lagged_effects_ = model.b[1:]
        self.intercept_ = model.c
        self.causal_order_ = model.order
        self.shocks_ = model.shocks
        self.var_model_ = model.var
        return self
