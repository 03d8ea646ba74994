"""Ground-truth generators for structural VAR and static LiNGAM processes.

Every simulation-based test in the suite scores estimates against data
produced here, where the true coefficients are known. Shocks are always
standardized to unit variance before per-variable scaling, so
connection strengths are comparable across distributions.
"""

from __future__ import annotations

import datetime as dt
import json
import re
from dataclasses import dataclass

import numpy as np

from ._validation import check_square
from .exceptions import NumericalError
from .ingest import Panel
from .lingam import _elimination_order
from .var import companion_matrix

__all__ = ["GroundTruthSpec", "generate_svar", "generate_lingam", "draw_shocks"]

_EPOCH = dt.date(2000, 1, 1)
_STUDENT_RE = re.compile(r"^student_t\((\d+)\)$")


def _check_acyclic_b0(b0: np.ndarray) -> None:
    if np.any(np.diag(b0) != 0.0):
        raise ValueError("B0 must have a zero diagonal")
    if _elimination_order(b0 != 0.0) is None:
        raise ValueError("B0 is cyclic: no permutation makes it strictly lower triangular")


def draw_shocks(rng: np.random.Generator, dist: str, size: tuple[int, int]) -> np.ndarray:
    """Unit-variance draws from a named distribution.

    Supported: "uniform", "laplace", "gaussian", "student_t(df)" with
    df > 2 (scaled back to unit variance).
    """
    if dist == "uniform":
        half = np.sqrt(3.0)
        return rng.uniform(-half, half, size=size)
    if dist == "laplace":
        return rng.laplace(0.0, 1.0 / np.sqrt(2.0), size=size)
    if dist == "gaussian":
        return rng.standard_normal(size=size)
    m = _STUDENT_RE.match(dist)
    if m:
        df = int(m.group(1))
        if df <= 2:
            raise ValueError("student_t needs df > 2 for a finite variance")
        return rng.standard_t(df, size=size) * np.sqrt((df - 2.0) / df)
    raise ValueError(f"unknown shock distribution {dist!r}")


@dataclass(frozen=True)
class GroundTruthSpec:
    """A stationary structural VAR generator with known coefficients."""

    b: tuple[np.ndarray, ...]
    t: int
    shock_dist: str = "uniform"
    intercept: np.ndarray | None = None
    shock_scale: np.ndarray | None = None
    burn_in: int = 500
    seed: int | None = None

    def __post_init__(self):
        b = tuple(np.asarray(m, dtype=float) for m in self.b)
        if not b:
            raise ValueError("need at least B0")
        n = b[0].shape[0]
        for m in b:
            check_square(m, "lag matrix")
            if m.shape[0] != n:
                raise ValueError("all lag matrices must share one dimension")
        object.__setattr__(self, "b", b)
        _check_acyclic_b0(b[0])

        intercept = (
            np.zeros(n) if self.intercept is None else np.asarray(self.intercept, dtype=float)
        )
        scale = (
            np.ones(n) if self.shock_scale is None else np.asarray(self.shock_scale, dtype=float)
        )
        if intercept.shape != (n,) or scale.shape != (n,):
            raise ValueError("intercept and shock_scale must be length-n vectors")
        if np.any(scale <= 0):
            raise ValueError("shock_scale must be positive")
        object.__setattr__(self, "intercept", intercept)
        object.__setattr__(self, "shock_scale", scale)
        draw_shocks(np.random.default_rng(0), self.shock_dist, (1, 1))  # validate name
        if self.t < 1:
            raise ValueError("t must be positive")
        if self.burn_in < 0:
            raise ValueError("burn_in must be nonnegative")

        if self.p >= 1:
            i_minus = np.eye(n) - b[0]
            pi = [np.linalg.solve(i_minus, bh) for bh in b[1:]]
            radius = np.abs(np.linalg.eigvals(companion_matrix(pi))).max()
            if radius >= 1.0:
                raise NumericalError(
                    f"implied reduced form is nonstationary (spectral radius {radius:.4f})"
                )

    @property
    def n(self) -> int:
        return self.b[0].shape[0]

    @property
    def p(self) -> int:
        return len(self.b) - 1

    def to_json(self) -> str:
        return json.dumps(
            {
                "b": [m.tolist() for m in self.b],
                "t": self.t,
                "shock_dist": self.shock_dist,
                "intercept": self.intercept.tolist(),
                "shock_scale": self.shock_scale.tolist(),
                "burn_in": self.burn_in,
                "seed": self.seed,
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "GroundTruthSpec":
        raw = json.loads(text)
        return cls(
            b=tuple(np.array(m) for m in raw["b"]),
            t=raw["t"],
            shock_dist=raw["shock_dist"],
            intercept=np.array(raw["intercept"]),
            shock_scale=np.array(raw["shock_scale"]),
            burn_in=raw["burn_in"],
            seed=raw["seed"],
        )


def generate_svar(spec: GroundTruthSpec) -> tuple[Panel, np.ndarray]:
    """Simulate y_t = (I-B0)^{-1}(c + sum_h B_h y_{t-h} + u_t).

    Burn-in rows are discarded (none are used for a purely
    instantaneous model with p = 0, which keeps the draw stream
    identical to generate_lingam). Returns the panel and the retained
    true shocks.
    """
    rng = np.random.default_rng(spec.seed)
    n, p = spec.n, spec.p
    burn = spec.burn_in if p >= 1 else 0
    total = spec.t + burn
    shocks = draw_shocks(rng, spec.shock_dist, (total, n)) * spec.shock_scale
    i_minus_inv = np.linalg.inv(np.eye(n) - spec.b[0])

    if p == 0:
        # same arithmetic path as generate_lingam, so equal seeds match row for row
        y = shocks @ i_minus_inv.T + i_minus_inv @ spec.intercept
    else:
        y = np.zeros((total, n))
        for t_idx in range(total):
            acc = spec.intercept + shocks[t_idx]
            for h in range(1, min(t_idx, p) + 1):
                acc = acc + spec.b[h] @ y[t_idx - h]
            y[t_idx] = i_minus_inv @ acc
    y = y[burn:]
    kept_shocks = shocks[burn:]

    dates = [_EPOCH + dt.timedelta(days=i) for i in range(spec.t)]
    names = tuple(f"y{j + 1}" for j in range(n))
    return Panel(names, dates, y), kept_shocks


def generate_lingam(b, shock_dist: str, n_obs: int, seed=None) -> tuple[np.ndarray, np.ndarray]:
    """Simulate x = (I - B)^{-1} e row-wise from an acyclic B."""
    b = check_square(b, "b")
    _check_acyclic_b0(b)
    n = b.shape[0]
    rng = np.random.default_rng(seed)
    shocks = draw_shocks(rng, shock_dist, (n_obs, n))
    x = shocks @ np.linalg.inv(np.eye(n) - b).T
    return x, shocks
