"""Whitening and FastICA estimation of a demixing matrix.

The fixed-point iteration runs on whitened data with symmetric
orthonormalization each step, so all components are treated equally.
What ICA can identify is the demixing matrix up to row order and
scaling; resolving that indeterminacy is the job of the lingam module.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from ._validation import as_float_matrix
from .exceptions import DegeneracyError, InsufficientDataError

__all__ = ["WhitenedData", "IcaResult", "whiten", "fastica", "mutual_information_estimate", "FastICA"]


@dataclass(frozen=True)
class WhitenedData:
    """Centered data rotated and scaled to unit sample covariance."""

    z: np.ndarray
    whitening: np.ndarray
    mean: np.ndarray


@dataclass(frozen=True)
class IcaResult:
    """Demixing estimate in original (pre-whitening) coordinates."""

    w_ica: np.ndarray
    a_est: np.ndarray
    components: np.ndarray
    iterations: int
    converged: bool


def whiten(x) -> WhitenedData:
    """Whitening via the symmetric eigendecomposition of the covariance.

    Uses the N-1 covariance divisor, so np.cov of the output is the
    identity to machine precision.
    """
    x = as_float_matrix(x, "x", min_rows=2, min_cols=1)
    n_obs, n = x.shape
    if n_obs <= n:
        raise InsufficientDataError(f"need more rows ({n_obs}) than columns ({n})")
    mean = x.mean(axis=0)
    cov = np.cov(x, rowvar=False).reshape(n, n)
    eigval, eigvec = np.linalg.eigh(cov)
    tol = max(n_obs, n) * np.finfo(float).eps * max(eigval.max(), 0.0)
    if eigval[0] <= tol:
        direction = np.array2string(eigvec[:, 0], precision=4)
        raise DegeneracyError(f"covariance is rank deficient along direction {direction}")
    v = (eigvec / np.sqrt(eigval)).T
    z = (x - mean) @ v.T
    return WhitenedData(z=z, whitening=v, mean=mean)


def _sym_decorrelate(w: np.ndarray) -> np.ndarray:
    """W <- (W W^T)^{-1/2} W, making the rows exactly orthonormal."""
    s, u = np.linalg.eigh(w @ w.T)
    if s[0] <= 0.0:
        raise DegeneracyError("demixing iterate lost rank")
    return (u / np.sqrt(s)) @ u.T @ w


def _tanh(u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    g = np.tanh(u)
    return g, 1.0 - g**2


def _cube(u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return u**3, 3.0 * u**2


_NONLINEARITIES = {"tanh": _tanh, "cube": _cube}


def fastica(
    x,
    nonlinearity: str = "tanh",
    max_iter: int = 200,
    tol: float = 1e-4,
    seed=None,
) -> IcaResult:
    """Symmetric fixed-point ICA on whitened data.

    The initial demixing matrix is a seeded standard-normal draw,
    orthonormalized; iteration stops once every component direction is
    aligned with its predecessor (min diagonal of the alignment matrix
    above 1 - tol). A result with converged=False is returned rather
    than raising, so callers can decide how to react.
    """
    if nonlinearity not in _NONLINEARITIES:
        raise ValueError(f"nonlinearity must be one of {sorted(_NONLINEARITIES)}")
    if max_iter < 1:
        raise ValueError("max_iter must be positive")
    x = as_float_matrix(x, "x", min_rows=2, min_cols=1)
    n_obs, n = x.shape
    if n_obs < 10 * n:
        raise InsufficientDataError(f"need at least 10*n = {10 * n} rows, got {n_obs}")
    g = _NONLINEARITIES[nonlinearity]

    white = whiten(x)
    z = white.z
    rng = np.random.default_rng(seed)
    b = _sym_decorrelate(rng.standard_normal((n, n)))

    converged = False
    iteration = 0
    for iteration in range(1, max_iter + 1):
        u = z @ b.T
        gu, gprime = g(u)
        b_new = _sym_decorrelate(gu.T @ z / n_obs - gprime.mean(axis=0)[:, None] * b)
        alignment = np.abs(np.diag(b_new @ b.T)).min()
        b = b_new
        if alignment > 1.0 - tol:
            converged = True
            break

    w_ica = b @ white.whitening
    components = z @ b.T
    a_est = np.linalg.inv(w_ica)
    return IcaResult(
        w_ica=w_ica,
        a_est=a_est,
        components=components,
        iterations=iteration,
        converged=converged,
    )


def mutual_information_estimate(components) -> float:
    """Dependence diagnostic: sum of marginal entropies minus joint entropy.

    Marginal entropies use a histogram plug-in with ceil(sqrt(N)) bins;
    the joint entropy uses the Gaussian upper bound from the sample
    covariance, so the score is approximate and only meaningful as a
    relative diagnostic. Clamped at zero; infinite when the covariance
    is singular (perfectly dependent columns).
    """
    z = as_float_matrix(components, "components", min_rows=100, min_cols=1)
    n_obs, n = z.shape
    bins = int(np.ceil(np.sqrt(n_obs)))
    marginal = 0.0
    for j in range(n):
        col = z[:, j]
        if np.ptp(col) == 0.0:
            raise DegeneracyError(f"component {j} has zero variance")
        counts, edges = np.histogram(col, bins=bins)
        probs = counts[counts > 0] / n_obs
        width = edges[1] - edges[0]
        marginal += float(-(probs * np.log(probs)).sum() + np.log(width))
    cov = np.cov(z, rowvar=False).reshape(n, n)
    sign, logdet = np.linalg.slogdet(cov)
    if sign <= 0:
        return float("inf")
    joint = 0.5 * (n * np.log(2.0 * np.pi * np.e) + logdet)
    return max(0.0, marginal - joint)


class FastICA(TransformerMixin, BaseEstimator):
    """Estimator wrapper around :func:`fastica`.

    Attributes after fit: ``demixing_`` (rows map observations to
    components), ``mixing_`` (its inverse), ``mean_``, ``n_iter_`` and
    ``converged_``.
    """

    def __init__(self, nonlinearity="tanh", max_iter=200, tol=1e-4, random_state=None):
        self.nonlinearity = nonlinearity
        self.max_iter = max_iter
        self.tol = tol
        self.random_state = random_state

    def fit(self, X, y=None):
        X = as_float_matrix(X, "X")
        result = fastica(
            X,
            nonlinearity=self.nonlinearity,
            max_iter=self.max_iter,
            tol=self.tol,
            seed=self.random_state,
        )
        self.demixing_ = result.w_ica
        self.mixing_ = result.a_est
        self.mean_ = X.mean(axis=0)
        self.n_iter_ = result.iterations
        self.converged_ = result.converged
        return self

    def transform(self, X):
        X = as_float_matrix(X, "X")
        return (X - self.mean_) @ self.demixing_.T

    def fit_transform(self, X, y=None):
        return self.fit(X).transform(X)
