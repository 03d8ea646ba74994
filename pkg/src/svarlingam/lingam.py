"""ICA-based LiNGAM identification of an acyclic linear causal structure.

Pipeline: permute the demixing matrix rows so the diagonal is usable,
normalize rows to unit diagonal, read off the connection-strength
matrix B = I - W', and search for the causal order that makes B as
lower-triangular as possible. A brute-force likelihood search over
orders is included as a slow, independent cross-check.

A causal order is represented as the sequence of variable indices from
first (exogenous root) to last; entry b[i, j] is the direct effect of
variable j on variable i.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment
from sklearn.base import BaseEstimator

from ._validation import as_float_matrix, check_square, lstsq_full_rank
from .exceptions import (
    DegenerateRegressionError,
    IdentificationError,
    InsufficientDataError,
    UnsupportedSizeError,
)
from .ica import fastica

__all__ = [
    "LingamResult",
    "row_permute_nonzero_diag",
    "normalize_and_extract_b",
    "find_causal_order",
    "prune_edges",
    "lingam_loglik",
    "brute_force_order",
    "ica_lingam",
    "ICALiNGAM",
]

_EXHAUSTIVE_MAX = 8


@dataclass(frozen=True)
class LingamResult:
    """Connection strengths, causal order, and how triangular B really is."""

    b: np.ndarray
    order: np.ndarray
    w_normalized: np.ndarray
    upper_mass: float
    ica_converged: bool = True


def row_permute_nonzero_diag(w_ica) -> tuple[np.ndarray, np.ndarray]:
    """Row permutation of the demixing matrix with the strongest diagonal.

    Minimizes sum_i 1/|w_ii| exactly: exhaustively up to 8 variables,
    by linear-sum assignment beyond. Fails when every permutation
    leaves a zero on the diagonal.
    """
    w = check_square(w_ica, "w_ica")
    n = w.shape[0]
    absw = np.abs(w)

    if n <= _EXHAUSTIVE_MAX:
        best_perm, best_cost = None, np.inf
        for perm in itertools.permutations(range(n)):
            diag = absw[perm, range(n)]
            if np.any(diag == 0.0):
                continue
            cost = float((1.0 / diag).sum())
            if cost < best_cost:
                best_perm, best_cost = perm, cost
        if best_perm is None:
            raise IdentificationError("every row permutation leaves a zero diagonal entry")
        perm = np.array(best_perm)
    else:
        big = 1e18
        cost_matrix = np.where(absw > 0.0, 1.0 / np.where(absw > 0.0, absw, 1.0), big)
        rows, positions = linear_sum_assignment(cost_matrix)
        perm = np.empty(n, dtype=int)
        perm[positions] = rows
        if np.any(absw[perm, range(n)] == 0.0):
            raise IdentificationError("every row permutation leaves a zero diagonal entry")

    return perm, w[perm, :]


def normalize_and_extract_b(w_permuted) -> tuple[np.ndarray, np.ndarray]:
    """Unit-diagonal normalization W' and connection strengths B = I - W'."""
    w = check_square(w_permuted, "w_permuted")
    diag = np.diag(w)
    if np.any(diag == 0.0):
        raise ValueError("w_permuted has a zero diagonal entry")
    w_normalized = w / diag[:, None]
    b = np.eye(w.shape[0]) - w_normalized
    np.fill_diagonal(b, 0.0)
    return w_normalized, b


def _upper_mass(b: np.ndarray, order) -> float:
    permuted = b[np.ix_(order, order)]
    return float((np.triu(permuted, k=1) ** 2).sum())


def _elimination_order(active_mask: np.ndarray) -> np.ndarray | None:
    """Causal order of a strictly-triangularizable zero pattern, or None.

    active_mask[i, j] says j still acts on i. Repeatedly emit the
    lowest-index variable with no remaining parents.
    """
    n = active_mask.shape[0]
    remaining = list(range(n))
    order = []
    mask = active_mask.copy()
    while remaining:
        root = None
        for i in remaining:
            if not mask[i, remaining].any():
                root = i
                break
        if root is None:
            return None
        order.append(root)
        remaining.remove(root)
    return np.array(order)


def find_causal_order(b) -> tuple[np.ndarray, float]:
    """Variable ordering that makes B as lower-triangular as possible.

    Minimizes the sum of squares of strictly-upper entries after
    permuting rows and columns; exhaustive search up to 8 variables
    with ties broken toward the lexicographically smallest order.
    Larger systems fall back to zeroing the smallest entries until the
    remaining pattern is triangularizable.
    """
    b = check_square(b, "b")
    n = b.shape[0]
    if n <= _EXHAUSTIVE_MAX:
        best_order, best_mass = None, np.inf
        for perm in itertools.permutations(range(n)):
            mass = _upper_mass(b, list(perm))
            if mass < best_mass:
                best_order, best_mass = perm, mass
        return np.array(best_order), best_mass

    flat = np.abs(b).ravel()
    for k in range(flat.size + 1):
        if k == 0:
            masked = b != 0.0
        else:
            cutoff = np.partition(flat, k - 1)[k - 1]
            masked = np.abs(b) > cutoff
        order = _elimination_order(masked)
        if order is not None:
            return order, _upper_mass(b, order)
    raise AssertionError("an all-zero mask is always triangularizable")


def prune_edges(b, threshold: float) -> tuple[np.ndarray, np.ndarray, float]:
    """Zero out connection strengths below threshold and re-derive the order.

    Monotone in the threshold: a larger threshold zeroes a superset of
    entries. Returns (pruned matrix, causal order, upper mass).
    """
    if threshold < 0:
        raise ValueError("threshold must be nonnegative")
    b = check_square(b, "b")
    pruned = np.where(np.abs(b) < threshold, 0.0, b)
    order, mass = find_causal_order(pruned)
    return pruned, order, mass


def _log_density(density: str):
    if density == "laplace":
        # unit-variance Laplace: scale 1/sqrt(2)
        return lambda u: -np.sqrt(2.0) * np.abs(u) - 0.5 * np.log(2.0)
    if density == "logistic":
        s = np.sqrt(3.0) / np.pi
        return lambda u: -np.abs(u) / s - 2.0 * np.logaddexp(0.0, -np.abs(u) / s) - np.log(s)
    raise ValueError(f"density must be 'laplace' or 'logistic', got {density!r}")


def lingam_loglik(x, order, density: str = "laplace") -> float:
    """Log likelihood of the data under a causal order.

    Each variable is regressed on its causal predecessors (with an
    intercept); residuals are scored under the chosen standardized
    non-Gaussian density with the usual scale correction.
    """
    x = as_float_matrix(x, "x", min_rows=2)
    n_obs, n = x.shape
    if n_obs <= n + 2:
        raise InsufficientDataError(f"need more than n + 2 = {n + 2} rows, got {n_obs}")
    order = np.asarray(order, dtype=int)
    if sorted(order.tolist()) != list(range(n)):
        raise ValueError(f"order must be a permutation of 0..{n - 1}")
    logp = _log_density(density)

    total = 0.0
    for pos, var in enumerate(order):
        preds = order[:pos]
        design = np.column_stack([np.ones(n_obs), x[:, preds]])
        coef = lstsq_full_rank(design, x[:, var], context="LiNGAM regression")
        resid = x[:, var] - design @ coef
        sigma = float(np.sqrt(np.mean(resid**2)))
        if sigma == 0.0:
            raise DegenerateRegressionError(f"variable {var} is exactly determined by predecessors")
        total += float(logp(resid / sigma).sum()) - n_obs * np.log(sigma)
    return total


def brute_force_order(x, density: str = "laplace") -> np.ndarray:
    """Causal order maximizing the LiNGAM likelihood over all orders.

    Factorially slow; supported only up to 6 variables, as an oracle
    for cross-checking the ICA route.
    """
    x = as_float_matrix(x, "x", min_rows=2)
    n = x.shape[1]
    if n > 6:
        raise UnsupportedSizeError(f"brute force supported for n <= 6, got n = {n}")
    best_order, best_ll = None, -np.inf
    for perm in itertools.permutations(range(n)):
        ll = lingam_loglik(x, perm, density)
        if ll > best_ll:
            best_order, best_ll = perm, ll
    return np.array(best_order)


def ica_lingam(
    x,
    nonlinearity: str = "tanh",
    max_iter: int = 200,
    tol: float = 1e-4,
    seed=None,
) -> LingamResult:
    """Full ICA-LiNGAM identification of connection strengths and order."""
    ica = fastica(x, nonlinearity=nonlinearity, max_iter=max_iter, tol=tol, seed=seed)
    _, w_permuted = row_permute_nonzero_diag(ica.w_ica)
    w_normalized, b = normalize_and_extract_b(w_permuted)
    order, upper_mass = find_causal_order(b)
    return LingamResult(
        b=b,
        order=order,
        w_normalized=w_normalized,
        upper_mass=upper_mass,
        ica_converged=ica.converged,
    )


class ICALiNGAM(BaseEstimator):
    """Estimator interface to ICA-LiNGAM.

    Attributes after fit: ``adjacency_matrix_`` (direct effects, entry
    (i, j) is the effect of variable j on i), ``causal_order_``,
    ``w_normalized_``, ``upper_mass_``, ``ica_converged_``.
    """

    def __init__(self, nonlinearity="tanh", max_iter=200, tol=1e-4, random_state=None):
        self.nonlinearity = nonlinearity
        self.max_iter = max_iter
        self.tol = tol
        self.random_state = random_state

    def fit(self, X, y=None):
        result = ica_lingam(
            X,
            nonlinearity=self.nonlinearity,
            max_iter=self.max_iter,
            tol=self.tol,
            seed=self.random_state,
        )
        self.adjacency_matrix_ = result.b
        self.causal_order_ = result.order
        self.w_normalized_ = result.w_normalized
        self.upper_mass_ = result.upper_mass
        self.ica_converged_ = result.ica_converged
        return self
