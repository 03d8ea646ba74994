"""Shared builders and matching helpers for the test suite."""

import datetime as dt
import itertools

import numpy as np
import pytest

from svarlingam import Panel, RawSeries


def d(iso: str) -> dt.date:
    return dt.date.fromisoformat(iso)


def make_series(name, start="2020-01-01", values=(1.0, 2.0, 3.0)):
    first = d(start)
    dates = [first + dt.timedelta(days=i) for i in range(len(values))]
    return RawSeries(name, dates, np.asarray(values, dtype=float))


def make_panel(values, names=None, start="2020-01-01"):
    values = np.asarray(values, dtype=float)
    t, n = values.shape
    names = names or [f"y{j + 1}" for j in range(n)]
    first = d(start)
    dates = [first + dt.timedelta(days=i) for i in range(t)]
    return Panel(names, dates, values)


def example_b3() -> np.ndarray:
    """Three-variable benchmark structure: y3 -> y1 (-0.08), y1 -> y2 (0.85)."""
    b = np.zeros((3, 3))
    b[0, 2] = -0.08
    b[1, 0] = 0.85
    return b


def chain_b0(n: int) -> np.ndarray:
    """Unit-strength instantaneous chain y1 -> y2 -> ... -> yn."""
    b0 = np.zeros((n, n))
    for i in range(1, n):
        b0[i, i - 1] = 1.0
    return b0


def signed_permutation_error(a_est: np.ndarray, a_true: np.ndarray) -> float:
    """Smallest max relative column error over signed column permutations."""
    n = a_true.shape[1]
    best = np.inf
    for perm in itertools.permutations(range(n)):
        for signs in itertools.product([1.0, -1.0], repeat=n):
            err = 0.0
            for j in range(n):
                col = a_est[:, perm[j]] * signs[j]
                err = max(err, np.linalg.norm(col - a_true[:, j]) / np.linalg.norm(a_true[:, j]))
            best = min(best, err)
    return best


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
