import numpy as np
import pytest

from svarlingam import adf_test, select_lag_sic
from svarlingam.exceptions import DegenerateRegressionError, InsufficientDataError
from svarlingam.unitroot import _adf_regression

from conftest import make_series


def oracle_sic_selection(y, max_lag):
    """Independent exhaustive SIC evaluation built on plain normal equations.

    Same model definition as the implementation but assembled
    differently (explicit python loops and solve), used as an oracle.
    """
    n = len(y)
    dy = [y[t] - y[t - 1] for t in range(1, n)]
    best_lag, best = None, None
    for lag in range(max_lag + 1):
        rows_z, rows_x = [], []
        for t in range(max_lag + 1, n):
            z = dy[t - 1]
            x = [1.0, y[t - 1]] + [dy[t - 1 - i] for i in range(1, lag + 1)]
            rows_z.append(z)
            rows_x.append(x)
        X = np.array(rows_x)
        zv = np.array(rows_z)
        beta = np.linalg.solve(X.T @ X, X.T @ zv)
        ssr = float(((zv - X @ beta) ** 2).sum())
        t_eff = len(zv)
        k = X.shape[1]
        sic = np.log(ssr / t_eff) + k * np.log(t_eff) / t_eff
        if best is None or sic < best:
            best_lag, best = lag, sic
    return best_lag


def oracle_adf_stat(y, lag):
    """ADF t-ratio by explicit normal equations (constant spec)."""
    n = len(y)
    dy = np.diff(y)
    t_idx = np.arange(lag + 1, n)
    X = np.column_stack(
        [np.ones(t_idx.size), y[t_idx - 1]] + [dy[t_idx - 1 - i] for i in range(1, lag + 1)]
    )
    z = dy[t_idx - 1]
    xtx_inv = np.linalg.inv(X.T @ X)
    beta = xtx_inv @ X.T @ z
    resid = z - X @ beta
    s2 = resid @ resid / (len(z) - X.shape[1])
    return beta[1] / np.sqrt(s2 * xtx_inv[1, 1])


class TestSelectLagSic:
    def test_white_noise_selects_zero(self):
        y = np.random.default_rng(7).standard_normal(1000)
        assert select_lag_sic(y, 8) == 0

    def test_matches_independent_oracle(self):
        for seed in range(10):
            rng = np.random.default_rng(seed)
            e = rng.standard_normal(400)
            y = np.cumsum(e)  # random walk keeps all candidates plausible
            assert select_lag_sic(y, 6) == oracle_sic_selection(y, 6)

    def test_ar2_in_differences_selects_two(self):
        hits = 0
        for seed in range(100):
            rng = np.random.default_rng(seed)
            e = rng.standard_normal(2100)
            dy = np.zeros(2100)
            for t in range(2, 2100):
                dy[t] = 0.5 * dy[t - 1] + 0.3 * dy[t - 2] + e[t]
            y = np.cumsum(dy[100:])
            if select_lag_sic(y, 8) == 2:
                hits += 1
        assert hits >= 90

    def test_max_lag_zero(self):
        y = np.random.default_rng(0).standard_normal(100)
        assert select_lag_sic(y, 0) == 0

    def test_too_short(self):
        with pytest.raises(InsufficientDataError):
            select_lag_sic(np.arange(12.0), 8)


class TestAdfTest:
    def test_random_walk_rarely_rejected_at_5pct(self):
        kept = 0
        for seed in range(100):
            y = np.cumsum(np.random.default_rng(seed).standard_normal(1000))
            report = adf_test(y, 1, "constant")
            if report.statistic >= report.critical_values["5%"]:
                kept += 1
        assert kept >= 90

    def test_white_noise_rejected_at_1pct(self):
        hits = 0
        for seed in range(100):
            y = np.random.default_rng(seed).standard_normal(1000)
            if adf_test(y, 1, "constant").reject_at == "1%":
                hits += 1
        assert hits >= 99

    def test_statistic_matches_oracle(self):
        for seed in range(5):
            y = np.cumsum(np.random.default_rng(seed).standard_normal(300))
            for lag in (0, 1, 3):
                assert adf_test(y, lag).statistic == pytest.approx(
                    oracle_adf_stat(y, lag), abs=1e-10
                )

    def test_constant_shift_invariance(self):
        y = np.cumsum(np.random.default_rng(3).standard_normal(500))
        a = adf_test(y, 2, "constant").statistic
        b = adf_test(y + 1000.0, 2, "constant").statistic
        assert a == pytest.approx(b, abs=1e-6)

    def test_positive_rescaling_invariance(self):
        y = np.cumsum(np.random.default_rng(4).standard_normal(500))
        a = adf_test(y, 2, "constant").statistic
        b = adf_test(y * 37.5, 2, "constant").statistic
        assert a == pytest.approx(b, abs=1e-8)

    def test_selection_statistic_reproducible_on_common_sample(self):
        y = np.cumsum(np.random.default_rng(5).standard_normal(400))
        max_lag = 6
        lag = select_lag_sic(y, max_lag)
        inside, _, _, _ = _adf_regression(y, lag, "constant", start=max_lag + 1)
        trimmed = adf_test(y[max_lag - lag :], lag).statistic
        assert trimmed == pytest.approx(inside, abs=1e-12)

    def test_critical_values_ordering(self):
        y = np.cumsum(np.random.default_rng(6).standard_normal(100))
        for spec in ("constant", "trend"):
            cv = adf_test(y, 1, spec).critical_values
            assert cv["1%"] < cv["5%"] < cv["10%"]

    def test_reject_at_consistency(self):
        for seed in range(20):
            y = np.random.default_rng(seed).standard_normal(200)
            rep = adf_test(y, 1)
            if rep.reject_at is None:
                assert rep.statistic >= rep.critical_values["10%"]
            else:
                assert rep.statistic < rep.critical_values[rep.reject_at]

    def test_trend_spec_detects_trend_stationary(self):
        rng = np.random.default_rng(8)
        t = np.arange(2000.0)
        y = 0.05 * t + rng.standard_normal(2000)
        assert adf_test(y, 1, "trend").reject_at == "1%"

    def test_accepts_raw_series(self):
        s = make_series("x", values=np.random.default_rng(0).standard_normal(50))
        rep = adf_test(s, 1)
        assert rep.variable == "x"

    def test_too_short(self):
        with pytest.raises(InsufficientDataError):
            adf_test(np.arange(4.0), 2)

    def test_constant_series_degenerate(self):
        with pytest.raises(DegenerateRegressionError):
            adf_test(np.ones(50), 1)

    def test_negative_lag(self):
        with pytest.raises(ValueError):
            adf_test(np.arange(50.0), -1)
