import numpy as np
import pytest
from scipy import stats

from svarlingam import (
    diagnose_residuals,
    fit_var,
    jarque_bera,
    ljung_box,
    shapiro_francia,
    shapiro_wilk,
)
from svarlingam.exceptions import DegeneracyError, InsufficientDataError, UnsupportedSizeError


class TestJarqueBera:
    def test_size_near_nominal_for_gaussian(self):
        rejections = 0
        for seed in range(500):
            x = np.random.default_rng(seed).standard_normal(10000)
            if jarque_bera(x)[1] < 0.01:
                rejections += 1
        assert abs(rejections / 500 - 0.01) <= 0.015

    def test_power_against_laplace(self):
        hits = 0
        for seed in range(100):
            x = np.random.default_rng(seed).laplace(size=10000)
            if jarque_bera(x)[1] < 0.001:
                hits += 1
        assert hits >= 99

    def test_outlier_vector_is_computable(self):
        x = np.array([1.0] * 7 + [25.0])
        stat, p = jarque_bera(x)
        assert np.isfinite(stat) and stat > 0
        assert 0.0 <= p <= 1.0

    def test_statistic_matches_formula(self):
        x = np.random.default_rng(1).standard_normal(500)
        stat, p = jarque_bera(x)
        c = x - x.mean()
        m2 = np.mean(c**2)
        s = np.mean(c**3) / m2**1.5
        k = np.mean(c**4) / m2**2 - 3
        assert stat == pytest.approx(len(x) / 6 * (s**2 + k**2 / 4), rel=1e-12)
        assert p == pytest.approx(stats.chi2.sf(stat, 2), rel=1e-12)

    def test_zero_variance(self):
        with pytest.raises(DegeneracyError):
            jarque_bera(np.ones(20))

    def test_minimum_size(self):
        with pytest.raises(InsufficientDataError):
            jarque_bera(np.arange(7.0))


class TestShapiroWilk:
    def test_perfect_normal_scores(self):
        n = 100
        x = stats.norm.ppf((np.arange(1, n + 1) - 0.375) / (n + 0.25))
        w, _ = shapiro_wilk(x)
        assert w > 0.99

    def test_power_against_laplace(self):
        hits = 0
        for seed in range(100):
            x = np.random.default_rng(seed).laplace(size=1000)
            if shapiro_wilk(x)[1] < 0.01:
                hits += 1
        assert hits >= 95

    def test_size_range_enforced(self):
        with pytest.raises(UnsupportedSizeError):
            shapiro_wilk(np.random.default_rng(0).standard_normal(11))
        with pytest.raises(UnsupportedSizeError):
            shapiro_wilk(np.random.default_rng(0).standard_normal(5001))

    def test_ties_degenerate(self):
        with pytest.raises(DegeneracyError):
            shapiro_wilk(np.ones(50))


class TestShapiroFrancia:
    def test_perfect_normal_scores(self):
        n = 100
        x = stats.norm.ppf((np.arange(1, n + 1) - 0.375) / (n + 0.25))
        w, _ = shapiro_francia(x)
        assert w > 0.999

    def test_statistic_is_squared_score_correlation(self):
        x = np.random.default_rng(2).standard_normal(200)
        w, _ = shapiro_francia(x)
        scores = stats.norm.ppf((np.arange(1, 201) - 0.375) / 200.25)
        expected = np.corrcoef(np.sort(x), scores)[0, 1] ** 2
        assert w == pytest.approx(expected, abs=1e-12)

    def test_size_roughly_nominal_for_gaussian(self):
        rejections = 0
        for seed in range(200):
            x = np.random.default_rng(seed).standard_normal(1000)
            if shapiro_francia(x)[1] < 0.05:
                rejections += 1
        assert 0.01 <= rejections / 200 <= 0.10

    def test_power_against_laplace(self):
        hits = 0
        for seed in range(100):
            x = np.random.default_rng(seed).laplace(size=1000)
            if shapiro_francia(x)[1] < 0.01:
                hits += 1
        assert hits >= 95

    def test_size_range_enforced(self):
        with pytest.raises(UnsupportedSizeError):
            shapiro_francia(np.arange(11.0))


class TestLjungBox:
    def test_size_near_nominal_for_white_noise(self):
        rejections = 0
        for seed in range(500):
            x = np.random.default_rng(seed).standard_normal(2000)
            if ljung_box(x, 10)[1] < 0.05:
                rejections += 1
        assert abs(rejections / 500 - 0.05) <= 0.02

    def test_power_against_ar1(self):
        hits = 0
        for seed in range(100):
            rng = np.random.default_rng(seed)
            e = rng.standard_normal(2000)
            x = np.zeros(2000)
            for t in range(1, 2000):
                x[t] = 0.5 * x[t - 1] + e[t]
            if ljung_box(x, 10)[1] < 0.001:
                hits += 1
        assert hits >= 99

    def test_statistic_matches_formula(self):
        x = np.random.default_rng(3).standard_normal(300)
        stat, p = ljung_box(x, 5)
        c = x - x.mean()
        denom = c @ c
        q = sum((c[k:] @ c[:-k] / denom) ** 2 / (300 - k) for k in range(1, 6))
        assert stat == pytest.approx(300 * 302 * q, rel=1e-12)
        assert p == pytest.approx(stats.chi2.sf(stat, 5), rel=1e-12)

    def test_df_adjustment(self):
        x = np.random.default_rng(4).standard_normal(300)
        stat, p_full = ljung_box(x, 10)
        _, p_adj = ljung_box(x, 10, df_adjust=3)
        assert p_adj == pytest.approx(stats.chi2.sf(stat, 7), rel=1e-12)
        assert p_adj != p_full

    def test_constant_series(self):
        with pytest.raises(DegeneracyError):
            ljung_box(np.ones(100), 5)


class TestDiagnoseResiduals:
    def _model(self, t=600, seed=0, laplace=False):
        rng = np.random.default_rng(seed)
        shocks = rng.laplace(size=(t, 2)) if laplace else rng.standard_normal((t, 2))
        y = np.zeros((t, 2))
        for i in range(1, t):
            y[i] = 0.5 * y[i - 1] + shocks[i]
        return fit_var(y, 1)

    def test_report_fields_complete(self):
        report = diagnose_residuals(self._model(), lb_lags=10)
        assert report.ljung_box_lags == 10
        assert len(report.columns) == 2
        for col in report.columns:
            assert 0.0 <= col.jarque_bera_p <= 1.0
            assert 0.0 <= col.ljung_box_p <= 1.0
            assert 0.0 <= col.shapiro_wilk_p <= 1.0
            assert 0.0 <= col.shapiro_francia_p <= 1.0
            assert np.isfinite(col.kurtosis)

    def test_laplace_residuals_flagged_non_gaussian(self):
        report = diagnose_residuals(self._model(seed=1, laplace=True))
        for col in report.columns:
            assert col.jarque_bera_p < 0.01

    def test_shapiro_skipped_above_supported_size(self):
        report = diagnose_residuals(self._model(t=5600, seed=2))
        for col in report.columns:
            assert col.shapiro_wilk_p is None
            assert col.shapiro_francia_p is None
            assert 0.0 <= col.jarque_bera_p <= 1.0
