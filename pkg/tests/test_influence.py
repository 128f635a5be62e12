"""Tests for the model-case influence functions."""

import math

import numpy as np
import pytest

from taildep import (
    IfDpdParams,
    IfErmParams,
    if_dpd,
    if_erm_all,
    if_erm_single,
    influence_curve,
)

T_GRID = np.linspace(-10.0, 10.0, 2001)
T0_GRID = np.linspace(0.0, 50.0, 2001)


class TestParams:
    def test_dpd_validation(self):
        with pytest.raises(ValueError):
            IfDpdParams(alpha=-0.1, eta=0.5, b=0.75)
        with pytest.raises(ValueError):
            IfDpdParams(alpha=0.5, eta=0.0, b=0.75)
        with pytest.raises(ValueError):
            IfDpdParams(alpha=0.5, eta=0.5, b=-1.0)

    def test_erm_j0_bounds(self):
        with pytest.raises(ValueError):
            IfErmParams(alpha=0.5, eta=0.5, k=50, j0=0)
        with pytest.raises(ValueError):
            IfErmParams(alpha=0.5, eta=0.5, k=50, j0=50)
        IfErmParams(alpha=0.5, eta=0.5, k=50, j0=49)


class TestIfDpd:
    def test_alpha_zero_closed_form(self):
        p = IfDpdParams(alpha=0.0, eta=0.5, b=0.75)
        got = if_dpd(T_GRID, T_GRID, p)
        assert np.allclose(got, 0.75 * np.exp(T_GRID) - 0.5, rtol=1e-13)

    def test_hand_value(self):
        # independent arithmetic at t1 = t2 = 0, alpha = 0.5
        a, b, eta = 0.5, 0.75, 0.5
        m = b * 1.0
        lead = (1 + a) ** 3 / (1 + a * a)
        want = lead * ((m - eta) * math.exp(-a * m / eta) + a * eta / (1 + a) ** 2)
        p = IfDpdParams(alpha=a, eta=eta, b=b)
        assert float(if_dpd(0.0, 0.0, p)) == pytest.approx(want, rel=1e-14)
        assert want == pytest.approx(0.6188474231001849, rel=1e-12)

    def test_symmetric_in_arguments(self):
        p = IfDpdParams(alpha=0.5, eta=0.5, b=0.75)
        assert float(if_dpd(1.0, -2.0, p)) == float(if_dpd(-2.0, 1.0, p))

    def test_min_coordinate_drives_value(self):
        p = IfDpdParams(alpha=0.25, eta=0.5, b=0.75)
        assert float(if_dpd(1.0, 5.0, p)) == pytest.approx(
            float(if_dpd(1.0, 1.0, p)), rel=1e-14
        )

    def test_vanishing_first_term(self):
        # m = eta makes the first bracket term vanish
        a, eta, b = 0.5, 0.5, 1.0
        t = math.log(eta / b)
        p = IfDpdParams(alpha=a, eta=eta, b=b)
        want = (1 + a) ** 3 / (1 + a * a) * a * eta / (1 + a) ** 2
        assert float(if_dpd(t, t, p)) == pytest.approx(want, rel=1e-12)

    def test_bounded_for_positive_alpha_unbounded_at_zero(self):
        wide = np.linspace(-10.0, 20.0, 4001)
        for alpha in (0.1, 0.5, 1.0):
            p = IfDpdParams(alpha=alpha, eta=0.5, b=0.75)
            vals = if_dpd(wide, wide, p)
            assert np.isfinite(vals).all()
            assert np.abs(vals).max() < 10.0
        p0 = IfDpdParams(alpha=0.0, eta=0.5, b=0.75)
        assert np.abs(if_dpd(wide, wide, p0)).max() > 1e3

    def test_signed_supremum_decreases_with_alpha(self):
        sups = []
        for alpha in (0.1, 0.5, 1.0):
            p = IfDpdParams(alpha=alpha, eta=0.5, b=0.75)
            sups.append(float(if_dpd(T_GRID, T_GRID, p).max()))
        assert sups[0] > sups[1] > sups[2]


class TestIfErm:
    def test_rejects_negative_t0(self):
        p = IfErmParams(alpha=0.5, eta=0.5, k=50, j0=1)
        with pytest.raises(ValueError):
            if_erm_single(-0.1, p)

    def test_zero_at_model_mean_alpha_zero(self):
        from taildep import erm_weights

        k, j0 = 50, 7
        theta = erm_weights(0.5, k, 0.0).theta[j0 - 1]
        p = IfErmParams(alpha=0.0, eta=0.5, k=k, j0=j0)
        assert float(if_erm_single(theta, p)) == pytest.approx(0.0, abs=1e-12)

    def test_alpha_zero_linear_unbounded(self):
        p = IfErmParams(alpha=0.0, eta=0.5, k=50, j0=1)
        t = np.array([10.0, 20.0, 40.0])
        v = np.array([float(if_erm_single(x, p)) for x in t])
        slopes = np.diff(v) / np.diff(t)
        assert slopes[0] == pytest.approx(slopes[1], rel=1e-10)
        assert abs(slopes[0]) > 0

    def test_all_points_matches_mean_of_single_points(self):
        rng = np.random.default_rng(7)
        k = 12
        t = rng.exponential(1.0, size=k - 1)
        p = IfErmParams(alpha=0.3, eta=0.5, k=k, j0=1)
        whole = float(if_erm_all(t, p))
        parts = [
            float(if_erm_single(t[j - 1], IfErmParams(alpha=0.3, eta=0.5, k=k, j0=j)))
            for j in range(1, k)
        ]
        assert whole == pytest.approx(sum(parts) / (k - 1), rel=1e-12)

    def test_all_points_requires_full_length(self):
        p = IfErmParams(alpha=0.3, eta=0.5, k=12, j0=1)
        with pytest.raises(ValueError):
            if_erm_all(np.ones(5), p)

    def test_bounded_for_positive_alpha(self):
        wide = np.linspace(0.0, 2000.0, 20001)
        for alpha in (0.1, 0.5, 1.0):
            p = IfErmParams(alpha=alpha, eta=0.5, k=50, j0=1)
            vals = np.array([float(if_erm_single(x, p)) for x in wide])
            assert np.isfinite(vals).all()
            assert np.abs(vals).max() < 100.0

    def test_signed_supremum_decreases_with_alpha(self):
        sups = []
        for alpha in (0.1, 0.5, 1.0):
            p = IfErmParams(alpha=alpha, eta=0.5, k=50, j0=1)
            vals = np.array([float(if_erm_single(x, p)) for x in T0_GRID])
            sups.append(vals.max())
        assert sups[0] > sups[1] > sups[2]


class TestInfluenceCurve:
    def test_dpd_curve_alpha_zero_is_exponential_line(self):
        grid = np.linspace(-5.0, 5.0, 11)
        p = IfDpdParams(alpha=0.0, eta=0.5, b=0.75)
        table = influence_curve("dpd", p, grid)
        assert table.shape == (11, 2)
        assert np.array_equal(table[:, 0], grid)
        assert np.allclose(table[:, 1], 0.75 * np.exp(grid) - 0.5, rtol=1e-12)

    def test_singleton_grid_matches_point_evaluation(self):
        p = IfErmParams(alpha=0.5, eta=0.5, k=50, j0=3)
        table = influence_curve("erm-single", p, np.array([2.0]))
        assert table.shape == (1, 2)
        assert table[0, 1] == pytest.approx(float(if_erm_single(2.0, p)), rel=1e-14)

    def test_unknown_kind_rejected(self):
        p = IfDpdParams(alpha=0.5, eta=0.5, b=0.75)
        with pytest.raises(ValueError, match="which"):
            influence_curve("hill", p, np.array([0.0]))

    def test_erm_all_constant_curve(self):
        p = IfErmParams(alpha=0.5, eta=0.5, k=20, j0=1)
        grid = np.array([0.5, 1.0, 2.0])
        table = influence_curve("erm-all-constant", p, grid)
        want = float(if_erm_all(np.full(19, 2.0), p))
        assert table[2, 1] == pytest.approx(want, rel=1e-12)
