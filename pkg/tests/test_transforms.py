"""Tests for rank transforms, pseudo-samples, excesses, and log-ratios."""

import math

import numpy as np
import pytest

from taildep import (
    log_relative_excesses,
    pseudo_sample_from_values,
    ranks,
    scaled_log_ratios,
    to_pseudo_sample,
)

Z4 = np.array([1.0, 2.0, 4.0, 8.0])


def test_ranks_hand_example():
    assert ranks(np.array([5.0, 5.0, 1.0])).tolist() == [2, 3, 1]


def test_ranks_are_a_permutation():
    rng = np.random.default_rng(0)
    x = rng.standard_normal(101)
    r = ranks(x)
    assert sorted(r.tolist()) == list(range(1, 102))


def test_ranks_ties_keep_first_occurrence_order():
    r = ranks(np.array([2.0, 1.0, 2.0, 2.0]))
    assert r.tolist() == [2, 1, 3, 4]


def test_frechet_map_hand_values():
    # n = 3: rank r maps to -1 / log(r / 4)
    ps = pseudo_sample_from_values(np.array([2.0, 3.0, 10.0]), "frechet")
    pairs = np.column_stack([np.arange(3, dtype=float), np.arange(3, dtype=float)])
    got = to_pseudo_sample(pairs, "frechet")
    assert got.z[0] == pytest.approx(0.7213475204444817, rel=1e-14)
    assert got.z[2] == pytest.approx(3.476059496782207, rel=1e-14)
    assert ps.marginal == "frechet"


def test_pareto_map_hand_values():
    pairs = np.column_stack([np.arange(3, dtype=float), np.arange(3, dtype=float)])
    got = to_pseudo_sample(pairs, "pareto")
    assert got.z[0] == pytest.approx(4.0 / 3.0, rel=1e-14)
    assert got.z[2] == pytest.approx(4.0, rel=1e-14)


def test_pseudo_sample_takes_componentwise_minimum():
    rng = np.random.default_rng(1)
    pairs = rng.standard_normal((50, 2))
    ps = to_pseudo_sample(pairs, "frechet")
    x_only = to_pseudo_sample(np.column_stack([pairs[:, 0], pairs[:, 0]]), "frechet")
    y_only = to_pseudo_sample(np.column_stack([pairs[:, 1], pairs[:, 1]]), "frechet")
    assert np.allclose(ps.z, np.minimum(x_only.z, y_only.z))


def test_pseudo_sample_invariant_under_monotone_margin_change():
    """Rank transforms only see the ordering of each margin."""
    rng = np.random.default_rng(2)
    pairs = rng.standard_normal((80, 2))
    warped = np.column_stack([np.exp(pairs[:, 0]), pairs[:, 1] ** 3])
    a = to_pseudo_sample(pairs, "frechet")
    b = to_pseudo_sample(warped, "frechet")
    assert np.array_equal(a.z, b.z)


def test_pseudo_sample_from_values_validates_domain():
    with pytest.raises(ValueError, match="> 0"):
        pseudo_sample_from_values(np.array([0.0, 1.0, 2.0]), "frechet")
    with pytest.raises(ValueError, match="> 1"):
        pseudo_sample_from_values(np.array([0.5, 2.0, 3.0]), "pareto")
    with pytest.raises(ValueError, match="marginal"):
        pseudo_sample_from_values(np.array([1.0, 2.0]), "weibull")


def test_log_relative_excesses_hand_example():
    ps = pseudo_sample_from_values(Z4, "frechet")
    ex = log_relative_excesses(ps, 2)
    # threshold is the third largest value, 2.0
    want = [math.log(v / 2.0) for v in Z4]
    assert ex.z_tilde == pytest.approx(want, rel=1e-14)
    assert ex.k == 2
    assert ex.positive_count == 2


def test_log_relative_excesses_k_bounds():
    ps = pseudo_sample_from_values(Z4, "frechet")
    with pytest.raises(ValueError):
        log_relative_excesses(ps, 0)
    with pytest.raises(ValueError):
        log_relative_excesses(ps, 4)


def test_log_relative_excesses_order_invariant():
    rng = np.random.default_rng(3)
    z = rng.pareto(2.0, size=60) + 1.0
    a = log_relative_excesses(pseudo_sample_from_values(z, "pareto"), 10)
    b = log_relative_excesses(
        pseudo_sample_from_values(z[rng.permutation(60)], "pareto"), 10
    )
    assert np.allclose(np.sort(a.z_tilde), np.sort(b.z_tilde))


def test_scaled_log_ratios_hand_example():
    ps = pseudo_sample_from_values(Z4, "frechet")
    r = scaled_log_ratios(ps, 3)
    assert r.w[0] == pytest.approx(0.8472978603872037, rel=1e-14)
    assert r.w[1] == pytest.approx(2.1972245773362196, rel=1e-14)
    assert r.j.tolist() == [1, 2]
    assert r.dropped == ()
    assert r.marginal == "frechet"


def test_scaled_log_ratios_requires_k_at_least_three():
    ps = pseudo_sample_from_values(Z4, "frechet")
    with pytest.raises(ValueError):
        scaled_log_ratios(ps, 2)


def test_scaled_log_ratios_drops_threshold_ties():
    # a copy of the threshold value zeroes the j = 3 denominator
    z = np.array([1.0, 1.0, 2.0, 4.0, 8.0])
    ps = pseudo_sample_from_values(z, "frechet")
    r = scaled_log_ratios(ps, 4)
    assert 3 in r.dropped
    assert len(r.w) == len(r.j)
    assert np.isfinite(r.w).all()


def test_scaled_log_ratios_fails_when_too_few_survive():
    z = np.array([1.0, 1.0, 1.0, 1.0, 8.0])
    ps = pseudo_sample_from_values(z, "frechet")
    with pytest.raises(ValueError, match="fewer than 2"):
        scaled_log_ratios(ps, 4)
