"""Rank standardisation of bivariate data and tail-excess statistics.

The estimation pipeline never sees the raw marginal scales.  Each
coordinate is replaced by its within-sample rank, the rank is mapped to
a unit Frechet or unit Pareto scale, and the componentwise minimum of
the two standardised coordinates is kept.  Everything downstream (Hill,
the density-power-divergence fit, the exponential-regression fit) works
on that one positive sequence:

* ``log_relative_excesses`` -- log z_i minus the log of the (n-k)-th
  smallest value, the input of the Hill and DPD estimators;
* ``scaled_log_ratios`` -- the spacing statistics
  W_j = j * log((Z_(n-j+1) - Z_(n-k)) / (Z_(n-j) - Z_(n-k))),
  the input of the exponential regression model.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from ._validation import as_pairs, as_vector, check_k

MarginalKind = Literal["frechet", "pareto"]

MARGINALS: tuple[str, ...] = ("frechet", "pareto")


def _check_marginal(marginal: str) -> str:
    if marginal not in MARGINALS:
        raise ValueError(f"marginal must be one of {MARGINALS}, got {marginal!r}")
    return marginal


@dataclass(frozen=True)
class PseudoSample:
    """Componentwise minima of rank-standardised coordinates.

    Attributes
    ----------
    z : np.ndarray
        Standardised minima in the original observation order.
    marginal : str
        Which rank map produced the values, ``"frechet"`` or ``"pareto"``.
    sorted_z : np.ndarray
        ``z`` sorted ascending, cached because every estimator needs the
        order statistics.
    """

    z: np.ndarray
    marginal: str
    sorted_z: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.z)


@dataclass(frozen=True)
class ExcessData:
    """Log-excesses over the (n-k)-th order statistic.

    ``z_tilde`` keeps one entry per observation (entries at or below the
    threshold are <= 0); ``positive_count`` is the number of strictly
    positive excesses, which can fall below ``k`` when minima tie at the
    threshold.
    """

    z_tilde: np.ndarray
    k: int
    positive_count: int


@dataclass(frozen=True)
class ScaledLogRatios:
    """Spacing statistics W_j for the exponential regression model.

    ``j`` holds the original indices (1-based, within 1..k-1) of the
    retained ratios so later weight evaluations use the right abscissae
    even after degenerate spacings were dropped.
    """

    w: np.ndarray
    k: int
    j: np.ndarray
    dropped: tuple[int, ...]
    marginal: str | None = None


def ranks(values) -> np.ndarray:
    """Ranks 1..n with ties broken by order of appearance.

    Parameters
    ----------
    values : array_like
        One-dimensional sample.

    Returns
    -------
    np.ndarray
        Integer ranks; the smallest value gets rank 1, and of two equal
        values the earlier one gets the smaller rank.
    """
    v = as_vector(values, "values")
    order = np.argsort(v, kind="stable")
    out = np.empty(len(v), dtype=np.int64)
    out[order] = np.arange(1, len(v) + 1)
    return out


def _rank_map(r: np.ndarray, n: int, marginal: str) -> np.ndarray:
    u = r / (n + 1)
    if marginal == "frechet":
        return -1.0 / np.log(u)
    return 1.0 / (1.0 - u)


def to_pseudo_sample(sample, marginal: MarginalKind = "frechet") -> PseudoSample:
    """Build the standardised-minimum sample from bivariate data.

    Parameters
    ----------
    sample : BivariateSample or (n, 2) array_like
        Raw pairs; only their ranks matter.
    marginal : {"frechet", "pareto"}
        Rank map: ``-1/log(R/(n+1))`` or ``1/(1 - R/(n+1))``.

    Returns
    -------
    PseudoSample
    """
    _check_marginal(marginal)
    pairs = as_pairs(sample, "sample")
    n = len(pairs)
    zx = _rank_map(ranks(pairs[:, 0]), n, marginal)
    zy = _rank_map(ranks(pairs[:, 1]), n, marginal)
    z = np.minimum(zx, zy)
    return PseudoSample(z=z, marginal=marginal, sorted_z=np.sort(z))


def pseudo_sample_from_values(z, marginal: MarginalKind = "frechet") -> PseudoSample:
    """Wrap already-standardised values (e.g. read back from a CSV)."""
    _check_marginal(marginal)
    z = as_vector(z, "z")
    if len(z) < 2:
        raise ValueError(f"z needs at least 2 values, got {len(z)}")
    if marginal == "frechet" and not (z > 0).all():
        raise ValueError("frechet pseudo-sample values must be > 0")
    if marginal == "pareto" and not (z > 1).all():
        raise ValueError("pareto pseudo-sample values must be > 1")
    return PseudoSample(z=z, marginal=marginal, sorted_z=np.sort(z))


def log_relative_excesses(ps: PseudoSample, k: int) -> ExcessData:
    """Log-excesses of the pseudo-sample over its (n-k)-th order statistic.

    Parameters
    ----------
    ps : PseudoSample
    k : int
        Number of upper order statistics treated as tail, 1 <= k <= n-1.

    Returns
    -------
    ExcessData
    """
    n = len(ps)
    k = check_k(k, n)
    threshold = ps.sorted_z[n - k - 1]
    z_tilde = np.log(ps.z) - np.log(threshold)
    return ExcessData(z_tilde=z_tilde, k=k, positive_count=int((z_tilde > 0).sum()))


def scaled_log_ratios(ps: PseudoSample, k: int) -> ScaledLogRatios:
    """Spacing statistics W_j, j = 1..k-1, for the regression estimator.

    Ratios whose denominator spacing is zero (tied order statistics)
    produce non-finite values; those entries are dropped and their
    indices recorded.  At least two finite ratios must survive.
    """
    n = len(ps)
    k = check_k(k, n, smallest=3)
    s = ps.sorted_z
    threshold = s[n - k - 1]
    j = np.arange(1, k)
    num = s[n - j] - threshold
    den = s[n - j - 1] - threshold
    with np.errstate(divide="ignore", invalid="ignore"):
        w = j * (np.log(num) - np.log(den))
    keep = np.isfinite(w)
    dropped = tuple(int(i) for i in j[~keep])
    if keep.sum() < 2:
        raise ValueError(
            f"fewer than 2 finite scaled log-ratios remain (k={k}, dropped {len(dropped)})"
        )
    return ScaledLogRatios(
        w=w[keep], k=k, j=j[keep], dropped=dropped, marginal=ps.marginal
    )
