"""Model-case influence functions of the two robust estimators.

Contamination is placed at a bivariate point (t1, t2); after rank
standardisation it reaches the excess scale as
m = b * min(exp(t1), exp(t2)), where b is the model constant
(approximately 1 - k_n/n for a tail fraction k_n/n).

* ``if_dpd``: the DPD estimator's influence at that point,
  ((1+a)^3 / (1+a^2)) * ((m - eta) exp(-a m / eta) + a eta / (1+a)^2);
  at alpha = 0 this reduces to m - eta, unbounded in m.
* ``if_erm_single``: perturbation of a single scaled log-ratio W_j0 at
  value t0.
* ``if_erm_all``: joint perturbation of all W_j at values t_j.

All three are bounded for alpha > 0 and unbounded at alpha = 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._validation import as_vector, check_alpha, check_positive
from .estimators import erm_weights


@dataclass(frozen=True)
class IfDpdParams:
    """alpha, model eta, and the threshold constant b."""

    alpha: float
    eta: float
    b: float

    def __post_init__(self):
        check_alpha(self.alpha)
        check_positive(self.eta, "eta")
        check_positive(self.b, "b")


@dataclass(frozen=True)
class IfErmParams:
    """alpha, model eta, tail count k, and the perturbed index j0."""

    alpha: float
    eta: float
    k: int
    j0: int

    def __post_init__(self):
        check_alpha(self.alpha)
        check_positive(self.eta, "eta")
        if not 2 <= int(self.k):
            raise ValueError(f"k must be >= 2, got {self.k}")
        if not 1 <= int(self.j0) <= int(self.k) - 1:
            raise ValueError(f"j0 must lie in 1..k-1 = {int(self.k) - 1}, got {self.j0}")


def _lead(alpha: float) -> float:
    return (1.0 + alpha) ** 3 / (1.0 + alpha * alpha)


def if_dpd(t1, t2, params: IfDpdParams):
    """DPD influence at contamination point (t1, t2); vectorised."""
    t1 = np.asarray(t1, dtype=float)
    t2 = np.asarray(t2, dtype=float)
    a, eta = params.alpha, params.eta
    m = params.b * np.minimum(np.exp(t1), np.exp(t2))
    out = _lead(a) * ((m - eta) * np.exp(-a * m / eta) + a * eta / (1.0 + a) ** 2)
    return out if out.ndim else float(out)


def _erm_pieces(params: IfErmParams, alpha: float):
    base = erm_weights(params.eta, params.k, 0.0)
    weighted = erm_weights(params.eta, params.k, alpha)
    norm_terms = base.theta ** (-alpha - 2.0) * base.j_tilde
    return base.theta, weighted.j_tilde, norm_terms


def if_erm_single(t0, params: IfErmParams):
    """ERM influence of one perturbed ratio W_j0 at value t0; vectorised."""
    t0 = np.asarray(t0, dtype=float)
    if (t0 < 0).any():
        raise ValueError("t0 must be >= 0 (scaled log-ratios are nonnegative)")
    a = params.alpha
    theta, j_tilde, norm_terms = _erm_pieces(params, a)
    th0 = theta[params.j0 - 1]
    w0 = j_tilde[params.j0 - 1]
    norm = norm_terms.mean()
    bracket = (t0 - th0) * np.exp(-a * t0 / th0) + a * th0 / (1.0 + a) ** 2
    out = _lead(a) / norm * w0 * bracket
    return out if out.ndim else float(out)


def if_erm_all(t, params: IfErmParams):
    """ERM influence of perturbing every ratio, W_j -> t_j, j = 1..k-1."""
    t = as_vector(t, "t")
    if len(t) != params.k - 1:
        raise ValueError(f"t must have length k-1 = {params.k - 1}, got {len(t)}")
    if (t < 0).any():
        raise ValueError("t values must be >= 0 (scaled log-ratios are nonnegative)")
    a = params.alpha
    theta, j_tilde, norm_terms = _erm_pieces(params, a)
    bracket = (t - theta) * np.exp(-a * t / theta) + a * theta / (1.0 + a) ** 2
    return float(_lead(a) / norm_terms.sum() * (j_tilde * bracket).sum())


CURVE_KINDS: tuple[str, ...] = ("dpd", "erm-single", "erm-all-constant")


def influence_curve(which: str, params, grid) -> np.ndarray:
    """Tabulate an influence function along a grid.

    Parameters
    ----------
    which : {"dpd", "erm-single", "erm-all-constant"}
        ``"dpd"`` walks the diagonal t1 = t2 = t; ``"erm-single"``
        varies the single perturbed value t0; ``"erm-all-constant"``
        sets every W_j to the same constant.
    params : IfDpdParams or IfErmParams
    grid : array_like
        Points to evaluate at.

    Returns
    -------
    np.ndarray of shape (len(grid), 2)
        Columns (t, influence).
    """
    grid = as_vector(grid, "grid")
    if which == "dpd":
        if not isinstance(params, IfDpdParams):
            raise ValueError("dpd curve needs IfDpdParams")
        values = if_dpd(grid, grid, params)
    elif which == "erm-single":
        if not isinstance(params, IfErmParams):
            raise ValueError("erm curve needs IfErmParams")
        values = if_erm_single(grid, params)
    elif which == "erm-all-constant":
        if not isinstance(params, IfErmParams):
            raise ValueError("erm curve needs IfErmParams")
        values = np.array(
            [if_erm_all(np.full(params.k - 1, c), params) for c in grid]
        )
    else:
        raise ValueError(f"which must be one of {CURVE_KINDS}, got {which!r}")
    return np.column_stack([grid, values])
