"""Bivariate samplers and epsilon-contamination mixing.

Three dependence families drive the simulation study: the standard
bivariate normal with correlation rho, and the Gumbel and Clayton
copulas with uniform marginals.  Contaminated samples mix a base model
with a contaminant model observation by observation.

The Archimedean samplers use frailty mixtures, computed in log space so
that extreme parameters (Gumbel delta = 20, Clayton delta = 200) do not
underflow:

* Clayton: a Gamma(1/delta) frailty, drawn via the shape-boost identity
  ``V = G * B**(1/s)`` with ``G ~ Gamma(s + 1)`` and ``B ~ Uniform``;
* Gumbel: a positive alpha-stable frailty with index 1/delta, drawn by
  Kanter's sine representation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

FAMILIES: tuple[str, ...] = ("normal", "gumbel", "clayton")


@dataclass(frozen=True)
class CopulaModel:
    """A dependence family plus its single parameter.

    ``param`` is the correlation rho for the normal family and delta for
    Gumbel and Clayton.
    """

    family: str
    param: float

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"family must be one of {FAMILIES}, got {self.family!r}")
        p = float(self.param)
        if not math.isfinite(p):
            raise ValueError(f"param must be finite, got {p}")
        if self.family == "normal" and not -1.0 <= p <= 1.0:
            raise ValueError(f"normal correlation must lie in [-1, 1], got {p}")
        if self.family in ("gumbel", "clayton") and p <= 0:
            raise ValueError(f"{self.family} delta must be > 0, got {p}")
        object.__setattr__(self, "param", p)


@dataclass(frozen=True)
class ContaminationSpec:
    """Mixture (1 - epsilon) * base + epsilon * contaminant."""

    base: CopulaModel
    contaminant: CopulaModel
    epsilon: float

    def __post_init__(self):
        eps = float(self.epsilon)
        if not 0.0 <= eps < 0.5:
            raise ValueError(f"epsilon must lie in [0, 0.5), got {eps}")
        object.__setattr__(self, "epsilon", eps)


@dataclass(frozen=True)
class BivariateSample:
    """Simulated pairs plus the seed that produced them.

    ``contaminated_count`` records how many rows came from the
    contaminant (None for uncontaminated draws).
    """

    pairs: np.ndarray
    seed: "int | tuple[int, ...]"
    contaminated_count: int | None = None


def gumbel_cdf(u, v, delta: float):
    """Closed-form Gumbel copula C_delta(u, v)."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    s = (-np.log(u)) ** delta + (-np.log(v)) ** delta
    return np.exp(-(s ** (1.0 / delta)))


def clayton_cdf(u, v, delta: float):
    """Closed-form Clayton copula C_delta(u, v)."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return (u ** (-delta) + v ** (-delta) - 1.0) ** (-1.0 / delta)


def true_eta(model: CopulaModel) -> float | None:
    """Tail dependence coefficient of the model, or None when unknown.

    Known cases: the normal family (eta = (1 + rho) / 2) and the
    independence point delta = 1 of both Archimedean families
    (eta = 0.5).
    """
    if model.family == "normal":
        return (1.0 + model.param) / 2.0
    if model.param == 1.0:
        return 0.5
    return None


def _draw_normal(rng: np.random.Generator, n: int, rho: float) -> np.ndarray:
    z = rng.standard_normal((n, 2))
    out = np.empty_like(z)
    out[:, 0] = z[:, 0]
    out[:, 1] = rho * z[:, 0] + math.sqrt(1.0 - rho * rho) * z[:, 1]
    return out


def _draw_gumbel(rng: np.random.Generator, n: int, delta: float) -> np.ndarray:
    if delta < 1.0:
        raise ValueError(
            f"gumbel sampling requires delta >= 1 (no distribution exists below 1), got {delta}"
        )
    e = rng.exponential(size=(n, 2))
    if delta == 1.0:
        return np.exp(-e)
    a = 1.0 / delta
    th = rng.uniform(0.0, np.pi, size=n)
    w = rng.exponential(size=n)
    # Kanter's representation of the positive stable law with Laplace
    # transform exp(-t**a), assembled in log space.
    log_v = (
        np.log(np.sin(a * th))
        - np.log(np.sin(th)) / a
        + (1.0 - a) / a * (np.log(np.sin((1.0 - a) * th)) - np.log(w))
    )
    q = a * (np.log(e) - log_v[:, None])
    return np.exp(-np.exp(q))


def _draw_clayton(rng: np.random.Generator, n: int, delta: float) -> np.ndarray:
    shape = 1.0 / delta
    g = rng.gamma(shape + 1.0, size=n)
    log_v = np.log(g) + np.log(rng.uniform(size=n)) / shape
    e = rng.exponential(size=(n, 2))
    log_u = -np.logaddexp(0.0, np.log(e) - log_v[:, None]) / delta
    return np.exp(log_u)


def _draw(rng: np.random.Generator, model: CopulaModel, n: int) -> np.ndarray:
    if model.family == "normal":
        return _draw_normal(rng, n, model.param)
    if model.family == "gumbel":
        return _draw_gumbel(rng, n, model.param)
    return _draw_clayton(rng, n, model.param)


def _check_n(n) -> int:
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise ValueError(f"n must be an integer >= 2, got {n!r}")
    return int(n)


def sample(model: CopulaModel, n: int, seed) -> BivariateSample:
    """Draw ``n`` pairs from ``model``.

    Parameters
    ----------
    model : CopulaModel
    n : int
        Sample size, >= 2.
    seed : int or tuple of ints
        Entropy for ``numpy.random.default_rng``; identical seeds give
        bit-identical samples.

    Returns
    -------
    BivariateSample
    """
    n = _check_n(n)
    rng = np.random.default_rng(seed)
    return BivariateSample(pairs=_draw(rng, model, n), seed=seed)


def sample_contaminated(
    spec: ContaminationSpec, n: int, seed, fixed_count: bool = False
) -> BivariateSample:
    """Draw ``n`` pairs from the epsilon-mixture of base and contaminant.

    Each observation independently comes from the contaminant with
    probability epsilon; with ``fixed_count=True`` exactly
    ``round(epsilon * n)`` randomly chosen rows are contaminated
    instead.  At epsilon = 0 the output is bit-identical to
    ``sample(spec.base, n, seed)``.
    """
    n = _check_n(n)
    if spec.epsilon == 0.0:
        base = sample(spec.base, n, seed)
        return BivariateSample(pairs=base.pairs, seed=seed, contaminated_count=0)
    rng = np.random.default_rng(seed)
    base = _draw(rng, spec.base, n)
    bad = _draw(rng, spec.contaminant, n)
    if fixed_count:
        count = int(round(spec.epsilon * n))
        mask = np.zeros(n, dtype=bool)
        mask[rng.permutation(n)[:count]] = True
    else:
        mask = rng.random(n) < spec.epsilon
    pairs = np.where(mask[:, None], bad, base)
    return BivariateSample(pairs=pairs, seed=seed, contaminated_count=int(mask.sum()))
