"""Monte Carlo bias/MSE harness for the simulation study.

An experiment fixes a (possibly contaminated) sampling scenario and
sweeps estimator families over grids of k and alpha.  Replications are
pure functions of (seed, replication index): each derives its own
generator stream, so results are independent of execution order and of
how many workers run them.  Cell aggregates use ``math.fsum`` over the
replication-ordered values, which makes reports bit-identical across
worker counts.

The built-in catalog reproduces the study design: pure scenarios
M1 (normal rho=0), M2 (normal rho=0.75), M3 (Gumbel delta=1),
M4 (Clayton delta=1), and their primed contaminations M1' (normal
rho=0.75), M2' (normal rho=-0.9), M3' (Gumbel delta=20), M4' (Clayton
delta=200), each at epsilon in {0.05, 0.15}.  Bias for a contaminated
scenario is measured against the eta of its base model.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .copulas import (
    BivariateSample,
    ContaminationSpec,
    CopulaModel,
    sample,
    sample_contaminated,
    true_eta,
)
from .estimators import SolverError, dpd_estimate, erm_estimate, hill
from .transforms import log_relative_excesses, scaled_log_ratios, to_pseudo_sample

FAMILIES: tuple[str, ...] = ("hill", "dpd", "erm-f", "erm-p")

DEFAULT_K_GRID: tuple[int, ...] = (50, 150, 250, 500)
DEFAULT_ALPHA_GRID: tuple[float, ...] = (0.0, 0.1, 0.25, 0.5, 0.75, 1.0)


@dataclass(frozen=True)
class ExperimentSpec:
    """One scenario crossed with estimator/k/alpha grids.

    ``true_eta`` of None means unknown: the report then carries only
    raw summaries (mean, sd) and leaves bias/MSE empty.
    """

    name: str
    scenario: ContaminationSpec
    true_eta: float | None
    n: int = 1000
    reps: int = 200
    k_grid: tuple[int, ...] = DEFAULT_K_GRID
    alpha_grid: tuple[float, ...] = DEFAULT_ALPHA_GRID
    families: tuple[str, ...] = FAMILIES
    seed: int = 0

    def __post_init__(self):
        for fam in self.families:
            if fam not in FAMILIES:
                raise ValueError(f"unknown family {fam!r}, expected one of {FAMILIES}")
        if self.reps < 1:
            raise ValueError(f"reps must be >= 1, got {self.reps}")
        if not self.k_grid:
            raise ValueError("k_grid is empty")
        if not self.alpha_grid:
            raise ValueError("alpha_grid is empty")


@dataclass(frozen=True)
class CellResult:
    """Aggregated outcome of one (family, alpha, k) cell.

    ``se_bias`` and ``se_mse`` are the Monte Carlo standard errors of
    the bias and MSE estimates (sample sd of the per-replication error,
    respectively squared error, divided by sqrt of reps_used).  They are
    None whenever the corresponding estimate is None or only a single
    replication survived.
    """

    family: str
    marginal: str
    alpha: float
    k: int
    reps_used: int
    failures: int
    bias: float | None
    mse: float | None
    se_bias: float | None
    se_mse: float | None
    mean_eta: float | None
    sd_eta: float | None
    unreliable: bool


@dataclass(frozen=True)
class McReport:
    spec: ExperimentSpec
    rows: tuple[CellResult, ...] = field(default_factory=tuple)


def _marginal_of(family: str) -> str:
    return "pareto" if family == "erm-p" else "frechet"


def _draw_scenario(spec: ExperimentSpec, rep_index: int) -> BivariateSample:
    seed = (spec.seed, rep_index)
    if spec.scenario.epsilon > 0:
        return sample_contaminated(spec.scenario, spec.n, seed)
    return sample(spec.scenario.base, spec.n, seed)


def cell_keys(spec: ExperimentSpec) -> list[tuple[str, float, int]]:
    """The (family, alpha, k) cells an experiment produces, in report order.

    Hill ignores alpha and contributes a single alpha = 0.0 cell per k.
    """
    keys = []
    for family in spec.families:
        alphas = (0.0,) if family == "hill" else spec.alpha_grid
        for alpha in alphas:
            for k in spec.k_grid:
                keys.append((family, float(alpha), int(k)))
    return keys


def run_replication(spec: ExperimentSpec, rep_index: int) -> dict:
    """Estimate every cell on one simulated sample.

    Returns a dict mapping (family, alpha, k) to the estimate, or to
    None when the estimating equation had no usable root or the
    transformed sample was too degenerate to fit.
    """
    drawn = _draw_scenario(spec, rep_index)
    pseudo = {}
    for family in spec.families:
        marg = _marginal_of(family)
        if marg not in pseudo:
            pseudo[marg] = to_pseudo_sample(drawn.pairs, marg)

    out = {}
    for family in spec.families:
        ps = pseudo[_marginal_of(family)]
        for k in spec.k_grid:
            if family == "hill":
                out[("hill", 0.0, k)] = hill(ps, k).eta_hat
                continue
            try:
                if family == "dpd":
                    data = log_relative_excesses(ps, k)
                else:
                    data = scaled_log_ratios(ps, k)
            except ValueError:
                data = None
            for alpha in spec.alpha_grid:
                key = (family, float(alpha), k)
                if data is None:
                    out[key] = None
                    continue
                try:
                    if family == "dpd":
                        out[key] = dpd_estimate(data, alpha).eta_hat
                    else:
                        out[key] = erm_estimate(data, alpha).eta_hat
                except (SolverError, ValueError):
                    out[key] = None
    return out


def _replicate(args) -> dict:
    spec, rep_index = args
    return run_replication(spec, rep_index)


def run_experiment(spec: ExperimentSpec, workers: int = 1) -> McReport:
    """Run all replications and aggregate bias/MSE per cell.

    Parameters
    ----------
    spec : ExperimentSpec
    workers : int
        Process count; results are bit-identical for any value because
        replications are order-indexed pure functions and cells are
        reduced in replication order with compensated summation.

    Returns
    -------
    McReport
    """
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    jobs = [(spec, r) for r in range(spec.reps)]
    if workers == 1:
        results = [_replicate(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_replicate, jobs, chunksize=max(1, spec.reps // (4 * workers))))

    rows = []
    for key in cell_keys(spec):
        family, alpha, k = key
        values = [r[key] for r in results if r[key] is not None]
        failures = spec.reps - len(values)
        rows.append(_aggregate(spec, family, alpha, k, values, failures))
    return McReport(spec=spec, rows=tuple(rows))


def _aggregate(spec, family, alpha, k, values, failures) -> CellResult:
    used = len(values)
    unreliable = failures > spec.reps // 2
    if used == 0:
        return CellResult(family, _marginal_of(family), alpha, k, 0, failures,
                          None, None, None, None, None, None, True)
    mean = math.fsum(values) / used
    if used > 1:
        sd = math.sqrt(math.fsum((v - mean) ** 2 for v in values) / (used - 1))
    else:
        sd = None
    if spec.true_eta is None:
        bias = mse = se_bias = se_mse = None
    else:
        bias = mean - spec.true_eta
        sq = [(v - spec.true_eta) ** 2 for v in values]
        mse = math.fsum(sq) / used
        if used > 1:
            se_bias = sd / math.sqrt(used)
            sd_sq = math.sqrt(math.fsum((s - mse) ** 2 for s in sq) / (used - 1))
            se_mse = sd_sq / math.sqrt(used)
        else:
            se_bias = se_mse = None
    return CellResult(family, _marginal_of(family), alpha, k, used, failures,
                      bias, mse, se_bias, se_mse, mean, sd, unreliable)


_PURE: dict = {
    "M1": CopulaModel("normal", 0.0),
    "M2": CopulaModel("normal", 0.75),
    "M3": CopulaModel("gumbel", 1.0),
    "M4": CopulaModel("clayton", 1.0),
}

_CONTAMINANTS: dict = {
    "M1p": CopulaModel("normal", 0.75),
    "M2p": CopulaModel("normal", -0.9),
    "M3p": CopulaModel("gumbel", 20.0),
    "M4p": CopulaModel("clayton", 200.0),
}

PRESET_EPSILONS: tuple[float, ...] = (0.05, 0.15)


def scenario_preset(name: str, epsilon: float | None = None):
    """Resolve a scenario name to (ContaminationSpec, target eta).

    Pure names M1..M4 take no epsilon; primed names M1p..M4p default to
    epsilon = 0.05.  The target eta of a primed scenario is the eta of
    its base model.
    """
    if name in _PURE:
        if epsilon not in (None, 0.0):
            raise ValueError(f"scenario {name} is uncontaminated; epsilon does not apply")
        base = _PURE[name]
        return ContaminationSpec(base, base, 0.0), true_eta(base)
    if name in _CONTAMINANTS:
        base = _PURE[name[:2]]
        eps = 0.05 if epsilon is None else float(epsilon)
        if eps <= 0:
            raise ValueError(f"scenario {name} needs epsilon > 0, got {eps}")
        return ContaminationSpec(base, _CONTAMINANTS[name], eps), true_eta(base)
    known = ", ".join(list(_PURE) + list(_CONTAMINANTS))
    raise ValueError(f"unknown scenario {name!r}; known: {known}")


def builtin_scenarios() -> dict:
    """The study catalog: 4 pure entries plus 8 contaminated presets.

    Keys are "M1".."M4" and "M1p-05", "M1p-15", ..., "M4p-15"; values
    are (ContaminationSpec, target eta) pairs.
    """
    catalog = {}
    for name in _PURE:
        catalog[name] = scenario_preset(name)
    for name in _CONTAMINANTS:
        for eps in PRESET_EPSILONS:
            catalog[f"{name}-{int(round(eps * 100)):02d}"] = scenario_preset(name, eps)
    return catalog
