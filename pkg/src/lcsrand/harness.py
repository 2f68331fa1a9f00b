"""Monte Carlo experiments reproducing the M_n / log n growth law.

A run draws sequence pairs, evaluates the match curve M_n along a
ladder of prefix lengths, averages curves, and fits mean M_n against
log n.  Modes:

* ``quenched``       — one environment per block, fiber pairs share it;
* ``annealed``       — fresh independent environments for every pair;
* ``classical_iid``  — the base process itself is the matched sequence;
* ``classical_markov`` — same, with a Markov base.

Match lengths are integers, and all float reductions happen in a fixed
order on the assembled integer curves, so results are bit-identical for
any worker count.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import rng
from .base_env import BaseProcess, sample_environment
from .entropy import renyi_closed_iid, renyi_closed_markov
from .errors import ConfigError, DegenerateLadder, WrongBaseVariant
from .matching import match_curve
from .measures import RandomBernoulliSystem, sample_fiber_sequence

MODES = ("quenched", "annealed", "classical_iid", "classical_markov")
CSV_COLUMNS = (
    "mode",
    "env_index",
    "n",
    "mean_Mn",
    "Mn_over_logn",
    "slope",
    "theoretical_slope",
)


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated description of one experiment.

    ``system`` is required for quenched/annealed modes, ``process`` for
    the classical modes (where the base sequence itself is matched).
    ``environments`` only matters for quenched mode; ``burn_in_rungs``
    drops that many of the smallest rungs from every slope fit.
    """

    mode: str
    ladder: tuple
    replicates: int
    seed: int
    environments: int = 1
    burn_in_rungs: int = 0
    system: RandomBernoulliSystem | None = None
    process: BaseProcess | None = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"unknown mode {self.mode!r}")
        rungs = tuple(int(n) for n in self.ladder)
        object.__setattr__(self, "ladder", rungs)
        if not rungs or rungs[0] < 1:
            raise DegenerateLadder("ladder must contain positive lengths")
        if any(b <= a for a, b in zip(rungs, rungs[1:])):
            raise DegenerateLadder("ladder must be strictly increasing")
        if self.replicates < 1:
            raise ConfigError("replicates must be >= 1")
        if self.environments < 1:
            raise ConfigError("environments must be >= 1")
        if self.burn_in_rungs < 0 or len(rungs) - self.burn_in_rungs < 3:
            raise DegenerateLadder(
                "need at least 3 rungs after burn-in for a slope fit"
            )
        if self.mode in ("quenched", "annealed"):
            if self.system is None:
                raise ConfigError(f"{self.mode} mode needs a system")
        else:
            if self.process is None:
                raise ConfigError(f"{self.mode} mode needs a base process")
            want = "iid" if self.mode == "classical_iid" else "markov"
            if self.process.kind != want:
                raise WrongBaseVariant(
                    f"{self.mode} mode needs a {want} base process"
                )


@dataclass(frozen=True)
class EnvironmentRun:
    environment_seed: int
    mean_curve: tuple
    slope: float
    slope_stderr: float
    pair_slopes: tuple


@dataclass(frozen=True)
class ExperimentResult:
    mode: str
    ladder: tuple
    seed: int
    per_environment: tuple
    pooled_curve: tuple
    pooled_slope: float
    pooled_stderr: float
    pair_slopes: tuple
    theoretical_slope: float | None
    relative_error: float | None

    def as_dict(self):
        return {
            "mode": self.mode,
            "ladder": list(self.ladder),
            "seed": self.seed,
            "pooled_slope": self.pooled_slope,
            "pooled_stderr": self.pooled_stderr,
            "theoretical_slope": self.theoretical_slope,
            "relative_error": self.relative_error,
            "pooled_curve": list(self.pooled_curve),
            "pair_slopes": list(self.pair_slopes),
            "per_environment": [
                {
                    "environment_seed": run.environment_seed,
                    "mean_curve": list(run.mean_curve),
                    "slope": run.slope,
                    "slope_stderr": run.slope_stderr,
                    "pair_slopes": list(run.pair_slopes),
                }
                for run in self.per_environment
            ],
        }


def fit_slope(points):
    """Least-squares slope of y against x with its standard error.

    ``points`` is a sequence of (x, y) pairs; needs >= 3 points with
    positive x spread.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 3:
        raise DegenerateLadder("slope fit needs at least 3 (x, y) points")
    x = pts[:, 0]
    y = pts[:, 1]
    if np.ptp(x) <= 0:
        raise DegenerateLadder("slope fit needs x spread")
    xc = x - x.mean()
    sxx = float(xc @ xc)
    slope = float((xc @ y) / sxx)
    resid = y - y.mean() - slope * xc
    dof = x.size - 2
    stderr = float(math.sqrt(float(resid @ resid) / dof / sxx))
    return slope, stderr


def theoretical_slope(config):
    """2 / H2 when a closed form exists for the configured source.

    Quenched and annealed modes share the same limit 2 / H2(mu); the
    classical modes use the matched process's own Renyi entropy.  For a
    Markov-base random system there is no closed form and the result is
    None.
    """
    if config.mode in ("quenched", "annealed"):
        if config.system.base.kind != "iid":
            return None
        return 2.0 / renyi_closed_iid(config.system)
    if config.mode == "classical_iid":
        w = config.process.weights
        return 2.0 / float(-np.log(w @ w))
    return 2.0 / renyi_closed_markov(config.process.transition)


def _env_curves(args):
    """Integer curve matrix (replicates, rungs) for one quenched block."""
    config, env_index = args
    n_max = config.ladder[-1]
    env_seed = rng.child_seed(config.seed, rng.HARNESS_ENV, env_index)
    env = sample_environment(config.system.base, n_max, env_seed)
    rows = np.empty((config.replicates, len(config.ladder)), dtype=np.int64)
    for r in range(config.replicates):
        x = sample_fiber_sequence(
            config.system, env, n_max,
            rng.child_seed(config.seed, rng.HARNESS_PAIR, env_index, r, 0),
        )
        y = sample_fiber_sequence(
            config.system, env, n_max,
            rng.child_seed(config.seed, rng.HARNESS_PAIR, env_index, r, 1),
        )
        rows[r] = match_curve(x, y, config.ladder).values
    return rows


def _pair_curve(args):
    """Integer curve for one annealed / classical replicate."""
    config, r = args
    n_max = config.ladder[-1]
    seed = config.seed
    if config.mode == "annealed":
        ex = sample_environment(
            config.system.base, n_max, rng.child_seed(seed, rng.HARNESS_ENV, r, 0)
        )
        ey = sample_environment(
            config.system.base, n_max, rng.child_seed(seed, rng.HARNESS_ENV, r, 1)
        )
        x = sample_fiber_sequence(
            config.system, ex, n_max, rng.child_seed(seed, rng.HARNESS_PAIR, r, 0)
        )
        y = sample_fiber_sequence(
            config.system, ey, n_max, rng.child_seed(seed, rng.HARNESS_PAIR, r, 1)
        )
    else:
        x = sample_environment(
            config.process, n_max, rng.child_seed(seed, rng.HARNESS_ENV, r, 0)
        ).symbols
        y = sample_environment(
            config.process, n_max, rng.child_seed(seed, rng.HARNESS_ENV, r, 1)
        ).symbols
    return np.asarray(match_curve(x, y, config.ladder).values, dtype=np.int64)


def _map_tasks(fn, tasks, workers):
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks))


def _fit_rows(config, curve):
    logs = np.log(np.asarray(config.ladder, dtype=np.float64))
    keep = slice(config.burn_in_rungs, None)
    return list(zip(logs[keep], np.asarray(curve, dtype=np.float64)[keep]))


def _pair_slopes(config, matrix):
    return tuple(fit_slope(_fit_rows(config, row))[0] for row in matrix)


def run_quenched(config, workers=1):
    """Run a quenched experiment: environments sampled once per block,
    replicate pairs drawn from the same environment."""
    if config.mode != "quenched":
        raise ConfigError(f"run_quenched got mode {config.mode!r}")
    tasks = [(config, e) for e in range(config.environments)]
    matrices = _map_tasks(_env_curves, tasks, workers)
    runs = []
    for e, matrix in enumerate(matrices):
        mean_curve = matrix.mean(axis=0)
        slope, stderr = fit_slope(_fit_rows(config, mean_curve))
        runs.append(
            EnvironmentRun(
                environment_seed=rng.child_seed(config.seed, rng.HARNESS_ENV, e),
                mean_curve=tuple(float(v) for v in mean_curve),
                slope=slope,
                slope_stderr=stderr,
                pair_slopes=_pair_slopes(config, matrix),
            )
        )
    stacked = np.concatenate(matrices, axis=0)
    return _assemble(config, stacked, tuple(runs))


def run_annealed(config, workers=1):
    """Run an annealed or classical experiment: every replicate draws
    fresh independent sequences."""
    if config.mode == "quenched":
        raise ConfigError("use run_quenched for quenched mode")
    tasks = [(config, r) for r in range(config.replicates)]
    stacked = np.vstack(_map_tasks(_pair_curve, tasks, workers))
    return _assemble(config, stacked, ())


def run_experiment(config, workers=1):
    if config.mode == "quenched":
        return run_quenched(config, workers)
    return run_annealed(config, workers)


def _assemble(config, stacked, runs):
    pooled_curve = stacked.mean(axis=0)
    pooled_slope, pooled_stderr = fit_slope(_fit_rows(config, pooled_curve))
    theory = theoretical_slope(config)
    rel = None if theory is None else abs(pooled_slope - theory) / theory
    return ExperimentResult(
        mode=config.mode,
        ladder=config.ladder,
        seed=config.seed,
        per_environment=runs,
        pooled_curve=tuple(float(v) for v in pooled_curve),
        pooled_slope=pooled_slope,
        pooled_stderr=pooled_stderr,
        pair_slopes=_pair_slopes(config, stacked),
        theoretical_slope=theory,
        relative_error=rel,
    )


def convergence_table(result):
    """Per-rung rows (n, mean_Mn, Mn_over_logn, theoretical_slope)."""
    if not result.ladder:
        raise DegenerateLadder("result has no rungs")
    rows = []
    for n, mean in zip(result.ladder, result.pooled_curve):
        rows.append(
            {
                "n": n,
                "mean_Mn": mean,
                "Mn_over_logn": mean / math.log(n),
                "theoretical_slope": result.theoretical_slope,
            }
        )
    return rows


def result_rows(result):
    """Flat delimited rows matching :data:`CSV_COLUMNS`.

    Quenched results emit one block per environment with that
    environment's slope; other modes emit a single block (env_index 0)
    with the pooled slope.
    """
    rows = []
    if result.per_environment:
        for e, run in enumerate(result.per_environment):
            for n, mean in zip(result.ladder, run.mean_curve):
                rows.append(
                    (
                        result.mode,
                        e,
                        n,
                        mean,
                        mean / math.log(n),
                        run.slope,
                        result.theoretical_slope,
                    )
                )
    else:
        for n, mean in zip(result.ladder, result.pooled_curve):
            rows.append(
                (
                    result.mode,
                    0,
                    n,
                    mean,
                    mean / math.log(n),
                    result.pooled_slope,
                    result.theoretical_slope,
                )
            )
    return rows
