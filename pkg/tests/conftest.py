"""Shared fixtures.

The large Monte Carlo runs (ladder up to 2**20) are session-scoped so
the growth-law acceptance check and the statistical invariants that
re-use the same results only pay for them once.
"""

import time

import numpy as np
import pytest

from lcsrand import BaseProcess, ExperimentConfig, RandomBernoulliSystem, lcs_exact
from lcsrand.base_env import sample_environment
from lcsrand.harness import run_annealed, run_quenched

LADDER = (4096, 8192, 16384, 32768, 65536, 131072, 262144, 524288, 1048576)
SEED = 20260815


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Pay the one-off numba compile cost outside any timed section."""
    lcs_exact(np.array([0, 1], dtype=np.int32), np.array([1, 0], dtype=np.int32))
    sample_environment(BaseProcess.markov([[0.5, 0.5], [0.5, 0.5]]), 4, seed=0)


@pytest.fixture(scope="session")
def sym_system():
    """Uniform {0,1} base with W = [[0.6, 0.4], [0.4, 0.6]]."""
    return RandomBernoulliSystem(
        base=BaseProcess.iid([0.5, 0.5]),
        emission=[[0.6, 0.4], [0.4, 0.6]],
    )


@pytest.fixture(scope="session")
def quenched_big(sym_system):
    """5 environments x 64 replicates up to n = 2**20; returns
    (result, elapsed_seconds)."""
    config = ExperimentConfig(
        mode="quenched",
        ladder=LADDER,
        replicates=64,
        environments=5,
        seed=SEED,
        system=sym_system,
    )
    start = time.perf_counter()
    result = run_quenched(config)
    return result, time.perf_counter() - start


@pytest.fixture(scope="session")
def quenched_mid(sym_system):
    """Same design with the ladder stopping at 2**16 (for dispersion
    comparisons against the big run)."""
    config = ExperimentConfig(
        mode="quenched",
        ladder=LADDER[:5],
        replicates=64,
        environments=5,
        seed=SEED,
        system=sym_system,
    )
    return run_quenched(config)


@pytest.fixture(scope="session")
def annealed_big(sym_system):
    """64 annealed replicates up to n = 2**20."""
    config = ExperimentConfig(
        mode="annealed",
        ladder=LADDER,
        replicates=64,
        seed=SEED,
        system=sym_system,
    )
    return run_annealed(config)


@pytest.fixture
def announce(capsys):
    """Print one live pass/fail line per acceptance criterion."""

    def _announce(num, description, ok, detail=""):
        line = f"ACCEPTANCE {num}: {'PASS' if ok else 'FAIL'} — {description}"
        if detail:
            line += f" [{detail}]"
        with capsys.disabled():
            print("\n" + line)
        assert ok, line

    return _announce
