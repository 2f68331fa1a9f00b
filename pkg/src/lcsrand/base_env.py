"""Base (environment) processes: i.i.d. and stationary Markov sources.

The environment is a random sequence omega = (omega_0, omega_1, ...)
over a finite alphabet {0, ..., s-1}, drawn either i.i.d. from a weight
vector or from an irreducible Markov chain started in its stationary
distribution.  Environments are sampled up to a finite horizon; the
shift theta acts by dropping leading symbols.
"""

from dataclasses import dataclass

import numpy as np

from . import rng
from .errors import (
    EmptyInput,
    NonConvergent,
    NonStochastic,
    OutOfRange,
    Reducible,
    WrongBaseVariant,
)
from ._kernels import markov_paths

_ATOL = 1e-12


def _as_prob_matrix(rows, name):
    m = np.asarray(rows, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise NonStochastic(f"{name} must be a square matrix")
    if np.any(m < 0):
        raise NonStochastic(f"{name} has negative entries")
    dev = np.abs(m.sum(axis=1) - 1.0)
    if np.any(dev > 1e-9):
        raise NonStochastic(
            f"{name} rows must sum to 1 (max deviation {dev.max():.3e})"
        )
    return m


def _strongly_connected(adjacency):
    """True iff the directed graph given by a boolean matrix is strongly
    connected (every state reaches state 0 and is reached from it)."""
    n = adjacency.shape[0]
    for mat in (adjacency, adjacency.T):
        seen = np.zeros(n, dtype=bool)
        seen[0] = True
        frontier = [0]
        while frontier:
            v = frontier.pop()
            for w in np.flatnonzero(mat[v]):
                if not seen[w]:
                    seen[w] = True
                    frontier.append(int(w))
        if not seen.all():
            return False
    return True


def stationary_vector(transition):
    """Stationary distribution of an irreducible stochastic matrix.

    Damped power iteration on (T + I)/2: the damping makes the iteration
    converge even for periodic chains without changing the fixed point.
    Residual target ||pi T - pi||_1 < 1e-12.
    """
    t = _as_prob_matrix(transition, "transition matrix")
    if not _strongly_connected(t > 0):
        raise Reducible("transition matrix is reducible")
    s = t.shape[0]
    v = np.full(s, 1.0 / s)
    for _ in range(100_000):
        v = 0.5 * (v @ t + v)
        v /= v.sum()
        if np.abs(v @ t - v).sum() < _ATOL:
            return v
    raise NonConvergent("stationary vector iteration did not converge")


@dataclass(frozen=True)
class BaseProcess:
    """Environment law: ``kind`` is ``"iid"`` or ``"markov"``.

    For i.i.d. processes ``weights`` holds the symbol distribution; for
    Markov processes ``transition`` holds the row-stochastic transition
    matrix and ``initial`` the stationary vector the chain is started in.
    Use the :meth:`iid` / :meth:`markov` constructors, which validate.
    """

    kind: str
    weights: np.ndarray | None = None
    transition: np.ndarray | None = None
    initial: np.ndarray | None = None

    @classmethod
    def iid(cls, weights):
        w = np.asarray(weights, dtype=np.float64)
        if w.ndim != 1 or w.size < 1:
            raise NonStochastic("weights must be a nonempty vector")
        if np.any(w < 0):
            raise NonStochastic("weights must be nonnegative")
        if abs(w.sum() - 1.0) > 1e-9:
            raise NonStochastic(f"weights sum to {w.sum()!r}, expected 1")
        w = w.copy()
        w.setflags(write=False)
        return cls(kind="iid", weights=w)

    @classmethod
    def markov(cls, transition, initial=None):
        t = _as_prob_matrix(transition, "transition matrix")
        pi = stationary_vector(t)
        if initial is not None:
            given = np.asarray(initial, dtype=np.float64)
            if given.shape != pi.shape or np.abs(given - pi).max() > 1e-10:
                raise NonStochastic("initial distribution is not stationary")
        t.setflags(write=False)
        pi.setflags(write=False)
        return cls(kind="markov", transition=t, initial=pi)

    @property
    def size(self):
        """Number of base symbols s."""
        if self.kind == "iid":
            return int(self.weights.size)
        return int(self.transition.shape[0])

    def symbol_distribution(self):
        """Marginal law of a single symbol (stationary for Markov)."""
        return self.weights if self.kind == "iid" else self.initial


@dataclass(frozen=True)
class Environment:
    """A sampled environment path.

    ``symbols`` is a read-only int32 array; ``seed`` records the seed of
    the generating call (shifted views inherit it); ``process`` is the
    law the path was drawn from.
    """

    symbols: np.ndarray
    seed: int
    process: BaseProcess

    def __len__(self):
        return int(self.symbols.shape[0])


def sample_environment(process, length, seed):
    """Draw an environment path of ``length`` symbols.

    Pure function of ``(process, length, seed)``: the same arguments
    reproduce the same symbols bit-exactly.
    """
    if length < 1:
        raise EmptyInput("environment length must be >= 1")
    gen = rng.stream(seed, rng.ENVIRONMENT_DOMAIN)
    u = gen.random(length)
    if process.kind == "iid":
        cum = np.cumsum(process.weights)
        symbols = np.searchsorted(cum, u, side="right").astype(np.int32)
        np.minimum(symbols, process.size - 1, out=symbols)
    elif process.kind == "markov":
        cum_init = np.cumsum(process.initial)
        cum_rows = np.cumsum(process.transition, axis=1)
        symbols = np.empty((1, length), dtype=np.int32)
        markov_paths(cum_init, cum_rows, u.reshape(1, -1), symbols)
        symbols = symbols[0]
    else:
        raise WrongBaseVariant(f"unknown base variant {process.kind!r}")
    symbols.setflags(write=False)
    return Environment(symbols=symbols, seed=int(seed), process=process)


def sample_environment_batch(process, count, length, seed):
    """Draw ``count`` independent paths as a (count, length) int32 array.

    Batch counterpart of :func:`sample_environment` used by Monte Carlo
    estimators; row r equals its own independent draw from the process.
    """
    if length < 1 or count < 1:
        raise EmptyInput("batch dimensions must be >= 1")
    gen = rng.stream(seed, rng.ENVIRONMENT_DOMAIN)
    u = gen.random((count, length))
    if process.kind == "iid":
        cum = np.cumsum(process.weights)
        out = np.searchsorted(cum, u, side="right").astype(np.int32)
        np.minimum(out, process.size - 1, out=out)
        return out
    cum_init = np.cumsum(process.initial)
    cum_rows = np.cumsum(process.transition, axis=1)
    out = np.empty((count, length), dtype=np.int32)
    markov_paths(cum_init, cum_rows, u, out)
    return out


def shift_environment(env, i):
    """View of ``env`` with the first ``i`` symbols dropped (theta^i)."""
    if i < 0 or i >= len(env):
        raise OutOfRange(f"shift index {i} outside [0, {len(env)})")
    return Environment(symbols=env.symbols[i:], seed=env.seed, process=env.process)
