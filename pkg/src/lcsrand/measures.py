"""Random Bernoulli measures on the fiber.

Given an environment path omega and an emission matrix W (rows indexed
by base symbols, columns by fiber symbols), the fiber coordinates are
conditionally independent with P(x_i = j | omega) = W[omega_i, j].  The
quenched measure of a cylinder [x_0 ... x_{k-1}] at offset i is the
product of the corresponding W entries along omega_i, ..., omega_{i+k-1};
the annealed (marginal) measure integrates the environment out.
"""

from dataclasses import dataclass, field

import numpy as np

from . import rng
from .base_env import BaseProcess, Environment
from .errors import EmptyInput, NonStochastic, OutOfRange

_ENTRY_MARGIN = 1e-12
# positions per chunk when inverting fiber CDFs, to bound peak memory
_CHUNK = 1 << 20


@dataclass(frozen=True)
class RandomBernoulliSystem:
    """Base process plus emission matrix; the full random subshift.

    ``emission`` has one row per base symbol and one column per fiber
    symbol; every entry must lie strictly inside (0, 1) and rows must
    sum to one.  Rows are stored exactly as given (no renormalisation),
    so looking an entry back up returns the configured float bit-exactly.
    """

    base: BaseProcess
    emission: np.ndarray
    log_emission: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        w = np.asarray(self.emission, dtype=np.float64)
        if w.ndim != 2:
            raise NonStochastic("emission matrix must be 2-dimensional")
        if w.shape[0] != self.base.size:
            raise NonStochastic(
                f"emission rows ({w.shape[0]}) must match base alphabet "
                f"size ({self.base.size})"
            )
        if w.shape[1] < 2:
            raise NonStochastic("fiber alphabet needs at least 2 symbols")
        if np.any(w <= _ENTRY_MARGIN) or np.any(w >= 1.0 - _ENTRY_MARGIN):
            raise NonStochastic("emission entries must lie strictly in (0, 1)")
        dev = np.abs(w.sum(axis=1) - 1.0)
        if np.any(dev > 1e-9):
            raise NonStochastic(
                f"emission rows must sum to 1 (max deviation {dev.max():.3e})"
            )
        w = w.copy()
        w.setflags(write=False)
        logw = np.log(w)
        logw.setflags(write=False)
        object.__setattr__(self, "emission", w)
        object.__setattr__(self, "log_emission", logw)

    @property
    def base_size(self):
        return self.base.size

    @property
    def fiber_size(self):
        return int(self.emission.shape[1])


def emission_distribution(system, env, position):
    """Fiber-symbol distribution at ``position``: the row W[omega_position]."""
    if position < 0 or position >= len(env):
        raise OutOfRange(f"position {position} outside [0, {len(env)})")
    return system.emission[env.symbols[position]]


def _check_word(system, word):
    w = np.asarray(word, dtype=np.int64)
    if w.ndim != 1:
        raise OutOfRange("word must be 1-dimensional")
    if w.size and (w.min() < 0 or w.max() >= system.fiber_size):
        raise OutOfRange(
            f"word symbols must lie in [0, {system.fiber_size})"
        )
    return w


def sample_measure_cylinder(system, env, word, offset=0):
    """Quenched measure mu_omega of the cylinder ``word`` at ``offset``.

    Equals prod_i W[omega_{offset+i}, word_i]; computed in log space so
    long words underflow gracefully.  The empty word has measure 1.
    """
    w = _check_word(system, word)
    if offset < 0 or offset + w.size > len(env):
        raise OutOfRange(
            f"cylinder [{offset}, {offset + w.size}) outside environment "
            f"of length {len(env)}"
        )
    if w.size == 0:
        return 1.0
    rows = env.symbols[offset : offset + w.size]
    return float(np.exp(system.log_emission[rows, w].sum()))


def max_cylinder_mass(system, env, depth, offset=0):
    """Largest quenched mass of any depth-``depth`` cylinder at ``offset``.

    The coordinates are conditionally independent, so the maximum
    factorises into the product of row maxima of W along the path.
    """
    if depth < 1:
        raise EmptyInput("depth must be >= 1")
    if offset < 0 or offset + depth > len(env):
        raise OutOfRange("cylinder window outside environment")
    rows = env.symbols[offset : offset + depth]
    row_log_max = np.log(system.emission.max(axis=1))
    return float(np.exp(row_log_max[rows].sum()))


def marginal_cylinder(system, word):
    """Annealed measure mu([word]) = E_omega mu_omega([word]).

    For an i.i.d. base this is prod_i q[word_i] with q = weights @ W.
    For a Markov base it is evaluated exactly by a forward transfer
    recursion over the hidden base state, with per-step rescaling to
    stay in range for long words.
    """
    w = _check_word(system, word)
    if w.size == 0:
        return 1.0
    base = system.base
    if base.kind == "iid":
        q = base.weights @ system.emission
        return float(np.exp(np.log(q)[w].sum()))
    t = base.transition
    v = base.initial * system.emission[:, w[0]]
    log_scale = 0.0
    for c in w[1:]:
        v = (v @ t) * system.emission[:, c]
        s = v.sum()
        log_scale += np.log(s)
        v = v / s
    return float(np.exp(log_scale + np.log(v.sum())))


def sample_fiber_sequence(system, env, n, seed):
    """Draw x_0..x_{n-1} from mu_omega for the given environment.

    Deterministic in ``(system, env, n, seed)``; independent draws need
    distinct seeds.  Returns a read-only int32 array.
    """
    if n < 1:
        raise EmptyInput("fiber length must be >= 1")
    if n > len(env):
        raise OutOfRange(f"need {n} environment symbols, have {len(env)}")
    gen = rng.stream(seed, rng.FIBER_DOMAIN)
    u = gen.random(n)
    cum = np.cumsum(system.emission, axis=1)
    out = np.empty(n, dtype=np.int32)
    b = system.fiber_size
    step = max(1, _CHUNK // b)
    for lo in range(0, n, step):
        hi = min(n, lo + step)
        rows = cum[env.symbols[lo:hi]]
        idx = (rows < u[lo:hi, None]).sum(axis=1)
        out[lo:hi] = np.minimum(idx, b - 1)
    out.setflags(write=False)
    return out


def fiber_batch(system, env_paths, seed):
    """Draw one fiber word per row of ``env_paths`` (count, k) -> (count, k).

    Batch counterpart of :func:`sample_fiber_sequence` for Monte Carlo
    estimators; row r is a draw from mu_omega for the r-th path.
    """
    paths = np.asarray(env_paths)
    if paths.ndim != 2 or paths.size == 0:
        raise EmptyInput("env_paths must be a nonempty (count, k) array")
    count, k = paths.shape
    gen = rng.stream(seed, rng.FIBER_DOMAIN)
    cum = np.cumsum(system.emission, axis=1)
    b = system.fiber_size
    out = np.empty((count, k), dtype=np.int32)
    step = max(1, _CHUNK // (k * b))
    for lo in range(0, count, step):
        hi = min(count, lo + step)
        u = gen.random((hi - lo, k))
        idx = (cum[paths[lo:hi]] < u[..., None]).sum(axis=2)
        out[lo:hi] = np.minimum(idx, b - 1)
    return out
