"""Renyi entropy, cylinder-decay rates, and the mixing probe.

For the marginal measure mu of a random Bernoulli system the quantities
of interest are

* H2(mu)  = lim_k  -(1/k) log sum_C mu(C)^2   (Renyi entropy of order 2),
* h0      = lim_k  -(1/k) log E_omega max_C mu_omega(C)  (decay rate of
  the largest quenched cylinder),

both in nats.  For i.i.d. bases each has a closed form; both also have
exact finite-k plug-in evaluations (cylinder enumeration) and Monte
Carlo estimators, which is what makes the closed forms testable.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import rng
from .base_env import _as_prob_matrix, _strongly_connected, sample_environment_batch
from .errors import (
    NonConvergent,
    Reducible,
    TooDeep,
    WrongBaseVariant,
    ZeroCoincidences,
)
from .measures import fiber_batch

_ENUM_MAX = 10_000_000
_MIN_PAIRS = 1000
_EIG_TOL = 1e-12
_EIG_MAX_ITER = 100_000


def _require_iid(system):
    if system.base.kind != "iid":
        raise WrongBaseVariant("closed form requires an i.i.d. base process")


def renyi_closed_iid(system):
    """H2(mu) = -log sum_j q_j^2 with q = weights @ W (i.i.d. base).

    With an i.i.d. base the marginal measure is itself an i.i.d. product
    measure with symbol law q, so the collision probability per symbol
    is sum q^2 and the limit is attained at every k.
    """
    _require_iid(system)
    q = system.base.weights @ system.emission
    return float(-np.log(np.sum(q * q)))


def h0_closed_iid(system):
    """h0 = -log sum_a P(a) max_j W[a, j] (i.i.d. base).

    The heaviest depth-k quenched cylinder has mass prod_i max_j
    W[omega_i, j]; averaging over an i.i.d. environment factorises.
    """
    _require_iid(system)
    row_max = system.emission.max(axis=1)
    return float(-np.log(system.base.weights @ row_max))


def renyi_closed_markov(transition):
    """H2 of a Markov measure: -log of the Perron root of (p_ij^2).

    Power iteration on the entrywise square of the transition matrix,
    deterministic all-ones start, residual target 1e-12 on
    ``||Mv - lam v||_inf``.  Requires an irreducible aperiodic chain;
    periodic chains make the iteration oscillate and raise
    :class:`NonConvergent`.
    """
    t = _as_prob_matrix(transition, "transition matrix")
    if not _strongly_connected(t > 0):
        raise Reducible("transition matrix is reducible")
    m = t * t
    v = np.ones(m.shape[0])
    lam = 0.0
    for _ in range(_EIG_MAX_ITER):
        w = m @ v
        lam = w.sum() / v.sum()
        w = w / w.sum()
        if np.abs(m @ w - lam * w).max() < _EIG_TOL:
            return float(-np.log(lam))
        v = w
    raise NonConvergent("Perron root iteration did not converge")


def _guard_depth(sigma, k, s=1):
    if k < 1:
        raise TooDeep("cylinder depth must be >= 1")
    if sigma**k > _ENUM_MAX or sigma ** max(k - 1, 0) * s > 2 * _ENUM_MAX:
        raise TooDeep(
            f"enumerating {sigma}^{k} cylinders exceeds the "
            f"{_ENUM_MAX:,}-word guard"
        )


def cylinder_marginals(system, k):
    """Exact marginal measures of all depth-k cylinders.

    Returns an array of length sigma**k indexed big-endian (the word
    w_0..w_{k-1} sits at index sum_i w_i sigma^{k-1-i}).  For an i.i.d.
    base this is an outer-product chain of the symbol law; for a Markov
    base a forward transfer recursion over the hidden state, expanded
    breadth-first one fiber symbol at a time.
    """
    sigma = system.fiber_size
    base = system.base
    _guard_depth(sigma, k, base.size)
    if base.kind == "iid":
        q = base.weights @ system.emission
        probs = q.copy()
        for _ in range(k - 1):
            probs = (probs[:, None] * q[None, :]).ravel()
        return probs
    t = base.transition
    w = system.emission
    # v[word, a] = P(word emitted, hidden state at last position = a)
    v = (base.initial[None, :] * w.T).reshape(sigma, base.size)
    for step in range(1, k):
        m = v @ t
        if step == k - 1:
            return (m @ w).ravel()
        v = (m[:, None, :] * w.T[None, :, :]).reshape(-1, base.size)
    return v.sum(axis=1)


def renyi_plugin(system, k):
    """Finite-depth plug-in value -(1/k) log sum_C mu(C)^2.

    Exact (full enumeration, no sampling); np.sum's pairwise reduction
    keeps the result bit-stable.  Converges to H2 as k grows and is
    exactly H2 at every k when the base is i.i.d.
    """
    probs = cylinder_marginals(system, k)
    return float(-np.log(np.sum(probs * probs)) / k)


def renyi_coincidence(system, k, pairs, seed):
    """Monte Carlo H2 estimate from cylinder coincidences.

    Draws ``pairs`` independent pairs (x, y) from the annealed measure
    (independent environments, independent fibers), counts full depth-k
    coincidences x_0..x_{k-1} == y_0..y_{k-1}, and returns
    ``(-log(phat)/k, stderr)`` with the delta-method standard error
    sqrt((1 - phat) / count) / k.
    """
    if k < 1:
        raise TooDeep("coincidence depth must be >= 1")
    if pairs < _MIN_PAIRS:
        raise ValueError(f"need at least {_MIN_PAIRS} pairs, got {pairs}")
    base = system.base
    env_x = sample_environment_batch(
        base, pairs, k, rng.child_seed(seed, rng.COINCIDENCE_DOMAIN, 0)
    )
    env_y = sample_environment_batch(
        base, pairs, k, rng.child_seed(seed, rng.COINCIDENCE_DOMAIN, 1)
    )
    x = fiber_batch(system, env_x, rng.child_seed(seed, rng.COINCIDENCE_DOMAIN, 2))
    y = fiber_batch(system, env_y, rng.child_seed(seed, rng.COINCIDENCE_DOMAIN, 3))
    hits = int(np.count_nonzero((x == y).all(axis=1)))
    if hits == 0:
        raise ZeroCoincidences(
            f"no coincidences in {pairs} pairs at depth {k}; "
            "reduce k or increase pairs"
        )
    phat = hits / pairs
    estimate = -math.log(phat) / k
    stderr = math.sqrt((1.0 - phat) / hits) / k
    return estimate, stderr


def h0_plugin(system, k, environments, seed):
    """Monte Carlo -(1/k) log E_omega max_C mu_omega(C) at depth k.

    Samples environments, takes each one's largest depth-k cylinder
    mass (the product of emission-row maxima along the path), and plugs
    the sample mean into the decay-rate formula.
    """
    if k < 1:
        raise TooDeep("cylinder depth must be >= 1")
    if environments < 1:
        raise ValueError("need at least one environment")
    paths = sample_environment_batch(
        system.base, environments, k, rng.child_seed(seed, rng.H0_DOMAIN)
    )
    row_log_max = np.log(system.emission.max(axis=1))
    masses = np.exp(row_log_max[paths].sum(axis=1))
    return float(-np.log(masses.mean()) / k)


def _dominant_letter(w):
    row_max = w.max(axis=1)
    return bool((w == row_max[:, None]).all(axis=0).any())


def _close_band(w):
    # with B fiber letters: exists P with P < W[a, j] < P sqrt(B) for all
    # entries, i.e. max < min * sqrt(B)
    b = w.shape[1]
    return bool(w.max() < w.min() * math.sqrt(b))


@dataclass(frozen=True)
class ConditionFlags:
    """Sufficient conditions for H2 < 2 h0, plus the direct comparison.

    ``dominant_letter``: some fiber column is a row maximum of W in
    every row.  ``close_probability_band``: max entry < min entry *
    sqrt(B) for B fiber letters.  Either one implies ``h2_lt_2h0``.
    """

    dominant_letter: bool
    close_probability_band: bool
    h2_lt_2h0: bool


def check_conditions(system):
    """Evaluate both sufficient conditions and the direct H2 < 2 h0 check.

    Closed forms are used for the direct check, so the base must be
    i.i.d.
    """
    _require_iid(system)
    w = system.emission
    return ConditionFlags(
        dominant_letter=_dominant_letter(w),
        close_probability_band=_close_band(w),
        h2_lt_2h0=bool(renyi_closed_iid(system) < 2.0 * h0_closed_iid(system)),
    )


@dataclass(frozen=True)
class MixingEstimate:
    """Worst-case dependence bound found by the probe."""

    gap: int
    cylinder_depth: int
    bound: float
    mode: str


def _quenched_word_masses(system, env, offset, length):
    """Masses of all sigma**length cylinders at ``offset``, big-endian,
    each computed as a left-to-right product of per-position factors."""
    sigma = system.fiber_size
    probs = np.ones(1)
    for i in range(length):
        factor = system.emission[env.symbols[offset + i]]
        probs = (probs[:, None] * factor[None, :]).ravel()
    return probs


def alpha_mixing_probe(system, env, n, m, g, mode="fibered"):
    """Exhaustive dependence probe between depth-n and depth-m cylinders.

    ``fibered`` mode evaluates, for the given environment,

        max_{A, B} | mu_omega(A  intersect  sigma^{-(n+g)} B)
                     - mu_omega(A) mu_{theta^{n+g} omega}(B) |

    over all cylinders A of depth n and B of depth m, with the joint
    term enumerated word by word (no factorisation shortcut).  For
    Bernoulli fibers this is zero to machine precision for every gap.
    ``marginal`` mode runs the same probe for the annealed measure mu
    (which is genuinely mixing but not product), ignoring ``env``.
    """
    if n < 1 or m < 1 or g < 0:
        raise TooDeep("need n, m >= 1 and g >= 0")
    sigma = system.fiber_size
    if sigma ** (n + m) > 1_000_000 or sigma ** (n + g + m) > 2 * _ENUM_MAX:
        raise TooDeep("probe enumeration exceeds the word guard")
    if mode == "fibered":
        if n + g + m > len(env):
            raise TooDeep(
                f"probe needs {n + g + m} environment symbols, have {len(env)}"
            )
        full = _quenched_word_masses(system, env, 0, n + g + m)
        u = _quenched_word_masses(system, env, 0, n)
        v = _quenched_word_masses(system, env, n + g, m)
    elif mode == "marginal":
        full = cylinder_marginals(system, n + g + m)
        u = cylinder_marginals(system, n)
        v = cylinder_marginals(system, m)
    else:
        raise ValueError(f"unknown probe mode {mode!r}")
    joint = full.reshape(sigma**n, sigma**g, sigma**m).sum(axis=1)
    bound = float(np.abs(joint - np.outer(u, v)).max())
    return MixingEstimate(gap=g, cylinder_depth=max(n, m), bound=bound, mode=mode)


@dataclass(frozen=True)
class CoincidenceEstimate:
    depth: int
    estimate: float
    stderr: float


@dataclass(frozen=True)
class ConditionReport:
    dominant_letter: bool
    close_probability_band: bool
    h2_lt_2h0: bool
    estimated: bool


@dataclass(frozen=True)
class EntropyReport:
    """Everything the entropy pipeline knows about one system.

    Entries are in nats.  ``h2_closed``/``h0_closed`` are None when no
    closed form applies (Markov base); the plug-in ladders are exact at
    each depth; the coincidence entry is Monte Carlo.  For a Markov
    base the direct condition check falls back to plug-in values at the
    deepest ladder rung and is flagged ``estimated``.
    """

    h2_closed: float | None
    h2_plugin: tuple
    h2_coincidence: CoincidenceEstimate | None
    h0_closed: float | None
    h0_plugin: tuple
    conditions: ConditionReport

    def as_dict(self):
        return {
            "units": "nats",
            "h2_closed": self.h2_closed,
            "h2_plugin": [{"k": k, "value": v} for k, v in self.h2_plugin],
            "h2_coincidence": None
            if self.h2_coincidence is None
            else {
                "k": self.h2_coincidence.depth,
                "estimate": self.h2_coincidence.estimate,
                "stderr": self.h2_coincidence.stderr,
            },
            "h0_closed": self.h0_closed,
            "h0_plugin": [{"k": k, "value": v} for k, v in self.h0_plugin],
            "conditions": {
                "dominant_letter": self.conditions.dominant_letter,
                "close_probability_band": self.conditions.close_probability_band,
                "h2_lt_2h0": self.conditions.h2_lt_2h0,
                "estimated": self.conditions.estimated,
            },
        }


def build_entropy_report(
    system,
    k_max,
    coincidence_pairs,
    seed,
    coincidence_depth=None,
    h0_samples=100_000,
):
    """Assemble an :class:`EntropyReport` for one system.

    Plug-in ladders run k = 1..k_max (enumerability is checked at k_max
    up front); the coincidence estimate uses depth ``coincidence_depth``
    (default min(4, k_max)).  ``h0_samples`` environments feed each
    Monte Carlo h0 rung.
    """
    if k_max < 1:
        raise TooDeep("k_max must be >= 1")
    _guard_depth(system.fiber_size, k_max, system.base.size)
    ks = range(1, k_max + 1)
    h2_ladder = tuple((k, renyi_plugin(system, k)) for k in ks)
    h0_ladder = tuple(
        (k, h0_plugin(system, k, h0_samples, rng.child_seed(seed, rng.H0_DOMAIN, k)))
        for k in ks
    )
    coincidence = None
    if coincidence_pairs:
        depth = coincidence_depth or min(4, k_max)
        est, se = renyi_coincidence(system, depth, coincidence_pairs, seed)
        coincidence = CoincidenceEstimate(depth=depth, estimate=est, stderr=se)

    w = system.emission
    if system.base.kind == "iid":
        flags = check_conditions(system)
        conditions = ConditionReport(
            dominant_letter=flags.dominant_letter,
            close_probability_band=flags.close_probability_band,
            h2_lt_2h0=flags.h2_lt_2h0,
            estimated=False,
        )
        h2_closed = renyi_closed_iid(system)
        h0_closed = h0_closed_iid(system)
    else:
        conditions = ConditionReport(
            dominant_letter=_dominant_letter(w),
            close_probability_band=_close_band(w),
            h2_lt_2h0=bool(h2_ladder[-1][1] < 2.0 * h0_ladder[-1][1]),
            estimated=True,
        )
        h2_closed = None
        h0_closed = None
    return EntropyReport(
        h2_closed=h2_closed,
        h2_plugin=h2_ladder,
        h2_coincidence=coincidence,
        h0_closed=h0_closed,
        h0_plugin=h0_ladder,
        conditions=conditions,
    )
