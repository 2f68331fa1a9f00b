import itertools
import math

import numpy as np
import pytest

from lcsrand import (
    BaseProcess,
    EmptyInput,
    NonStochastic,
    OutOfRange,
    RandomBernoulliSystem,
    emission_distribution,
    marginal_cylinder,
    max_cylinder_mass,
    sample_environment,
    sample_fiber_sequence,
    sample_measure_cylinder,
    shift_environment,
)
from lcsrand.base_env import Environment
from lcsrand.measures import fiber_batch

W_SYM = [[0.6, 0.4], [0.4, 0.6]]


@pytest.fixture
def sym():
    return RandomBernoulliSystem(base=BaseProcess.iid([0.5, 0.5]), emission=W_SYM)


@pytest.fixture
def markov_sys():
    return RandomBernoulliSystem(
        base=BaseProcess.markov([[0.9, 0.1], [0.2, 0.8]]),
        emission=[[0.7, 0.3], [0.2, 0.8]],
    )


def _path_enumeration_marginal(system, word):
    """Oracle: sum over all hidden base paths of pi * transitions * emissions."""
    base = system.base
    s = base.size
    total = 0.0
    for path in itertools.product(range(s), repeat=len(word)):
        if base.kind == "iid":
            p = 1.0
            for a in path:
                p *= base.weights[a]
        else:
            p = base.initial[path[0]]
            for a, b in zip(path, path[1:]):
                p *= base.transition[a, b]
        for a, c in zip(path, word):
            p *= system.emission[a, c]
        total += p
    return total


class TestConstruction:
    def test_row_count_must_match_base(self):
        with pytest.raises(NonStochastic):
            RandomBernoulliSystem(
                base=BaseProcess.iid([0.5, 0.5]),
                emission=[[0.6, 0.4]],
            )

    def test_entries_strictly_inside_unit_interval(self):
        with pytest.raises(NonStochastic):
            RandomBernoulliSystem(
                base=BaseProcess.iid([0.5, 0.5]),
                emission=[[1.0, 0.0], [0.5, 0.5]],
            )

    def test_rows_must_be_stochastic(self):
        with pytest.raises(NonStochastic):
            RandomBernoulliSystem(
                base=BaseProcess.iid([0.5, 0.5]),
                emission=[[0.6, 0.5], [0.4, 0.6]],
            )

    def test_needs_two_fiber_symbols(self):
        with pytest.raises(NonStochastic):
            RandomBernoulliSystem(
                base=BaseProcess.iid([0.5, 0.5]), emission=[[1.0], [1.0]]
            )

    def test_entries_kept_bit_exact(self, sym):
        assert sym.emission[0, 0] == 0.6
        assert sym.emission[1, 0] == 0.4
        assert sym.fiber_size == 2
        assert sym.base_size == 2


class TestQuenchedCylinder:
    def test_hand_value(self, sym):
        env = Environment(
            symbols=np.array([0, 1], dtype=np.int32), seed=0, process=sym.base
        )
        assert sample_measure_cylinder(sym, env, [0, 1]) == pytest.approx(
            0.36, abs=1e-15
        )

    def test_emission_row_lookup(self, sym):
        env = Environment(
            symbols=np.array([1, 0], dtype=np.int32), seed=0, process=sym.base
        )
        assert np.array_equal(emission_distribution(sym, env, 0), [0.4, 0.6])
        with pytest.raises(OutOfRange):
            emission_distribution(sym, env, 2)

    def test_empty_word_has_mass_one(self, sym):
        env = sample_environment(sym.base, 4, seed=1)
        assert sample_measure_cylinder(sym, env, []) == 1.0

    def test_shift_invariance_bit_exact(self, sym):
        env = sample_environment(sym.base, 64, seed=3)
        word = [0, 1, 1, 0, 1]
        for i in (0, 1, 7, 30):
            direct = sample_measure_cylinder(sym, env, word, offset=i)
            shifted = sample_measure_cylinder(
                sym, shift_environment(env, i), word, offset=0
            )
            assert direct == shifted

    def test_window_bounds(self, sym):
        env = sample_environment(sym.base, 5, seed=3)
        with pytest.raises(OutOfRange):
            sample_measure_cylinder(sym, env, [0, 1], offset=4)
        with pytest.raises(OutOfRange):
            sample_measure_cylinder(sym, env, [0, 1], offset=-1)
        with pytest.raises(OutOfRange):
            sample_measure_cylinder(sym, env, [0, 2])

    def test_long_word_no_underflow(self, sym):
        env = sample_environment(sym.base, 3000, seed=4)
        word = np.zeros(3000, dtype=np.int64)
        mass = sample_measure_cylinder(sym, env, word)
        assert mass >= 0.0
        # value itself underflows to ~1e-1100; the log must stay finite
        n0 = int((env.symbols == 0).sum())
        expected = n0 * math.log(0.6) + (len(env) - n0) * math.log(0.4)
        direct = sym.log_emission[env.symbols, word].sum()
        assert direct == pytest.approx(expected, rel=1e-12)

    def test_max_cylinder_mass_is_max_over_words(self, sym, markov_sys):
        for system in (sym, markov_sys):
            env = sample_environment(system.base, 8, seed=6)
            k = 3
            best = max(
                sample_measure_cylinder(system, env, word)
                for word in itertools.product(range(system.fiber_size), repeat=k)
            )
            assert max_cylinder_mass(system, env, k) == pytest.approx(
                best, rel=1e-12
            )


class TestMarginal:
    def test_iid_product_form(self, sym):
        q = np.array([0.5, 0.5]) @ np.array(W_SYM)
        for word in ([0], [0, 1], [1, 1, 0, 0, 1]):
            expected = np.prod(q[np.array(word)])
            assert marginal_cylinder(sym, word) == pytest.approx(
                float(expected), rel=1e-13
            )

    def test_markov_matches_path_enumeration(self, markov_sys):
        for word in ([0], [1, 0], [0, 1, 1, 0], [1, 1, 0, 1, 0, 1]):
            oracle = _path_enumeration_marginal(markov_sys, word)
            assert marginal_cylinder(markov_sys, word) == pytest.approx(
                oracle, abs=1e-12
            )

    def test_depth_one_sums_to_one(self, markov_sys):
        total = sum(marginal_cylinder(markov_sys, [c]) for c in range(2))
        assert total == pytest.approx(1.0, abs=1e-12)

    def test_monte_carlo_consistency(self, sym):
        # average quenched mass over 1e5 environment windows ~ marginal
        word = [0, 1]
        k = len(word)
        reps = 100_000
        env = sample_environment(sym.base, reps * k, seed=123)
        masses = np.array(
            [
                sample_measure_cylinder(sym, env, word, offset=r * k)
                for r in range(reps)
            ]
        )
        target = marginal_cylinder(sym, word)
        se = masses.std(ddof=1) / math.sqrt(reps)
        assert abs(masses.mean() - target) < 4 * se


class TestFiberSampling:
    def test_deterministic(self, sym):
        env = sample_environment(sym.base, 1000, seed=5)
        a = sample_fiber_sequence(sym, env, 1000, seed=7)
        b = sample_fiber_sequence(sym, env, 1000, seed=7)
        c = sample_fiber_sequence(sym, env, 1000, seed=8)
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_bounds(self, sym):
        env = sample_environment(sym.base, 10, seed=5)
        with pytest.raises(OutOfRange):
            sample_fiber_sequence(sym, env, 11, seed=1)
        with pytest.raises(EmptyInput):
            sample_fiber_sequence(sym, env, 0, seed=1)

    def test_conditional_frequencies_match_emission(self, markov_sys):
        env = sample_environment(markov_sys.base, 200_000, seed=11)
        x = sample_fiber_sequence(markov_sys, env, 200_000, seed=13)
        for a in range(2):
            mask = env.symbols == a
            count = mask.sum()
            for j in range(2):
                p = markov_sys.emission[a, j]
                freq = np.mean(x[mask] == j)
                se = math.sqrt(p * (1 - p) / count)
                assert abs(freq - p) < 4 * se

    def test_batch_shape_and_determinism(self, sym):
        paths = np.array([[0, 1, 1], [1, 0, 0]], dtype=np.int32)
        a = fiber_batch(sym, paths, seed=2)
        b = fiber_batch(sym, paths, seed=2)
        assert a.shape == (2, 3)
        assert np.array_equal(a, b)
        assert a.max() < sym.fiber_size
