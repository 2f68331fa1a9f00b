import time

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lcsrand import (
    BaseProcess,
    DegenerateLadder,
    EmptyInput,
    LengthMismatch,
    TooLarge,
    lcs_bruteforce,
    lcs_exact,
    match_curve,
    sample_environment,
)
from lcsrand.matching import _lcs_dict

DNA = {"A": 0, "C": 1, "G": 2, "T": 3}


def _encode(text):
    return np.array([DNA[c] for c in text], dtype=np.int32)


def _contains(hay, needle):
    """Independent substring check via bytes.find (symbols < 256 here)."""
    return bytes(bytearray(int(c) for c in hay)).find(
        bytes(bytearray(int(c) for c in needle))
    )


X_DNA = "ACAATGAGAGGATGACCTTG"
Y_DNA = "TGACTGTAACTGACACAAGC"


class TestKnownValues:
    def test_dna_strands(self):
        r = lcs_exact(_encode(X_DNA), _encode(Y_DNA))
        assert r.length == 4
        assert X_DNA[r.x_pos : r.x_pos + 4] == "ACAA"
        assert Y_DNA[r.y_pos : r.y_pos + 4] == "ACAA"
        assert lcs_bruteforce(_encode(X_DNA), _encode(Y_DNA)) == 4

    def test_identical_sequences(self):
        x = np.array([0, 1, 2, 1, 0], dtype=np.int32)
        r = lcs_exact(x, x.copy())
        assert (r.length, r.x_pos, r.y_pos) == (5, 0, 0)

    def test_disjoint_alphabets(self):
        x = np.zeros(32, dtype=np.int32)
        y = np.full(32, 3, dtype=np.int32)
        r = lcs_exact(x, y)
        assert (r.length, r.x_pos, r.y_pos) == (0, 0, 0)
        assert lcs_bruteforce(x, y) == 0

    def test_single_symbol(self):
        assert lcs_exact([1], [1]).length == 1
        assert lcs_exact([1], [0]).length == 0


class TestValidation:
    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            lcs_exact([0, 1], [0, 1, 0])
        with pytest.raises(LengthMismatch):
            lcs_bruteforce([0, 1], [0])

    def test_empty(self):
        with pytest.raises(EmptyInput):
            lcs_exact([], [])

    def test_negative_symbols(self):
        with pytest.raises(LengthMismatch):
            lcs_exact([0, -1], [0, 1])

    def test_bruteforce_cap(self):
        x = np.zeros(4097, dtype=np.int32)
        with pytest.raises(TooLarge):
            lcs_bruteforce(x, x)


@settings(max_examples=150, deadline=None)
@given(
    st.integers(min_value=2, max_value=5),
    st.integers(min_value=1, max_value=64),
    st.integers(min_value=0, max_value=2**32 - 1),
)
def test_exact_equals_bruteforce(sigma, n, seed):
    gen = np.random.default_rng(seed)
    x = gen.integers(0, sigma, size=n).astype(np.int32)
    y = gen.integers(0, sigma, size=n).astype(np.int32)
    r = lcs_exact(x, y)
    assert r.length == lcs_bruteforce(x, y)
    assert r.length == lcs_exact(y, x).length


@settings(max_examples=150, deadline=None)
@given(
    st.integers(min_value=2, max_value=4),
    st.integers(min_value=2, max_value=48),
    st.integers(min_value=0, max_value=2**32 - 1),
)
def test_witness_is_canonical(sigma, n, seed):
    gen = np.random.default_rng(seed)
    x = gen.integers(0, sigma, size=n).astype(np.int32)
    y = gen.integers(0, sigma, size=n).astype(np.int32)
    r = lcs_exact(x, y)
    if r.length == 0:
        assert _contains(y, [x[0]]) == -1 or _contains(x, [y[0]]) == -1
        return
    m, i, j = r.length, r.x_pos, r.y_pos
    word = x[i : i + m]
    assert np.array_equal(word, y[j : j + m])
    # maximality: the witness cannot be extended on either side
    if i + m < n and j + m < n:
        assert x[i + m] != y[j + m] or lcs_bruteforce(x, y) == m
    # x_pos minimality: no maximal-length window starting earlier occurs in y
    for i2 in range(i):
        assert _contains(y, x[i2 : i2 + m]) == -1
    # y_pos is that word's first occurrence in y
    assert _contains(y, word) == j


def test_witness_extension_breaks_equality():
    gen = np.random.default_rng(100)
    for _ in range(200):
        n = int(gen.integers(4, 80))
        x = gen.integers(0, 3, size=n).astype(np.int32)
        y = gen.integers(0, 3, size=n).astype(np.int32)
        r = lcs_exact(x, y)
        m, i, j = r.length, r.x_pos, r.y_pos
        if m == 0:
            continue
        # any common factor of length m+1 would contradict maximality
        if i > 0 and j > 0:
            assert not np.array_equal(x[i - 1 : i + m], y[j - 1 : j + m])
        if i + m < n and j + m < n:
            assert not np.array_equal(x[i : i + m + 1], y[j : j + m + 1])


def test_dict_automaton_agrees_with_kernel():
    gen = np.random.default_rng(17)
    for _ in range(50):
        n = int(gen.integers(1, 120))
        sigma = int(gen.integers(2, 30))
        x = gen.integers(0, sigma, size=n).astype(np.int32)
        y = gen.integers(0, sigma, size=n).astype(np.int32)
        assert _lcs_dict(y, x)[0] == lcs_bruteforce(x, y)


class TestCurve:
    def test_values_match_per_rung_calls(self):
        gen = np.random.default_rng(23)
        x = gen.integers(0, 2, size=256).astype(np.int32)
        y = gen.integers(0, 2, size=256).astype(np.int32)
        ladder = (4, 16, 64, 256)
        curve = match_curve(x, y, ladder)
        assert curve.ladder == ladder
        for n, v in zip(curve.ladder, curve.values):
            assert v == lcs_exact(x[:n], y[:n]).length

    def test_monotone_nondecreasing(self):
        gen = np.random.default_rng(29)
        for _ in range(20):
            x = gen.integers(0, 4, size=128).astype(np.int32)
            y = gen.integers(0, 4, size=128).astype(np.int32)
            values = match_curve(x, y, (2, 4, 8, 16, 32, 64, 128)).values
            assert all(b >= a for a, b in zip(values, values[1:]))

    def test_ladder_validation(self):
        x = np.zeros(16, dtype=np.int32)
        with pytest.raises(DegenerateLadder):
            match_curve(x, x, ())
        with pytest.raises(DegenerateLadder):
            match_curve(x, x, (4, 4))
        with pytest.raises(DegenerateLadder):
            match_curve(x, x, (4, 32))


def test_throughput_gate():
    proc = BaseProcess.iid([0.25] * 4)
    x = sample_environment(proc, 1 << 20, seed=1).symbols
    y = sample_environment(proc, 1 << 20, seed=2).symbols
    lcs_exact(x[:1000], y[:1000])  # warm the JIT
    start = time.perf_counter()
    r = lcs_exact(x, y)
    elapsed = time.perf_counter() - start
    assert r.length >= 10
    assert elapsed < 2.0, f"2**20 pair took {elapsed:.2f}s"
