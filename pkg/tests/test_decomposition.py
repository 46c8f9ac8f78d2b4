import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from paritylab.decomposition import count_U, decompose, default_depth, enumerate_U, reconstruct
from paritylab.errors import InvalidArgument, ResourceLimitError


def random_ball(rng, n):
    x = rng.standard_normal(n)
    return x * rng.random() ** (1 / n) / np.linalg.norm(x)


def test_zero_vector():
    assert decompose(np.zeros(5), 10) == []
    assert not np.any(reconstruct([], 5))


def test_basis_vector():
    N = 12
    comps = decompose(np.eye(6)[1], N)
    assert [c.level for c in comps] == list(range(1, N + 1))
    assert all(c.support.tolist() == [1] for c in comps)
    assert all(c.value == 2.0**-c.level for c in comps)
    rec = reconstruct(comps, 6)
    np.testing.assert_array_equal(rec, (1 - 2.0**-N) * np.eye(6)[1])
    assert np.linalg.norm(np.eye(6)[1] - rec) == 2.0**-N


def test_quarter_indicator_enters_at_level_three():
    x = np.zeros(256)
    P = np.arange(10, 26)
    x[P] = 0.25
    comps = {c.level: c for c in decompose(x, 8)}
    assert 1 not in comps and 2 not in comps
    assert comps[3].support.tolist() == P.tolist()
    np.testing.assert_array_equal(comps[3].vector(256), np.where(x > 0, 0.125, 0.0))


def test_rejects_outside_ball():
    with pytest.raises(InvalidArgument):
        decompose(np.array([1.0, 0.1]), 5)
    with pytest.raises(InvalidArgument):
        decompose(np.array([0.5]), 0)


def test_default_depth():
    assert default_depth(64, 3) == 18
    assert default_depth(1000, 2) == 20
    assert default_depth(1, 3) == 1


def test_reconstruction_n64_depth18():
    rng = np.random.default_rng(0)
    for _ in range(1000):
        x = rng.standard_normal(64)
        x /= np.linalg.norm(x)
        err = np.linalg.norm(x - reconstruct(decompose(x, 18), 64))
        assert err <= 8 * 2.0**-18


@given(arrays(np.float64, 12, elements=st.floats(-1, 1)), st.integers(1, 30))
@settings(max_examples=200, deadline=None)
def test_decomposition_properties(raw, N):
    norm = np.linalg.norm(raw)
    x = raw / norm if norm > 1 else raw
    comps = decompose(x, N)
    assert np.linalg.norm(x - reconstruct(comps, 12)) <= math.sqrt(12) * 2.0**-N
    for c in comps:
        assert c.support.size > 0
        assert c.norm <= 1.0
        assert c.norm == pytest.approx(np.linalg.norm(c.vector(12)))
        if c.level > 0:
            assert np.all(x[c.support] > 0)
        else:
            assert np.all(x[c.support] < 0)


@given(arrays(np.float64, 10, elements=st.floats(-1, 1)), st.integers(1, 20))
@settings(max_examples=100, deadline=None)
def test_residuals_stay_in_dyadic_band(raw, N):
    norm = np.linalg.norm(raw)
    x = raw / norm if norm > 1 else raw
    comps = decompose(x, N)
    pos = np.where(x > 0, x, 0.0)
    neg = np.where(x < 0, -x, 0.0)
    for j in range(1, N + 1):
        pos_j = pos - sum((c.vector(10) for c in comps if 0 < c.level <= j), np.zeros(10))
        neg_j = neg + sum((c.vector(10) for c in comps if -j <= c.level < 0), np.zeros(10))
        assert np.all(pos_j >= -1e-15) and np.all(pos_j <= 2.0**-j + 1e-15)
        assert np.all(neg_j >= -1e-15) and np.all(neg_j <= 2.0**-j + 1e-15)


def test_u3_of_three():
    vecs = list(enumerate_U(3, 3))
    assert len(vecs) == 2
    got = sorted(tuple(v.vector(3)) for v in vecs)
    s = 1 / math.sqrt(3)
    assert got == [(-s, -s, -s), (s, s, s)]


def test_u_counts_and_norms():
    vecs = list(enumerate_U(4, 2))
    assert len(vecs) == 12 == count_U(4, 2)
    assert len({(v.sign, v.support) for v in vecs}) == 12
    for n, k in [(5, 1), (5, 3), (6, 6)]:
        for v in enumerate_U(n, k):
            assert np.linalg.norm(v.vector(n)) == pytest.approx(1.0)


def test_u_guard_and_range():
    with pytest.raises(ResourceLimitError):
        enumerate_U(40, 20)
    with pytest.raises(InvalidArgument):
        enumerate_U(4, 5)
