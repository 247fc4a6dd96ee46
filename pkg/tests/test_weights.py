import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fractime.errors import DomainError, SizeError
from fractime.weights import (WeightKind, first_difference, g_weights,
                              m_weights, second_difference)


def test_g_weights_half():
    # (k+1)^0.5 - k^0.5
    w = g_weights(0.5, 3).values
    assert np.allclose(w, [1.0, np.sqrt(2) - 1, np.sqrt(3) - np.sqrt(2)], rtol=1e-15)


def test_m_weights_values():
    w = m_weights(1.5, 3).values
    assert np.allclose(w, [1.0, np.sqrt(2) - 1, np.sqrt(3) - np.sqrt(2)], rtol=1e-15)
    assert m_weights(1.5, 3).kind is WeightKind.M


def test_metadata():
    seq = g_weights(0.3, 5)
    assert len(seq) == seq.length == 5
    assert seq.exponent == pytest.approx(0.7)
    with pytest.raises(ValueError):
        seq.values[0] = 2.0


@pytest.mark.parametrize('gamma', [0.0, 1.0, -0.2, 1.5])
def test_g_domain(gamma):
    with pytest.raises(DomainError):
        g_weights(gamma, 4)


@pytest.mark.parametrize('gamma', [1.0, 2.0, 0.5])
def test_m_domain(gamma):
    with pytest.raises(DomainError):
        m_weights(gamma, 4)


@pytest.mark.parametrize('count', [0, -1, 2.5])
def test_bad_count(count):
    with pytest.raises(SizeError):
        g_weights(0.5, count)


def test_single_weight():
    assert g_weights(0.2, 1).values.tolist() == [1.0]


@settings(max_examples=60, deadline=None)
@given(st.floats(0.01, 0.99), st.integers(2, 10_000))
def test_g_properties(gamma, K):
    w = g_weights(gamma, K).values
    assert np.all(w > 0)
    assert np.all(np.diff(w) < 0)
    # sum_{k<K} G_k = K^(1-gamma)
    assert abs(w.sum() - K**(1 - gamma)) <= 1e-12 * K**(1 - gamma) * max(1, np.log2(K))


@settings(max_examples=60, deadline=None)
@given(st.floats(1.01, 1.99), st.integers(3, 10_000))
def test_m_properties(gamma, K):
    w = m_weights(gamma, K).values
    assert np.all(w > 0)
    assert np.all(np.diff(w) < 0)
    assert np.all(second_difference(w) > 0)


def test_large_index_tail_is_accurate():
    from mpmath import mp, mpf
    mp.dps = 40
    w = g_weights(0.4, 2_000_005).values
    for k in (1_000_001, 2_000_004):
        exact = float((mpf(k) + 1)**mpf('0.6') - mpf(k)**mpf('0.6'))
        assert abs(w[k] - exact) <= 1e-13 * exact


def test_first_difference():
    seq = g_weights(0.5, 4)
    d = first_difference(seq)
    assert d.shape == (3,)
    assert np.allclose(d, np.diff(seq.values))
    assert np.all(d < 0)
    with pytest.raises(SizeError):
        first_difference(g_weights(0.5, 1))


def test_second_difference():
    seq = m_weights(1.3, 6)
    v = seq.values
    assert np.allclose(second_difference(seq), v[:-2] - 2 * v[1:-1] + v[2:])
    with pytest.raises(DomainError):
        second_difference(g_weights(0.5, 6))
    with pytest.raises(SizeError):
        second_difference(m_weights(1.3, 2))
