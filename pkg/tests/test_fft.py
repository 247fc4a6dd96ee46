import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fractime.errors import SizeError
from fractime.fft import fft, ifft, is_power_of_two, next_power_of_two


@pytest.mark.parametrize('L', [1, 2, 4, 8, 32, 64, 1024, 2**15, 2**17])
def test_matches_numpy(L):
    rng = np.random.default_rng(L)
    x = rng.standard_normal(L) + 1j * rng.standard_normal(L)
    assert np.allclose(fft(x), np.fft.fft(x), atol=1e-12 * max(1, L))
    assert np.allclose(fft(x, 'inverse'), np.fft.ifft(x), atol=1e-13)


def test_four_step_batch():
    x = np.random.default_rng(2).standard_normal((2, 3, 2**16))
    ref = np.fft.fft(x, axis=-1)
    assert np.abs(fft(x) - ref).max() <= 1e-13 * np.abs(ref).max()


def test_round_trip_and_alias():
    x = np.random.default_rng(0).standard_normal(256)
    assert np.allclose(ifft(fft(x)).real, x, atol=1e-14)
    assert np.allclose(ifft(x), fft(x, 'inverse'))


def test_batch_axes():
    x = np.random.default_rng(1).standard_normal((3, 2, 32))
    assert np.allclose(fft(x), np.fft.fft(x, axis=-1), atol=1e-12)


def test_input_untouched():
    x = np.arange(8.0)
    before = x.copy()
    fft(x)
    assert np.array_equal(x, before)


def test_delta_and_constant():
    d = np.zeros(16)
    d[0] = 1
    assert np.allclose(fft(d), np.ones(16))
    assert np.allclose(fft(np.ones(16)), 16 * d)


@pytest.mark.parametrize('L', [0, 3, 6, 100])
def test_non_power_of_two(L):
    with pytest.raises(SizeError):
        fft(np.ones(L))


def test_bad_direction():
    with pytest.raises(ValueError):
        fft(np.ones(4), 'backward')


def test_power_helpers():
    assert [is_power_of_two(n) for n in (0, 1, 2, 3, 4, 96)] == [False, True, True, False, True, False]
    assert [next_power_of_two(n) for n in (0, 1, 2, 3, 5, 1024, 1025)] == [1, 1, 2, 4, 8, 1024, 2048]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 9), st.integers(0, 2**32 - 1))
def test_parseval(e, seed):
    x = np.random.default_rng(seed).standard_normal(2**e)
    X = fft(x)
    assert np.isclose(np.sum(np.abs(X)**2), 2**e * np.sum(x**2), rtol=1e-12)
