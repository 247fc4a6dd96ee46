"""
Iterative radix-2 FFT.

Decimation in time: each signal is permuted into bit-reversed order, the
first few stages are done at once as a product with a small DFT matrix,
and the remaining butterfly stages run in place, vectorized over all
butterflies and over any leading batch axes.

Long transforms (``L > _BLOCK``) are split with the four-step scheme
``L = n1 * n2``: ``n2`` transforms of length ``n1``, a twiddle multiply and
``n1`` transforms of length ``n2``. The short transforms are processed in
groups that fit in cache, which keeps the run time close to ``L log L``
once the signal no longer fits.
"""
from functools import lru_cache

import numpy as np

from .errors import SizeError

__all__ = ['fft', 'ifft', 'is_power_of_two', 'next_power_of_two']

# elements per cache-resident group of short transforms
_BLOCK = 2**14
# leaf size handled by a dense DFT product
_LEAF = 32


def is_power_of_two(n):
    return n >= 1 and (n & (n - 1)) == 0


def next_power_of_two(n):
    """Smallest power of two that is ``>= n`` (and ``>= 1``)."""
    return 1 if n <= 1 else 1 << (int(n) - 1).bit_length()


def _bit_reverse(n):
    bits = n.bit_length() - 1
    idx = np.arange(n)
    rev = np.zeros(n, dtype=np.intp)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    return rev


@lru_cache(maxsize=64)
def _plan(n):
    """Bit-reversal indices, leaf DFT matrix and per-stage twiddles for length n."""
    rev = _bit_reverse(n)
    leaf = min(n, _LEAF)
    k = np.arange(leaf)
    # rows follow the bit-reversed order the leaf inputs arrive in
    dft = np.exp(-2j * np.pi * np.outer(_bit_reverse(leaf), k) / leaf)
    base = np.exp(-2j * np.pi * np.arange(n // 2) / n)
    stages = []
    m = leaf
    while m < n:
        stages.append(np.ascontiguousarray(base[::n // (2 * m)][:m]))
        m *= 2
    for arr in [rev, dft, *stages]:
        arr.setflags(write=False)
    return rev, leaf, dft, tuple(stages)


@lru_cache(maxsize=16)
def _four_step_twiddle(n1, n2):
    w = np.exp(-2j * np.pi * np.outer(np.arange(n2), np.arange(n1)) / (n1 * n2))
    w.setflags(write=False)
    return w


def _rows_inplace(x):
    """Overwrite every row of the complex array ``x[R, n]`` with its DFT."""
    R, n = x.shape
    rev, leaf, dft, stages = _plan(n)
    per = max(1, _BLOCK // n)
    scratch = np.empty(max(per * n // 2, 1), dtype=complex)
    for s in range(0, R, per):
        a = x[s:s + per]
        r = len(a)
        a[...] = a[:, rev]
        if leaf > 1:
            g = a.reshape(r, n // leaf, leaf)
            g[...] = g @ dft
        m = leaf
        for w in stages:
            blocks = a.reshape(r, n // (2 * m), 2, m)
            even = blocks[:, :, 0, :]
            odd = blocks[:, :, 1, :]
            t = scratch[:r * n // 2].reshape(r, n // (2 * m), m)
            np.multiply(odd, w, out=t)
            np.subtract(even, t, out=odd)
            even += t
            m *= 2


def _forward(a):
    length = a.shape[-1]
    batch = a.shape[:-1]
    R = int(np.prod(batch, dtype=np.int64))
    if length <= _BLOCK:
        out = np.array(a, dtype=complex).reshape(R, length)
        _rows_inplace(out)
        return out.reshape(batch + (length,))
    e = length.bit_length() - 1
    n1 = 1 << (e // 2)
    n2 = length // n1
    # x[j1 * n2 + j2]: transform over j1 for each j2
    t = np.empty((R, n2, n1), dtype=complex)
    t[...] = a.reshape(R, n1, n2).transpose(0, 2, 1)
    _rows_inplace(t.reshape(R * n2, n1))
    t *= _four_step_twiddle(n1, n2)
    # then over j2 for each k1; output index is k2 * n1 + k1
    u = np.ascontiguousarray(t.transpose(0, 2, 1))
    _rows_inplace(u.reshape(R * n1, n2))
    return np.ascontiguousarray(u.transpose(0, 2, 1)).reshape(batch + (length,))


def fft(x, direction='forward'):
    """
    Discrete Fourier transform along the last axis.

    ``direction='forward'`` is unnormalized, ``direction='inverse'`` carries
    the ``1/L`` factor. The length must be a power of two. The input is
    never modified.
    """
    if direction not in ('forward', 'inverse'):
        raise ValueError(f"unknown direction {direction!r}")
    a = np.asarray(x)
    length = a.shape[-1] if a.ndim else 0
    if not is_power_of_two(length):
        raise SizeError(f"FFT length must be a power of two, got {length}")
    if direction == 'forward':
        return _forward(a)
    # ifft(x) = conj(fft(conj(x))) / L
    out = _forward(np.conjugate(a))
    np.conjugate(out, out=out)
    out /= length
    return out


def ifft(x):
    return fft(x, 'inverse')
