"""
Weight sequences of the L1-type Caputo discretizations.

Both families have the form ``w_k = (k+1)**p - k**p``:

* ``G_k`` with ``p = 1 - gamma`` for ``0 < gamma < 1``
* ``M_k`` with ``p = 2 - gamma`` for ``1 < gamma < 2``

Since ``0 < p < 1`` in both cases the sequences start at 1 and decrease
strictly towards zero.
"""
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError, SizeError

__all__ = ['WeightKind', 'WeightSequence', 'g_weights', 'm_weights',
           'first_difference', 'second_difference']

# Beyond this index the direct difference loses most significant digits.
_CANCELLATION_CUTOFF = 10**6


class WeightKind(Enum):
    G = 'g'
    M = 'm'


@dataclass(frozen=True)
class WeightSequence:
    gamma: float
    kind: WeightKind
    values: np.ndarray

    def __post_init__(self):
        self.values.setflags(write=False)

    def __len__(self):
        return len(self.values)

    @property
    def length(self):
        return len(self.values)

    @property
    def exponent(self):
        return (1.0 if self.kind is WeightKind.G else 2.0) - self.gamma


def _power_differences(p, count):
    k = np.arange(count, dtype=float)
    out = (k + 1.0)**p - k**p
    tail = k > _CANCELLATION_CUTOFF
    if tail.any():
        kt = k[tail]
        # k^p ((1 + 1/k)^p - 1) = k^p expm1(p log1p(1/k))
        out[tail] = kt**p * np.expm1(p * np.log1p(1.0 / kt))
    out[0] = 1.0
    return out


def _check_count(count):
    if int(count) != count or count < 1:
        raise SizeError(f"count must be a positive integer, got {count!r}")
    return int(count)


def g_weights(gamma, count):
    """Return ``G_0, ..., G_{count-1}`` for ``0 < gamma < 1``."""
    if not 0.0 < gamma < 1.0:
        raise DomainError(f"G weights need gamma in (0, 1), got {gamma}")
    count = _check_count(count)
    return WeightSequence(float(gamma), WeightKind.G,
                          _power_differences(1.0 - gamma, count))


def m_weights(gamma, count):
    """Return ``M_0, ..., M_{count-1}`` for ``1 < gamma < 2``."""
    if not 1.0 < gamma < 2.0:
        raise DomainError(f"M weights need gamma in (1, 2), got {gamma}")
    count = _check_count(count)
    return WeightSequence(float(gamma), WeightKind.M,
                          _power_differences(2.0 - gamma, count))


def first_difference(seq):
    """
    Backward differences ``w_k - w_{k-1}`` for ``k = 1, ..., K``.

    Entry ``j`` of the result corresponds to ``k = j + 1``. All entries are
    negative because the weights decrease.
    """
    values = np.asarray(getattr(seq, 'values', seq), dtype=float)
    if len(values) < 2:
        raise SizeError("first difference needs at least two weights")
    return values[1:] - values[:-1]


def second_difference(seq):
    """
    Second differences ``w_{j-2} - 2 w_{j-1} + w_j`` for ``j = 2, ..., K``.

    Entry ``i`` of the result corresponds to ``j = i + 2``. Plain arrays are
    accepted as well; a :class:`WeightSequence` must be of kind M.
    """
    if isinstance(seq, WeightSequence) and seq.kind is not WeightKind.M:
        raise DomainError("second differences are defined for M weights")
    values = np.asarray(getattr(seq, 'values', seq), dtype=float)
    if len(values) < 3:
        raise SizeError("second difference needs at least three weights")
    return values[:-2] - 2.0 * values[1:-1] + values[2:]
