"""
Cost of one Toeplitz matrix-vector product through circulant embedding.

Doubling n should roughly double the time (the FFT is O(n log n)), so the
ratio column should sit a little above 2.

    python3 demos/matvec_scaling.py
"""
import numpy as np

from fractime import ToeplitzOperator
from fractime.harness import matvec_scaling


def main():
    rng = np.random.default_rng(0)
    col, row = rng.standard_normal(300), rng.standard_normal(300)
    row[0] = col[0]
    t = ToeplitzOperator.general(col, row)
    x = rng.standard_normal(300)
    err = np.abs(t.apply(x) - t.dense() @ x).max()
    print(f"n = 300: max |fast - dense| = {err:.2e}\n")

    print(f"{'n':>9} {'seconds':>10} {'ratio':>6}")
    prev = None
    for n, s in matvec_scaling(range(12, 20)):
        ratio = '' if prev is None else f"{s / prev:6.2f}"
        print(f"{n:>9} {s:10.5f} {ratio:>6}")
        prev = s


if __name__ == '__main__':
    main()
