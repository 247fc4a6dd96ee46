"""
Error and observed rate for the four manufactured examples.

Example 1 refines tau, the PDE examples refine h = tau together. The
L1 examples (1 and 4) approach rate 2 - gamma, the box scheme (example 2)
is second order and the wave-type scheme (example 3) first order.

    python3 demos/convergence_tables.py [--quick]
"""
import argparse

from fractime.harness import (ExperimentPlan, ladder, run_convergence,
                              to_markdown)

CASES = [
    (1, [0.1, 0.5, 0.9], (6, 11)),
    (2, [0.1, 0.5, 0.9], (3, 7)),
    (3, [1.1, 1.5, 1.9], (3, 7)),
    (4, [0.1, 0.5, 0.9], (3, 7)),
]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[1])
    parser.add_argument('--quick', action='store_true', help="shorter ladders")
    args = parser.parse_args()
    for example, gammas, (a, b) in CASES:
        if args.quick:
            b = a + 2
        plan = ExperimentPlan(example, gammas, ladder(example, a, b))
        print(f"## example {example}\n")
        print(to_markdown(run_convergence(plan)))


if __name__ == '__main__':
    main()
