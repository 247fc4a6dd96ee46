"""
Wall-clock comparison of the Toeplitz/FFT solvers against the direct ones.

For the two-sided ODE this sets the dense LU solve against FCG. For the
diffusion problem it sets time marching with the Thomas algorithm against
one GMRES solve on the block tridiagonal Toeplitz system. Runs beyond the
dense and direct work caps are reported as skipped. At these sizes the
unpreconditioned block GMRES loses to marching, as iteration counts grow
quickly with N.

    python3 demos/fast_vs_direct.py
"""
from fractime.harness import ExperimentPlan, ladder, run_timing, to_markdown


def main():
    plan = ExperimentPlan(1, [0.5], ladder(1, 8, 14), methods=['dense', 'fast'])
    print("## two-sided ODE, gamma = 0.5\n")
    print(to_markdown(run_timing(plan, repeats=3)))

    plan = ExperimentPlan(4, [0.5], ladder(4, 4, 7), methods=['direct', 'fast'])
    print("## diffusion, gamma = 0.5\n")
    print(to_markdown(run_timing(plan, repeats=1)))


if __name__ == '__main__':
    main()
