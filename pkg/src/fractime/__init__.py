"""Fast Toeplitz/FFT solvers for Caputo time-fractional differential equations."""
from .errors import (ConfigError, DefinitenessError, DomainError,
                     FractimeError, SingularityError, SizeError)
from .fft import fft, ifft
from .harness import (ConvergenceRow, ExperimentPlan, example_problem, ladder,
                      run_convergence, run_example, run_timing)
from .krylov import KrylovResult, SolverConfig, cg_solve, dense_solve, gmres_solve
from .schemes import (ProblemSpec, Scheme, SolutionGrid, SolveReport,
                      assemble_scheme1, assemble_scheme2_reordered,
                      assemble_scheme3_reordered, assemble_scheme4,
                      caputo_left_apply, caputo_right_apply, l2_error, solve,
                      solve_scheme1, solve_scheme2, solve_scheme3, solve_scheme4)
from .toeplitz import (BlockTridiagonalToeplitzOperator, CirculantSpectrum,
                       DenseOperator, ToeplitzOperator, block_matvec,
                       embed_circulant, lower_toeplitz_forward_solve,
                       toeplitz_matvec)
from .weights import (WeightSequence, first_difference, g_weights, m_weights,
                      second_difference)

__version__ = '0.1.0'
