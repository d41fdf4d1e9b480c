# -*- coding: utf-8 -*-

"""\
Optimization schemes for tensor decompositions
"""

from .derivatives import (
    FDConfig,
    NonDescentError,
    NumericError,
    WolfeConfig,
    fd_gradient,
    hessian_vec_product,
    wolfe_line_search,
)
from .trace import ConvergenceTrace, StopReason
from .solvers import (
    SOLVER_NAMES,
    SolveResult,
    SolverConfig,
    get_solver,
    solve_adam,
    solve_als,
    solve_aphen,
    solve_bfgs,
    solve_gd,
    solve_nag,
    solve_saga,
)
from .cp import CPResult, cp_als
