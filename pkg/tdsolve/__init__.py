# -*- coding: utf-8 -*-

"""\
Tensor Decomposition Solvers
============================

This package implements the Paratuck2 and CP tensor decompositions together
with a family of interchangeable resolution schemes (approximate-Hessian
Newton-CG, non-negative ALS, gradient descent, Nesterov, Adam, SAGA and BFGS)
and a benchmark harness that compares their convergence.

"""

from .config import get_config
