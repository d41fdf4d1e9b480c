# -*- coding: utf-8 -*-

"""\
CP alternating least squares
----------------------------

Baseline CP decomposition used to compare against Paratuck2 on tensors
whose latent factors have imbalanced sizes. Each sweep solves the three
linear least-squares problems

.. math::

   X_{(1)} \\approx A (C \\odot B)^T, \\quad
   X_{(2)} \\approx B (C \\odot A)^T, \\quad
   X_{(3)} \\approx C (B \\odot A)^T

and normalizes the columns of ``A`` and ``B``, absorbing the weights into
``C``.

The default start takes ``A`` and ``B`` from the leading eigenvectors of
:math:`X_{(n)} X_{(n)}^T`, padded with seeded uniform columns when the rank
exceeds the mode size, and solves ``C`` by least squares from them.
"""

import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from ..tensor.core import khatri_rao, norm, unfold
from ..tensor.decomp import CPFactors, cp_reconstruct
from .trace import ConvergenceTrace, StopReason, relative_change

_lgr = logging.getLogger(__name__)


@dataclass
class CPResult:
    """Fitted CP factors with the convergence trace"""

    factors: CPFactors
    trace: ConvergenceTrace

    @property
    def final_error(self):
        """Residual norm at the last sweep"""
        return self.trace.final_error


def _ls_update(unfolded, kr):
    """Least-squares solution ``M`` of ``unfolded ~ M kr^T``"""
    sol, _, _, _ = sla.lstsq(kr, unfolded.T)
    return sol.T


def _normalize(mat):
    """Unit-norm columns and the removed column norms"""
    weights = np.linalg.norm(mat, axis=0)
    weights[weights == 0.0] = 1.0
    return mat / weights, weights


def nvecs(target, mode, rank):
    """Leading eigenvectors of ``X_(mode) X_(mode)^T``

    At most ``dims[mode]`` vectors are returned, ordered by decreasing
    eigenvalue magnitude. The sign of each vector makes its largest entry
    positive.
    """
    unfolded = unfold(target, mode)
    evals, evecs = sla.eigh(unfolded @ unfolded.T)
    order = np.argsort(-np.abs(evals), kind="stable")
    vecs = evecs[:, order[: min(int(rank), evecs.shape[1])]]
    idx = np.argmax(np.abs(vecs), axis=0)
    signs = np.where(vecs[idx, np.arange(vecs.shape[1])] < 0.0, -1.0, 1.0)
    return vecs * signs


def _start_factors(target, rank, seed, unfolded):
    """Eigenvector start for ``A`` and ``B``, least-squares ``C``"""
    rng = np.random.default_rng(seed)
    mats = []
    for mode in range(2):
        vecs = nvecs(target, mode, rank)
        missing = rank - vecs.shape[1]
        if missing > 0:
            pad = rng.uniform(size=(target.dims[mode], missing))
            vecs = np.hstack([vecs, pad])
        mats.append(vecs)
    a, b = mats
    c = _ls_update(unfolded[2], khatri_rao(b, a))
    return a, b, c


def cp_als(target, rank, max_iters=500, rel_tol=1.0e-8, seed=0, init="nvecs"):
    """Rank-``rank`` CP decomposition of a 3-way tensor by ALS

    Args:
        target (DenseTensor3): Tensor to decompose
        rank (int): Number of rank-one components
        max_iters (int): Maximum number of sweeps
        rel_tol (float): Stop when the relative change of the error is below
        seed (int): Seed for the random columns of the start
        init: ``"nvecs"`` (eigenvector start), ``"random"`` (uniform
            factors drawn with ``seed``) or :class:`CPFactors`

    Returns:
        CPResult: Factors and per-sweep trace
    """
    rank = int(rank)
    if rank < 1:
        raise ValueError("CP rank must be positive: %r" % rank)
    unfolded = [unfold(target, mode) for mode in range(3)]
    if isinstance(init, CPFactors):
        factors = init
    elif init == "random":
        factors = CPFactors.random(target.dims, rank, seed)
    elif init == "nvecs":
        factors = CPFactors(_start_factors(target, rank, seed, unfolded))
    else:
        raise ValueError("Unknown CP initialization: %r" % (init,))
    if tuple(factors.dims) != tuple(target.dims):
        raise ValueError(
            "CP factor dimensions %s do not match tensor dimensions %s"
            % (factors.dims, target.dims)
        )
    a, b, c = (np.array(f) for f in factors.factors)
    tnorm = norm(target)

    def error(a, b, c):
        fit = cp_reconstruct(CPFactors([a, b, c]))
        return float(np.linalg.norm(target.array - fit.array))

    trace = ConvergenceTrace()
    err = error(a, b, c)
    trace.append(0, err)
    stop = StopReason.MAX_ITERS
    for niter in range(1, max_iters + 1):
        a, _ = _normalize(_ls_update(unfolded[0], khatri_rao(c, b)))
        b, _ = _normalize(_ls_update(unfolded[1], khatri_rao(c, a)))
        c = _ls_update(unfolded[2], khatri_rao(b, a))
        if not np.all(np.isfinite(c)):
            stop = StopReason.NUMERIC
            break
        err_new = error(a, b, c)
        trace.append(niter, err_new)
        _lgr.debug("cp_als: iter = %d error = %.12e", niter, err_new)
        if relative_change(err_new, err) < rel_tol or err_new <= 1.0e-12 * tnorm:
            stop = StopReason.TOLERANCE
            break
        err = err_new
    trace.finish(stop)
    return CPResult(factors=CPFactors([a, b, c]), trace=trace)
