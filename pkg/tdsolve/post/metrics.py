# -*- coding: utf-8 -*-

"""\
Comparison metrics
------------------

Metrics used to compare resolution schemes:

  - :func:`accuracy`: ``100 (1 - ln|X - X_hat| / ln|X|)`` when the residual
    norm exceeds one, and 100 otherwise.
  - :func:`convergence_speed`: absolute slope of a least-squares line through
    the error curve, against iterations or elapsed seconds.
  - :func:`convergence_rate_q`: empirical order of convergence from three
    successive differences of an iterate sequence.
"""

import enum

import numpy as np

from ..tensor.core import norm


class MetricError(ValueError):
    """The requested metric is undefined for the given data"""


class SpeedMode(enum.Enum):
    """Abscissa of the convergence-speed fit"""

    ITERATION_BASED = "iteration_based"
    TIME_BASED = "time_based"


#: Valid ordinate transforms of the convergence-speed fit
ORDINATES = ("log10", "raw")


def accuracy(target, approx):
    """Accuracy of ``approx`` as an approximation of ``target``

    Args:
        target (DenseTensor3): Reference tensor with norm greater than one
        approx (DenseTensor3): Approximation of the same shape

    Returns:
        float: Value at most 100; exactly 100 when the residual norm is at
        most one

    Raises:
        MetricError: If ``norm(target) <= 1``
    """
    if tuple(target.dims) != tuple(approx.dims):
        raise ValueError(
            "Shape mismatch: %s vs. %s" % (target.dims, approx.dims)
        )
    residual = float(np.linalg.norm(target.array - approx.array))
    return accuracy_from_error(residual, norm(target))


def accuracy_from_error(residual, target_norm):
    """Accuracy from a residual norm and the norm of the target

    Raises:
        MetricError: If ``target_norm <= 1``
    """
    if not target_norm > 1.0:
        raise MetricError(
            "Accuracy undefined for target norm %g <= 1" % target_norm
        )
    if residual <= 1.0:
        return 100.0
    return 100.0 * (1.0 - np.log(residual) / np.log(target_norm))


def _ols_slope(xval, yval):
    xc = xval - xval.mean()
    denom = np.dot(xc, xc)
    if denom == 0.0:
        raise MetricError("Convergence speed needs distinct abscissae")
    return np.dot(xc, yval - yval.mean()) / denom


def convergence_speed(trace, mode=SpeedMode.ITERATION_BASED, ordinate="log10"):
    """Absolute slope of the error curve

    All records of the trace enter the ordinary least-squares fit.

    Args:
        trace (ConvergenceTrace): Trace with at least two records
        mode (SpeedMode): Fit against iteration index or elapsed seconds
        ordinate (str): ``log10`` fits ``log10(error)``, ``raw`` the error

    Returns:
        float: Non-negative slope magnitude

    Raises:
        MetricError: On short traces or non-positive errors
    """
    mode = SpeedMode(mode)
    if ordinate not in ORDINATES:
        raise ValueError("Unknown ordinate %r; use one of %s" % (ordinate, ORDINATES))
    if len(trace) < 2:
        raise MetricError("Convergence speed needs at least two records")
    errors = np.asarray(trace.errors, dtype=np.float64)
    if not np.all(np.isfinite(errors)) or np.any(errors <= 0.0):
        raise MetricError("Convergence speed needs finite positive errors")
    yval = np.log10(errors) if ordinate == "log10" else errors
    if mode == SpeedMode.ITERATION_BASED:
        xval = np.asarray(trace.iters, dtype=np.float64)
    else:
        xval = np.asarray(trace.elapsed, dtype=np.float64)
    return abs(float(_ols_slope(xval, yval)))


def _rate(d2, d1, d0):
    if d0 == 0.0 or d1 == 0.0 or d2 == 0.0:
        raise MetricError("Convergence rate undefined for repeated iterates")
    denom = np.log(d1 / d0)
    if denom == 0.0:
        raise MetricError("Convergence rate undefined for equal differences")
    return float(np.log(d2 / d1) / denom)


def convergence_rate_q(iterates, n=None):
    """Empirical convergence order at index ``n``

    .. math::

       q \\approx \\frac{\\log(|x_{n+1} - x_n| / |x_n - x_{n-1}|)}
                       {\\log(|x_n - x_{n-1}| / |x_{n-1} - x_{n-2}|)}

    Args:
        iterates (sequence): Scalars, or vectors compared by Euclidean norm
        n (int): Index with ``2 <= n <= len(iterates) - 2``; the last valid
            index if None

    Raises:
        MetricError: If fewer than four iterates are available or a
            difference is zero
    """
    seq = [np.asarray(x, dtype=np.float64) for x in iterates]
    if len(seq) < 4:
        raise MetricError("Convergence rate needs four consecutive iterates")
    n = len(seq) - 2 if n is None else int(n)
    if not 2 <= n <= len(seq) - 2:
        raise IndexError("Index %d out of range for %d iterates" % (n, len(seq)))

    def dist(i):
        return float(np.linalg.norm(seq[i] - seq[i - 1]))

    return _rate(dist(n + 1), dist(n), dist(n - 1))


def rate_from_steps(steps, n=None):
    """Convergence order from step lengths ``s_n = |x_n - x_{n-1}|``

    Same estimate as :func:`convergence_rate_q` with the differences already
    computed, as stored in :attr:`ConvergenceTrace.steps`. Entry 0 (the
    initial record) is ignored.

    Args:
        steps (sequence): Step lengths indexed by iteration
        n (int): Iteration index with ``2 <= n`` and ``n + 1 < len(steps)``;
            the last valid index if None
    """
    steps = np.asarray(steps, dtype=np.float64)
    if steps.size < 4:
        raise MetricError("Convergence rate needs three consecutive steps")
    n = steps.size - 2 if n is None else int(n)
    if not 2 <= n <= steps.size - 2:
        raise IndexError("Index %d out of range for %d steps" % (n, steps.size))
    return _rate(steps[n + 1], steps[n], steps[n - 1])
