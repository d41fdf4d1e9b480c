# -*- coding: utf-8 -*-

"""\
Finite-difference derivatives and Wolfe line search
---------------------------------------------------

Derivative-free building blocks shared by the gradient-based resolution
schemes:

  - :func:`fd_gradient`: fourth-order central-difference gradient,

    .. math::

       \\partial_i f(x) \\approx \\frac{1}{4!\\,\\eta} \\big(
       2 f(x - 2\\eta e_i) - 16 f(x - \\eta e_i)
       + 16 f(x + \\eta e_i) - 2 f(x + 2\\eta e_i) \\big)

  - :func:`hessian_vec_product`: forward difference of the gradient along a
    direction, :math:`(\\nabla f(x + \\eta p) - \\nabla f(x)) / \\eta`.

  - :func:`wolfe_line_search`: bracketing-and-zoom search for a step that
    satisfies the weak Wolfe conditions.

An objective is any callable mapping a 1-d float array to a float. Wrap it in
:class:`CountedObjective` to track the number of evaluations. Objectives that
also provide ``evaluate_batch(points)``, taking one point per row, have their
stencil points evaluated in batches.
"""

import functools
import logging
from dataclasses import dataclass

import numpy as np

_lgr = logging.getLogger(__name__)

#: Stencil offsets and weights of the fourth-order formula
_STENCIL = ((-2.0, 2.0), (-1.0, -16.0), (1.0, 16.0), (2.0, -2.0))


class NumericError(ArithmeticError):
    """The objective produced a non-finite value"""

    def __init__(self, msg, index=None):
        super().__init__(msg)
        #: Component index whose stencil failed (None if unknown)
        self.index = index


class NonDescentError(ValueError):
    """The search direction is not a descent direction"""


@dataclass(frozen=True)
class FDConfig:
    """Perturbation used by the finite-difference formulas"""

    eta: float = 1.0e-4

    def __post_init__(self):
        if not (np.isfinite(self.eta) and self.eta > 0.0):
            raise ValueError("Perturbation eta must be positive: %r" % self.eta)


@dataclass(frozen=True)
class WolfeConfig:
    """Constants of the weak Wolfe line search"""

    c1: float = 1.0e-4
    c2: float = 0.9
    max_trials: int = 25
    initial_step: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.c1 < self.c2 < 1.0:
            raise ValueError(
                "Wolfe constants need 0 < c1 < c2 < 1, got c1=%r c2=%r"
                % (self.c1, self.c2)
            )
        if self.max_trials < 1 or self.initial_step <= 0.0:
            raise ValueError("Invalid line search limits")


@dataclass
class LineSearchResult:
    """Outcome of :func:`wolfe_line_search`"""

    #: Accepted step length
    alpha: float
    #: Trial point ``x + alpha * p``
    x: np.ndarray
    #: Objective value at :attr:`x`
    fx: float
    #: True if no trial satisfied both Wolfe conditions
    degraded: bool
    #: Number of trial steps evaluated
    n_trials: int


class CountedObjective:
    """Wrap an objective and count its evaluations"""

    def __init__(self, fun):
        self.fun = fun
        #: Number of evaluations so far
        self.n_evals = 0

    def __call__(self, x):
        self.n_evals += 1
        return float(self.fun(x))


def count_evals(fun):
    """Return the evaluation counter of ``fun`` if it keeps one"""
    return getattr(fun, "n_evals", None)


def _batch_evaluator(f):
    """The ``evaluate_batch`` method of ``f``, or None"""
    return getattr(f, "evaluate_batch", None)


def _fd_gradient_batch(batch, x, eta, chunk):
    """Stencil of :func:`fd_gradient` evaluated ``chunk`` components at once"""
    offsets = np.array([offset for offset, _ in _STENCIL])
    weights = [weight for _, weight in _STENCIL]
    grad = np.empty_like(x)
    rows = np.arange(len(_STENCIL))
    for start in range(0, x.size, chunk):
        idx = np.arange(start, min(start + chunk, x.size))
        points = np.repeat(x[None, None, :], idx.size, axis=0)
        points = np.repeat(points, len(_STENCIL), axis=1)
        points[np.arange(idx.size)[:, None], rows[None, :], idx[:, None]] = (
            x[idx][:, None] + offsets[None, :] * eta
        )
        fvals = batch(points.reshape(-1, x.size)).reshape(idx.size, -1)
        bad = ~np.all(np.isfinite(fvals), axis=1)
        if np.any(bad):
            i = int(idx[np.argmax(bad)])
            raise NumericError(
                "Non-finite objective in gradient component %d" % i, i
            )
        acc = weights[0] * fvals[:, 0]
        for j in range(1, len(weights)):
            acc = acc + weights[j] * fvals[:, j]
        grad[idx] = acc / (24.0 * eta)
    return grad


def fd_gradient(f, x, cfg=None, chunk=64):
    """Fourth-order finite-difference gradient of ``f`` at ``x``

    Each component sums its four stencil terms in a fixed order, so the
    result is bit-reproducible. Costs ``4 * len(x)`` evaluations of ``f``.
    Objectives with an ``evaluate_batch`` method receive the stencil points
    of ``chunk`` components per call; the result is identical to evaluating
    them one at a time.

    Args:
        f (callable): Objective
        x (np.ndarray): Evaluation point
        cfg (FDConfig): Perturbation settings
        chunk (int): Components per batched call

    Raises:
        NumericError: If a stencil evaluation is not finite
    """
    eta = (cfg or FDConfig()).eta
    x = np.asarray(x, dtype=np.float64)
    batch = _batch_evaluator(f)
    if batch is not None:
        return _fd_gradient_batch(batch, x, eta, max(1, int(chunk)))
    xt = x.copy()
    grad = np.empty_like(x)
    denom = 24.0 * eta
    for i in range(x.size):
        xi = x[i]
        acc = 0.0
        for offset, weight in _STENCIL:
            xt[i] = xi + offset * eta
            fval = f(xt)
            if not np.isfinite(fval):
                raise NumericError(
                    "Non-finite objective in gradient component %d" % i, i
                )
            acc += weight * fval
        xt[i] = xi
        grad[i] = acc / denom
    return grad


def hessian_vec_product(f, x, p, cfg=None, grad=None, grad_fn=None):
    """Hessian-vector product by forward-differencing the gradient

    Args:
        f (callable): Objective
        x (np.ndarray): Evaluation point
        p (np.ndarray): Direction
        cfg (FDConfig): Perturbation settings
        grad (np.ndarray): Gradient at ``x`` if already available
        grad_fn (callable): Gradient of ``f``; :func:`fd_gradient` if None

    Returns:
        np.ndarray: Approximation of ``Hess f(x) @ p``
    """
    cfg = cfg or FDConfig()
    x = np.asarray(x, dtype=np.float64)
    p = np.asarray(p, dtype=np.float64)
    if not np.all(np.isfinite(p)):
        raise NumericError("Non-finite direction in Hessian-vector product")
    if grad_fn is None:
        grad_fn = functools.partial(fd_gradient, f, cfg=cfg)
    g0 = grad_fn(x) if grad is None else grad
    g1 = grad_fn(x + cfg.eta * p)
    return (g1 - g0) / cfg.eta


def _slope(f, x, p, alpha, eta, grad_fn):
    """Directional derivative of ``f`` along ``p`` at ``x + alpha * p``"""
    if grad_fn is not None:
        return float(np.dot(grad_fn(x + alpha * p), p))
    steps = [alpha + offset * eta for offset, _ in _STENCIL]
    batch = _batch_evaluator(f)
    if batch is not None:
        fvals = batch(np.stack([x + step * p for step in steps]))
    else:
        fvals = [f(x + step * p) for step in steps]
    acc = 0.0
    for (_, weight), fval in zip(_STENCIL, fvals):
        acc += weight * fval
    return acc / (24.0 * eta)


def _interpolate(lo, hi, phi_lo, dphi_lo, phi_hi):
    """Minimizer of the quadratic through (lo, phi_lo, dphi_lo), (hi, phi_hi)

    Falls back to bisection when the interpolant is not safely inside the
    bracket.
    """
    delta = hi - lo
    denom = 2.0 * (phi_hi - phi_lo - dphi_lo * delta)
    mid = lo + 0.5 * delta
    if denom <= 0.0 or not np.isfinite(denom):
        return mid
    trial = lo - dphi_lo * delta * delta / denom
    guard = 0.1 * abs(delta)
    if not min(lo, hi) + guard <= trial <= max(lo, hi) - guard:
        return mid
    return trial


def wolfe_line_search(
    f, x, p, grad, cfg=None, fx=None, fd=None, grad_fn=None
):
    """Find a step satisfying the weak Wolfe conditions

    Accepts ``alpha`` with

    .. math::

       f(x + \\alpha p) \\le f(x) + c_1 \\alpha \\nabla f^T p, \\qquad
       \\nabla f(x + \\alpha p)^T p \\ge c_2 \\nabla f^T p

    The bracketing phase doubles the step until the minimizer is bracketed;
    the zoom phase shrinks the bracket by safeguarded quadratic interpolation.
    An accepted step is then tried once against the secant minimizer of the
    directional derivative, which is the exact minimizing step on quadratics.
    Directional derivatives at trial points come from ``grad_fn`` when given,
    otherwise from the fourth-order stencil applied along ``p``.

    Args:
        f (callable): Objective
        x (np.ndarray): Current point
        p (np.ndarray): Search direction
        grad (np.ndarray): Gradient at ``x``
        cfg (WolfeConfig): Line search constants
        fx (float): ``f(x)`` if already known
        fd (FDConfig): Perturbation for stencil directional derivatives
        grad_fn (callable): Analytic gradient, optional

    Returns:
        LineSearchResult: Accepted step, or the best trial with
        ``degraded=True`` when the trial budget is exhausted

    Raises:
        NonDescentError: If ``grad @ p >= 0``
    """
    cfg = cfg or WolfeConfig()
    eta = (fd or FDConfig()).eta
    x = np.asarray(x, dtype=np.float64)
    p = np.asarray(p, dtype=np.float64)
    phi0 = f(x) if fx is None else fx
    dphi0 = float(np.dot(grad, p))
    if not dphi0 < 0.0:
        raise NonDescentError(
            "Direction is not a descent direction (grad.p = %g)" % dphi0
        )

    armijo_slope = cfg.c1 * dphi0
    curvature = cfg.c2 * dphi0
    trials = []
    best = None

    def evaluate(alpha):
        xt = x + alpha * p
        phit = f(xt)
        trials.append((alpha, xt, phit))
        return xt, phit

    def armijo(alpha, phit):
        return np.isfinite(phit) and phit <= phi0 + alpha * armijo_slope

    def done(alpha, xt, phit):
        return LineSearchResult(
            alpha=alpha, x=xt, fx=phit, degraded=False, n_trials=len(trials)
        )

    def accept(alpha, xt, phit, dphit, ref, dphi_ref):
        # Secant minimizer of the slopes at ref and alpha, kept only if it
        # lowers the objective and still meets both conditions
        dslope = (dphit - dphi_ref) * (alpha - ref)
        if dslope > 0.0:
            trial = alpha - dphit * (alpha - ref) / (dphit - dphi_ref)
            if np.isfinite(trial) and trial > 0.0 and trial != alpha:
                xs, phis = evaluate(trial)
                if armijo(trial, phis) and phis <= phit:
                    if _slope(f, x, p, trial, eta, grad_fn) >= curvature:
                        return done(trial, xs, phis)
        return done(alpha, xt, phit)

    # Bracketing phase
    lo, phi_lo, dphi_lo = 0.0, phi0, dphi0
    hi, phi_hi = None, None
    alpha = cfg.initial_step
    while len(trials) < cfg.max_trials:
        xt, phit = evaluate(alpha)
        if not armijo(alpha, phit) or (lo > 0.0 and phit >= phi_lo):
            hi, phi_hi = alpha, phit
            break
        dphit = _slope(f, x, p, alpha, eta, grad_fn)
        if dphit >= curvature:
            return accept(alpha, xt, phit, dphit, lo, dphi_lo)
        lo, phi_lo, dphi_lo = alpha, phit, dphit
        alpha = 2.0 * alpha

    # Zoom phase
    while hi is not None and len(trials) < cfg.max_trials:
        alpha = _interpolate(lo, hi, phi_lo, dphi_lo, phi_hi)
        xt, phit = evaluate(alpha)
        if not armijo(alpha, phit) or phit >= phi_lo:
            hi, phi_hi = alpha, phit
            continue
        dphit = _slope(f, x, p, alpha, eta, grad_fn)
        if dphit >= curvature:
            return accept(alpha, xt, phit, dphit, lo, dphi_lo)
        if dphit * (hi - lo) >= 0.0:
            hi, phi_hi = lo, phi_lo
        lo, phi_lo, dphi_lo = alpha, phit, dphit

    # Budget exhausted: best sufficient-decrease trial, else the smallest step
    for alpha, xt, phit in trials:
        if armijo(alpha, phit) and (best is None or phit < best[2]):
            best = (alpha, xt, phit)
    if best is None:
        best = min(trials, key=lambda trial: trial[0])
    _lgr.debug(
        "Wolfe search exhausted %d trials; degraded step %g",
        len(trials),
        best[0],
    )
    return LineSearchResult(
        alpha=best[0],
        x=best[1],
        fx=best[2],
        degraded=True,
        n_trials=len(trials),
    )
