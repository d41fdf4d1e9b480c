# -*- coding: utf-8 -*-

"""\
Resolution schemes
------------------

Seven iterative schemes that minimize the Paratuck2 residual norm
:math:`f(x) = \\|X - \\hat{X}(x)\\|` over the flattened factor vector:

  ======== ==========================================================
  aphen    Truncated Newton with conjugate-gradient inner solves
  als      Non-negative alternating least squares (multiplicative)
  gd       Steepest descent with a Wolfe line search
  nag      Nesterov accelerated gradient
  adam     Adaptive moment estimation
  saga     Variance-reduced gradient with a Wolfe line search
  bfgs     Quasi-Newton with a dense Hessian approximation
  ======== ==========================================================

All gradients are fourth-order finite differences unless an analytic
gradient is supplied to :meth:`GradientScheme.minimize`. Every scheme shares
the same outer driver: record the error after each iteration, stop when the
relative change of the error drops below ``rel_tol`` or after ``max_iters``
iterations, and stop early with :attr:`StopReason.NUMERIC` if the objective
becomes non-finite.

Schemes register themselves by ``scheme_name``; use :func:`get_solver` to
look one up, or the ``solve_<name>`` helpers for one-shot runs.
"""

import abc
import logging
from collections import OrderedDict
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.linalg as sla

from ..config import config as tdconfig
from ..tensor.core import frontal_slice, khatri_rao, unfold_wide, vec_tensor
from ..tensor.decomp import (
    LayoutError,
    Paratuck2Objective,
    ParamVector,
    flatten,
    init_factors,
    split_blocks,
    unflatten,
)
from ..utils.struct import Struct
from .derivatives import (
    CountedObjective,
    FDConfig,
    NonDescentError,
    NumericError,
    WolfeConfig,
    count_evals,
    fd_gradient,
    hessian_vec_product,
    wolfe_line_search,
)
from .trace import ConvergenceTrace, StopReason

_lgr = logging.getLogger(__name__)

#: Scheme names in reporting order
SOLVER_NAMES = ("aphen", "als", "gd", "nag", "adam", "saga", "bfgs")


@dataclass(frozen=True)
class SolverConfig:
    """Settings common to every resolution scheme"""

    max_iters: int = 1000
    rel_tol: float = 1.0e-6
    #: Iterates whose error is at or below this value are not moved
    abs_tol: float = 1.0e-10
    seed: int = 0
    fd: FDConfig = field(default_factory=FDConfig)
    line_search: WolfeConfig = field(default_factory=WolfeConfig)
    #: Per-scheme parameters keyed by scheme name
    scheme_params: Struct = field(default_factory=Struct)

    def __post_init__(self):
        if int(self.max_iters) < 1:
            raise ValueError("max_iters must be at least 1: %r" % self.max_iters)
        if not self.rel_tol > 0.0:
            raise ValueError("rel_tol must be positive: %r" % self.rel_tol)
        if self.abs_tol < 0.0:
            raise ValueError("abs_tol cannot be negative: %r" % self.abs_tol)

    @classmethod
    def from_config(cls, cfg=None, **overrides):
        """Build settings from the ``tdsolve.solvers`` configuration section

        Keyword arguments with a value other than None take precedence over
        the configuration. ``eta`` sets the finite-difference perturbation
        and ``scheme_params`` is merged into the per-scheme sections.
        """
        cfg = cfg or tdconfig.get_config()
        opts = cfg.pget("tdsolve.solvers") or Struct()
        overrides = {k: v for k, v in overrides.items() if v is not None}
        eta = overrides.pop("eta", opts.get("eta", FDConfig.eta))
        params = Struct(
            (name, Struct(opts.get(name, None) or {})) for name in SOLVER_NAMES
        )
        params.merge(overrides.pop("scheme_params", {}))
        ls_opts = opts.get("line_search", None) or {}
        kwargs = dict(
            max_iters=int(opts.get("max_iters", cls.max_iters)),
            rel_tol=float(opts.get("rel_tol", cls.rel_tol)),
            abs_tol=float(opts.get("abs_tol", cls.abs_tol)),
            seed=int(opts.get("seed", cls.seed)),
        )
        kwargs.update(overrides)
        return cls(
            fd=FDConfig(eta=float(eta)),
            line_search=WolfeConfig(**ls_opts),
            scheme_params=params,
            **kwargs
        )

    def with_options(self, **kwargs):
        """Copy of the settings with some fields replaced"""
        return replace(self, **kwargs)


@dataclass
class SolveResult:
    """Fitted factors with the convergence trace of the run"""

    factors: object
    trace: ConvergenceTrace

    @property
    def final_error(self):
        """Error at the last iteration"""
        return self.trace.final_error


class SchemeMeta(abc.ABCMeta):
    """Register concrete resolution schemes by ``scheme_name``

    Populates the class attribute ``scheme_map`` shared by the whole
    hierarchy with a mapping from the scheme name to its class.
    """

    def __init__(cls, name, bases, cdict):
        super().__init__(name, bases, cdict)
        if not hasattr(cls, "scheme_map"):
            cls.scheme_map = OrderedDict()
        sname = cdict.get("scheme_name", None)
        if sname:
            cls.scheme_map[sname] = cls


class ResolutionScheme(metaclass=SchemeMeta):
    """Base class of the iterative schemes

    Subclasses implement :meth:`step`, which advances one outer iteration
    from ``(x, f(x))`` and returns the new pair. Per-run state is initialized
    in :meth:`reset`.
    """

    #: Name used on the command line and in result files
    scheme_name = None

    #: Default per-scheme parameters
    defaults = {}

    def __init__(self, cfg=None):
        """
        Args:
            cfg (SolverConfig): Settings; the configuration defaults if None
        """
        self.cfg = cfg or SolverConfig.from_config()
        #: Scheme parameters: defaults updated from the configuration
        self.params = Struct(self.defaults)
        self.params.merge(self.cfg.scheme_params.get(self.scheme_name, {}))
        self._fun = None
        self._grad_fn = None

    def __repr__(self):
        return "<%s: %s>" % (self.__class__.__name__, self.scheme_name)

    def solve(self, target, latent, init=None):
        """Decompose ``target`` with ``latent = (P, Q)`` latent factors

        Args:
            target (DenseTensor3): Tensor to decompose
            latent (tuple): Latent factor counts (P, Q)
            init (Paratuck2Factors): Starting point; seeded uniform draw
                from :func:`init_factors` if None

        Returns:
            SolveResult: Fitted factors and convergence trace

        Raises:
            LayoutError: If ``init`` does not match the tensor or latent
                factors
        """
        if init is None:
            init = init_factors(target.dims, latent, self.cfg.seed)
        layout = init.layout
        if tuple(layout.latent) != tuple(int(v) for v in latent):
            raise LayoutError(
                "Initial factors have latent factors %s, expected %s"
                % (layout.latent, tuple(latent))
            )
        fun = Paratuck2Objective(target, layout)
        self.prepare(target, layout)
        _lgr.info(
            "Solving %s (P, Q) = %s with %s",
            "x".join(str(d) for d in target.dims),
            layout.latent,
            self.scheme_name,
        )
        xfinal, trace = self.run(fun, flatten(init).data, nonnegative=True)
        _lgr.info(
            "%s stopped (%s) after %d iterations, error = %.6e",
            self.scheme_name,
            trace.stop_reason.value,
            trace.iterations,
            trace.final_error,
        )
        return SolveResult(
            factors=unflatten(ParamVector(data=xfinal, layout=layout)),
            trace=trace,
        )

    def prepare(self, target, layout):
        """Hook called by :meth:`solve` before iterating"""

    def reset(self, x0):
        """Initialize per-run state"""

    @abc.abstractmethod
    def step(self, x, fx, niter):
        """Advance one outer iteration and return ``(x_new, f(x_new))``"""

    def run(self, fun, x0, nonnegative=False):
        """Outer iteration loop shared by all schemes

        Args:
            fun (callable): Objective; wrapped for evaluation counting if it
                does not keep a counter
            x0 (np.ndarray): Starting point
            nonnegative (bool): The objective is bounded below by zero, so
                iterates with error at most ``abs_tol`` are not moved

        Returns:
            tuple: Final iterate and its :class:`ConvergenceTrace`
        """
        if count_evals(fun) is None:
            fun = CountedObjective(fun)
        self._fun = fun
        cfg = self.cfg
        trace = ConvergenceTrace()
        x = np.array(x0, dtype=np.float64)
        fx = fun(x)
        trace.append(0, fx)
        if not np.isfinite(fx):
            _lgr.warning("%s: non-finite initial error", self.scheme_name)
            trace.finish(StopReason.NUMERIC, count_evals(fun))
            return x, trace

        self.reset(x)
        stop = StopReason.MAX_ITERS
        for niter in range(1, cfg.max_iters + 1):
            if nonnegative and fx <= cfg.abs_tol:
                xnew, fnew = x, fx
            else:
                try:
                    xnew, fnew = self.step(x, fx, niter)
                except NumericError as err:
                    _lgr.warning(
                        "%s: iteration %d aborted: %s",
                        self.scheme_name,
                        niter,
                        err,
                    )
                    stop = StopReason.NUMERIC
                    break
                if not (np.isfinite(fnew) and np.all(np.isfinite(xnew))):
                    _lgr.warning(
                        "%s: non-finite iterate at iteration %d",
                        self.scheme_name,
                        niter,
                    )
                    stop = StopReason.NUMERIC
                    break
            trace.append(niter, fnew, np.linalg.norm(xnew - x))
            x, fx = xnew, fnew
            _lgr.debug("%s: iter = %d error = %.12e", self.scheme_name, niter, fx)
            if trace.relative_change() < cfg.rel_tol:
                stop = StopReason.TOLERANCE
                break
        trace.finish(stop, count_evals(fun))
        return x, trace


class GradientScheme(ResolutionScheme):
    """Schemes driven by (finite-difference) gradients of a vector objective

    These schemes apply to any smooth objective through :meth:`minimize`.
    """

    def minimize(self, fun, x0, grad=None):
        """Minimize ``fun`` starting from ``x0``

        Args:
            fun (callable): Objective mapping a 1-d array to a float
            x0 (np.ndarray): Starting point
            grad (callable): Analytic gradient; finite differences if None

        Returns:
            tuple: Final iterate and its :class:`ConvergenceTrace`
        """
        self._grad_fn = grad
        try:
            return self.run(fun, x0)
        finally:
            self._grad_fn = None

    def solve(self, target, latent, init=None):
        self._grad_fn = None
        return super().solve(target, latent, init)

    def gradient(self, x):
        """Gradient of the objective at ``x``"""
        if self._grad_fn is not None:
            grad = np.asarray(self._grad_fn(x), dtype=np.float64)
            if not np.all(np.isfinite(grad)):
                raise NumericError("Non-finite analytic gradient")
            return grad
        return fd_gradient(self._fun, x, self.cfg.fd)

    def hessian_vec(self, x, p, grad):
        """Forward-difference Hessian-vector product reusing ``grad``"""
        return hessian_vec_product(
            self._fun, x, p, self.cfg.fd, grad=grad, grad_fn=self.gradient
        )

    def line_step(self, x, fx, p, grad):
        """Wolfe step along ``p``, falling back to steepest descent

        A step that does not decrease the objective is rejected and ``x`` is
        returned unchanged.
        """
        try:
            res = wolfe_line_search(
                self._fun,
                x,
                p,
                grad,
                self.cfg.line_search,
                fx=fx,
                fd=self.cfg.fd,
                grad_fn=self._grad_fn,
            )
        except NonDescentError:
            if not np.any(grad):
                return x, fx
            _lgr.debug("%s: reset to steepest descent", self.scheme_name)
            res = wolfe_line_search(
                self._fun,
                x,
                -grad,
                grad,
                self.cfg.line_search,
                fx=fx,
                fd=self.cfg.fd,
                grad_fn=self._grad_fn,
            )
        if res.degraded:
            _lgr.debug(
                "%s: Wolfe conditions not met after %d trials",
                self.scheme_name,
                res.n_trials,
            )
        if not res.fx < fx:
            return x, fx
        return res.x, res.fx


class APHEN(GradientScheme):
    """Truncated Newton with finite-difference Hessian-vector products

    The Newton system :math:`\\nabla^2 f\\, p = -\\nabla f` is solved
    approximately by conjugate gradients; each Hessian-vector product costs
    one extra finite-difference gradient. The inner loop stops on the forcing
    tolerance ``forcing * min(1, sqrt(|g|)) * |g|`` or on negative curvature.
    """

    scheme_name = "aphen"
    defaults = {"cg_max_iters": None, "forcing": 0.5}

    def newton_direction(self, x, grad):
        """Approximate Newton direction by conjugate gradients"""
        gnorm = np.linalg.norm(grad)
        max_inner = self.params.cg_max_iters or grad.size
        tol = self.params.forcing * min(1.0, np.sqrt(gnorm)) * gnorm
        z = np.zeros_like(grad)
        res = grad.copy()
        d = -res
        rr = np.dot(res, res)
        for j in range(int(max_inner)):
            hd = self.hessian_vec(x, d, grad)
            curv = np.dot(d, hd)
            if curv <= 0.0:
                return -grad if j == 0 else z
            alpha = rr / curv
            z = z + alpha * d
            res = res + alpha * hd
            rr_new = np.dot(res, res)
            if np.sqrt(rr_new) < tol:
                break
            d = -res + (rr_new / rr) * d
            rr = rr_new
        return z

    def step(self, x, fx, niter):
        grad = self.gradient(x)
        if not np.any(grad):
            return x, fx
        p = self.newton_direction(x, grad)
        return self.line_step(x, fx, p, grad)


class NonNegativeALS(ResolutionScheme):
    """Alternating multiplicative updates for non-negative Paratuck2

    Each outer iteration updates ``A``, the ``D^A`` diagonals, ``H``, the
    ``D^B`` diagonals and ``B`` in that order. A block ``W`` solving the
    linear model ``x ~ Z w`` is updated by

    .. math::

       w \\leftarrow w \\odot \\frac{Z^T x}{Z^T Z w + \\delta}

    which keeps every entry non-negative when the target and the starting
    factors are non-negative.
    """

    scheme_name = "als"
    defaults = {"floor": 1.0e-12}

    def __init__(self, cfg=None):
        super().__init__(cfg)
        self._layout = None
        self._slices = None
        self._wide = None
        self._vec = None
        self._transposed = None

    def prepare(self, target, layout):
        if np.any(target.array < 0.0):
            raise ValueError("Non-negative ALS requires a non-negative tensor")
        self._layout = layout
        kdim = layout.K
        self._slices = [frontal_slice(target, k) for k in range(kdim)]
        self._wide = unfold_wide(target)
        self._vec = vec_tensor(target)
        self._transposed = np.hstack([xk.T for xk in self._slices])

    def reset(self, x0):
        if np.any(x0 < 0.0):
            raise ValueError("Non-negative ALS requires non-negative factors")

    @staticmethod
    def _update(w, zt_x, zt_z_w, floor):
        return w * zt_x / (zt_z_w + floor)

    def step(self, x, fx, niter):
        floor = self.params.floor
        a, da, h, db, b = (
            np.array(blk) for blk in split_blocks(x, self._layout)
        )
        kdim = self._layout.K

        # A: X_wide ~ A [Da_1 H Db_1 B^T, ..., Da_K H Db_K B^T]
        fmat = np.hstack(
            [(da[k][:, None] * h * db[k][None, :]) @ b.T for k in range(kdim)]
        )
        a = self._update(a, self._wide @ fmat.T, a @ (fmat @ fmat.T), floor)

        # D^A: vec(X_k) ~ ((B Db_k H^T) kr A) da_k
        for k in range(kdim):
            zmat = khatri_rao(b @ (db[k][:, None] * h.T), a)
            xk = self._slices[k].ravel(order="F")
            da[k] = self._update(
                da[k], zmat.T @ xk, zmat.T @ (zmat @ da[k]), floor
            )

        # H: vec(X) ~ [kron(B Db_k, A Da_k)]_k vec(H)
        zmat = np.vstack(
            [np.kron(b * db[k], a * da[k]) for k in range(kdim)]
        )
        hvec = h.ravel(order="F")
        hvec = self._update(
            hvec, zmat.T @ self._vec, zmat.T @ (zmat @ hvec), floor
        )
        h = hvec.reshape(h.shape, order="F")

        # D^B: vec(X_k) ~ (B kr (A Da_k H)) db_k
        for k in range(kdim):
            zmat = khatri_rao(b, (a * da[k]) @ h)
            xk = self._slices[k].ravel(order="F")
            db[k] = self._update(
                db[k], zmat.T @ xk, zmat.T @ (zmat @ db[k]), floor
            )

        # B: [X_1^T, ..., X_K^T] ~ B [G_1, ..., G_K], G_k = (A Da_k H Db_k)^T
        gmat = np.hstack(
            [((a * da[k]) @ h * db[k][None, :]).T for k in range(kdim)]
        )
        b = self._update(b, self._transposed @ gmat.T, b @ (gmat @ gmat.T), floor)

        xnew = np.concatenate([blk.ravel() for blk in (a, da, h, db, b)])
        return xnew, self._fun(xnew)


class GradientDescent(GradientScheme):
    """Steepest descent with a Wolfe line search"""

    scheme_name = "gd"

    def step(self, x, fx, niter):
        grad = self.gradient(x)
        if not np.any(grad):
            return x, fx
        return self.line_step(x, fx, -grad, grad)


class Nesterov(GradientScheme):
    """Nesterov accelerated gradient with a constant learning rate

    .. math::

       v_{n+1} = \\gamma v_n + \\eta \\nabla f(x_n - \\gamma v_n), \\qquad
       x_{n+1} = x_n - v_{n+1}
    """

    scheme_name = "nag"
    defaults = {"gamma": 0.9, "learning_rate": 1.0e-3}

    def reset(self, x0):
        self.velocity = np.zeros_like(x0)

    def step(self, x, fx, niter):
        gamma = self.params.gamma
        grad = self.gradient(x - gamma * self.velocity)
        self.velocity = gamma * self.velocity + self.params.learning_rate * grad
        xnew = x - self.velocity
        return xnew, self._fun(xnew)


class Adam(GradientScheme):
    """Adaptive moment estimation

    ``bias_correction`` selects how the moment estimates are corrected:
    ``constant`` divides by ``1 - beta`` at every iteration and ``power``
    divides by ``1 - beta**n``.
    """

    scheme_name = "adam"
    defaults = {
        "beta1": 0.9,
        "beta2": 0.999,
        "epsilon": 1.0e-8,
        "learning_rate": 1.0e-3,
        "bias_correction": "constant",
    }

    def reset(self, x0):
        if self.params.bias_correction not in ("constant", "power"):
            raise ValueError(
                "Unknown Adam bias correction: %r" % self.params.bias_correction
            )
        self.moment1 = np.zeros_like(x0)
        self.moment2 = np.zeros_like(x0)

    def step(self, x, fx, niter):
        prm = self.params
        grad = self.gradient(x)
        self.moment1 = prm.beta1 * self.moment1 + (1.0 - prm.beta1) * grad
        self.moment2 = prm.beta2 * self.moment2 + (1.0 - prm.beta2) * grad * grad
        power = niter if prm.bias_correction == "power" else 1
        mhat = self.moment1 / (1.0 - prm.beta1 ** power)
        vhat = self.moment2 / (1.0 - prm.beta2 ** power)
        xnew = x - prm.learning_rate * mhat / (np.sqrt(vhat) + prm.epsilon)
        return xnew, self._fun(xnew)


class SAGA(GradientScheme):
    """Variance-reduced direction built from the gradient history

    .. math::

       d_n = \\nabla f_n - \\nabla f_{n-1}
             + \\frac{1}{n} \\sum_{i<n} \\nabla f_i

    The first iteration is a plain gradient step. The step length comes from
    a Wolfe search along :math:`-d_n`, or is the fixed ``step_size`` when one
    is configured.
    """

    scheme_name = "saga"
    defaults = {"step_size": None}

    def reset(self, x0):
        self.grad_sum = np.zeros_like(x0)
        self.prev_grad = None
        self.count = 0

    def step(self, x, fx, niter):
        grad = self.gradient(x)
        if self.count == 0:
            direction = grad
        else:
            direction = grad - self.prev_grad + self.grad_sum / self.count
        self.grad_sum += grad
        self.prev_grad = grad
        self.count += 1
        step_size = self.params.step_size
        if step_size is not None:
            xnew = x - step_size * direction
            return xnew, self._fun(xnew)
        if not np.any(grad):
            return x, fx
        return self.line_step(x, fx, -direction, grad)


class BFGS(GradientScheme):
    """Quasi-Newton scheme with a dense BFGS Hessian approximation

    Starts from the identity and applies the rank-two update

    .. math::

       B_{n+1} = B_n + \\frac{y y^T}{y^T s} - \\frac{B_n s s^T B_n}{s^T B_n s}

    only when ``y^T s > curvature_guard * |y| |s|``, which keeps ``B``
    symmetric positive definite.
    """

    scheme_name = "bfgs"
    defaults = {"curvature_guard": 1.0e-10}

    def reset(self, x0):
        #: Current Hessian approximation
        self.hessian_approx = np.eye(x0.size)
        self._grad = None
        self.n_skipped = 0

    def direction(self, grad):
        """Solve ``B p = -grad``"""
        try:
            return sla.solve(self.hessian_approx, -grad, assume_a="sym")
        except (sla.LinAlgError, ValueError):
            _lgr.debug("bfgs: singular Hessian approximation, using -grad")
            return -grad

    def step(self, x, fx, niter):
        grad = self.gradient(x) if self._grad is None else self._grad
        if not np.any(grad):
            return x, fx
        xnew, fnew = self.line_step(x, fx, self.direction(grad), grad)
        if xnew is x:
            return x, fx
        gnew = self.gradient(xnew)
        s = xnew - x
        y = gnew - grad
        ys = np.dot(y, s)
        guard = self.params.curvature_guard
        if ys > guard * np.linalg.norm(y) * np.linalg.norm(s):
            bs = self.hessian_approx @ s
            self.hessian_approx = (
                self.hessian_approx
                + np.outer(y, y) / ys
                - np.outer(bs, bs) / np.dot(s, bs)
            )
        else:
            self.n_skipped += 1
        self._grad = gnew
        return xnew, fnew


def get_solver(name):
    """Return the scheme class registered under ``name``

    Raises:
        KeyError: If no scheme uses that name
    """
    try:
        return ResolutionScheme.scheme_map[name]
    except KeyError:
        raise KeyError(
            "Unknown solver %r; valid solvers are: %s"
            % (name, ", ".join(SOLVER_NAMES))
        )


def _solve_with(name):
    def solver(target, latent, cfg=None, init=None):
        return get_solver(name)(cfg).solve(target, latent, init=init)

    solver.__name__ = "solve_" + name
    solver.__doc__ = """Decompose ``target`` with the %s scheme

    Args:
        target (DenseTensor3): Tensor to decompose
        latent (tuple): Latent factor counts (P, Q)
        cfg (SolverConfig): Settings; configuration defaults if None
        init (Paratuck2Factors): Starting point; seeded draw if None

    Returns:
        SolveResult: Fitted factors and convergence trace
    """ % get_solver(name).__name__
    return solver


solve_aphen = _solve_with("aphen")
solve_als = _solve_with("als")
solve_gd = _solve_with("gd")
solve_nag = _solve_with("nag")
solve_adam = _solve_with("adam")
solve_saga = _solve_with("saga")
solve_bfgs = _solve_with("bfgs")
