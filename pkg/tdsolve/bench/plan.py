# -*- coding: utf-8 -*-

"""\
Benchmark plans
---------------

A :class:`BenchPlan` is the matrix of (problem, solver, seed) cells executed
by :func:`~tdsolve.bench.runner.run_benchmark`. Plans are built from command
line flags, from :func:`suite_plan`, or from a YAML file:

.. code-block:: yaml

   bench_plan:
     problems:
       - dims: 5x5x5
         latent: 2x3
       - dims: [10, 10, 10]
         latent: [3, 4]
     solvers: [aphen, als]
     seeds: [0, 1, 2]
     max_iters: 500
     rel_tol: 1.0e-6
     eta: 1.0e-4
"""

import itertools
import logging
from dataclasses import dataclass, field, fields

from ..config import config as tdconfig
from ..optim.solvers import SOLVER_NAMES, SolverConfig
from ..post.metrics import ORDINATES
from ..tensor.decomp import positive_ints
from ..utils.struct import Struct

_lgr = logging.getLogger(__name__)


def parse_shape(value, ndim, what="dimensions"):
    """Parse ``"5x5x5"`` or a sequence of integers into a tuple

    Raises:
        ValueError: If the shape is malformed or has the wrong length
    """
    if isinstance(value, str):
        try:
            values = [int(v) for v in value.lower().split("x")]
        except ValueError:
            raise ValueError("Malformed %s: %r" % (what, value))
    else:
        values = list(value)
    if len(values) != ndim:
        raise ValueError(
            "Expected %d %s, got %r" % (ndim, what, value)
        )
    return positive_ints(values, what.capitalize())


def format_shape(shape):
    """Format a shape tuple as ``5x5x5``"""
    return "x".join(str(v) for v in shape)


@dataclass(frozen=True)
class Problem:
    """Tensor dimensions with the latent factors of the fit"""

    dims: tuple
    latent: tuple

    def __post_init__(self):
        object.__setattr__(self, "dims", parse_shape(self.dims, 3))
        object.__setattr__(
            self, "latent", parse_shape(self.latent, 2, "latent factors")
        )

    @property
    def name(self):
        """Identifier used in file names and tables"""
        return "%s_%s" % (format_shape(self.dims), format_shape(self.latent))


#: Problems of the benchmark suite; the last one is only run on request
SUITE_PROBLEMS = tuple(
    Problem(dims, latent)
    for dims, latent in [
        ((5, 5, 5), (2, 3)),
        ((10, 10, 10), (3, 4)),
        ((15, 10, 10), (5, 4)),
        ((15, 15, 15), (5, 6)),
        ((25, 20, 15), (10, 9)),
        ((50, 40, 20), (15, 14)),
        ((100, 100, 20), (3, 5)),
    ]
)


def validate_solvers(names):
    """Check scheme names and return them as a tuple

    Raises:
        ValueError: Listing the valid names if one is unknown
    """
    names = tuple(names)
    unknown = [name for name in names if name not in SOLVER_NAMES]
    if unknown:
        raise ValueError(
            "Unknown solver(s): %s; valid solvers are: %s"
            % (", ".join(unknown), ", ".join(SOLVER_NAMES))
        )
    return names


@dataclass(frozen=True)
class BenchPlan:
    """Problems, schemes and seeds of a benchmark run"""

    problems: tuple
    solvers: tuple = SOLVER_NAMES
    seeds: tuple = (0, 1, 2, 3, 4)
    #: Solver overrides; None keeps the configured value
    max_iters: int = None
    rel_tol: float = None
    eta: float = None
    #: Ordinate of the convergence-speed fit
    ordinate: str = "log10"

    def __post_init__(self):
        problems = tuple(
            prob if isinstance(prob, Problem) else Problem(**prob)
            for prob in self.problems
        )
        object.__setattr__(self, "problems", problems)
        object.__setattr__(self, "solvers", validate_solvers(self.solvers))
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))
        if not (self.problems and self.solvers and self.seeds):
            raise ValueError(
                "A benchmark plan needs at least one problem, solver and seed"
            )
        if self.ordinate not in ORDINATES:
            raise ValueError(
                "Unknown ordinate %r; use one of %s"
                % (self.ordinate, ", ".join(ORDINATES))
            )

    def cells(self):
        """Yield ``(problem, solver, seed)`` in plan order"""
        return itertools.product(self.problems, self.solvers, self.seeds)

    def __len__(self):
        return len(self.problems) * len(self.solvers) * len(self.seeds)

    def solver_config(self, seed, cfg=None):
        """Solver settings of the cells with the given seed"""
        return SolverConfig.from_config(
            cfg,
            max_iters=self.max_iters,
            rel_tol=self.rel_tol,
            eta=self.eta,
            seed=seed,
        )

    @classmethod
    def from_dict(cls, opts):
        """Create a plan from a mapping with the plan fields

        Unknown keys raise ``ValueError``. ``paper_suite: true`` (or
        ``full``) replaces the problem list with :data:`SUITE_PROBLEMS`.
        """
        opts = dict(opts)
        suite = opts.pop("paper_suite", False)
        if suite:
            opts["problems"] = suite_problems(full=(suite == "full"))
        valid = {fld.name for fld in fields(cls)}
        unknown = sorted(set(opts) - valid)
        if unknown:
            raise ValueError("Unknown plan options: %s" % ", ".join(unknown))
        return cls(**opts)

    @classmethod
    def from_yaml(cls, filename, node="bench_plan"):
        """Load a plan from a YAML file

        The plan is read from the ``node`` entry if present, otherwise from
        the top level of the file.
        """
        data = Struct.load_yaml(filename)
        opts = data.get(node, data)
        _lgr.info("Loaded benchmark plan from %s", filename)
        return cls.from_dict(opts)

    @classmethod
    def with_defaults(cls, problems, cfg=None, **kwargs):
        """Plan that takes unset options from ``tdsolve.bench``"""
        cfg = cfg or tdconfig.get_config()
        bopts = cfg.pget("tdsolve.bench") or Struct()
        kwargs = {k: v for k, v in kwargs.items() if v is not None}
        kwargs.setdefault("seeds", tuple(bopts.get("seeds", cls.seeds)))
        kwargs.setdefault("ordinate", bopts.get("ordinate", cls.ordinate))
        return cls(problems=tuple(problems), **kwargs)


def suite_problems(full=False):
    """Benchmark suite problems, with the largest one only if ``full``"""
    return SUITE_PROBLEMS if full else SUITE_PROBLEMS[:-1]


def suite_plan(full=False, **kwargs):
    """Plan over the benchmark suite with every scheme"""
    return BenchPlan(problems=suite_problems(full), **kwargs)


@dataclass
class BenchRecord:
    """Outcome of one (problem, solver, seed) cell"""

    problem: str
    dims: str
    latent: str
    solver: str
    seed: int
    final_error: float
    accuracy: float
    iter_speed: float
    time_speed: float
    iterations: int
    elapsed_s: float
    objective_evals: int
    stop_reason: str
    #: Trace of the run; not part of the summary table
    trace: object = field(default=None, repr=False, compare=False)

    @classmethod
    def columns(cls):
        """Columns of the summary CSV"""
        return [fld.name for fld in fields(cls) if fld.name != "trace"]

    def as_row(self):
        """Summary values in column order"""
        return [getattr(self, col) for col in self.columns()]

    @property
    def trace_filename(self):
        """Name of the trace CSV of this cell"""
        return "trace_%s_%s_seed%d.csv" % (self.problem, self.solver, self.seed)
