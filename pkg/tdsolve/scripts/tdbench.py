# -*- coding: utf-8 -*-

"""\
Benchmark command
-----------------

Runs resolution schemes on the synthetic benchmark tensors and writes
convergence traces, the per-run summary and the aggregated tables as CSV.

Examples::

    tdsolve_bench --dims 5x5x5 --latent 2x3 --solvers aphen,als --seeds 0
    tdsolve_bench --paper-suite --jobs 4 --out results
    tdsolve_bench --plan my_plan.yaml
    tdsolve_bench --max-iters 200 --write-config tdsolve.yaml
"""

import argparse
import logging
import sys

from ..bench.plan import (
    BenchPlan,
    Problem,
    parse_shape,
    suite_problems,
    validate_solvers,
)
from ..bench.runner import run_benchmark
from ..post.metrics import ORDINATES
from .core import TDScriptBase

_lgr = logging.getLogger(__name__)


def _argtype(func):
    """Turn ``ValueError`` from ``func`` into an argparse usage error"""

    def converter(text):
        try:
            return func(text)
        except ValueError as err:
            raise argparse.ArgumentTypeError(str(err))

    converter.__name__ = func.__name__
    return converter


@_argtype
def dims_arg(text):
    """Tensor dimensions ``IxJxK``"""
    return parse_shape(text, 3)


@_argtype
def latent_arg(text):
    """Latent factors ``PxQ``"""
    return parse_shape(text, 2, "latent factors")


@_argtype
def solvers_arg(text):
    """Comma-separated scheme names"""
    return validate_solvers(s.strip() for s in text.split(",") if s.strip())


@_argtype
def seeds_arg(text):
    """Comma-separated integer seeds"""
    return tuple(int(s) for s in text.split(",") if s.strip())


class BenchCmd(TDScriptBase):
    """Benchmark the resolution schemes on synthetic tensors"""

    description = "Benchmark Paratuck2 resolution schemes"

    def cli_options(self):
        super().cli_options()
        parser = self.parser
        parser.add_argument(
            '--dims',
            action='append',
            type=dims_arg,
            default=[],
            help="tensor dimensions IxJxK (repeatable)",
        )
        parser.add_argument(
            '--latent',
            action='append',
            type=latent_arg,
            default=[],
            help="latent factors PxQ, paired with --dims by position",
        )
        parser.add_argument(
            '--solvers',
            type=solvers_arg,
            default=None,
            help="comma-separated solvers (default: all)",
        )
        parser.add_argument(
            '--seeds',
            type=seeds_arg,
            default=None,
            help="comma-separated initialization seeds",
        )
        parser.add_argument(
            '--max-iters', type=int, default=None, help="maximum iterations"
        )
        parser.add_argument(
            '--tol',
            type=float,
            default=None,
            help="relative change of the error for convergence",
        )
        parser.add_argument(
            '--eta',
            type=float,
            default=None,
            help="finite-difference perturbation",
        )
        parser.add_argument(
            '-j', '--jobs', type=int, default=None, help="worker processes"
        )
        parser.add_argument(
            '-o', '--out', default=None, help="output directory"
        )
        suite = parser.add_mutually_exclusive_group(required=False)
        suite.add_argument(
            '--paper-suite',
            action='store_true',
            help="run the benchmark suite without the largest problem",
        )
        suite.add_argument(
            '--paper-suite-full',
            action='store_true',
            help="run the full benchmark suite",
        )
        suite.add_argument(
            '--plan', default=None, help="YAML benchmark plan file"
        )
        parser.add_argument(
            '--ordinate',
            choices=ORDINATES,
            default=None,
            help="ordinate of the convergence-speed fit",
        )
        parser.add_argument(
            '--write-config',
            nargs='?',
            const="-",
            default=None,
            metavar="FILE",
            help="write the effective configuration (stdout if no FILE) and exit",
        )

    def build_plan(self):
        """Create the benchmark plan from the command line"""
        args = self.args
        overrides = dict(
            solvers=args.solvers,
            seeds=args.seeds,
            max_iters=args.max_iters,
            rel_tol=args.tol,
            eta=args.eta,
            ordinate=args.ordinate,
        )
        if args.plan:
            plan = BenchPlan.from_yaml(args.plan)
            changes = {k: v for k, v in overrides.items() if v is not None}
            if args.dims:
                changes["problems"] = self.cli_problems()
            if changes:
                opts = {
                    key: getattr(plan, key)
                    for key in (
                        "problems",
                        "solvers",
                        "seeds",
                        "max_iters",
                        "rel_tol",
                        "eta",
                        "ordinate",
                    )
                }
                opts.update(changes)
                plan = BenchPlan(**opts)
            return plan
        if args.paper_suite or args.paper_suite_full:
            problems = suite_problems(full=args.paper_suite_full)
        else:
            problems = self.cli_problems()
        return BenchPlan.with_defaults(problems, self.cfg, **overrides)

    def cli_problems(self):
        """Problems from the paired ``--dims`` and ``--latent`` flags"""
        args = self.args
        if not args.dims:
            self.parser.error(
                "provide --dims/--latent, --paper-suite or --plan"
            )
        if len(args.dims) != len(args.latent):
            self.parser.error(
                "every --dims needs a matching --latent (%d vs. %d)"
                % (len(args.dims), len(args.latent))
            )
        return [Problem(dims, lat) for dims, lat in zip(args.dims, args.latent)]

    def effective_config(self):
        """Copy of the configuration with the command-line overrides applied"""
        args = self.args
        cfg = self.cfg.__class__.from_yaml(self.cfg.to_yaml())
        overrides = (
            ("tdsolve.solvers.max_iters", args.max_iters),
            ("tdsolve.solvers.rel_tol", args.tol),
            ("tdsolve.solvers.eta", args.eta),
            ("tdsolve.bench.seeds", list(args.seeds or ()) or None),
            ("tdsolve.bench.jobs", args.jobs),
            ("tdsolve.bench.out_dir", args.out),
            ("tdsolve.bench.ordinate", args.ordinate),
        )
        for path, value in overrides:
            if value is not None:
                cfg.pset(path, value)
        return cfg

    def write_config(self):
        """Dump the effective configuration"""
        out_file = self.args.write_config
        cfg = self.effective_config()
        if out_file == "-":
            cfg.write_config(sys.stdout)
            return
        try:
            with open(out_file, 'w', encoding='utf-8') as fh:
                cfg.write_config(fh)
        except OSError as err:
            _lgr.error("Cannot write configuration: %s", err)
            self.parser.exit(1)
        _lgr.info("Configuration written to %s", out_file)

    def __call__(self):
        super().__call__()
        args = self.args
        if args.write_config is not None:
            self.write_config()
            return
        bopts = self.cfg.tdsolve.bench
        try:
            plan = self.build_plan()
        except ValueError as err:
            self.parser.error(str(err))
        except OSError as err:
            _lgr.error("Cannot read benchmark plan: %s", err)
            self.parser.exit(1)
        jobs = args.jobs or int(bopts.get("jobs", 1))
        out_dir = args.out or bopts.get("out_dir", "results")
        try:
            run_benchmark(plan, out_dir=out_dir, jobs=jobs, cfg=self.cfg)
        except OSError as err:
            _lgr.error("Cannot write benchmark results: %s", err)
            self.parser.exit(1)
        _lgr.info("Results written to %s", out_dir)


def cli_main(argv=None):
    """Run the benchmark command and return its exit code"""
    try:
        cmd = BenchCmd(name="tdsolve_bench", args=argv)
        cmd()
    except SystemExit as err:
        if err.code is None:
            return 0
        return err.code if isinstance(err.code, int) else 1
    return 0


def main():
    """Run tdsolve_bench command"""
    sys.exit(cli_main(sys.argv[1:]))
