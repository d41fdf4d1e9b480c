# -*- coding: utf-8 -*-

"""\
Benchmark runner
----------------

Executes every cell of a :class:`~tdsolve.bench.plan.BenchPlan`, computes the
comparison metrics and writes:

  - one trace CSV per cell (``iter,elapsed_s,error``),
  - ``summary.csv`` with one row per cell in plan order,
  - ``table_accuracy.csv`` (best over seeds), ``table_iter_speed.csv`` and
    ``table_time_speed.csv`` (median over seeds), with one row per problem
    and one column per solver.
"""

import logging
import os
from concurrent.futures import ProcessPoolExecutor

import numpy as np
import pandas as pd

from ..optim.solvers import SOLVER_NAMES, get_solver
from ..optim.trace import ConvergenceTrace, StopReason
from ..post.metrics import (
    MetricError,
    SpeedMode,
    accuracy_from_error,
    convergence_speed,
)
from ..post.traces import write_frame, write_trace
from ..tensor.core import norm
from ..utils import osutils
from .plan import BenchRecord, format_shape
from .synthetic import synth_tensor

_lgr = logging.getLogger(__name__)

#: Summary file name
SUMMARY_FILE = "summary.csv"

#: Aggregated tables: file name, record column, aggregation over seeds
TABLES = (
    ("table_accuracy.csv", "accuracy", "max"),
    ("table_iter_speed.csv", "iter_speed", "median"),
    ("table_time_speed.csv", "time_speed", "median"),
)


def _speed(trace, mode, ordinate):
    try:
        return convergence_speed(trace, mode, ordinate)
    except MetricError as err:
        _lgr.debug("Convergence speed undefined: %s", err)
        return np.nan


def run_cell(problem, solver, seed, solver_cfg, ordinate="log10"):
    """Run one benchmark cell

    A solver that stops on a numeric failure still produces a record with
    ``stop_reason = numeric``.

    Args:
        problem (Problem): Tensor dimensions and latent factors
        solver (str): Scheme name
        seed (int): Initialization seed
        solver_cfg (SolverConfig): Solver settings with ``seed`` applied
        ordinate (str): Ordinate of the convergence-speed fit

    Returns:
        BenchRecord: Metrics of the run with its trace attached
    """
    target = synth_tensor(problem.dims)
    scheme = get_solver(solver)(solver_cfg)
    try:
        trace = scheme.solve(target, problem.latent).trace
    except (ArithmeticError, np.linalg.LinAlgError) as err:
        _lgr.warning(
            "%s on %s (seed %d) failed: %s", solver, problem.name, seed, err
        )
        trace = ConvergenceTrace()
        trace.append(0, np.nan)
        trace.finish(StopReason.NUMERIC)

    final_error = trace.final_error
    try:
        acc = accuracy_from_error(final_error, norm(target))
    except MetricError:
        acc = np.nan
    if not np.isfinite(final_error):
        acc = np.nan
    record = BenchRecord(
        problem=problem.name,
        dims=format_shape(problem.dims),
        latent=format_shape(problem.latent),
        solver=solver,
        seed=int(seed),
        final_error=final_error,
        accuracy=acc,
        iter_speed=_speed(trace, SpeedMode.ITERATION_BASED, ordinate),
        time_speed=_speed(trace, SpeedMode.TIME_BASED, ordinate),
        iterations=trace.iterations,
        elapsed_s=float(trace.elapsed[-1]),
        objective_evals=trace.objective_evals,
        stop_reason=trace.stop_reason.value,
        trace=trace,
    )
    _lgr.info(
        "%s %s seed=%d: error = %.6e, accuracy = %.4f, %d iterations (%s)",
        problem.name,
        solver,
        seed,
        final_error,
        acc,
        record.iterations,
        record.stop_reason,
    )
    return record


def _run_task(task):
    return run_cell(*task)


def run_benchmark(plan, out_dir=None, jobs=1, cfg=None):
    """Run every cell of ``plan``

    Args:
        plan (BenchPlan): Benchmark plan
        out_dir (path): Directory for the CSV outputs; nothing is written if
            None
        jobs (int): Number of worker processes
        cfg (TDConfig): Configuration for solver defaults

    Returns:
        list: :class:`BenchRecord` in plan order
    """
    configs = {seed: plan.solver_config(seed, cfg) for seed in plan.seeds}
    tasks = [
        (problem, solver, seed, configs[seed], plan.ordinate)
        for problem, solver, seed in plan.cells()
    ]
    _lgr.info("Running %d benchmark cells with %d job(s)", len(tasks), jobs)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_run_task, tasks))
    else:
        records = [_run_task(task) for task in tasks]
    if out_dir is not None:
        write_results(records, out_dir)
    return records


def records_frame(records):
    """Summary table of the records as a :class:`pandas.DataFrame`"""
    return pd.DataFrame(
        [rec.as_row() for rec in records], columns=BenchRecord.columns()
    )


def summarize(records):
    """Pivot the records into per-problem, per-solver tables

    Returns:
        dict: Mapping of table file name to :class:`pandas.DataFrame`
    """
    df = records_frame(records)
    problems = list(dict.fromkeys(df["problem"]))
    solvers = [name for name in SOLVER_NAMES if name in set(df["solver"])]
    tables = {}
    for fname, column, how in TABLES:
        table = df.pivot_table(
            index="problem", columns="solver", values=column, aggfunc=how
        )
        tables[fname] = table.reindex(index=problems, columns=solvers)
    return tables


def write_results(records, out_dir):
    """Write trace files, the summary and the aggregated tables"""
    out_dir = osutils.ensure_directory(osutils.abspath(out_dir))
    for rec in records:
        if rec.trace is not None:
            write_trace(rec.trace, os.path.join(out_dir, rec.trace_filename))
    write_frame(records_frame(records), os.path.join(out_dir, SUMMARY_FILE))
    for fname, table in summarize(records).items():
        write_frame(table, os.path.join(out_dir, fname), index=True)
    _lgr.info("Benchmark results written to %s", out_dir)
    return out_dir
