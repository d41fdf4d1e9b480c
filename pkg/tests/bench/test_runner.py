# -*- coding: utf-8 -*-

"""
tdsolve.bench.runner Tests
"""

import os

import numpy as np
import pandas as pd
import pytest

from tdsolve.bench.plan import BenchPlan, Problem
from tdsolve.bench.runner import run_benchmark, summarize
from tdsolve.bench.synthetic import synth_tensor
from tdsolve.post.metrics import accuracy_from_error
from tdsolve.post.traces import load_trace
from tdsolve.tensor.core import norm


def small_plan(**kwargs):
    opts = dict(
        problems=(Problem((3, 3, 2), (1, 2)),),
        solvers=("gd", "als"),
        seeds=(0,),
        max_iters=5,
    )
    opts.update(kwargs)
    return BenchPlan(**opts)


def test_run_benchmark_outputs(tmpdir):
    """One record and one trace file per cell"""
    out_dir = str(tmpdir.join("results"))
    records = run_benchmark(small_plan(), out_dir=out_dir)
    assert [rec.solver for rec in records] == ["gd", "als"]
    files = sorted(os.listdir(out_dir))
    assert "summary.csv" in files
    assert "trace_3x3x2_1x2_gd_seed0.csv" in files
    assert "trace_3x3x2_1x2_als_seed0.csv" in files
    for fname in ("table_accuracy.csv", "table_iter_speed.csv",
                  "table_time_speed.csv"):
        assert fname in files

    summary = pd.read_csv(
        os.path.join(out_dir, "summary.csv"), float_precision="round_trip"
    )
    assert list(summary.columns) == records[0].columns()
    tnorm = norm(synth_tensor((3, 3, 2)))
    for _, row in summary.iterrows():
        assert row["accuracy"] == pytest.approx(
            accuracy_from_error(row["final_error"], tnorm), abs=1e-9
        )
        assert row["iterations"] <= 5

    for rec in records:
        trace = load_trace(os.path.join(out_dir, rec.trace_filename))
        assert trace.iters[0] == 0
        assert trace.errors[-1] == rec.final_error
        if rec.stop_reason == "tolerance":
            err = trace.errors
            assert abs(err[-1] - err[-2]) < 1.0e-6 * abs(err[-1])


def test_run_benchmark_deterministic(tmpdir):
    """Identical plans give identical summaries except timings"""
    plan = small_plan(solvers=("aphen", "bfgs", "nag"))
    dir1 = str(tmpdir.join("run1"))
    dir2 = str(tmpdir.join("run2"))
    run_benchmark(plan, out_dir=dir1)
    run_benchmark(plan, out_dir=dir2)
    timing = ["time_speed", "elapsed_s"]
    df1 = pd.read_csv(os.path.join(dir1, "summary.csv")).drop(columns=timing)
    df2 = pd.read_csv(os.path.join(dir2, "summary.csv")).drop(columns=timing)
    pd.testing.assert_frame_equal(df1, df2)
    for fname in os.listdir(dir1):
        if fname.startswith("trace_"):
            t1 = load_trace(os.path.join(dir1, fname))
            t2 = load_trace(os.path.join(dir2, fname))
            np.testing.assert_array_equal(t1.errors, t2.errors)


def test_run_benchmark_jobs():
    """Worker processes keep the plan order"""
    plan = small_plan(solvers=("gd", "adam", "saga"), seeds=(0, 1))
    serial = run_benchmark(plan)
    parallel = run_benchmark(plan, jobs=2)
    assert [(r.solver, r.seed) for r in parallel] == [
        (r.solver, r.seed) for r in serial
    ]
    for r1, r2 in zip(serial, parallel):
        assert r1.final_error == r2.final_error


def test_summarize():
    """Best accuracy and median speeds over seeds"""
    records = run_benchmark(small_plan(seeds=(0, 1, 2)))
    tables = summarize(records)
    acc = tables["table_accuracy.csv"]
    assert list(acc.columns) == ["als", "gd"]
    assert list(acc.index) == ["3x3x2_1x2"]
    gd_acc = [r.accuracy for r in records if r.solver == "gd"]
    assert acc.loc["3x3x2_1x2", "gd"] == max(gd_acc)
    speed = tables["table_iter_speed.csv"]
    gd_speed = [r.iter_speed for r in records if r.solver == "gd"]
    assert speed.loc["3x3x2_1x2", "gd"] == pytest.approx(np.median(gd_speed))
