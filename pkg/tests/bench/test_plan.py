# -*- coding: utf-8 -*-

"""
tdsolve.bench.plan Tests
"""

import pytest

from tdsolve.bench.plan import (
    SUITE_PROBLEMS,
    BenchPlan,
    BenchRecord,
    Problem,
    parse_shape,
    suite_plan,
)
from tdsolve.optim.solvers import SOLVER_NAMES

plan_yaml = """
bench_plan:
  problems:
    - dims: 5x5x5
      latent: 2x3
    - dims: [10, 10, 10]
      latent: [3, 4]
  solvers: [aphen, als]
  seeds: [0, 1]
  max_iters: 50
"""


def test_parse_shape():
    """Shape strings and sequences"""
    assert parse_shape("5x4x3", 3) == (5, 4, 3)
    assert parse_shape([2, 3], 2) == (2, 3)
    for bad in ("5x5", "5xax5", "5x0x5"):
        with pytest.raises(ValueError):
            parse_shape(bad, 3)


def test_problem():
    """Problem identifiers"""
    prob = Problem("5x5x5", "2x3")
    assert prob.dims == (5, 5, 5)
    assert prob.latent == (2, 3)
    assert prob.name == "5x5x5_2x3"


def test_suite_problems():
    """Benchmark suite contents"""
    assert len(SUITE_PROBLEMS) == 7
    assert SUITE_PROBLEMS[0] == Problem((5, 5, 5), (2, 3))
    assert SUITE_PROBLEMS[-1] == Problem((100, 100, 20), (3, 5))
    plan = suite_plan()
    assert len(plan.problems) == 6
    assert plan.solvers == SOLVER_NAMES
    assert plan.seeds == (0, 1, 2, 3, 4)
    assert len(suite_plan(full=True).problems) == 7


def test_plan_validation():
    """Plans need problems, valid solvers and seeds"""
    prob = Problem((2, 2, 2), (1, 1))
    with pytest.raises(ValueError):
        BenchPlan(problems=())
    with pytest.raises(ValueError) as excinfo:
        BenchPlan(problems=(prob,), solvers=("bogus",))
    assert "aphen" in str(excinfo.value)
    with pytest.raises(ValueError):
        BenchPlan(problems=(prob,), seeds=())
    with pytest.raises(ValueError):
        BenchPlan(problems=(prob,), ordinate="log2")


def test_plan_cells():
    """Cells in problem, solver, seed order"""
    plan = BenchPlan(
        problems=(Problem((2, 2, 2), (1, 1)), Problem((3, 2, 2), (1, 1))),
        solvers=("gd", "als"),
        seeds=(0, 1),
    )
    cells = list(plan.cells())
    assert len(cells) == len(plan) == 8
    assert [c[1] for c in cells[:4]] == ["gd", "gd", "als", "als"]
    assert cells[0][0].name == "2x2x2_1x1"
    assert cells[-1][0].name == "3x2x2_1x1"


def test_plan_yaml(tmpdir):
    """Plans load from YAML files"""
    fname = tmpdir.join("plan.yaml")
    fname.write(plan_yaml)
    plan = BenchPlan.from_yaml(str(fname))
    assert plan.problems[1] == Problem((10, 10, 10), (3, 4))
    assert plan.solvers == ("aphen", "als")
    assert plan.seeds == (0, 1)
    assert plan.max_iters == 50
    cfg = plan.solver_config(1)
    assert cfg.max_iters == 50
    assert cfg.seed == 1
    assert cfg.rel_tol == 1.0e-6

    fname.write("bench_plan:\n  problems: []\n  solver: [gd]\n")
    with pytest.raises(ValueError):
        BenchPlan.from_yaml(str(fname))


def test_plan_yaml_suite():
    """The suite flag expands to the benchmark problems"""
    plan = BenchPlan.from_dict(dict(paper_suite=True, seeds=[0]))
    assert plan.problems == SUITE_PROBLEMS[:-1]
    plan = BenchPlan.from_dict(dict(paper_suite="full", seeds=[0]))
    assert plan.problems == SUITE_PROBLEMS


def test_record_columns():
    """Summary columns in file order"""
    assert BenchRecord.columns() == [
        "problem",
        "dims",
        "latent",
        "solver",
        "seed",
        "final_error",
        "accuracy",
        "iter_speed",
        "time_speed",
        "iterations",
        "elapsed_s",
        "objective_evals",
        "stop_reason",
    ]
