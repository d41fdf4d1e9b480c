# -*- coding: utf-8 -*-

"""\
Benchmark harness: synthetic tensors, plans and the runner
"""

from .synthetic import synth_imbalanced_tensor, synth_tensor
from .plan import (
    SUITE_PROBLEMS,
    BenchPlan,
    BenchRecord,
    Problem,
    parse_shape,
    suite_plan,
)
from .runner import run_benchmark, run_cell, summarize, write_results
