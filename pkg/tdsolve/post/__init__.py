# -*- coding: utf-8 -*-

"""\
Post-processing: comparison metrics and result files
"""

from .metrics import (
    MetricError,
    SpeedMode,
    accuracy,
    accuracy_from_error,
    convergence_rate_q,
    convergence_speed,
    rate_from_steps,
)
from .traces import load_trace, write_trace
