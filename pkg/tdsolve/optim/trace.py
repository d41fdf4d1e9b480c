# -*- coding: utf-8 -*-

"""\
Convergence traces
------------------

Per-iteration records ``(iteration, elapsed wall-clock seconds, error)``
collected by every resolution scheme. Record 0 holds the error at
initialization; elapsed times come from a monotonic clock started when the
trace is created.
"""

import enum
import time
from dataclasses import dataclass

import numpy as np
import pandas as pd


class StopReason(str, enum.Enum):
    """Why a solver stopped iterating"""

    TOLERANCE = "tolerance"
    MAX_ITERS = "max_iters"
    NUMERIC = "numeric"


@dataclass(frozen=True)
class TraceRecord:
    """One outer iteration"""

    iter: int
    elapsed: float
    error: float
    #: Length of the step ``||x_n - x_{n-1}||`` (0 for the initial record)
    step: float = 0.0


def relative_change(f_new, f_old):
    """``|f_new - f_old| / |f_new|``, zero when both values coincide"""
    delta = abs(f_new - f_old)
    if delta == 0.0:
        return 0.0
    if f_new == 0.0:
        return np.inf
    return delta / abs(f_new)


class ConvergenceTrace:
    """Ordered convergence records of one solver run"""

    #: Column names of the trace CSV files
    csv_columns = ("iter", "elapsed_s", "error")

    def __init__(self, clock=time.perf_counter):
        self._clock = clock
        self._t0 = clock()
        #: List of :class:`TraceRecord`
        self.records = []
        #: Cumulative number of objective evaluations
        self.objective_evals = 0
        #: True if the run stopped on the tolerance criterion
        self.converged = False
        #: :class:`StopReason`, set when the run finishes
        self.stop_reason = None

    def append(self, iteration, error, step=0.0):
        """Record the error at the end of an outer iteration"""
        if self.records and iteration <= self.records[-1].iter:
            raise ValueError(
                "Trace iterations must increase: %d after %d"
                % (iteration, self.records[-1].iter)
            )
        rec = TraceRecord(
            iter=int(iteration),
            elapsed=self._clock() - self._t0,
            error=float(error),
            step=float(step),
        )
        self.records.append(rec)
        return rec

    def finish(self, stop_reason, objective_evals=None):
        """Close the trace with its stop reason and evaluation count"""
        self.stop_reason = StopReason(stop_reason)
        self.converged = self.stop_reason == StopReason.TOLERANCE
        if objective_evals is not None:
            self.objective_evals = int(objective_evals)

    def relative_change(self):
        """Relative change of the error over the last iteration"""
        if len(self.records) < 2:
            return np.inf
        return relative_change(self.records[-1].error, self.records[-2].error)

    def __len__(self):
        return len(self.records)

    @property
    def iters(self):
        """Iteration indices"""
        return np.array([r.iter for r in self.records], dtype=int)

    @property
    def elapsed(self):
        """Elapsed seconds at the end of every iteration"""
        return np.array([r.elapsed for r in self.records])

    @property
    def errors(self):
        """Objective value at the end of every iteration"""
        return np.array([r.error for r in self.records])

    @property
    def steps(self):
        """Step lengths; the first entry is zero"""
        return np.array([r.step for r in self.records])

    @property
    def final_error(self):
        """Error of the last record"""
        return self.records[-1].error

    @property
    def iterations(self):
        """Number of completed outer iterations"""
        return self.records[-1].iter if self.records else 0

    def to_frame(self):
        """Trace as a :class:`pandas.DataFrame` with the CSV columns"""
        return pd.DataFrame(
            {
                "iter": self.iters,
                "elapsed_s": self.elapsed,
                "error": self.errors,
            },
            columns=list(self.csv_columns),
        )

    @classmethod
    def from_frame(cls, df):
        """Rebuild a trace from a data frame with the CSV columns"""
        trace = cls()
        trace.records = [
            TraceRecord(iter=int(it), elapsed=float(el), error=float(err))
            for it, el, err in zip(df["iter"], df["elapsed_s"], df["error"])
        ]
        return trace
