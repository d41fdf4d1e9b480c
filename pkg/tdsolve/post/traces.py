# -*- coding: utf-8 -*-

"""\
Trace and table files
---------------------

CSV readers and writers for convergence traces and benchmark tables. Floats
are written with 17 significant digits and a dot decimal separator so that
values round-trip exactly.
"""

import logging

import pandas as pd

from ..optim.trace import ConvergenceTrace

_lgr = logging.getLogger(__name__)

#: Format of floating point columns in every CSV file
FLOAT_FORMAT = "%.17g"


def write_frame(df, path, index=False):
    """Write a data frame as CSV with exact floating point values"""
    df.to_csv(path, index=index, float_format=FLOAT_FORMAT)
    _lgr.debug("Wrote %s", path)
    return path


def write_trace(trace, path):
    """Write a convergence trace with header ``iter,elapsed_s,error``"""
    return write_frame(trace.to_frame(), path)


def read_trace_frame(path):
    """Trace CSV as a :class:`pandas.DataFrame`

    Raises:
        ValueError: If a trace column is missing
    """
    df = pd.read_csv(path, float_precision="round_trip")
    missing = [col for col in ConvergenceTrace.csv_columns if col not in df]
    if missing:
        raise ValueError(
            "Trace file %s is missing columns: %s" % (path, ", ".join(missing))
        )
    return df


def load_trace(path):
    """Load a trace CSV as a :class:`ConvergenceTrace`

    Step lengths, stop reason and evaluation counts are not stored in trace
    files and are left at their defaults.
    """
    return ConvergenceTrace.from_frame(read_trace_frame(path))
