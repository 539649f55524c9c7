"""Figure rendering for hypflow records: curvature traces and control-time sweeps."""

from .io import RecordSchemaError, SweepData, load_record, load_sweep_csv
from .render import FigureSpec, render

__version__ = "0.1.0"
