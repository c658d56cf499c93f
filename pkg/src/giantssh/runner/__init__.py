"""Sweep execution, validation suites and the command-line interface."""

from .spec import SweepSpec, spec_from_dict
from .sweep import run_sweep, write_outputs
from .validate import run_suites

__all__ = ["SweepSpec", "run_suites", "run_sweep", "spec_from_dict", "write_outputs"]
