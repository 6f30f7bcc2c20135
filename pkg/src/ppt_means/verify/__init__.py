"""Randomized verification of the matrix inequalities in :mod:`ppt_means`."""

from .registry import REGISTRY, CheckSpec
from .runner import CheckReport, negative_controls, run_all, run_check

__all__ = ["REGISTRY", "CheckSpec", "CheckReport", "negative_controls", "run_all", "run_check"]
