"""Comparison plots for the detector-response simulator's CSV output."""

from .render import CurveTable, FigureSpec, MissingColumnError, read_curves, render

__version__ = "0.1.0"
