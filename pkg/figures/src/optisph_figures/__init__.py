"""Figure rendering for optisph experiment reports."""

from .render import KINDS, FigureError, FigureSpec, read_report, render

__all__ = ["KINDS", "FigureError", "FigureSpec", "read_report", "render"]
