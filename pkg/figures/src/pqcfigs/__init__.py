"""Figure rendering for pqcdse evaluation exports."""

from .render import FIGURE_KINDS, FigureSpec, front_polyline, render

__version__ = "0.1.0"
