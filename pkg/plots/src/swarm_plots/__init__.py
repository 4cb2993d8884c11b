"""Regenerates the figure families from sweep result tables.

Input is the simulator's results.csv (one row per run); this package never
invokes the simulator itself.
"""

__version__ = "0.1.0"

from .families import FAMILIES, FigureSpec, build_figure, render
from .tables import TableError, load_table

__all__ = [
    "FAMILIES",
    "FigureSpec",
    "TableError",
    "build_figure",
    "load_table",
    "render",
]
