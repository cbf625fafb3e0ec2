"""Figure rendering for stocbeam CSV output."""

from .io import SchemaError, Table, load_csv
from .render import FigureSpec, build_spec, render, render_to_figure

__version__ = "0.1.0"

__all__ = [
    "FigureSpec",
    "SchemaError",
    "Table",
    "build_spec",
    "load_csv",
    "render",
    "render_to_figure",
]
