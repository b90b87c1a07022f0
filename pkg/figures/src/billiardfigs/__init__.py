"""Static figure renderer for spinbilliards CSV outputs."""

__version__ = "0.1.0"

from .render import FigureSpec, InputError, PANEL_KINDS, build_figure, render

__all__ = ["FigureSpec", "InputError", "PANEL_KINDS", "build_figure", "render"]
