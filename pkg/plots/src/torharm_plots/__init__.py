"""Render torharm GridFileV1 field/error maps as heatmaps."""

from .gridfile import FLAGS, Grid, GridParseError, load_grid, parse_grid
from .render import PlotSpec, RenderResult, render

__version__ = "0.1.0"

__all__ = ["Grid", "GridParseError", "FLAGS", "load_grid", "parse_grid",
           "PlotSpec", "RenderResult", "render", "__version__"]
