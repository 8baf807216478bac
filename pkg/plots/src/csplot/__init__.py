"""csplab-plots: headless figures from csplab experiment CSV outputs."""

from .render import (MissingColumnError, NoDataError, PlotSpec, render,
                     wilson_interval)

__version__ = "0.1.0"
