"""Render publication-style figures from posmogram CLI data files.

Consumes only the documented CSV/JSON schemas (density blocks and
oscillator overlays); it never imports the computation package.
"""

from .schema import SchemaError, read_density_file, read_overlay_file
from .render import FigureSpec, render

__version__ = "0.1.0"

__all__ = ["FigureSpec", "SchemaError", "read_density_file",
           "read_overlay_file", "render"]
