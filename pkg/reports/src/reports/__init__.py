"""Figure generation from the simulator's CSV/JSON outputs."""

from .figures import FigureSpec, SchemaError, render_all

__all__ = ["FigureSpec", "SchemaError", "render_all"]
__version__ = "0.1.0"
