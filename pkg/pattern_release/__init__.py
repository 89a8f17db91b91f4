"""Pattern-consistent differentially private release of time-series bins."""

from __future__ import annotations

try:
    from pattern_release._version import __version__
except ImportError:  # not installed from a git checkout
    __version__ = "0.0.0"

__all__ = ["__version__"]
