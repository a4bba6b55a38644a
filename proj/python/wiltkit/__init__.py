"""Weisfeiler Leman Labeling Trees.

Builds WILTs from attributed-graph datasets, computes tree optimal-transport
graph pseudometrics in linear time, distills externally supplied target
distances into edge weights, and reports the colors that dominate the learned
metric.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__ as _core_doc

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
