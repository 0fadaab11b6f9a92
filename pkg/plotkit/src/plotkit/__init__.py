"""Publication-style figures from scan CSV / fit JSON files."""

from .figures import plot_bias_mapping, plot_thresholds
from .io import SchemaError

__version__ = "0.1.0"
__all__ = ["plot_thresholds", "plot_bias_mapping", "SchemaError", "__version__"]
