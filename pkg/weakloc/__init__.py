"""weakloc - discretized continuous frames and weakly localized operators."""

__version__ = "0.1.0"
