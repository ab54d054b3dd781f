"""Speed and cost of transitionless (counterdiabatic) quantum driving."""

__version__ = "0.1.0"
