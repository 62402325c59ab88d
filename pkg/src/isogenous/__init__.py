"""Exceptional sequences of line bundles on surfaces isogenous to a higher product."""

__version__ = "0.1.0"
