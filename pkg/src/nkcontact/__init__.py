"""Exact-rational curvature workbench for contact metric frames."""

__version__ = "0.1.0"
