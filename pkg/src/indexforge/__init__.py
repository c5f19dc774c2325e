"""Objective indicator weighting and composite-index construction."""

__version__ = "0.1.0"
