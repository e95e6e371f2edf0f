"""Quandle colorings, twisted cohomology pairings and twisted Alexander invariants."""

__version__ = "0.1.0"
