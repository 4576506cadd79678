"""Cyclic-polynomial CSS codes and generalised Dehn-twist schedules."""

__version__ = "0.1.0"
