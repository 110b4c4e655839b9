"""Rotational horseshoes, chaotic classes and rotation sets on closed hyperbolic surfaces."""

__version__ = "0.1.0"
