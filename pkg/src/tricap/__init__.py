"""Ternary phase-field flow with wetting walls, a neo-Hookean solid and an energy audit."""

__version__ = "0.1.0"
