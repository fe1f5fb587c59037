"""Periods of the Kummer surface family K(X, Y) and its map to H x H.

Modules, bottom-up:

    walls       wall quintic, U0 membership, chambers R1..R4
    quad        double-exponential quadrature with exact endpoint distances
    efiber      Carlson R_F, fibre periods, the period lattice along y
    periodmap   the period vector xi by two routes, the Hilbert map
    homlat      exact integer monodromy and intersection checks
    braid       numeric monodromy by lattice tracking along loops
    algebra     the surface models S, T, K and the maps between them
    invariants  Klein's polynomial, the branch divisor, Humbert's equation
    cli         command-line front end
"""
from .errors import HilbertPeriodError, NotInU0
from .walls import ModuliPoint, chambers, in_U0
from .periodmap import PeriodVector, periods_chambers, periods_fiberwise, to_hilbert

__all__ = [
    "HilbertPeriodError",
    "ModuliPoint",
    "NotInU0",
    "PeriodVector",
    "chambers",
    "in_U0",
    "periods_chambers",
    "periods_fiberwise",
    "to_hilbert",
]
__version__ = "0.1.0"
