"""Executable Cuntz-semigroup calculus on C[0,1], Levy-Prokhorov distances, and
the finite quasitrace-simplex model of the morphism gamma_h."""
from ._rational import INF

__version__ = "0.1.0"
__all__ = ["INF"]
