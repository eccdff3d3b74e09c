"""Relativistic canonical quantum mechanics of the spin-1/2 doublet.

Three equivalent models of the free electron-positron doublet on a
periodic lattice -- the square-root (Schroedinger-Foldy) form, the
Foldy-Wouthuysen form, and the local Dirac form -- together with the
operators that map between them, the Poincare generators in every
realization, and conserved-quantity bookkeeping.
"""

from . import clifford, dynamics, grid, poincare, states, transforms
from .grid import Grid, GridSpec, make_grid
from .states import AmplitudeSet, Picture, Realization, State

__all__ = [
    "clifford", "dynamics", "grid", "poincare", "states", "transforms",
    "Grid", "GridSpec", "make_grid",
    "AmplitudeSet", "Picture", "Realization", "State",
]

__version__ = "0.1.0"
