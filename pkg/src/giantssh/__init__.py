"""Single-photon scattering off giant atoms coupled to an SSH waveguide."""

from .coupling import Leg, SingleConfig, Sublattice, TwoAtomConfig, equivalence_class
from .lattice import Band, LatticeParams
from .single_atom import Mode, scatter_single
from .two_atom import scatter_two

__version__ = "0.1.0"

__all__ = [
    "Band",
    "LatticeParams",
    "Leg",
    "Mode",
    "SingleConfig",
    "Sublattice",
    "TwoAtomConfig",
    "equivalence_class",
    "scatter_single",
    "scatter_two",
]
