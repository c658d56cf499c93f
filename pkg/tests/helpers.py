"""Small constructors shared by the test modules."""

import numpy as np

from giantssh.coupling import SingleConfig, TwoAtomConfig
from giantssh.lattice import LatticeParams, omega

K_HALF = -np.pi / 2


def on_shell(k, delta=0.5):
    return float(omega(k, LatticeParams(delta=delta)))


def two(label, d=2, g=0.01):
    return TwoAtomConfig.from_label(label, d, d, d, g)


def one(label, d, g=0.01):
    return SingleConfig.from_label(label, d, g)
