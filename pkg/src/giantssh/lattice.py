"""SSH photonic waveguide: band structure, sublattice phase, group velocity.

Energies are in units of the hopping scale ``J`` (default 1).  All functions
accept scalars or numpy arrays and return the same shape.

Upper-band photons injected from the left carry k in (-pi, 0); lower-band
photons carry k in (0, pi).  Both choices make the group velocity positive.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import BandEdge, GapClosing, OutOfBand

# Exclusion margins (energy margins scale with J).
EPS_BAND = 1e-6
EPS_K = 1e-6
EPS_Y = 1e-12
EPS_OMEGA = 1e-9


class Band(str, Enum):
    UPPER = "upper"
    LOWER = "lower"

    @property
    def sign(self) -> int:
        return 1 if self is Band.UPPER else -1


@dataclass(frozen=True)
class LatticeParams:
    """Hopping scale, dimerization and band selector of the SSH waveguide.

    The intracell and intercell hoppings are ``J(1+delta)`` and ``J(1-delta)``.
    ``delta > 0`` is the trivial phase, ``delta < 0`` the topological one.
    """

    J: float = 1.0
    delta: float = 0.5
    band: Band = Band.UPPER

    def __post_init__(self):
        if not self.J > 0:
            raise ValueError(f"J must be positive, got {self.J}")
        if not -1.0 < self.delta < 1.0:
            raise ValueError(f"delta must lie in (-1, 1), got {self.delta}")
        object.__setattr__(self, "band", Band(self.band))

    @property
    def xi1(self) -> float:
        return self.J * (1.0 + self.delta)

    @property
    def xi2(self) -> float:
        return self.J * (1.0 - self.delta)

    @property
    def sign(self) -> int:
        return self.band.sign

    @property
    def gapless(self) -> bool:
        return self.delta == 0.0

    @property
    def gap(self) -> float:
        return 4.0 * self.J * abs(self.delta)

    @property
    def band_interval(self) -> tuple[float, float]:
        """Open energy interval of the selected band, before margins."""
        lo, hi = 2.0 * self.J * abs(self.delta), 2.0 * self.J
        return (lo, hi) if self.sign > 0 else (-hi, -lo)

    def flipped(self) -> "LatticeParams":
        """Same lattice with the sign of the dimerization reversed."""
        return LatticeParams(self.J, -self.delta, self.band)


def _out(x):
    x = np.asarray(x)
    return x.item() if x.ndim == 0 else x


def omega(k, p: LatticeParams):
    """Magnitude of the band energy, ``J*sqrt(2(1+d^2) + 2(1-d^2)cos k)``."""
    k = np.asarray(k, dtype=float)
    d2 = p.delta * p.delta
    arg = 2.0 * (1.0 + d2) + 2.0 * (1.0 - d2) * np.cos(k)
    return _out(p.J * np.sqrt(np.maximum(arg, 0.0)))


def dispersion(k, p: LatticeParams):
    """Band energy at wave vector ``k``: +omega_k (upper) or -omega_k (lower)."""
    return _out(p.sign * np.asarray(omega(k, p)))


def bloch_offdiag(k, p: LatticeParams):
    """y(k) = -(xi1 + xi2 exp(-ik)); its modulus is omega_k."""
    k = np.asarray(k, dtype=float)
    return _out(-(p.xi1 + p.xi2 * np.exp(-1j * k)))


def topo_phase(k, p: LatticeParams):
    """Topology-dependent phase phi_k = Arg y(k), principal value in (-pi, pi]."""
    y = np.asarray(bloch_offdiag(k, p))
    if np.any(np.abs(y) < EPS_Y * p.J):
        raise GapClosing("y(k) vanishes; phase undefined (delta = 0 at k = +-pi)")
    ph = np.angle(y)
    # np.angle returns -pi for negative reals with a -0.0 imaginary part
    ph = np.where(ph <= -np.pi, np.pi, ph)
    return _out(ph)


def group_velocity(k, p: LatticeParams):
    """d(+-omega_k)/dk = -J^2(1-delta^2) sin k / (+-omega_k)."""
    k = np.asarray(k, dtype=float)
    s = np.sin(k)
    w = np.asarray(omega(k, p))
    if np.any(np.abs(s) < EPS_K) or np.any(w < EPS_OMEGA * p.J):
        raise BandEdge("group velocity vanishes or diverges at this wave vector")
    return _out(-(p.J**2) * (1.0 - p.delta**2) * s / (p.sign * w))


def emission_rate(k, g: float, p: LatticeParams):
    """Spontaneous emission rate per coupling point, g^2 / v_g."""
    if g < 0:
        raise ValueError("coupling strength g must be non-negative")
    return _out(g * g / np.asarray(group_velocity(k, p)))


def in_band(energy, p: LatticeParams, margin: float = EPS_BAND):
    """Boolean mask: energy lies strictly inside the selected band."""
    e = p.sign * np.asarray(energy, dtype=float)
    lo, hi = 2.0 * p.J * abs(p.delta), 2.0 * p.J
    m = margin * p.J
    return _out((e > lo + m) & (e < hi - m))


def wave_vector_from_detuning(Delta, p: LatticeParams):
    """Invert the dispersion: the wave vector whose band energy equals ``Delta``.

    Returns k in (-pi, 0) for the upper band and in (0, pi) for the lower band.
    Raises OutOfBand when ``Delta`` is in the gap or beyond the band (a photon
    there is transmitted untouched).
    """
    Delta = np.asarray(Delta, dtype=float)
    if not np.all(np.asarray(in_band(Delta, p))):
        raise OutOfBand(f"detuning outside the {p.band.value} band interior")
    return _out(_k_unchecked(Delta, p))


def _k_unchecked(energy, p: LatticeParams):
    e2 = np.asarray(energy, dtype=float) ** 2
    d2 = p.delta * p.delta
    x = (e2 - 2.0 * p.J**2 * (1.0 + d2)) / (2.0 * p.J**2 * (1.0 - d2))
    k = np.abs(np.arccos(np.clip(x, -1.0, 1.0)))
    return -k if p.sign > 0 else k


@dataclass(frozen=True)
class BlochPoint:
    """Band quantities bundled at one wave vector."""

    k: float
    omega_k: float
    phi_k: float
    v_g: float
    gamma_e: float

    @classmethod
    def at(cls, k: float, p: LatticeParams, g: float = 0.01) -> "BlochPoint":
        return cls(
            float(k),
            float(omega(k, p)),
            float(topo_phase(k, p)),
            float(group_velocity(k, p)),
            float(emission_rate(k, g, p)),
        )
