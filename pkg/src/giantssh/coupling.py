"""Giant-atom coupling configurations.

A configuration is a list of legs, each leg a (unit cell, sublattice) pair.
The 0/1 indicator vectors ``mu`` (sublattice A) and ``nu`` (sublattice B)
are derived from the legs on demand and never stored.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np

from .errors import InvalidMapping
from .lattice import LatticeParams, topo_phase


class Sublattice(str, Enum):
    A = "A"
    B = "B"


@dataclass(frozen=True)
class Leg:
    cell: int
    sublattice: Sublattice

    def __post_init__(self):
        if int(self.cell) != self.cell or self.cell < 1:
            raise ValueError(f"cell index must be an integer >= 1, got {self.cell}")
        object.__setattr__(self, "sublattice", Sublattice(getattr(self.sublattice, "value", self.sublattice).upper()))

    @property
    def mu(self) -> int:
        return int(self.sublattice is Sublattice.A)

    @property
    def nu(self) -> int:
        return int(self.sublattice is Sublattice.B)


def parse_label(label: str, length: int | None = None) -> str:
    """Normalise a configuration label such as ``"abab"`` to ``"ABAB"``."""
    s = str(label).strip().upper()
    if not s or set(s) - {"A", "B"} or len(s) not in (2, 4):
        raise ValueError(f"invalid configuration label {label!r}")
    if length is not None and len(s) != length:
        raise ValueError(f"expected a {length}-letter label, got {label!r}")
    return s


@dataclass(frozen=True)
class SingleConfig:
    """One giant atom coupled at cells n < m with strength g."""

    leg1: Leg
    leg2: Leg
    g: float

    def __post_init__(self):
        if self.leg2.cell <= self.leg1.cell:
            raise ValueError("coupling points must satisfy n < m (coincident legs are rejected)")
        if not self.g > 0:
            raise ValueError(f"coupling strength g must be positive, got {self.g}")

    @classmethod
    def from_label(cls, label: str, d: int, g: float = 0.01, n: int = 1) -> "SingleConfig":
        lab = parse_label(label, 2)
        return cls(Leg(n, Sublattice(lab[0])), Leg(n + d, Sublattice(lab[1])), g)

    @property
    def legs(self) -> tuple[Leg, Leg]:
        return (self.leg1, self.leg2)

    @property
    def n(self) -> int:
        return self.leg1.cell

    @property
    def m(self) -> int:
        return self.leg2.cell

    @property
    def d(self) -> int:
        return self.m - self.n

    @property
    def label(self) -> str:
        return self.leg1.sublattice.value + self.leg2.sublattice.value

    @property
    def mu(self) -> tuple[int, int]:
        return (self.leg1.mu, self.leg2.mu)

    @property
    def nu(self) -> tuple[int, int]:
        return (self.leg1.nu, self.leg2.nu)

    def shifted(self, cells: int) -> "SingleConfig":
        return SingleConfig(
            Leg(self.leg1.cell + cells, self.leg1.sublattice),
            Leg(self.leg2.cell + cells, self.leg2.sublattice),
            self.g,
        )


@dataclass(frozen=True)
class TwoAtomConfig:
    """Two giant atoms in the separate-coupling layout n1 < m1 < n2 < m2."""

    atom1: SingleConfig
    atom2: SingleConfig

    def __post_init__(self):
        if self.atom2.n <= self.atom1.m:
            raise ValueError("separate coupling requires m1 < n2")
        if self.atom1.g != self.atom2.g:
            raise ValueError("both atoms must share the same coupling strength g")

    @classmethod
    def from_label(
        cls, label: str, d1: int, d2: int, d21: int, g: float = 0.01, n1: int = 1
    ) -> "TwoAtomConfig":
        lab = parse_label(label, 4)
        m1 = n1 + d1
        n2 = m1 + d21
        return cls(
            SingleConfig(Leg(n1, Sublattice(lab[0])), Leg(m1, Sublattice(lab[1])), g),
            SingleConfig(Leg(n2, Sublattice(lab[2])), Leg(n2 + d2, Sublattice(lab[3])), g),
        )

    @property
    def g(self) -> float:
        return self.atom1.g

    @property
    def legs(self) -> tuple[Leg, Leg, Leg, Leg]:
        return self.atom1.legs + self.atom2.legs

    @property
    def n1(self) -> int:
        return self.atom1.n

    @property
    def m1(self) -> int:
        return self.atom1.m

    @property
    def n2(self) -> int:
        return self.atom2.n

    @property
    def m2(self) -> int:
        return self.atom2.m

    @property
    def d1(self) -> int:
        return self.atom1.d

    @property
    def d2(self) -> int:
        return self.atom2.d

    @property
    def d21(self) -> int:
        return self.n2 - self.m1

    @property
    def label(self) -> str:
        return self.atom1.label + self.atom2.label

    @property
    def mu(self) -> tuple[int, int, int, int]:
        return tuple(leg.mu for leg in self.legs)

    @property
    def nu(self) -> tuple[int, int, int, int]:
        return tuple(leg.nu for leg in self.legs)

    def shifted(self, cells: int) -> "TwoAtomConfig":
        return TwoAtomConfig(self.atom1.shifted(cells), self.atom2.shifted(cells))


def accumulated_phase(cfg: SingleConfig, k, p: LatticeParams):
    """Phase picked up between the two legs: kd, kd - phi_k (AB) or kd + phi_k (BA)."""
    k = np.asarray(k, dtype=float)
    base = k * cfg.d
    if cfg.label == "AB":
        return base - topo_phase(k, p)
    if cfg.label == "BA":
        return base + topo_phase(k, p)
    return base + 0.0


# --- configuration equivalences -------------------------------------------
#
# Each record reads: label L at distances (d1, d2, d21) and dimerization sign s
# has the same reflection spectrum as ``canonical`` at the distances given by
# the three affine maps, with the sign multiplied by ``flip``.  Distances are
# (source_index, offset) pairs indexing into (d1, d2, d21).

class _Row(NamedTuple):
    canonical: str
    maps: tuple[tuple[int, int], tuple[int, int], tuple[int, int]]
    flip: int


_IDENT = ((0, 0), (1, 0), (2, 0))
_SWAP = ((1, 0), (0, 0), (2, 0))

EQUIVALENCE_TABLE: dict[str, _Row] = {
    "AAAA": _Row("AAAA", _IDENT, 1),
    "BBBB": _Row("AAAA", _IDENT, 1),
    "AAAB": _Row("AAAB", _IDENT, 1),
    "ABBB": _Row("AAAB", _SWAP, 1),
    "BAAA": _Row("AAAB", ((1, 0), (0, -1), (2, 0)), -1),
    "BBBA": _Row("AAAB", ((0, 0), (1, -1), (2, 0)), -1),
    "AABA": _Row("AABA", _IDENT, 1),
    "BABB": _Row("AABA", _SWAP, 1),
    "ABAA": _Row("AABA", ((1, 0), (0, 1), (2, -1)), -1),
    "BBAB": _Row("AABA", ((0, 0), (1, 1), (2, -1)), -1),
    "ABBA": _Row("ABBA", _IDENT, 1),
    "BAAB": _Row("ABBA", _SWAP, 1),
    "AABB": _Row("AABB", _IDENT, 1),
    "BBAA": _Row("AABB", ((1, 0), (0, 0), (2, -1)), -1),
    "ABAB": _Row("ABAB", _IDENT, 1),
    "BABA": _Row("ABAB", ((0, -1), (1, -1), (2, 1)), -1),
}

CANONICAL_CLASSES = ("AAAA", "AAAB", "AABA", "ABBA", "AABB", "ABAB")


class Equivalence(NamedTuple):
    label: str
    d1: int
    d2: int
    d21: int
    delta_sign: int


def equivalence_class(label: str, d1: int, d2: int, d21: int, delta_sign: int) -> Equivalence:
    """Map a two-atom configuration onto one of the six canonical classes.

    The returned configuration (with the returned dimerization sign) has a
    reflection spectrum identical to the input one.
    """
    lab = parse_label(label, 4)
    if min(d1, d2, d21) < 1:
        raise InvalidMapping("all distances must be >= 1")
    if delta_sign not in (1, -1):
        raise ValueError("delta_sign must be +1 or -1")
    row = EQUIVALENCE_TABLE[lab]
    src = (d1, d2, d21)
    mapped = tuple(src[i] + off for i, off in row.maps)
    if min(mapped) < 1:
        raise InvalidMapping(f"{lab}{src} maps to {row.canonical}{mapped}, which has a distance < 1")
    return Equivalence(row.canonical, *mapped, delta_sign * row.flip)
