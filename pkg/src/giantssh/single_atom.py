"""Closed-form scattering of a single photon off one giant atom.

Two evaluation modes are supported.  ``Mode.EXACT`` evaluates every
k-dependent quantity at the probe photon's own wave vector; ``Mode.RESONANT``
freezes them at the wave vector resonant with the atom, which is what the
weak-coupling spectra are usually plotted with.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np

from .coupling import Leg, SingleConfig
from .errors import OutOfBand
from .lattice import (
    LatticeParams,
    _k_unchecked,
    dispersion,
    emission_rate,
    in_band,
    topo_phase,
    wave_vector_from_detuning,
)


class Mode(str, Enum):
    EXACT = "exact"
    RESONANT = "resonant"


@dataclass(frozen=True)
class CharacteristicSingle:
    """Lamb shift, decay rate and global phase of one giant atom."""

    lamb_shift: float | np.ndarray
    decay: float | np.ndarray
    global_phase: float | np.ndarray
    gamma_e: float | np.ndarray
    k: float | np.ndarray


@dataclass(frozen=True)
class ScatteringAmplitudes:
    """Complex reflection and transmission amplitudes.

    ``out_of_band`` marks points whose probe energy (or, in resonant mode, the
    atomic detuning) lies outside the band; there r = 0 and t = 1.
    """

    r: complex | np.ndarray
    t: complex | np.ndarray
    out_of_band: bool | np.ndarray = False

    @property
    def R(self):
        return np.abs(self.r) ** 2

    @property
    def T(self):
        return np.abs(self.t) ** 2


class SpectrumRow(NamedTuple):
    Delta: float
    Delta_k: float
    R: float
    T: float
    re_r: float
    im_r: float
    re_t: float
    im_t: float
    flags: str


def leg_weight(leg: Leg, phi, sign: int):
    """Amplitude with which a leg samples the band mode: 1 on A, +-e^{-i phi} on B."""
    return leg.mu + sign * leg.nu * np.exp(-1j * np.asarray(phi))


def pair_kernel(leg_a: Leg, leg_b: Leg, k, phi, gamma_e, sign: int):
    """Photon-mediated coupling between two legs, ``leg_b`` to the right of ``leg_a``.

    The real part feeds decay rates and the imaginary part feeds energy
    shifts.  Same-sublattice pairs pick up e^{ikD}; A->B pairs e^{i(kD - phi)}
    and B->A pairs e^{i(kD + phi)}, the mixed ones weighted by the band sign.
    """
    dist = leg_b.cell - leg_a.cell
    kd = np.asarray(k) * dist
    same = leg_a.mu * leg_b.mu + leg_a.nu * leg_b.nu
    val = (
        same * np.exp(1j * kd)
        + sign * leg_a.mu * leg_b.nu * np.exp(1j * (kd - phi))
        + sign * leg_a.nu * leg_b.mu * np.exp(1j * (kd + phi))
    )
    return gamma_e * val


def leg_path(cfg: SingleConfig, k, phi, sign: int):
    """Sum of the two leg weights with the propagation phase between them."""
    return leg_weight(cfg.leg1, phi, sign) + leg_weight(cfg.leg2, phi, sign) * np.exp(1j * np.asarray(k) * cfg.d)


def characteristics_single(cfg: SingleConfig, k, p: LatticeParams) -> CharacteristicSingle:
    """Lamb shift, decay and global phase at wave vector ``k`` (scalar or array)."""
    k = np.asarray(k, dtype=float)
    s = p.sign
    phi = topo_phase(k, p)
    ge = np.asarray(emission_rate(k, cfg.g, p))
    (mu1, mu2), (nu1, nu2) = cfg.mu, cfg.nu
    kd = k * cfg.d
    same = mu1 * mu2 + nu1 * nu2
    lamb = ge * (
        same * np.sin(kd) + s * nu1 * mu2 * np.sin(kd + phi) + s * mu1 * nu2 * np.sin(kd - phi)
    )
    path = leg_path(cfg, k, phi, s)
    # ge |path|^2 equals 2 ge (1 + Re kernel); this form keeps the decay
    # consistent with the phases used by the amplitudes at roundoff level.
    decay = ge * np.abs(path) ** 2
    theta = np.angle(ge * path**2)
    return CharacteristicSingle(
        _scalar(lamb), _scalar(decay), _scalar(theta), _scalar(ge), _scalar(k)
    )


# Denominators below this fraction of the natural scale are treated as exact
# zeros: the amplitude is then a removable 0/0 and is replaced by its limit.
SINGULAR_FLOOR = 1e-12


def amplitudes_from_characteristics(chars: CharacteristicSingle, Delta_k, n: int):
    """r and t from the characteristic quantities; ``n`` is the left coupling cell.

    A decoupled atom (zero decay) probed exactly at its Lamb shift gives 0/0;
    the limit there is r = 0, t = 1.
    """
    Delta_k = np.asarray(Delta_k, dtype=float)
    detune = 1j * (Delta_k - chars.lamb_shift)
    den = detune - chars.decay / 2.0
    bad = np.abs(den) <= SINGULAR_FLOOR * np.abs(chars.gamma_e)
    safe = np.where(bad, 1.0, den)
    r = chars.decay / 2.0 * np.exp(1j * chars.global_phase) * np.exp(2j * chars.k * n) / safe
    t = detune / safe
    return np.where(bad, 0.0j, r), np.where(bad, 1.0 + 0.0j, t)


def resolve_wave_vector(Delta, Delta_k, p: LatticeParams, mode: Mode):
    """Wave vector used for every k-dependent factor, plus an out-of-band mask.

    Out-of-band entries get a harmless placeholder k so the caller can
    evaluate formulas on the full array and overwrite them afterwards.
    """
    mode = Mode(mode)
    Delta_k = np.asarray(Delta_k, dtype=float)
    Delta = np.broadcast_to(np.asarray(Delta, dtype=float), Delta_k.shape)
    energy = Delta + Delta_k if mode is Mode.EXACT else Delta
    ok = np.asarray(in_band(energy, p), dtype=bool)
    placeholder = p.sign * np.sqrt(2.0 * (1.0 + p.delta**2)) * p.J
    k = _k_unchecked(np.where(ok, energy, placeholder), p)
    # Exact mode: recompute the probe detuning so that it is consistent with k.
    if mode is Mode.EXACT:
        Delta_k = np.where(ok, np.asarray(dispersion(k, p)) - Delta, Delta_k)
    return np.asarray(k), ok, Delta_k


def scatter_single(
    cfg: SingleConfig, Delta, Delta_k, p: LatticeParams, mode: Mode = Mode.EXACT
) -> ScatteringAmplitudes:
    """Reflection and transmission amplitudes of one giant atom.

    ``Delta`` is the atom-to-band-centre detuning and ``Delta_k`` the probe
    detuning from the atom; both may be arrays (broadcast together).
    """
    Delta_k = np.asarray(Delta_k, dtype=float)
    Delta_b = np.broadcast_arrays(np.asarray(Delta, dtype=float), Delta_k)
    k, ok, dk = resolve_wave_vector(Delta_b[0], Delta_b[1], p, mode)
    chars = characteristics_single(cfg, k, p)
    r, t = amplitudes_from_characteristics(chars, dk, cfg.n)
    r = np.where(ok, r, 0.0 + 0.0j)
    t = np.where(ok, t, 1.0 + 0.0j)
    return ScatteringAmplitudes(_scalar(r), _scalar(t), _scalar(~ok))


@dataclass(frozen=True)
class Spectrum:
    """A swept spectrum plus the characteristics frozen at the resonant k."""

    Delta: float
    Delta_k: np.ndarray
    amplitudes: ScatteringAmplitudes
    characteristics: object | None
    gamma_e: float | None

    def rows(self) -> list[SpectrumRow]:
        r = np.atleast_1d(self.amplitudes.r)
        t = np.atleast_1d(self.amplitudes.t)
        oob = np.broadcast_to(np.atleast_1d(self.amplitudes.out_of_band), r.shape)
        out = []
        for dk, ri, ti, flag in zip(self.Delta_k, r, t, oob):
            out.append(
                SpectrumRow(
                    float(self.Delta), float(dk), abs(ri) ** 2, abs(ti) ** 2,
                    ri.real, ri.imag, ti.real, ti.imag, "OutOfBand" if flag else "",
                )
            )
        return out


def _check_grid(grid) -> np.ndarray:
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or not np.all(np.isfinite(grid)):
        raise ValueError("Delta_k grid must be a finite 1-D array")
    if grid.size > 1 and np.any(np.diff(grid) <= 0):
        raise ValueError("Delta_k grid must be strictly ascending")
    return grid


def frozen_characteristics(cfg, Delta, p: LatticeParams, fn):
    """Characteristics at the resonant wave vector, or None if Delta is out of band."""
    try:
        k = wave_vector_from_detuning(Delta, p)
    except OutOfBand:
        return None
    return fn(cfg, k, p)


def reflection_spectrum_single(
    cfg: SingleConfig, Delta: float, grid, p: LatticeParams, mode: Mode = Mode.RESONANT
) -> Spectrum:
    grid = _check_grid(grid)
    amps = scatter_single(cfg, Delta, grid, p, mode)
    chars = frozen_characteristics(cfg, Delta, p, characteristics_single)
    return Spectrum(Delta, grid, amps, chars, None if chars is None else chars.gamma_e)


def _scalar(x):
    x = np.asarray(x)
    return x.item() if x.ndim == 0 else x
