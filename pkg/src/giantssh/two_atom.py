"""Closed-form scattering off two separated giant atoms.

The eight characteristic quantities (two Lamb shifts, two individual decays,
the collective decay, the exchange strength and two global phases) are built
from a pairwise leg kernel.  Single-atom terms pair the two legs of the same
atom; collective terms sum over the four (atom-1 leg, atom-2 leg) pairs.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .coupling import TwoAtomConfig, equivalence_class
from .errors import NotApplicable, RegimeViolation
from .lattice import LatticeParams, emission_rate, topo_phase, wave_vector_from_detuning
from .single_atom import (
    Mode,
    ScatteringAmplitudes,
    SINGULAR_FLOOR,
    Spectrum,
    _check_grid,
    _scalar,
    characteristics_single,
    frozen_characteristics,
    leg_path,
    resolve_wave_vector,
)

# A channel whose decay is below this fraction of gamma_e counts as dark.
DARK_TOL = 1e-3
# Minimum broad/narrow width ratio for the Fano approximation.
FANO_SEPARATION = 5.0


@dataclass(frozen=True)
class CharacteristicTwo:
    lamb1: float | np.ndarray
    lamb2: float | np.ndarray
    gamma1: float | np.ndarray
    gamma2: float | np.ndarray
    gamma12: float | np.ndarray
    g12: float | np.ndarray
    theta1: float | np.ndarray
    theta2: float | np.ndarray
    gamma_e: float | np.ndarray
    k: float | np.ndarray
    phi: float | np.ndarray


@dataclass(frozen=True)
class SARepresentation:
    """Two degenerate atoms viewed as symmetric and antisymmetric channels."""

    delta_SL: float
    delta_AL: float
    gamma_S: float
    gamma_A: float
    g_SA: float
    gamma_SA: float
    delta_S: float | np.ndarray | None = None
    delta_A: float | np.ndarray | None = None


def characteristics_two(cfg: TwoAtomConfig, k, p: LatticeParams) -> CharacteristicTwo:
    k = np.asarray(k, dtype=float)
    s = p.sign
    phi = topo_phase(k, p)
    ge = np.asarray(emission_rate(k, cfg.g, p))
    c1 = characteristics_single(cfg.atom1, k, p)
    c2 = characteristics_single(cfg.atom2, k, p)
    # The summed leg-pair kernels factor as ge conj(path1) path2 e^{ik(n2-n1)};
    # the factored form keeps |cross|^2 = Gamma1 Gamma2 exact to roundoff,
    # which unitarity near narrow channels depends on.
    cross = (
        ge * np.conj(leg_path(cfg.atom1, k, phi, s)) * leg_path(cfg.atom2, k, phi, s)
        * np.exp(1j * k * (cfg.n2 - cfg.n1))
    )
    return CharacteristicTwo(
        lamb1=c1.lamb_shift,
        lamb2=c2.lamb_shift,
        gamma1=c1.decay,
        gamma2=c2.decay,
        gamma12=_scalar(cross.real),
        g12=_scalar(cross.imag / 2.0),
        theta1=c1.global_phase,
        theta2=c2.global_phase,
        gamma_e=_scalar(ge),
        k=_scalar(k),
        phi=_scalar(phi),
    )


def amplitudes_from_characteristics_two(ch: CharacteristicTwo, Delta_k, n1: int, n2: int):
    """Unified two-atom r and t, with the (1 <-> 2) symmetrisation written out."""
    Delta_k = np.asarray(Delta_k, dtype=float)
    x1 = 1j * (Delta_k - ch.lamb1)
    x2 = 1j * (Delta_k - ch.lamb2)
    a1 = x1 - ch.gamma1 / 2.0
    a2 = x2 - ch.gamma2 / 2.0
    den = a1 * a2 - (ch.gamma12 / 2.0 + 1j * ch.g12) ** 2
    ph1 = np.exp(2j * ch.k * n1 + 1j * ch.theta1)
    ph2 = np.exp(2j * ch.k * n2 + 1j * ch.theta2)
    num = ch.gamma1 * a2 * ph1 + ch.gamma2 * a1 * ph2 + ch.gamma1 * ch.gamma2 * ph2
    scale2 = np.abs(ch.gamma_e) ** 2

    # A dark channel probed at its own Lamb shift makes numerator and
    # denominator vanish together.  Replace such points by the limit along
    # Delta_k (first derivatives, or second ones if those vanish as well).
    bad = np.abs(den) <= SINGULAR_FLOOR * scale2
    dden = a1 + a2  # d(den)/dDelta_k divided by i
    bad2 = bad & (np.abs(dden) <= SINGULAR_FLOOR * np.abs(ch.gamma_e))
    safe = np.where(bad, 1.0, den)
    safe1 = np.where(bad2 | ~bad, 1.0, dden)
    r = np.where(bad, (ch.gamma1 * ph1 + ch.gamma2 * ph2) / (2.0 * safe1), num / (2.0 * safe))
    t = np.where(bad, (x1 + x2) / safe1, x1 * x2 / safe)
    r = np.where(bad2, 0.0j, r)
    t = np.where(bad2, 1.0 + 0.0j, t)
    return r, t


def scatter_two(
    cfg: TwoAtomConfig, Delta, Delta_k, p: LatticeParams, mode: Mode = Mode.EXACT
) -> ScatteringAmplitudes:
    Delta_k = np.asarray(Delta_k, dtype=float)
    Delta_b = np.broadcast_arrays(np.asarray(Delta, dtype=float), Delta_k)
    k, ok, dk = resolve_wave_vector(Delta_b[0], Delta_b[1], p, mode)
    ch = characteristics_two(cfg, k, p)
    r, t = amplitudes_from_characteristics_two(ch, dk, cfg.n1, cfg.n2)
    r = np.where(ok, r, 0.0 + 0.0j)
    t = np.where(ok, t, 1.0 + 0.0j)
    return ScatteringAmplitudes(_scalar(r), _scalar(t), _scalar(~ok))


def reflection_spectrum_two(
    cfg: TwoAtomConfig, Delta: float, grid, p: LatticeParams, mode: Mode = Mode.RESONANT
) -> Spectrum:
    grid = _check_grid(grid)
    amps = scatter_two(cfg, Delta, grid, p, mode)
    chars = frozen_characteristics(cfg, Delta, p, characteristics_two)
    return Spectrum(Delta, grid, amps, chars, None if chars is None else chars.gamma_e)


def sa_representation(chars: CharacteristicTwo, Delta_k=None) -> SARepresentation:
    l1, l2, g1, g2 = chars.lamb1, chars.lamb2, chars.gamma1, chars.gamma2
    sl = (l1 + l2 + 2.0 * chars.g12) / 2.0
    al = (l1 + l2 - 2.0 * chars.g12) / 2.0
    rep = SARepresentation(
        delta_SL=sl,
        delta_AL=al,
        gamma_S=(g1 + g2 + 2.0 * chars.gamma12) / 2.0,
        gamma_A=(g1 + g2 - 2.0 * chars.gamma12) / 2.0,
        g_SA=(l1 - l2) / 2.0,
        gamma_SA=(g1 - g2) / 2.0,
    )
    if Delta_k is None:
        return rep
    Delta_k = np.asarray(Delta_k, dtype=float)
    return SARepresentation(
        **{**rep.__dict__, "delta_S": _scalar(Delta_k - sl), "delta_A": _scalar(Delta_k - al)}
    )


# --- Fano decomposition -----------------------------------------------------


@dataclass(frozen=True)
class FanoDecomposition:
    """Two Lorentzian reflection channels whose sum is the full amplitude.

    ``broad`` is "+" or "-", whichever channel has the larger width.  The
    asymmetry parameter ``q`` and coefficient ``eta`` follow from the broad
    channel's resonance offset; the reduced detuning is measured from the
    narrow resonance in units of its half width.
    """

    label: str
    delta_plus: float
    delta_minus: float
    gamma_plus: float
    gamma_minus: float
    prefactor_phase: float
    k: float
    gamma_e: float
    m1: int

    epsilon_definition = "epsilon = (Delta_k - Delta_narrow) / (Gamma_narrow / 2)"

    @property
    def broad(self) -> str:
        return "+" if self.gamma_plus >= self.gamma_minus else "-"

    def _bn(self):
        if self.broad == "+":
            return (self.delta_plus, self.gamma_plus), (self.delta_minus, self.gamma_minus)
        return (self.delta_minus, self.gamma_minus), (self.delta_plus, self.gamma_plus)

    @property
    def separation(self) -> float:
        lo = min(self.gamma_plus, self.gamma_minus)
        hi = max(self.gamma_plus, self.gamma_minus)
        return np.inf if lo <= 0 else hi / lo

    @property
    def q(self) -> float:
        (db, gb), (dn, _) = self._bn()
        if gb == 0:
            return float("nan")
        return (db - dn) / (gb / 2.0)

    @property
    def eta(self) -> float:
        (db, gb), (dn, _) = self._bn()
        return (gb**2 / 4.0) / ((db - dn) ** 2 + gb**2 / 4.0)

    def epsilon(self, Delta_k):
        _, (dn, gn) = self._bn()
        return (np.asarray(Delta_k, dtype=float) - dn) / (gn / 2.0)

    def channel_amplitudes(self, Delta_k):
        """Return (r_plus, r_minus); their sum reproduces the full r."""
        Delta_k = np.asarray(Delta_k, dtype=float)
        pref = np.exp(1j * self.prefactor_phase) * np.exp(2j * self.k * self.m1) / 2.0
        out = []
        for sgn, dc, gc in ((1, self.delta_plus, self.gamma_plus), (-1, self.delta_minus, self.gamma_minus)):
            out.append(sgn * gc * pref / (1j * (Delta_k - dc) - gc / 2.0))
        return tuple(out)

    def fano_reflection(self, Delta_k):
        """Fano approximation eta (q + eps)^2 / (1 + eps^2) near the narrow resonance."""
        eps = self.epsilon(Delta_k)
        return self.eta * (self.q + eps) ** 2 / (1.0 + eps**2)


FANO_CLASSES = ("AAAA", "ABAB", "AABB")


def fano_decompose(label: str, cfg: TwoAtomConfig, Delta: float, p: LatticeParams) -> FanoDecomposition:
    """Split the resonant-approximation reflection amplitude into two Lorentzians.

    Requires equal distances d1 = d2 = d21 and the atoms' ``label`` to be one
    of AAAA, ABAB or AABB.
    """
    label = label.upper()
    if label not in FANO_CLASSES or cfg.label != label:
        raise NotApplicable(f"Fano decomposition is defined for {FANO_CLASSES}, got {cfg.label}")
    if not cfg.d1 == cfg.d2 == cfg.d21:
        raise NotApplicable("Fano decomposition needs d1 = d2 = d21")
    if p.sign < 0:
        raise NotApplicable("Fano decomposition is derived for the upper band")
    k = wave_vector_from_detuning(Delta, p)
    phi = topo_phase(k, p)
    ge = emission_rate(k, cfg.g, p)
    kd = k * cfg.d1
    if label == "AAAA":
        c = np.cos(kd)
        dp = ge * np.sin(kd) * (1 + 2 * c + 2 * c * c)
        dm = ge * np.sin(kd) * (1 - 2 * c - 2 * c * c)
        gp = 2 * ge * (1 + c) * (1 + np.cos(2 * kd))
        gm = 2 * ge * (1 + c) * (1 - np.cos(2 * kd))
        psi = kd
    elif label == "ABAB":
        a = kd - phi
        dp = ge * (np.sin(a) + (1 + np.cos(a)) * np.sin(2 * kd))
        dm = ge * (np.sin(a) - (1 + np.cos(a)) * np.sin(2 * kd))
        gp = 2 * ge * (1 + np.cos(a)) * (1 + np.cos(2 * kd))
        gm = 2 * ge * (1 + np.cos(a)) * (1 - np.cos(2 * kd))
        psi = kd - phi
    else:
        b = 2 * kd - phi
        dp = ge * (np.sin(kd) + (1 + np.cos(kd)) * np.sin(b))
        dm = ge * (np.sin(kd) - (1 + np.cos(kd)) * np.sin(b))
        gp = 2 * ge * (1 + np.cos(kd)) * (1 + np.cos(b))
        gm = 2 * ge * (1 + np.cos(kd)) * (1 - np.cos(b))
        psi = kd - phi
    return FanoDecomposition(label, dp, dm, gp, gm, psi, k, ge, cfg.m1)


# --- special-case closed forms ----------------------------------------------


class SpecialCase(str, Enum):
    ABBA_LORENTZIAN = "ABBA_Lorentzian"
    AAAB_LORENTZIAN = "AAAB_Lorentzian"
    SUPER_GAUSSIAN = "SuperGaussian"
    FANO_APPROX = "FanoApprox"


@dataclass(frozen=True)
class SpecialCaseResult:
    kind: SpecialCase
    Delta_k: np.ndarray
    approx: np.ndarray
    exact: np.ndarray

    @property
    def max_residual(self) -> float:
        return float(np.max(np.abs(self.approx - self.exact)))


def _lorentz(dk, center, width):
    return (width**2 / 4.0) / ((dk - center) ** 2 + width**2 / 4.0)


def special_case_reflection(
    label: str,
    kind: SpecialCase | str,
    cfg: TwoAtomConfig,
    Delta: float,
    grid,
    p: LatticeParams,
    tol: float = DARK_TOL,
) -> SpecialCaseResult:
    """Evaluate one of the regime-specific closed forms next to the exact R.

    The regime conditions are checked on characteristics frozen at the
    resonant wave vector, in units of gamma_e with tolerance ``tol``.
    """
    kind = SpecialCase(kind)
    label = label.upper()
    grid = np.asarray(grid, dtype=float)
    k = wave_vector_from_detuning(Delta, p)
    ch = characteristics_two(cfg, k, p)
    ge = ch.gamma_e
    exact = np.asarray(scatter_two(cfg, Delta, grid, p, Mode.RESONANT).R)

    if kind is SpecialCase.ABBA_LORENTZIAN:
        if equivalence_class(cfg.label, cfg.d1, cfg.d2, cfg.d21, 1).label != "ABBA":
            raise NotApplicable("ABBA Lorentzian needs an ABBA-class configuration")
        if abs(ch.g12) > tol * ge:
            raise RegimeViolation("g12 ~ 0", f"g12 = {ch.g12 / ge:.3g} gamma_e")
        if abs(ch.gamma1 * ch.gamma2 - ch.gamma12**2) > tol * ge**2:
            raise RegimeViolation("gamma1*gamma2 - gamma12^2 ~ 0")
        if abs(ch.lamb1 - ch.lamb2) > tol * ge:
            raise RegimeViolation("lamb1 = lamb2")
        approx = _lorentz(grid, ch.lamb1, ch.gamma1 + ch.gamma2)

    elif kind is SpecialCase.AAAB_LORENTZIAN:
        if equivalence_class(cfg.label, cfg.d1, cfg.d2, cfg.d21, 1).label not in ("AAAB", "AABA"):
            raise NotApplicable("AAAB Lorentzian needs an AAAB- or AABA-class configuration")
        for name, val in (("gamma1", ch.gamma1), ("gamma12", ch.gamma12), ("g12", ch.g12)):
            if abs(val) > tol * ge:
                raise RegimeViolation(f"{name} ~ 0", f"{name} = {val / ge:.3g} gamma_e")
        approx = _lorentz(grid, ch.lamb2, ch.gamma2)

    elif kind is SpecialCase.SUPER_GAUSSIAN:
        if abs(ch.lamb1 - ch.lamb2) > tol * ge:
            raise RegimeViolation("lamb1 = lamb2", f"difference {(ch.lamb1 - ch.lamb2) / ge:.3g} gamma_e")
        # Near Delta_k = lamb, T ~ x^4 / |D0|^2 with D0 the denominator at x = 0.
        d0 = (
            ch.gamma1 * ch.gamma2 / 4.0
            - ch.gamma12**2 / 4.0
            + ch.g12**2
            - 1j * ch.gamma12 * ch.g12
        )
        if abs(d0) <= tol * ge**2:
            raise RegimeViolation("|D0| > 0", "the quartic scale vanishes")
        x = grid - ch.lamb1
        approx = np.exp(-(x**4) / abs(d0) ** 2)

    else:
        if label not in FANO_CLASSES:
            raise NotApplicable("Fano approximation is defined for AAAA, ABAB and AABB")
        fd = fano_decompose(label, cfg, Delta, p)
        if fd.separation < FANO_SEPARATION:
            raise RegimeViolation(
                "gamma separation", f"ratio {fd.separation:.3g} < {FANO_SEPARATION:g}"
            )
        approx = fd.fano_reflection(grid)

    return SpecialCaseResult(kind, grid, np.asarray(approx, dtype=float), exact)


# --- EIT-like spectra -------------------------------------------------------


@dataclass(frozen=True)
class EITReport:
    eit_like: bool
    bright: str
    dip_location: float
    peak_locations: tuple[float, float]
    condition_ratio: float


def eit_check(sa: SARepresentation, gamma_e: float, tol: float = DARK_TOL) -> EITReport:
    """Decide whether a one-dark-channel system shows an EIT-like dip.

    The dip sits at the dark channel's Lamb shift; the two unit-reflection
    peaks sit at the individual atoms' Lamb shifts, mean +- g_SA.
    """
    s_dark = abs(sa.gamma_S) < tol * gamma_e
    a_dark = abs(sa.gamma_A) < tol * gamma_e
    if s_dark == a_dark:
        raise NotApplicable("exactly one of the S and A channels must be dark")
    bright = "A" if s_dark else "S"
    gamma_bright = sa.gamma_A if s_dark else sa.gamma_S
    dip = sa.delta_SL if s_dark else sa.delta_AL
    mean = (sa.delta_SL + sa.delta_AL) / 2.0
    peaks = tuple(sorted((mean - abs(sa.g_SA), mean + abs(sa.g_SA))))
    ratio = abs(sa.g_SA) / (gamma_bright / 4.0)
    eit = bool(abs(sa.g_SA) > tol * gamma_e and ratio < 1.0)
    return EITReport(eit, bright, float(dip), peaks, float(ratio))


def cauchy_schwarz_gap(ch: CharacteristicTwo) -> float:
    """sqrt(gamma1 gamma2) - |gamma12|; negative values are flagged with a warning."""
    gap = float(np.sqrt(max(ch.gamma1 * ch.gamma2, 0.0)) - abs(ch.gamma12))
    if gap < -1e-9:
        warnings.warn(f"collective decay exceeds sqrt(gamma1 gamma2) by {-gap:.3g}")
    return gap
