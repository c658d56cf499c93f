"""Line-shape classification and Fano fitting of reflection spectra.

The classifier is a fixed decision tree over features of the sampled R(Delta_k)
curve, gated by conditions on the characteristic quantities:

    flat                          -> CompleteTransmission
    single Lorentzian fits        -> Lorentzian
    zero-touching asymmetric dip  -> Fano           (needs a Fano decomposition)
    dip between two unit peaks    -> EITLike        (needs one dark S-A channel)
    unit peak with quartic top    -> SuperGaussian
    anything else                 -> Unclassified

All thresholds live in ``CALIBRATION``.
"""

from __future__ import annotations

import warnings
from dataclasses import asdict, dataclass, field
from enum import Enum

import numpy as np
from scipy.optimize import OptimizeWarning, curve_fit
from scipy.signal import find_peaks

from .errors import GridTooCoarse, NotApplicable, RegimeViolation
from .single_atom import CharacteristicSingle
from .two_atom import (
    DARK_TOL,
    FANO_SEPARATION,
    CharacteristicTwo,
    FanoDecomposition,
    eit_check,
    sa_representation,
)

CALIBRATION = {
    "flat_max_R": 1e-6,  # CompleteTransmission if max R stays below this
    "lorentz_rms": 1e-3,  # RMS error accepted for a Lorentzian fit
    "zero_R": 1e-2,  # a sampled minimum below this "touches zero"
    "fano_asymmetry": 0.1,  # min |R(x0 + s) - R(x0 - s)| across the dip
    "fano_separation": FANO_SEPARATION,  # broad / narrow width ratio
    "fano_window_widths": 6.0,  # fit window, in narrow-channel widths
    "peak_prominence": 0.5,  # for EIT peak detection
    "unit_peak": 1e-3,  # a peak counts as R = 1 within this
    "eit_dip_R": 0.1,  # EIT dip must fall below this
    "quartic_exponent": 3.5,  # minimum log-log slope of 1 - R at the top
    "supergauss_rms": 5e-2,  # RMS of exp(-x^4/s) over the R >= 1/2 region
    "dark_tol": DARK_TOL,
    "min_points_per_width": 5,
}


class Shape(str, Enum):
    LORENTZIAN = "Lorentzian"
    FANO = "Fano"
    EIT = "EITLike"
    SUPER_GAUSSIAN = "SuperGaussian"
    COMPLETE_TRANSMISSION = "CompleteTransmission"
    UNCLASSIFIED = "Unclassified"


@dataclass
class LineShapeReport:
    shape: Shape
    fit_params: dict = field(default_factory=dict)
    residual: float = 0.0
    regime_evidence: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["shape"] = self.shape.value
        return _jsonable(d)


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.floating, np.integer, np.bool_)):
        return x.item()
    if isinstance(x, Enum):
        return x.value
    return x


def lorentzian(x, amp, center, width):
    return amp * (width**2 / 4.0) / ((x - center) ** 2 + width**2 / 4.0)


def fano_profile(eps, eta, q):
    return eta * (q + eps) ** 2 / (1.0 + eps**2)


def _quiet_fit(fn, x, y, p0):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", OptimizeWarning)
        warnings.simplefilter("ignore", RuntimeWarning)
        popt, _ = curve_fit(fn, x, y, p0=p0, maxfev=20000)
    return popt, float(np.sqrt(np.mean((fn(x, *popt) - y) ** 2)))


def _resonances(chars, fano: FanoDecomposition | None = None):
    """(center, width) pairs that can shape the spectrum."""
    if isinstance(chars, CharacteristicSingle):
        return [(chars.lamb_shift, chars.decay)]
    sa = sa_representation(chars)
    out = [
        (chars.lamb1, chars.gamma1),
        (chars.lamb2, chars.gamma2),
        (sa.delta_SL, sa.gamma_S),
        (sa.delta_AL, sa.gamma_A),
    ]
    bright = max(abs(sa.gamma_S), abs(sa.gamma_A))
    if bright > 0:
        # Interference dip of a dark channel, width ~ 4 g_SA^2 / Gamma_bright.
        dip = 4.0 * sa.g_SA**2 / bright
        out += [(sa.delta_SL, dip), (sa.delta_AL, dip)]
    if fano is not None:
        out += [(fano.delta_plus, fano.gamma_plus), (fano.delta_minus, fano.gamma_minus)]
    return out


def auto_grid(chars, fano: FanoDecomposition | None = None, n: int = 401) -> np.ndarray:
    """Ascending Delta_k grid: a coarse sweep plus refinement around every resonance.

    Covers at least six widths on either side of each resonance; doubling
    ``n`` doubles the density of every piece.
    """
    ge = abs(float(chars.gamma_e))
    res = [(float(c), abs(float(w))) for c, w in _resonances(chars, fano)]
    widths = [w for _, w in res if w > 1e-6 * ge]
    wmax = max(widths, default=ge)
    centers = [c for c, _ in res]
    lo = min(centers) - 6.0 * max(wmax, ge)
    hi = max(centers) + 6.0 * max(wmax, ge)
    pieces = [np.linspace(lo, hi, n)]
    for c, w in res:
        if w > 1e-6 * ge:
            pieces.append(np.linspace(c - 6.0 * w, c + 6.0 * w, max(n // 4, 11)))
    return np.unique(np.concatenate(pieces))


def _check_resolution(x, R):
    if x.size < 16:
        raise GridTooCoarse("at least 16 grid points are required")
    i = int(np.argmax(R))
    half = R >= R[i] / 2.0
    lo = i
    while lo > 0 and half[lo - 1]:
        lo -= 1
    hi = i
    while hi < x.size - 1 and half[hi + 1]:
        hi += 1
    if hi - lo + 1 < CALIBRATION["min_points_per_width"]:
        raise GridTooCoarse(
            f"dominant peak at {x[i]:.4g} has only {hi - lo + 1} points above half maximum"
        )


def _top_exponent(x, R):
    """Log-log slope of 1 - R against distance from the peak, near the top."""
    i = int(np.argmax(R))
    d = np.abs(x - x[i])
    dip = 1.0 - R
    m = (dip > 1e-7) & (dip < 5e-2) & (d > 0)
    if np.count_nonzero(m) < 4:
        return float("nan")
    slope, _ = np.polyfit(np.log(d[m]), np.log(dip[m]), 1)
    return float(slope)


def _fano_features(x, R, fano: FanoDecomposition):
    """Position, depth and wing asymmetry of the dip nearest the narrow resonance."""
    (_, _), (dn, gn) = fano._bn()
    win = CALIBRATION["fano_window_widths"] * gn
    center = dn - fano.q * gn / 2.0
    m = np.abs(x - center) <= win
    if np.count_nonzero(m) < CALIBRATION["min_points_per_width"]:
        raise GridTooCoarse("narrow Fano resonance is not resolved by the grid")
    j = np.flatnonzero(m)[np.argmin(R[m])]
    x0 = x[j]
    s = np.linspace(0.0, win / 2.0, 41)
    asym = float(np.max(np.abs(np.interp(x0 + s, x, R) - np.interp(x0 - s, x, R))))
    return float(x0), float(R[j]), asym


def fano_fit(x, R, fano: FanoDecomposition) -> tuple[float, float, float]:
    """Least-squares fit of eta (q + eps)^2 / (1 + eps^2) around the narrow resonance.

    The window spans ``fano_window_widths`` narrow widths centred on the
    predicted minimum.  Returns (q, eta, rms residual).
    """
    if fano.separation < CALIBRATION["fano_separation"]:
        raise RegimeViolation(
            "gamma separation", f"ratio {fano.separation:.3g} < {CALIBRATION['fano_separation']:g}"
        )
    x = np.asarray(x, dtype=float)
    R = np.asarray(R, dtype=float)
    (_, _), (dn, gn) = fano._bn()
    center = dn - fano.q * gn / 2.0
    m = np.abs(x - center) <= CALIBRATION["fano_window_widths"] * gn / 2.0
    if np.count_nonzero(m) < 8:
        raise GridTooCoarse("too few points inside the Fano fit window")
    (eta, q), rms = _quiet_fit(fano_profile, fano.epsilon(x[m]), R[m], [fano.eta, fano.q])
    return float(q), float(eta), rms


def classify(Delta_k, R, chars, fano: FanoDecomposition | None = None) -> LineShapeReport:
    """Assign a reflection spectrum to one of the line-shape classes.

    ``chars`` are the characteristics frozen at the resonant wave vector;
    ``fano`` is the decomposition when the configuration supports one.
    """
    x = np.asarray(Delta_k, dtype=float)
    R = np.asarray(R, dtype=float)
    if x.shape != R.shape or x.ndim != 1:
        raise ValueError("Delta_k and R must be 1-D arrays of equal length")
    ge = abs(float(chars.gamma_e))
    cal = CALIBRATION

    if np.max(R) < cal["flat_max_R"]:
        return LineShapeReport(
            Shape.COMPLETE_TRANSMISSION, {}, float(np.max(R)), {"max_R": float(np.max(R))}
        )
    _check_resolution(x, R)

    # Lorentzian
    i = int(np.argmax(R))
    above = x[R >= R[i] / 2.0]
    w0 = max(above[-1] - above[0], (x[-1] - x[0]) / x.size)
    try:
        (amp, c, w), lrms = _quiet_fit(lorentzian, x, R, [R[i], x[i], w0])
    except RuntimeError:
        amp, c, w, lrms = np.nan, np.nan, np.nan, np.inf
    if lrms < cal["lorentz_rms"]:
        return LineShapeReport(
            Shape.LORENTZIAN,
            {"center": c, "fwhm": abs(w), "amplitude": amp,
             "center_over_gamma_e": c / ge, "fwhm_over_gamma_e": abs(w) / ge},
            lrms,
            {"lorentz_rms": lrms},
        )

    evidence: dict = {"lorentz_rms": lrms}

    # Fano
    if fano is not None:
        evidence["gamma_separation"] = fano.separation
        if fano.separation >= cal["fano_separation"]:
            x0, rmin, asym = _fano_features(x, R, fano)
            evidence.update({"dip_location": x0, "dip_R": rmin, "asymmetry": asym})
            if rmin < cal["zero_R"] and asym > cal["fano_asymmetry"]:
                q, eta, rms = fano_fit(x, R, fano)
                return LineShapeReport(
                    Shape.FANO,
                    {"q": q, "eta": eta, "q_pred": fano.q, "eta_pred": fano.eta,
                     "broad": fano.broad, "dip_location": x0},
                    rms,
                    evidence,
                )

    peaks, _ = find_peaks(R, prominence=cal["peak_prominence"])

    # EIT-like
    if isinstance(chars, CharacteristicTwo):
        sa = sa_representation(chars)
        try:
            eit = eit_check(sa, ge, cal["dark_tol"])
        except NotApplicable:
            eit = None
        if eit is not None:
            evidence.update({"eit_ratio": eit.condition_ratio, "bright": eit.bright})
        if eit is not None and eit.eit_like and peaks.size == 2:
            a, b = peaks
            j = a + int(np.argmin(R[a : b + 1]))
            ok_peaks = np.all(R[peaks] > 1.0 - cal["unit_peak"])
            if ok_peaks and R[j] < cal["eit_dip_R"]:
                res = float(np.sqrt(np.mean([(1 - R[a]) ** 2, (1 - R[b]) ** 2, R[j] ** 2])))
                return LineShapeReport(
                    Shape.EIT,
                    {"dip_location": x[j], "dip_R": R[j],
                     "peak_locations": [x[a], x[b]], "peak_R": [R[a], R[b]]},
                    res,
                    evidence,
                )

    # Super-Gaussian
    if R[i] > 1.0 - cal["unit_peak"]:
        expo = _top_exponent(x, R)
        evidence["top_exponent"] = expo
        if np.isfinite(expo) and expo >= cal["quartic_exponent"]:
            m = R >= 0.5
            s0 = max((above[-1] - above[0]) / 2.0, 1e-12) ** 4 / np.log(2.0)
            try:
                (cen, s), srms = _quiet_fit(
                    lambda xx, cc, ss: np.exp(-((xx - cc) ** 4) / ss), x[m], R[m], [x[i], s0]
                )
            except RuntimeError:
                srms = np.inf
            evidence["supergauss_rms"] = srms
            if srms < cal["supergauss_rms"]:
                return LineShapeReport(
                    Shape.SUPER_GAUSSIAN,
                    {"center": cen, "quartic_scale": abs(s) ** 0.25, "top_exponent": expo},
                    srms,
                    evidence,
                )

    return LineShapeReport(Shape.UNCLASSIFIED, {}, lrms, evidence)


def classify_rows(rows, chars, fano: FanoDecomposition | None = None) -> LineShapeReport:
    """``classify`` on a sequence of SpectrumRow; out-of-band rows are dropped."""
    rows = [r for r in rows if "OutOfBand" not in r.flags]
    return classify(np.array([r.Delta_k for r in rows]), np.array([r.R for r in rows]), chars, fano)
