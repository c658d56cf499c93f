"""Sweep execution and CSV/JSON emission."""

from __future__ import annotations

import csv
import io
import json
import os
import subprocess
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .. import __version__
from ..errors import OutOfBand, ScatteringError, SpecError
from ..lattice import emission_rate, in_band, wave_vector_from_detuning
from ..lineshape import auto_grid, classify
from ..oracle import scatter_oracle
from ..single_atom import Mode, characteristics_single, scatter_single
from ..two_atom import FANO_CLASSES, characteristics_two, fano_decompose, scatter_two
from .spec import SweepSpec

CSV_COLUMNS = ("Delta", "Delta_k", "R", "T", "re_r", "im_r", "re_t", "im_t", "flags")
EXTRA_COLUMNS = ("Delta_k_over_gamma_e",)
SCHEMA_VERSION = 1
UNITS_NOTE = "energies in J, detunings in gamma_e where flagged"
# The resonant (Markov) treatment is flagged when gamma_e exceeds this
# fraction of the distance from Delta to the nearest band edge.
EDGE_FRACTION = 0.1
ORACLE_POINTS = 5
ORACLE_TOL = 1e-5


def worker_count() -> int:
    env = os.environ.get("SCATTER_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise SpecError("SCATTER_THREADS", f"expected an integer, got {env!r}") from None
    return os.cpu_count() or 1


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


@dataclass
class SlicePoint:
    """Everything computed at one atomic detuning."""

    Delta: float
    Delta_k: np.ndarray
    r: np.ndarray
    t: np.ndarray
    out_of_band: np.ndarray
    gamma_e: float | None
    regime_violation: bool
    characteristics: dict | None
    classification: dict | None
    oracle: dict | None


def _characteristics(spec: SweepSpec, cfg, Delta: float):
    p = spec.lattice
    try:
        k = wave_vector_from_detuning(Delta, p)
    except OutOfBand:
        return None
    fn = characteristics_single if spec.system == "single" else characteristics_two
    return fn(cfg, k, p)


def _fano(spec: SweepSpec, cfg, Delta: float):
    if spec.system != "two" or cfg.label not in FANO_CLASSES:
        return None
    try:
        return fano_decompose(cfg.label, cfg, Delta, spec.lattice)
    except ScatteringError:
        return None


def _grid(spec: SweepSpec, chars, fano) -> np.ndarray:
    if spec.Delta_k == "auto":
        if chars is None:
            raise SpecError("Delta_k", "automatic grids need Delta inside the band")
        return auto_grid(chars, fano, spec.auto_points)
    x = spec.Delta_k.values()
    if spec.Delta_k.units == "gamma_e":
        if chars is None:
            raise SpecError("Delta_k.units", "gamma_e units need Delta inside the band")
        x = x * chars.gamma_e
    return x


def _edge_flag(spec: SweepSpec, Delta: float, gamma_e: float | None) -> bool:
    if gamma_e is None:
        return False
    lo, hi = sorted(abs(e) for e in spec.lattice.band_interval)
    dist = min(abs(abs(Delta) - lo), abs(hi - abs(Delta)))
    return bool(gamma_e > EDGE_FRACTION * dist)


def _oracle_check(spec: SweepSpec, cfg, Delta: float, grid: np.ndarray) -> dict:
    p = spec.lattice
    idx = np.unique(np.linspace(0, grid.size - 1, min(ORACLE_POINTS, grid.size)).astype(int))
    worst, checked = 0.0, []
    for i in idx:
        dk = float(grid[i])
        if not in_band(Delta + dk, p):
            continue
        sol = scatter_oracle(cfg, Delta, dk, p)
        ref = scatter_single if spec.system == "single" else scatter_two
        R = float(np.asarray(ref(cfg, Delta, dk, p, Mode.EXACT).R))
        err = abs(sol.R - R)
        worst = max(worst, err)
        checked.append({"Delta_k": dk, "R_oracle": sol.R, "R_closed_form": R, "abs_error": err})
    return {"max_abs_error": worst, "tolerance": ORACLE_TOL, "passed": worst < ORACLE_TOL, "points": checked}


def compute_slice(spec: SweepSpec, Delta: float) -> SlicePoint:
    cfg = spec.config()
    p = spec.lattice
    chars = _characteristics(spec, cfg, Delta)
    fano = _fano(spec, cfg, Delta) if chars is not None else None
    grid = _grid(spec, chars, fano)
    fn = scatter_single if spec.system == "single" else scatter_two
    amps = fn(cfg, Delta, grid, p, spec.mode_enum)
    r = np.atleast_1d(np.asarray(amps.r, dtype=complex))
    t = np.atleast_1d(np.asarray(amps.t, dtype=complex))
    oob = np.broadcast_to(np.atleast_1d(amps.out_of_band), r.shape).copy()
    ge = None if chars is None else float(chars.gamma_e)

    char_out = cls_out = oracle_out = None
    if "characteristics" in spec.outputs and chars is not None:
        char_out = {k: float(v) for k, v in asdict(chars).items()}
        if fano is not None:
            char_out["fano"] = {
                "q": float(fano.q), "eta": float(fano.eta),
                "separation": float(fano.separation), "broad": fano.broad,
            }
    if "classification" in spec.outputs:
        if chars is None:
            cls_out = {"error": "OutOfBand"}
        else:
            try:
                cls_out = classify(grid, np.abs(r) ** 2, chars, fano).to_dict()
            except ScatteringError as e:
                cls_out = {"error": type(e).__name__, "detail": str(e)}
    if "oracle_check" in spec.outputs:
        oracle_out = _oracle_check(spec, cfg, Delta, grid)
    return SlicePoint(
        float(Delta), grid, r, t, oob, ge, _edge_flag(spec, Delta, ge), char_out, cls_out, oracle_out
    )


def run_sweep(spec: SweepSpec) -> list[SlicePoint]:
    """Evaluate every Delta of the spec on a worker pool, in input order."""
    deltas = spec.delta_values()
    with ThreadPoolExecutor(max_workers=min(worker_count(), deltas.size)) as pool:
        return list(pool.map(lambda D: compute_slice(spec, float(D)), deltas))


def csv_text(slices: list[SlicePoint]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS + EXTRA_COLUMNS)
    for sl in slices:
        for dk, r, t, oob in zip(sl.Delta_k, sl.r, sl.t, sl.out_of_band):
            flags = []
            if oob:
                flags.append("OutOfBand")
            if sl.regime_violation:
                flags.append("RegimeViolation")
            R, T = abs(r) ** 2, abs(t) ** 2
            extra = "" if sl.gamma_e is None else _fmt(dk / sl.gamma_e)
            w.writerow(
                [_fmt(sl.Delta), _fmt(dk), _fmt(R), _fmt(T), _fmt(r.real), _fmt(r.imag),
                 _fmt(t.real), _fmt(t.imag), "|".join(flags), extra]
            )
    return buf.getvalue()


def git_hash() -> str:
    try:
        out = subprocess.run(
            ["git", "rev-parse", "HEAD"], cwd=Path(__file__).resolve().parent,
            capture_output=True, text=True, timeout=5,
        )
    except (OSError, subprocess.SubprocessError):
        return "unknown"
    return out.stdout.strip() if out.returncode == 0 else "unknown"


def sidecar(spec: SweepSpec, slices: list[SlicePoint]) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "provenance": {"git": git_hash(), "version": __version__, "spec": spec.to_dict()},
        "units": UNITS_NOTE,
        "columns": list(CSV_COLUMNS + EXTRA_COLUMNS),
        "slices": [
            {
                "Delta": sl.Delta,
                "gamma_e": sl.gamma_e,
                "points": int(sl.Delta_k.size),
                "regime_violation": sl.regime_violation,
                "characteristics": sl.characteristics,
                "classification": sl.classification,
                "oracle_check": sl.oracle,
            }
            for sl in slices
        ],
    }


def write_outputs(spec: SweepSpec, slices: list[SlicePoint], prefix: str | Path) -> list[Path]:
    """Write ``<prefix>.csv`` (if a spectrum was requested) and ``<prefix>.json``."""
    prefix = Path(prefix)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    written = []
    if "spectrum" in spec.outputs:
        path = prefix.with_suffix(".csv")
        path.write_text(csv_text(slices))
        written.append(path)
    path = prefix.with_suffix(".json")
    path.write_text(json.dumps(sidecar(spec, slices), indent=2, default=float) + "\n")
    written.append(path)
    return written
