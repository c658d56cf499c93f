"""Sweep specifications: JSON ingestion, CLI overrides and validation."""

from __future__ import annotations

import json
import warnings
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from ..coupling import SingleConfig, TwoAtomConfig, parse_label
from ..errors import SpecError
from ..lattice import Band, LatticeParams, omega
from ..single_atom import Mode

MAX_POINTS = 1_000_000
WEAK_COUPLING = 0.05
OUTPUT_KINDS = ("spectrum", "characteristics", "classification", "oracle_check")
_MODE_ALIASES = {"exact": Mode.EXACT, "resonant": Mode.RESONANT, "resonantapprox": Mode.RESONANT}


@dataclass
class Range:
    """Linearly spaced values; ``units`` is "J" or "gamma_e" (probe grids only)."""

    start: float
    stop: float
    num: int
    units: str = "J"

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.num)


@dataclass
class SweepSpec:
    system: str
    label: str
    distances: dict
    Delta: float | Range
    Delta_k: Range | str = "auto"
    delta: float = 0.5
    J: float = 1.0
    band: str = "upper"
    g: float = 0.01
    n: int = 1
    mode: str = "resonant"
    auto_points: int = 401
    outputs: list = field(default_factory=lambda: ["spectrum", "characteristics"])

    @property
    def lattice(self) -> LatticeParams:
        return LatticeParams(self.J, self.delta, Band(self.band))

    @property
    def mode_enum(self) -> Mode:
        return _MODE_ALIASES[self.mode]

    def config(self):
        d = self.distances
        if self.system == "single":
            return SingleConfig.from_label(self.label, d["d"], self.g, self.n)
        return TwoAtomConfig.from_label(self.label, d["d1"], d["d2"], d["d21"], self.g, self.n)

    def delta_values(self) -> np.ndarray:
        if isinstance(self.Delta, Range):
            return self.Delta.values()
        return np.array([float(self.Delta)])

    def total_points(self) -> int:
        nk = self.auto_points * 3 if self.Delta_k == "auto" else self.Delta_k.num
        return int(self.delta_values().size * nk)

    def to_dict(self) -> dict:
        return asdict(self)


def _path_get(d: dict, key: str, path: str, kind, default=None, required=False):
    if key not in d or d[key] is None:
        if required:
            raise SpecError(f"{path}{key}", "field is required")
        return default
    val = d[key]
    try:
        if kind is int:
            if isinstance(val, bool) or int(val) != val:
                raise TypeError
            return int(val)
        if kind is float:
            if isinstance(val, bool):
                raise TypeError
            out = float(val)
            if not np.isfinite(out):
                raise ValueError
            return out
        if kind is str:
            if not isinstance(val, str):
                raise TypeError
            return val
    except (TypeError, ValueError):
        raise SpecError(f"{path}{key}", f"expected {kind.__name__}, got {val!r}") from None
    return val


def _range(d, path, probe: bool) -> Range:
    if not isinstance(d, dict):
        raise SpecError(path, f"expected an object with start/stop/num, got {d!r}")
    r = Range(
        _path_get(d, "start", path + ".", float, required=True),
        _path_get(d, "stop", path + ".", float, required=True),
        _path_get(d, "num", path + ".", int, required=True),
        _path_get(d, "units", path + ".", str, default="J"),
    )
    if r.num < 1:
        raise SpecError(path + ".num", "must be at least 1")
    if r.num > 1 and not r.stop > r.start:
        raise SpecError(path + ".stop", "grid must be ascending (stop > start)")
    allowed = ("J", "gamma_e") if probe else ("J",)
    if r.units not in allowed:
        raise SpecError(path + ".units", f"must be one of {allowed}")
    return r


def _resolve_delta(raw, p: LatticeParams, path="Delta"):
    if isinstance(raw, dict) and "k_over_pi" in raw:
        k = _path_get(raw, "k_over_pi", path + ".", float) * np.pi
        return float(p.sign * omega(k, p))
    if isinstance(raw, dict):
        return _range(raw, path, probe=False)
    return _path_get({"Delta": raw}, "Delta", "", float, required=True)


def spec_from_dict(raw: dict) -> SweepSpec:
    """Validate a raw JSON-like mapping and build a SweepSpec.

    Errors carry the dotted path of the offending field.
    """
    if not isinstance(raw, dict):
        raise SpecError("", "spec must be a JSON object")
    system = _path_get(raw, "system", "", str, default="two")
    if system not in ("single", "two"):
        raise SpecError("system", "must be 'single' or 'two'")
    length = 2 if system == "single" else 4
    try:
        label = parse_label(_path_get(raw, "label", "", str, required=True), length)
    except ValueError as e:
        raise SpecError("label", str(e)) from None

    dist_raw = raw.get("distances", {})
    if not isinstance(dist_raw, dict):
        raise SpecError("distances", "expected an object")
    keys = ("d",) if system == "single" else ("d1", "d2", "d21")
    distances = {}
    for k in keys:
        v = _path_get(dist_raw, k, "distances.", int, default=2)
        if v < 1:
            raise SpecError(f"distances.{k}", "must be >= 1")
        distances[k] = v

    J = _path_get(raw, "J", "", float, default=1.0)
    delta = _path_get(raw, "delta", "", float, default=0.5)
    band = _path_get(raw, "band", "", str, default="upper")
    g = _path_get(raw, "g", "", float, default=0.01)
    n = _path_get(raw, "n", "", int, default=1)
    if J <= 0:
        raise SpecError("J", "must be positive")
    if not -1 < delta < 1:
        raise SpecError("delta", "must lie in (-1, 1)")
    if band not in ("upper", "lower"):
        raise SpecError("band", "must be 'upper' or 'lower'")
    if g <= 0:
        raise SpecError("g", "must be positive")
    if n < 1:
        raise SpecError("n", "must be >= 1")
    if g / J > WEAK_COUPLING:
        warnings.warn(f"g/J = {g / J:.3g} exceeds the weak-coupling regime ({WEAK_COUPLING})")
    p = LatticeParams(J, delta, Band(band))

    if "Delta" not in raw:
        raise SpecError("Delta", "field is required")
    Delta = _resolve_delta(raw["Delta"], p)

    dk_raw = raw.get("Delta_k", "auto")
    if dk_raw == "auto":
        Delta_k = "auto"
    elif isinstance(dk_raw, list):
        vals = np.asarray(dk_raw, dtype=float)
        if vals.ndim != 1 or vals.size == 0 or not np.all(np.isfinite(vals)):
            raise SpecError("Delta_k", "explicit grid must be a non-empty finite list")
        if np.any(np.diff(vals) <= 0):
            raise SpecError("Delta_k", "grid must be strictly ascending")
        Delta_k = Range(float(vals[0]), float(vals[-1]), int(vals.size))
        if not np.allclose(Delta_k.values(), vals, rtol=0, atol=1e-12 * max(1.0, np.abs(vals).max())):
            raise SpecError("Delta_k", "explicit grids must be evenly spaced; use start/stop/num")
    else:
        Delta_k = _range(dk_raw, "Delta_k", probe=True)

    mode = _path_get(raw, "mode", "", str, default="resonant").lower()
    if mode not in _MODE_ALIASES:
        raise SpecError("mode", f"must be one of {sorted(_MODE_ALIASES)}")
    auto_points = _path_get(raw, "auto_points", "", int, default=401)
    if auto_points < 16:
        raise SpecError("auto_points", "must be at least 16")

    outputs = raw.get("outputs", ["spectrum", "characteristics"])
    if not isinstance(outputs, list) or not outputs:
        raise SpecError("outputs", "at least one output is required")
    for i, o in enumerate(outputs):
        if o not in OUTPUT_KINDS:
            raise SpecError(f"outputs[{i}]", f"unknown output {o!r}; choose from {OUTPUT_KINDS}")

    spec = SweepSpec(
        system, label, distances, Delta, Delta_k, delta, J, band, g, n,
        "resonant" if mode == "resonantapprox" else mode, auto_points, list(outputs),
    )
    try:
        spec.config()
    except ValueError as e:
        raise SpecError("distances", str(e)) from None
    if spec.total_points() > MAX_POINTS:
        raise SpecError("Delta_k.num", f"sweep has {spec.total_points()} points (> {MAX_POINTS})")
    return spec


def load_spec_file(path: str | Path) -> dict:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except FileNotFoundError:
        raise SpecError("config", f"no such file: {path}") from None
    except json.JSONDecodeError as e:
        raise SpecError("config", f"invalid JSON: {e}") from None
    if not isinstance(raw, dict):
        raise SpecError("", "spec must be a JSON object")
    return raw


def merge_overrides(raw: dict, overrides: dict) -> dict:
    """Overlay CLI values onto a raw spec; dotted keys address nested fields."""
    out = json.loads(json.dumps(raw))
    for key, val in overrides.items():
        if val is None:
            continue
        node = out
        parts = key.split(".")
        for part in parts[:-1]:
            if not isinstance(node.get(part), dict):
                node[part] = {}
            node = node[part]
        node[parts[-1]] = val
    return out
