"""Command-line entry point.

Examples:
  giantssh single --label AA --d 2 --delta 0.5 --k-over-pi -0.5 --out out/aa_d2
  giantssh two --label ABBA --delta -0.5 --Delta 1.5811 --outputs spectrum,classification
  giantssh sweep2d --config fig5_aaaa_2d.json --out out/fig5
  giantssh classify --label AABB --delta -0.5 --Delta 1.2351
  giantssh validate --suite all
  giantssh oracle-check --random 50 --seed 7

Exit codes: 0 success, 2 spec error, 3 validation failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from importlib import resources

import numpy as np

from ..errors import ScatteringError, SpecError
from ..oracle import OracleSettings, scatter_oracle
from . import sweep as sweep_mod
from .spec import load_spec_file, merge_overrides, spec_from_dict
from .validate import SUITES, Instance, closed_form_R, oracle_suite, run_suites

EXIT_OK, EXIT_SPEC, EXIT_VALIDATION = 0, 2, 3
log = logging.getLogger("giantssh")


def example_path(name: str):
    """Path of a bundled figure-reproduction spec."""
    return resources.files("giantssh.runner") / "examples" / name


def _csv_list(s: str) -> list[str]:
    return [x.strip() for x in s.split(",") if x.strip()]


def _add_spec_args(p: argparse.ArgumentParser, two_d: bool = False) -> None:
    g = p.add_argument_group("system")
    g.add_argument("--config", help="JSON spec file; flags below override its fields")
    g.add_argument("--system", choices=["single", "two"], help="one or two giant atoms")
    g.add_argument("--label", help="sublattice labels, e.g. AB or ABBA")
    g.add_argument("--d", type=int, help="single atom: leg separation in cells")
    g.add_argument("--d1", type=int)
    g.add_argument("--d2", type=int)
    g.add_argument("--d21", type=int, help="cells between the two atoms")
    g.add_argument("--n", type=int, help="cell of the leftmost leg (default 1)")
    g.add_argument("--delta", type=float, help="dimerization (default 0.5)")
    g.add_argument("--J", type=float, help="hopping scale (default 1)")
    g.add_argument("--band", choices=["upper", "lower"])
    g.add_argument("--g", type=float, help="coupling strength per leg (default 0.01)")
    d = p.add_argument_group("detunings")
    if two_d:
        d.add_argument("--Delta-start", type=float)
        d.add_argument("--Delta-stop", type=float)
        d.add_argument("--Delta-num", type=int)
    else:
        d.add_argument("--Delta", type=float, help="atom detuning from band centre, in J")
        d.add_argument("--k-over-pi", type=float, help="set Delta on shell at k = value * pi")
    d.add_argument("--dk-start", type=float)
    d.add_argument("--dk-stop", type=float)
    d.add_argument("--dk-num", type=int)
    d.add_argument("--dk-units", choices=["J", "gamma_e"])
    d.add_argument("--auto-grid", action="store_true", help="refine the probe grid around each resonance")
    d.add_argument("--auto-points", type=int)
    o = p.add_argument_group("output")
    o.add_argument("--mode", choices=["exact", "resonant"])
    o.add_argument("--outputs", type=_csv_list, help="comma list of spectrum, characteristics, classification, oracle_check")
    o.add_argument("--out", help="output prefix; writes PREFIX.csv and PREFIX.json (default: CSV to stdout)")
    o.add_argument("--emit-spec", action="store_true", help="print the resolved spec as JSON and exit")


def _overrides(args, system: str | None) -> dict:
    ov = {
        "system": args.system or system,
        "label": args.label,
        "distances.d": args.d,
        "distances.d1": args.d1,
        "distances.d2": args.d2,
        "distances.d21": args.d21,
        "n": args.n,
        "delta": args.delta,
        "J": args.J,
        "band": args.band,
        "g": args.g,
        "mode": args.mode,
        "outputs": args.outputs,
        "auto_points": args.auto_points,
        "Delta_k.start": args.dk_start,
        "Delta_k.stop": args.dk_stop,
        "Delta_k.num": args.dk_num,
        "Delta_k.units": args.dk_units,
    }
    if hasattr(args, "Delta_start"):
        ov.update({"Delta.start": args.Delta_start, "Delta.stop": args.Delta_stop, "Delta.num": args.Delta_num})
    else:
        if args.k_over_pi is not None:
            ov["Delta"] = {"k_over_pi": args.k_over_pi}
        ov["Delta"] = ov.get("Delta", args.Delta)
    return ov


def build_spec(args, system: str | None = None, outputs: list[str] | None = None):
    raw = load_spec_file(args.config) if args.config else {}
    if outputs and "outputs" not in raw:
        raw["outputs"] = outputs
    if args.auto_grid:
        raw.pop("Delta_k", None)
    elif any(v is not None for v in (args.dk_start, args.dk_stop, args.dk_num, args.dk_units)):
        if not isinstance(raw.get("Delta_k"), dict):
            raw["Delta_k"] = {}
    merged = merge_overrides(raw, _overrides(args, system))
    return spec_from_dict(merged)


def cmd_sweep(args, system: str | None) -> int:
    spec = build_spec(args, system)
    if args.emit_spec:
        print(json.dumps(spec.to_dict(), indent=2))
        return EXIT_OK
    slices = sweep_mod.run_sweep(spec)
    if args.out:
        for path in sweep_mod.write_outputs(spec, slices, args.out):
            log.info("wrote %s", path)
            print(path)
    else:
        if "spectrum" in spec.outputs:
            sys.stdout.write(sweep_mod.csv_text(slices))
        else:
            print(json.dumps(sweep_mod.sidecar(spec, slices), indent=2, default=float))
    failed = [sl for sl in slices if sl.oracle is not None and not sl.oracle["passed"]]
    return EXIT_VALIDATION if failed else EXIT_OK


def cmd_classify(args) -> int:
    spec = build_spec(args, "two", outputs=["classification", "characteristics"])
    if "classification" not in spec.outputs:
        spec.outputs.append("classification")
    if args.emit_spec:
        print(json.dumps(spec.to_dict(), indent=2))
        return EXIT_OK
    slices = sweep_mod.run_sweep(spec)
    report = [{"Delta": sl.Delta, "classification": sl.classification} for sl in slices]
    print(json.dumps(report if len(report) > 1 else report[0], indent=2, default=float))
    return EXIT_OK


def cmd_validate(args) -> int:
    names = SUITES if "all" in args.suite else tuple(args.suite)
    reports = run_suites(names, n=args.n, seed=args.seed, cells=args.cells)
    for rep in reports:
        status = "PASS" if rep.passed else "FAIL"
        print(f"[{status}] {rep.suite}: {len(rep.checks) - len(rep.failures)}/{len(rep.checks)} checks")
        for c in rep.checks if args.verbose else rep.failures:
            print(f"    {'ok  ' if c.passed else 'FAIL'} {c.name}: {c.detail}")
    if args.json:
        print(json.dumps([r.to_dict() for r in reports], indent=2))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VALIDATION


def cmd_oracle_check(args) -> int:
    if args.label is None and args.config is None:
        rep = oracle_suite(n=args.random, seed=args.seed, cells=args.cells)
        for c in rep.checks:
            print(f"{'ok  ' if c.passed else 'FAIL'} {c.name}: {c.detail}")
        print(f"{len(rep.checks) - len(rep.failures)}/{len(rep.checks)} within tolerance")
        return EXIT_OK if rep.passed else EXIT_VALIDATION

    spec = build_spec(args, "two")
    settings = OracleSettings(cells=args.cells)
    cfg, p = spec.config(), spec.lattice
    worst = 0.0
    for Delta in spec.delta_values():
        sl = sweep_mod.compute_slice(spec, float(Delta))
        idx = np.unique(np.linspace(0, sl.Delta_k.size - 1, min(args.points, sl.Delta_k.size)).astype(int))
        for i in idx:
            dk = float(sl.Delta_k[i])
            try:
                sol = scatter_oracle(cfg, float(Delta), dk, p, settings)
            except ScatteringError as e:
                print(f"skip Delta={Delta:.6g} Delta_k={dk:.6g}: {e}")
                continue
            ref = closed_form_R(Instance(cfg, float(Delta), dk, p))
            err = abs(sol.R - ref)
            worst = max(worst, err)
            print(f"Delta={Delta:.6g} Delta_k={dk:+.6e} R_oracle={sol.R:.12f} R_closed={ref:.12f} |dR|={err:.2e}")
    print(f"max |dR| = {worst:.3e} (tolerance {sweep_mod.ORACLE_TOL:g})")
    return EXIT_OK if worst < sweep_mod.ORACLE_TOL else EXIT_VALIDATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="giantssh",
        description="Single-photon scattering off giant atoms in an SSH waveguide.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=__doc__.split("\n\n", 1)[1],
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("single", help="spectrum of one giant atom")
    _add_spec_args(p)
    p = sub.add_parser("two", help="spectrum of two giant atoms")
    _add_spec_args(p)
    p = sub.add_parser("sweep2d", help="spectra over a range of atom detunings")
    _add_spec_args(p, two_d=True)
    p = sub.add_parser("classify", help="line-shape classification as JSON")
    _add_spec_args(p)

    p = sub.add_parser("validate", help="run the release-gate suites")
    p.add_argument("--suite", nargs="+", choices=SUITES + ("all",), default=["all"])
    p.add_argument("--n", type=int, default=50, help="oracle instances")
    p.add_argument("--seed", type=int, default=20240611)
    p.add_argument("--cells", type=int, help="oracle chain length")
    p.add_argument("--json", action="store_true", help="also print a JSON summary")

    p = sub.add_parser("oracle-check", help="closed forms against the finite-chain solver")
    _add_spec_args(p)
    p.add_argument("--random", type=int, default=50, help="random instances when no system is given")
    p.add_argument("--seed", type=int, default=20240611)
    p.add_argument("--cells", type=int, help="chain length (default 600)", default=600)
    p.add_argument("--points", type=int, default=5, help="probe points per Delta")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        if args.command in ("single", "two", "sweep2d"):
            return cmd_sweep(args, None if args.command == "sweep2d" else args.command)
        if args.command == "classify":
            return cmd_classify(args)
        if args.command == "validate":
            return cmd_validate(args)
        return cmd_oracle_check(args)
    except SpecError as e:
        print(f"spec error at {e.path or '<root>'}: {e.message}", file=sys.stderr)
        return EXIT_SPEC
    except (ScatteringError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_SPEC
    except BrokenPipeError:
        # Downstream reader closed early (e.g. piped into head); stop quietly.
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
