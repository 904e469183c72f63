"""Command line interface: figure presets, verification suites, generic sweeps.

Outputs are plain CSV with `#`-prefixed metadata lines (parameter echo and
build version), 12 significant digits, and no timestamps, so identical
invocations produce byte-identical files.  Flagged singular samples of the
decoherence rate serialize as `nan`.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .dynamics import TimeGrid
from .presets import (
    CONTOUR_PRESETS,
    CURVE_PRESETS,
    PRESET_NAMES,
    QUANTITIES,
    CurvePreset,
    contour_table,
    curve_table,
    make_config,
    quantity_values,
)
from .verify import SUITES, run_suites

EXIT_OK = 0
EXIT_TOLERANCE = 1
EXIT_CONFIG = 2


@dataclass
class Scenario:
    """One runner invocation: a preset plus optional overrides."""

    preset: str
    out: Path
    n_points: int | None = None
    t_end: float | None = None
    mode: str = "closed"


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _meta_lines(pairs) -> list[str]:
    return [f"# {k}: {v}" for k, v in pairs]


def _write(path: Path, lines) -> None:
    try:
        with open(path, "w") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write output file {path}: {exc}") from exc


def run_curve_preset(sc: Scenario, preset: CurvePreset | None = None) -> Path:
    """Preset curves as CSV: one column per coupling value."""
    preset = preset or CURVE_PRESETS[sc.preset]
    times, columns = curve_table(preset, sc.n_points, sc.t_end, sc.mode)
    header = "t," + ",".join(f"value_omega_{g}" for g in preset.couplings)
    meta = _meta_lines([
        ("generator", f"cavityqfi {__version__}"),
        ("preset", preset.name),
        ("family", preset.family),
        ("quantity", preset.quantity),
        ("reservoir", ("omega_c" if preset.family == "ohmic" else "width")
         + f"={_fmt(preset.reservoir)}"),
        ("couplings", ",".join(str(g) for g in preset.couplings)),
        ("theta", _fmt(math.pi / 2)), ("phi", "0"),
        ("t_end", _fmt(sc.t_end or preset.t_end)),
        ("points", sc.n_points or preset.n_points),
        ("mode", sc.mode),
        ("time_unit", "omega0*t" if preset.family == "ohmic" else "R*t"),
    ])
    rows = [header]
    series = [columns[g] for g in preset.couplings]
    for i, t in enumerate(times):
        rows.append(",".join([_fmt(t)] + [_fmt(col[i]) for col in series]))
    _write(sc.out, meta + rows)
    return sc.out


def run_contour_preset(sc: Scenario) -> Path:
    """Preset contour as long-format CSV (t, param, value)."""
    preset = CONTOUR_PRESETS[sc.preset]
    times, params, values = contour_table(preset, sc.n_points, sc.t_end, sc.mode)
    meta = _meta_lines([
        ("generator", f"cavityqfi {__version__}"),
        ("preset", preset.name),
        ("family", preset.family),
        ("quantity", "qfi_phi"),
        ("sweep", f"{preset.sweep} in [{_fmt(preset.lo)}, {_fmt(preset.hi)}]"
         f" x {preset.n_param}"),
        ("fixed", _fmt(preset.fixed)),
        ("theta", _fmt(math.pi / 2)), ("phi", "0"),
        ("t_end", _fmt(sc.t_end or preset.t_end)),
        ("points", sc.n_points or preset.n_points),
        ("mode", sc.mode),
        ("row_order", "param-major"),
    ])
    rows = ["t,param,value"]
    for j, v in enumerate(params):
        for i, t in enumerate(times):
            rows.append(f"{_fmt(t)},{_fmt(v)},{_fmt(values[j, i])}")
    _write(sc.out, meta + rows)
    return sc.out


def run_verify(suite_names=None, stream=None) -> int:
    """Run verification suites, print one line each, return an exit code."""
    stream = stream or sys.stdout
    try:
        results = run_suites(suite_names)
    except KeyError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    for r in results:
        print(r.line(), file=stream)
    n_fail = sum(not r.passed for r in results)
    print(f"{len(results) - n_fail}/{len(results)} suites passed", file=stream)
    return EXIT_OK if n_fail == 0 else EXIT_TOLERANCE


def _parse_range(text: str) -> np.ndarray:
    try:
        a, b, n = text.split(":")
        a, b, n = float(a), float(b), int(n)
    except ValueError:
        raise ValueError(f"range must look like A:B:N, got {text!r}")
    if n < 1:
        raise ValueError("range count must be >= 1")
    return np.linspace(a, b, n)


SWEEP_PARAMS = {
    "ohmic": ("coupling", "omega_c", "theta", "phi"),
    "lorentzian": ("coupling", "width", "detuning", "theta", "phi"),
}


def run_sweep(family: str, params: list[str], ranges: list[str],
              quantity: str, t_end: float, n_points: int, out: Path,
              fixed: dict | None = None) -> Path:
    """Cartesian sweep over named parameters, long-format CSV."""
    if len(params) != len(ranges):
        raise ValueError("need one --range per --param")
    for p in params:
        if p not in SWEEP_PARAMS[family]:
            raise ValueError(f"parameter {p!r} not sweepable for {family} "
                             f"(choose from {SWEEP_PARAMS[family]})")
    axes = [_parse_range(r) for r in ranges]
    fixed = dict(fixed or {})
    defaults = {"coupling": 1.0, "omega_c": 3.0, "width": 1.0,
                "theta": math.pi / 2, "phi": 0.0, "detuning": None}
    grid = TimeGrid(t_end, n_points)

    meta = _meta_lines([
        ("generator", f"cavityqfi {__version__}"),
        ("family", family), ("quantity", quantity),
        ("swept", ",".join(params)),
        ("fixed", ",".join(f"{k}={v}" for k, v in sorted(fixed.items())) or "-"),
        ("t_end", _fmt(t_end)), ("points", n_points),
    ])
    rows = ["t," + ",".join(params) + ",value"]
    mesh = [idx.ravel() for idx in np.meshgrid(*axes, indexing="ij")]
    for combo in zip(*mesh) if mesh else [()]:
        kw = {**defaults, **fixed, **dict(zip(params, map(float, combo)))}
        reservoir = kw["omega_c"] if family == "ohmic" else kw["width"]
        cfg = make_config(family, kw["coupling"], reservoir,
                          theta=kw["theta"], phi=kw["phi"],
                          detuning=kw["detuning"])
        vals = quantity_values(cfg, grid, quantity)
        prefix = ",".join(_fmt(c) for c in combo)
        for t, v in zip(grid.times, vals):
            rows.append(f"{_fmt(t)},{prefix},{_fmt(v)}" if prefix
                        else f"{_fmt(t)},{_fmt(v)}")
    _write(out, meta + rows)
    return out


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="cavityqfi",
        description="Atom-in-lossy-cavity metrology curves, deterministic CSV out")
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="reproduce a figure preset")
    run.add_argument("preset", choices=PRESET_NAMES + ("custom",))
    run.add_argument("--out", type=Path, default=None)
    run.add_argument("--steps", type=int, default=None,
                     help="override the number of time samples")
    run.add_argument("--t-end", type=float, default=None,
                     help="override the scaled end time")
    run.add_argument("--mode", choices=("closed", "numeric"), default="closed")
    run.add_argument("--family", choices=("ohmic", "lorentzian"),
                     help="custom preset only")
    run.add_argument("--quantity", choices=QUANTITIES, default="qfi_phi",
                     help="custom preset only")
    run.add_argument("--coupling", type=float, action="append",
                     help="custom preset only; repeatable")
    run.add_argument("--omega-c", type=float, help="custom ohmic cutoff")
    run.add_argument("--width", type=float, help="custom lorentzian width")
    run.add_argument("--theta", type=float, default=math.pi / 2)

    ver = sub.add_parser("verify", help="run oracle/consistency suites")
    ver.add_argument("--suite", action="append", choices=sorted(SUITES),
                     help="run only the named suite(s)")

    sw = sub.add_parser("sweep", help="generic parameter sweep")
    sw.add_argument("--model", required=True, choices=("ohmic", "lorentzian"))
    sw.add_argument("--param", action="append", required=True)
    sw.add_argument("--range", action="append", required=True,
                    dest="ranges", metavar="A:B:N")
    sw.add_argument("--quantity", choices=QUANTITIES + ("lamb_shift",),
                    default="qfi_phi")
    sw.add_argument("--t-end", type=float, default=20.0)
    sw.add_argument("--steps", type=int, default=500)
    sw.add_argument("--out", type=Path, default=None)
    sw.add_argument("--fix", action="append", default=[],
                    metavar="NAME=VALUE", help="hold a parameter fixed")
    return ap


def _custom_preset(args) -> CurvePreset:
    if args.family is None:
        raise ValueError("custom preset needs --family")
    if not args.coupling:
        raise ValueError("custom preset needs at least one --coupling")
    reservoir = args.omega_c if args.family == "ohmic" else args.width
    if reservoir is None:
        flag = "--omega-c" if args.family == "ohmic" else "--width"
        raise ValueError(f"custom {args.family} preset needs {flag}")
    # validation of values happens in the model/config constructors
    make_config(args.family, args.coupling[0], reservoir, theta=args.theta)
    return CurvePreset("custom", args.family, args.quantity,
                       tuple(args.coupling), reservoir,
                       args.t_end or 20.0, args.steps or 2000)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            out = args.out or Path(f"{args.preset}.csv")
            sc = Scenario(args.preset, out, args.steps, args.t_end, args.mode)
            if args.preset == "custom":
                run_curve_preset(sc, _custom_preset(args))
            elif args.preset in CURVE_PRESETS:
                run_curve_preset(sc)
            else:
                run_contour_preset(sc)
            print(f"wrote {out}")
            return EXIT_OK
        if args.command == "verify":
            return run_verify(args.suite)
        if args.command == "sweep":
            fixed = {}
            for item in args.fix:
                name, _, value = item.partition("=")
                fixed[name] = float(value)
            out = args.out or Path("sweep.csv")
            run_sweep(args.model, args.param, args.ranges, args.quantity,
                      args.t_end, args.steps, out, fixed)
            print(f"wrote {out}")
            return EXIT_OK
    except (ValueError, KeyError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_TOLERANCE
    raise AssertionError("unreachable")


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
