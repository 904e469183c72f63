#!/usr/bin/env python3
"""Write every figure preset to CSV in one go.

Usage: python scripts/reproduce_figures.py [OUTDIR]
"""

import sys
import time
from pathlib import Path

from cavityqfi.cli import Scenario, run_contour_preset, run_curve_preset
from cavityqfi.presets import CONTOUR_PRESETS, CURVE_PRESETS


def main() -> int:
    outdir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("figures")
    outdir.mkdir(parents=True, exist_ok=True)
    for name in CURVE_PRESETS:
        t0 = time.perf_counter()
        path = run_curve_preset(Scenario(name, outdir / f"{name}.csv"))
        print(f"{name}: {path}  [{time.perf_counter() - t0:.2f}s]")
    for name in CONTOUR_PRESETS:
        t0 = time.perf_counter()
        path = run_contour_preset(Scenario(name, outdir / f"{name}.csv"))
        print(f"{name}: {path}  [{time.perf_counter() - t0:.2f}s]")
    return 0


if __name__ == "__main__":
    sys.exit(main())
