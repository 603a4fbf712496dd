"""Write every figure preset to data/<preset>.csv (and .json), timing each one.

    python3 scripts/regenerate_figures.py [--out data] [--workers 4] [--oracle]
"""

import argparse
import time
from pathlib import Path

from cvbell.sweeps import PRESETS, run_preset, to_csv, to_json


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("data"))
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--oracle", action="store_true", help="add Fock-oracle values (slow)")
    ap.add_argument("presets", nargs="*", default=list(PRESETS))
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    total = 0.0
    for name in args.presets:
        t0 = time.perf_counter()
        curves = run_preset(name, workers=args.workers, oracle=args.oracle)
        dt = time.perf_counter() - t0
        total += dt
        (args.out / f"{name}.csv").write_text(to_csv(curves))
        (args.out / f"{name}.json").write_text(to_json(curves, name))
        print(f"{name:16s} {len(curves):2d} curves  {dt:6.2f} s")
    print(f"total {total:.1f} s")


if __name__ == "__main__":
    main()
