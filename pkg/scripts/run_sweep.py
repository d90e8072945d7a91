#!/usr/bin/env python3
"""Run one or more sweep configs and write a CSV next to each.

    python3 scripts/run_sweep.py scripts/configs/lossless_packets.json --iterations 50
"""

import argparse
import dataclasses
import sys
import time
from pathlib import Path

from coopnc.harness import ExperimentConfig, emit_csv, monte_carlo


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("configs", nargs="+")
    p.add_argument("--iterations", type=int, help="override the config's iteration count")
    p.add_argument("--out-dir", default="results")
    args = p.parse_args(argv)

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for path in args.configs:
        cfg = ExperimentConfig.load(path)
        if args.iterations:
            cfg = dataclasses.replace(cfg, iterations=args.iterations)
        t0 = time.time()
        res = monte_carlo(cfg, progress=lambda gi, v: print(
            f"  {cfg.sweep_var}={v}", file=sys.stderr))
        out = out_dir / (Path(path).stem + ".csv")
        emit_csv(res, out)
        print(f"{path}: {len(res)} rows in {time.time() - t0:.1f}s -> {out}")
        for r in res:
            print(f"  {r.scheme:18s} {r.sweep_value:>6} T={r.mean_T:7.2f} +-{r.ci_half:.2f}")


if __name__ == "__main__":
    main()
