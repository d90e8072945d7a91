"""Command line entry point: ``python3 -m coopnc <command> ...``.

Every command prints JSON on stdout. Exit status is 0 on success, 2 for bad
configuration or input, 3 when an invariant check fails.
"""

import argparse
import json
import sys

from .baselines import SCHEMES, run_scheme
from .bounds import all_bounds
from .errors import ConfigurationError, InstanceShapeError, InvariantViolation, SizeError
from .harness import ExperimentConfig, emit_csv, monte_carlo, results_to_json
from .model import TIE_MODES, load_scenario
from .oracle import optimal_completion_time
from .overhead import VARIANTS, OverheadParams, overhead_fraction


def _dump(obj):
    json.dump(obj, sys.stdout, indent=2)
    sys.stdout.write("\n")


def cmd_run(args):
    sc = load_scenario(args.scenario)
    res = run_scheme(sc, args.scheme, lossy=args.lossy, tie_mode=args.tie_mode)
    _dump({"scheme": args.scheme, "lossy": args.lossy, "T": res.T,
           "per_device_satisfaction_slot": list(res.per_device_satisfaction_slot),
           "fallback_slots": res.fallback_slots})


def cmd_sweep(args):
    cfg = ExperimentConfig.load(args.config)

    def progress(gi, value):
        print(f"[{gi + 1}/{len(cfg.grid)}] {cfg.sweep_var}={value}", file=sys.stderr)

    results = monte_carlo(cfg, progress=None if args.quiet else progress)
    emit_csv(results, args.out)
    _dump(results_to_json(results))


def cmd_bounds(args):
    _dump(all_bounds(load_scenario(args.scenario)))


def cmd_overhead(args):
    params = OverheadParams(P=args.P, F=args.F, M=args.M, N_t=args.Nt, N=args.N)
    o = overhead_fraction(args.variant, params)
    _dump({"variant": args.variant, "O_d": o.O_d, "O_nc": o.O_nc, "O_ack": o.O_ack,
           "fraction": float(o.fraction), "fraction_exact": str(o.fraction)})


def cmd_oracle(args):
    sc = load_scenario(args.scenario)
    _dump({"optimal_T": optimal_completion_time(sc, menu=args.menu)})


def build_parser():
    p = argparse.ArgumentParser(prog="coopnc", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run one scheme on a scenario file")
    r.add_argument("--scenario", required=True)
    r.add_argument("--scheme", required=True, choices=SCHEMES)
    r.add_argument("--lossy", action="store_true", help="apply the scenario's stage-two losses")
    r.add_argument("--tie-mode", default="random", choices=TIE_MODES)
    r.set_defaults(func=cmd_run)

    s = sub.add_parser("sweep", help="Monte Carlo sweep from a JSON config")
    s.add_argument("--config", required=True)
    s.add_argument("--out", required=True, help="CSV output path")
    s.add_argument("--quiet", action="store_true")
    s.set_defaults(func=cmd_sweep)

    b = sub.add_parser("bounds", help="all completion-time bounds for a scenario")
    b.add_argument("--scenario", required=True)
    b.set_defaults(func=cmd_bounds)

    o = sub.add_parser("overhead", help="signalling overhead fraction")
    o.add_argument("--variant", required=True, choices=VARIANTS)
    o.add_argument("--P", type=int, required=True, help="packet size in bits")
    o.add_argument("--F", type=int, default=256, help="field size")
    o.add_argument("--M", type=int, default=0)
    o.add_argument("--Nt", type=int, default=0)
    o.add_argument("--N", type=int, default=0)
    o.set_defaults(func=cmd_overhead)

    q = sub.add_parser("oracle", help="optimal lossless completion time (tiny instances)")
    q.add_argument("--scenario", required=True)
    q.add_argument("--menu", default="transmitters", choices=("transmitters", "subspaces"))
    q.set_defaults(func=cmd_oracle)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (ConfigurationError, InstanceShapeError, SizeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except InvariantViolation as e:
        print(f"invariant violated: {e}", file=sys.stderr)
        return 3
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    return 0
