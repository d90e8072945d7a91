#!/usr/bin/env python3
"""Print the small worked examples: grouping, schedules, bounds and the oracle."""

from coopnc import group_wants
from coopnc.baselines import run_scheme
from coopnc.bounds import all_bounds
from coopnc.model import Scenario
from coopnc.oracle import MAX_PACKETS, optimal_completion_time

INSTANCES = {
    "two-device-swap": [{1}, {2}, {3, 4}],
    "shared-first": [{1, 2, 3}, {1, 4, 5}, {1, 6, 7}],
    "ten-packets": [{1, 2, 4, 7, 9}, {1, 2, 5, 7, 10}, {1, 3, 6, 8}],
}


def main():
    for name, wants in INSTANCES.items():
        sc = Scenario.from_wants(wants, seed=0)
        print(f"== {name}: wants {[sorted(w) for w in wants]}")
        g = group_wants(sc.wants)
        for label, vecs in (("M_c", g.m_c), ("M_d", g.m_d), ("M_l", g.m_l)):
            print(f"   {label}: {[sorted(v.constituents) for v in vecs]}")
        for scheme in ("ncmi-batch", "ncmi-instant", "nonc-multi"):
            print(f"   {scheme:14s} T={run_scheme(sc, scheme, tie_mode='lowest').T}")
        b = all_bounds(sc)
        print(f"   bounds: {b}")
        if len(sc.packets) <= MAX_PACKETS:
            print(f"   optimal T={optimal_completion_time(sc)}")


if __name__ == "__main__":
    main()
