"""Comparison schemes: uncoded dual-interface repair and single-interface coding."""

from .batch import run_batch, source_part, targeted
from .coding import unit_vector
from .errors import ConfigurationError
from .grouping import group_wants, split_ml
from .instant import _local_fields, _source_fields, run_instant
from .model import (LossModel, TransmissionPlan, check_tie_mode, choose, expected_local,
                    expected_source, run_schedule)

BASELINES = ("nonc-multi", "ncsi-batch-cell", "ncsi-batch-d2d", "ncsi-instant-cell",
             "ncsi-instant-d2d")
SCHEMES = ("ncmi-batch", "ncmi-instant") + BASELINES


def plan_nonc(states, scenario, loss, tie_rng, tie_mode):
    col, m = scenario.column, scenario.m
    wanting = {}
    for s in states:
        for p in s.missing:
            wanting.setdefault(p, set()).add(s.device)
    packets = sorted(wanting)
    p = choose(packets, lambda q: expected_source(wanting[q], loss), tie_rng, tie_mode)
    plan = TransmissionPlan(source_packet=unit_vector(col[p], m),
                            targeted_receivers_source=frozenset(wanting[p]),
                            expected_successful_source=expected_source(wanting[p], loss),
                            source_constituents=frozenset([p]), source_kind="uncoded")
    cands = [(q, s.device) for q in packets if q != p for s in states if q in s.decoded]
    if cands:
        q, t = choose(cands, lambda c: expected_local(c[1], wanting[c[0]], loss), tie_rng, tie_mode)
        plan.local_packet = unit_vector(col[q], m)
        plan.local_transmitter = t
        plan.targeted_receivers_local = frozenset(wanting[q])
        plan.expected_successful_local = expected_local(t, wanting[q], loss)
        plan.local_constituents = frozenset([q])
        plan.local_kind = "uncoded"
    return plan


def plan_batch_cell(states, scenario, loss, coef_rng):
    v, targets, exp = source_part(states, scenario, loss, coef_rng)
    return TransmissionPlan(source_packet=v, targeted_receivers_source=targets,
                            expected_successful_source=exp, source_kind="rlnc")


def _unheld(states, mc):
    held = set().union(*(s.decoded for s in states))
    return sorted(mc - held)


def plan_batch_d2d(states, scenario, loss, mc, rngs, tie_mode):
    """Uncoded M_c packets from the source until someone holds them, then D2D RLNC."""
    tie_rng, coef_rng = rngs
    pending = _unheld(states, mc)
    if pending:
        p = pending[0]
        targets = frozenset(s.device for s in states if p in s.missing)
        return TransmissionPlan(source_packet=unit_vector(scenario.column[p], scenario.m),
                                targeted_receivers_source=targets,
                                expected_successful_source=expected_source(targets, loss),
                                source_constituents=frozenset([p]), source_kind="mc-fallback")
    nr = {s.device: targeted(states, s.device) for s in states}
    cands = [d for d in nr if nr[d]]
    t = choose(cands, lambda d: (states[d].rank, len(nr[d])), tie_rng, tie_mode)
    return TransmissionPlan(local_packet=states[t].subspace.random_vector(coef_rng),
                            local_transmitter=t, targeted_receivers_local=nr[t],
                            expected_successful_local=expected_local(t, nr[t], loss),
                            local_kind="rlnc")


def plan_instant_cell(states, scenario, loss, tie_rng, tie_mode):
    g = group_wants([s.missing for s in states], scenario.n_devices)
    if g.m_c:
        v, kind = g.m_c[0], "m_c"
    elif g.m_l:
        v, kind = g.m_l[0], "m_l"
    else:
        v = choose(g.m_d, lambda u: expected_source(u.targets, loss), tie_rng, tie_mode)
        kind = "m_d"
    return TransmissionPlan(**_source_fields(v, scenario, loss), source_kind=kind)


def plan_instant_d2d(states, scenario, loss, tie_rng, tie_mode):
    g = group_wants([s.missing for s in states], scenario.n_devices)
    if g.m_c:
        return TransmissionPlan(**_source_fields(g.m_c[0], scenario, loss),
                                source_kind="mc-fallback")
    n = scenario.n_devices
    cands = []
    for v in g.m_d:
        for x in v.holders:
            cands.append((expected_local(x, v.targets, loss), (1, -v.order, -x), v, x, "m_d"))
    for v in g.m_l:
        for x in range(n):
            part, _ = split_ml(v, x)
            cands.append((expected_local(x, part.targets, loss), (0, -v.order, -x), part, x,
                          "m_l-partial"))
    if tie_mode == "lowest":
        c = max(cands, key=lambda c: (c[0], c[1]))
    else:
        c = choose(cands, lambda c: c[0], tie_rng, tie_mode)
    _, _, v, x, kind = c
    return TransmissionPlan(**_local_fields(v, x, scenario, loss, kind))


def run_baseline(scenario, scheme, lossy=False, tie_mode="random"):
    if scheme not in BASELINES:
        raise ConfigurationError(f"unknown baseline {scheme!r}; choose from {BASELINES}")
    check_tie_mode(tie_mode)
    tie_rng, coef_rng, channel_rng = scenario.rngs()
    loss = scenario.loss if lossy else LossModel.lossless(scenario.n_devices)
    mc = scenario.m_c

    if scheme == "nonc-multi":
        def planner(states, slot):
            return plan_nonc(states, scenario, loss, tie_rng, tie_mode)
    elif scheme == "ncsi-batch-cell":
        def planner(states, slot):
            return plan_batch_cell(states, scenario, loss, coef_rng)
    elif scheme == "ncsi-batch-d2d":
        def planner(states, slot):
            return plan_batch_d2d(states, scenario, loss, mc, (tie_rng, coef_rng), tie_mode)
    elif scheme == "ncsi-instant-cell":
        def planner(states, slot):
            return plan_instant_cell(states, scenario, loss, tie_rng, tie_mode)
    else:
        def planner(states, slot):
            return plan_instant_d2d(states, scenario, loss, tie_rng, tie_mode)

    return run_schedule(scenario, planner, lossy, scheme, channel_rng)


def run_scheme(scenario, scheme, lossy=False, tie_mode="random"):
    """Dispatch on the CLI scheme vocabulary."""
    if scheme == "ncmi-batch":
        return run_batch(scenario, lossy, tie_mode)
    if scheme == "ncmi-instant":
        return run_instant(scenario, lossy, tie_mode)
    if scheme not in BASELINES:
        raise ConfigurationError(f"unknown scheme {scheme!r}; choose from {SCHEMES}")
    return run_baseline(scenario, scheme, lossy, tie_mode)
