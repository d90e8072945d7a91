"""NCMI-Batch: RLNC from the source plus RLNC from one local device per slot."""

import numpy as np

from .coding import random_combination
from .model import (LossModel, TransmissionPlan, check_tie_mode, choose, expected_local,
                    expected_source, run_schedule)


def targeted(states, t):
    """Devices for which a random combination of t's knowledge is innovative."""
    src = states[t]
    out = set()
    coded = None
    for s in states:
        if s.device == t or s.rank == s.subspace.m:
            continue
        # e_j lies in a span exactly when packet j is decoded, so only the
        # coded basis rows of t need an elimination pass
        if src.rank > s.rank or not src.decoded <= s.decoded:
            out.add(s.device)
            continue
        if coded is None:
            rows = src.subspace.rows
            coded = rows[np.count_nonzero(rows, axis=1) > 1]
        if coded.size and s.subspace.reduce(coded).any():
            out.add(s.device)
    return frozenset(out)


def local_quota_met(states, wants_sizes, mc_size):
    """Stop rule for D2D: each device got |W_n|-|M_c| D2D packets or is done."""
    return all(s.satisfied or s.d2d_innovative >= wants_sizes[s.device] - mc_size
               for s in states)


def source_part(states, scenario, loss, coef_rng):
    missing = frozenset().union(*(s.missing for s in states))
    col = scenario.column
    v = random_combination([col[p] for p in missing], coef_rng, scenario.coding_mode, scenario.m)
    targets = frozenset(s.device for s in states if not s.satisfied)
    return v, targets, expected_source(targets, loss)


def plan_batch_lossless(states, scenario, rngs, tie_mode="random", wants_sizes=None,
                        mc_size=None) -> TransmissionPlan:
    tie_rng, coef_rng = rngs
    loss = LossModel.lossless(scenario.n_devices)
    wants_sizes = wants_sizes or [len(w) for w in scenario.wants]
    mc_size = len(scenario.m_c) if mc_size is None else mc_size
    v, targets, exp = source_part(states, scenario, loss, coef_rng)
    plan = TransmissionPlan(source_packet=v, targeted_receivers_source=targets,
                            expected_successful_source=exp, source_kind="rlnc")
    if local_quota_met(states, wants_sizes, mc_size):
        return plan
    nr = {s.device: targeted(states, s.device) for s in states}
    cands = [d for d in nr if nr[d]]
    if not cands:
        return plan
    t = choose(cands, lambda d: (states[d].rank, len(nr[d])), tie_rng, tie_mode)
    plan.local_transmitter = t
    plan.local_packet = states[t].subspace.random_vector(coef_rng)
    plan.targeted_receivers_local = nr[t]
    plan.expected_successful_local = expected_local(t, nr[t], loss)
    plan.local_kind = "rlnc"
    return plan


def local_scores(states, loss):
    """Average successful receivers of each device's RLNC packet."""
    out = {}
    for s in states:
        nr = targeted(states, s.device)
        out[s.device] = (nr, expected_local(s.device, nr, loss))
    return out


def plan_batch_lossy(states, scenario, loss, rngs, tie_mode="random", wants_sizes=None,
                     mc_size=None) -> TransmissionPlan:
    tie_rng, coef_rng = rngs
    wants_sizes = wants_sizes or [len(w) for w in scenario.wants]
    mc_size = len(scenario.m_c) if mc_size is None else mc_size
    v, targets, exp = source_part(states, scenario, loss, coef_rng)
    plan = TransmissionPlan(source_packet=v, targeted_receivers_source=targets,
                            expected_successful_source=exp, source_kind="rlnc")
    if local_quota_met(states, wants_sizes, mc_size):
        return plan
    scores = local_scores(states, loss)
    cands = [d for d in scores if scores[d][0]]
    if not cands:
        return plan
    x = choose(cands, lambda d: (scores[d][1], states[d].rank), tie_rng, tie_mode)
    plan.local_transmitter = x
    plan.local_packet = states[x].subspace.random_vector(coef_rng)
    plan.targeted_receivers_local = scores[x][0]
    plan.expected_successful_local = scores[x][1]
    plan.local_kind = "rlnc"
    return plan


def run_batch(scenario, lossy=False, tie_mode="random") -> "RunResult":
    check_tie_mode(tie_mode)
    tie_rng, coef_rng, channel_rng = scenario.rngs()
    sizes = [len(w) for w in scenario.wants]
    mc = len(scenario.m_c)

    def next_plan(states, slot):
        if lossy:
            return plan_batch_lossy(states, scenario, scenario.loss, (tie_rng, coef_rng),
                                    tie_mode, sizes, mc)
        return plan_batch_lossless(states, scenario, (tie_rng, coef_rng), tie_mode, sizes, mc)

    return run_schedule(scenario, next_plan, lossy, "ncmi-batch", channel_rng)
