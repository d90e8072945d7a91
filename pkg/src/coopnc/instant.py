"""NCMI-Instant: IDNC packets built by the grouping step, sent on both interfaces."""

from .errors import InvariantViolation
from .grouping import MD, ML, group_wants, split_ml
from .model import (LossModel, TransmissionPlan, check_tie_mode, choose, expected_local,
                    expected_source, run_schedule)


def _source_fields(v, scenario, loss):
    t = v.targets
    return dict(source_packet=v.vector(scenario.column, scenario.m),
                targeted_receivers_source=t, expected_successful_source=expected_source(t, loss),
                source_constituents=v.constituents)


def _local_fields(v, x, scenario, loss, kind):
    t = v.targets
    return dict(local_packet=v.vector(scenario.column, scenario.m), local_transmitter=x,
                targeted_receivers_local=t, expected_successful_local=expected_local(x, t, loss),
                local_constituents=v.constituents, local_kind=kind)


def split_transmitter(v):
    """Device whose partial reaches the most receivers, lowest id on ties."""
    n = len(v.entries)
    return max(range(n), key=lambda x: (sum(e != v.entries[x] for e in v.entries), -x))


class InstantLosslessPlanner:
    """Groups once, then drains the queues.

    The source takes the head of M_c, then M_l, then M_d. The local side takes
    M_d from the tail, then splits M_l vectors from the tail; a split's residual
    goes out in the following slot.
    """

    def __init__(self, scenario):
        self.scenario = scenario
        self.loss = LossModel.lossless(scenario.n_devices)
        g = group_wants(scenario.wants, scenario.n_devices)
        self.groups = g
        self.m_c, self.m_l, self.m_d = list(g.m_c), list(g.m_l), list(g.m_d)
        self.residual = None

    def __call__(self, states, slot):
        sc, loss = self.scenario, self.loss
        fields = {}
        for queue, kind in ((self.m_c, "m_c"), (self.m_l, "m_l"), (self.m_d, "m_d")):
            if queue:
                fields.update(_source_fields(queue.pop(0), sc, loss), source_kind=kind)
                break
        if self.residual is not None:
            v, x = self.residual
            self.residual = None
            fields.update(_local_fields(v, min(v.holders), sc, loss, "m_l-residual"))
        elif self.m_d:
            v = self.m_d.pop()
            fields.update(_local_fields(v, min(v.holders), sc, loss, "m_d"))
        elif self.m_l:
            v = self.m_l.pop()
            x = split_transmitter(v)
            partial, residual = split_ml(v, x)
            self.residual = (residual, x)
            fields.update(_local_fields(partial, x, sc, loss, "m_l-partial"))
        elif "source_packet" not in fields:
            return TransmissionPlan()
        return TransmissionPlan(**fields)


def plan_instant_lossy(states, scenario, loss, tie_rng, tie_mode="random") -> TransmissionPlan:
    """One slot of the lossy planner: regroup, then score every option."""
    groups = group_wants([s.missing for s in states], scenario.n_devices)
    n = scenario.n_devices
    fields = {}
    chosen = None
    if groups.m_c:
        chosen, kind = groups.m_c[0], "m_c"
    elif groups.m_l:
        chosen, kind = groups.m_l[0], "m_l"
    elif groups.m_d:
        chosen = choose(groups.m_d, lambda v: expected_source(v.targets, loss), tie_rng, tie_mode)
        kind = "m_d"
    if chosen is not None:
        fields.update(_source_fields(chosen, scenario, loss), source_kind=kind)

    # (priority, order, device) keeps deterministic tie-breaking stable: M_d first
    cands = []
    for v in groups.m_d:
        if v is chosen:
            continue
        for x in v.holders:
            cands.append((expected_local(x, v.targets, loss), (1, -v.order, -x), v, x, MD))
    for v in groups.m_l:
        if v is chosen:
            continue
        for x in range(n):
            part, _ = split_ml(v, x)
            cands.append((expected_local(x, part.targets, loss), (0, -v.order, -x), part, x, ML))
    if cands:
        if tie_mode == "lowest":
            c = max(cands, key=lambda c: (c[0], c[1]))
        else:
            c = choose(cands, lambda c: c[0], tie_rng, tie_mode)
        _, _, v, x, kind = c
        fields.update(_local_fields(v, x, scenario, loss,
                                    "m_d" if kind == MD else "m_l-partial"))
    return TransmissionPlan(**fields)


def check_decodable_state(states):
    """Instant decodability: nothing received is ever left undecoded."""
    for s in states:
        if s.rank != len(s.decoded):
            raise InvariantViolation(
                f"device {s.device} holds {s.rank - len(s.decoded)} undecoded combinations")


def run_instant(scenario, lossy=False, tie_mode="random") -> "RunResult":
    check_tie_mode(tie_mode)
    tie_rng, _, channel_rng = scenario.rngs()
    if lossy:
        def planner(states, slot):
            return plan_instant_lossy(states, scenario, scenario.loss, tie_rng, tie_mode)
    else:
        planner = InstantLosslessPlanner(scenario)
    return run_schedule(scenario, planner, lossy, "ncmi-instant", channel_rng,
                        after_slot=check_decodable_state)
