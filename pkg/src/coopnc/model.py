"""Problem instances, the two-stage timeline and per-slot delivery.

Devices are numbered ``0..N-1``. Packets carry integer labels (their index in
the original file); column ``c`` of every coefficient vector is packet
``scenario.packets[c]``.
"""

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .coding import CodingMode, Subspace, check_mode, field_for
from .errors import ConfigurationError, InstanceShapeError, RunawayError

SLOT_CAP_FACTOR = 50


def _probs(values, n, what):
    values = tuple(values)
    if len(values) != n:
        raise InstanceShapeError(f"{what}: expected {n} entries, got {len(values)}")
    for p in values:
        if not 0 <= p < 1:
            raise ConfigurationError(f"{what}: probability {p} outside [0, 1)")
    return values


@dataclass(frozen=True)
class LossModel:
    """Bernoulli erasure probabilities.

    ``eps[k][l]`` is the loss probability on the D2D link k -> l; the diagonal
    is never read. Stage-two cellular loss ``eta`` defaults to the stage-one
    values when omitted.
    """

    eta_stage1: tuple
    eta: tuple = None
    eps: tuple = None

    def __post_init__(self):
        n = len(self.eta_stage1)
        object.__setattr__(self, "eta_stage1", _probs(self.eta_stage1, n, "eta_stage1"))
        eta = self.eta_stage1 if self.eta is None else self.eta
        object.__setattr__(self, "eta", _probs(eta, n, "eta"))
        eps = ((0,) * n,) * n if self.eps is None else self.eps
        eps = tuple(tuple(row) for row in eps)
        if len(eps) != n:
            raise InstanceShapeError(f"eps: expected {n} rows, got {len(eps)}")
        rows = []
        for k, row in enumerate(eps):
            row = list(row)
            if len(row) != n:
                raise InstanceShapeError(f"eps row {k}: expected {n} entries")
            row[k] = 0  # diagonal unused
            rows.append(_probs(row, n, f"eps[{k}]"))
        object.__setattr__(self, "eps", tuple(rows))

    @property
    def n_devices(self):
        return len(self.eta)

    @classmethod
    def lossless(cls, n):
        return _lossless(n)

    def stage_two_lossless(self):
        return LossModel(self.eta_stage1)

    def is_zero(self):
        return not any(self.eta) and not any(any(r) for r in self.eps)


@lru_cache(maxsize=None)
def _lossless(n):
    return LossModel((0,) * n)


@dataclass(frozen=True)
class Scenario:
    """The state at the start of stage two: who wants which packets."""

    n_devices: int
    packets: tuple
    wants: tuple
    loss: LossModel = None
    coding_mode: CodingMode = CodingMode.IDEALIZED
    seed: int = 0
    file_size: Optional[int] = None

    def __post_init__(self):
        if self.n_devices < 2:
            raise InstanceShapeError("need at least two devices")
        wants = tuple(frozenset(w) for w in self.wants)
        if len(wants) != self.n_devices:
            raise InstanceShapeError(f"{len(wants)} Wants sets for {self.n_devices} devices")
        packets = tuple(sorted(set(self.packets)))
        if len(packets) != len(self.packets):
            raise InstanceShapeError("duplicate packet labels")
        union = frozenset().union(*wants)
        if union != frozenset(packets):
            extra = union - set(packets)
            if extra:
                raise InstanceShapeError(f"wanted packets {sorted(extra)} not in the universe")
            raise InstanceShapeError(
                f"packets {sorted(set(packets) - union)} are wanted by no device"
            )
        loss = LossModel.lossless(self.n_devices) if self.loss is None else self.loss
        if loss.n_devices != self.n_devices:
            raise InstanceShapeError("loss model size does not match n_devices")
        object.__setattr__(self, "wants", wants)
        object.__setattr__(self, "packets", packets)
        object.__setattr__(self, "loss", loss)
        object.__setattr__(self, "coding_mode", check_mode(self.coding_mode))
        object.__setattr__(self, "seed", int(self.seed))

    @classmethod
    def from_wants(cls, wants, **kw):
        """Scenario whose universe is exactly the union of ``wants``."""
        wants = [frozenset(w) for w in wants]
        return cls(len(wants), tuple(sorted(frozenset().union(*wants))), tuple(wants), **kw)

    @property
    def m(self) -> int:
        return len(self.packets)

    @property
    def column(self) -> dict:
        return {p: c for c, p in enumerate(self.packets)}

    def has(self, n) -> frozenset:
        return frozenset(self.packets) - self.wants[n]

    @property
    def m_c(self) -> frozenset:
        """Packets wanted by every device (held by nobody)."""
        return frozenset.intersection(*self.wants)

    @property
    def field(self):
        return field_for(self.coding_mode)

    def rngs(self):
        """Independent (tie-break, coefficient, channel) generators for one run."""
        tie, coef, channel = np.random.SeedSequence(self.seed).spawn(3)
        return (np.random.default_rng(tie), np.random.default_rng(coef),
                np.random.default_rng(channel))

    def replace(self, **changes):
        d = dict(n_devices=self.n_devices, packets=self.packets, wants=self.wants,
                 loss=self.loss, coding_mode=self.coding_mode, seed=self.seed,
                 file_size=self.file_size)
        d.update(changes)
        return Scenario(**d)

    def to_json(self) -> dict:
        def num(x):
            return float(x)

        d = {
            "n_devices": self.n_devices,
            "packets": list(self.packets),
            "wants": [sorted(w) for w in self.wants],
            "eta_stage1": [num(x) for x in self.loss.eta_stage1],
            "eta": [num(x) for x in self.loss.eta],
            "eps": [[num(x) for x in row] for row in self.loss.eps],
            "coding_mode": self.coding_mode.value,
            "seed": self.seed,
        }
        if self.file_size is not None:
            d["file_size"] = self.file_size
        return d

    @classmethod
    def from_json(cls, d: dict) -> "Scenario":
        try:
            n = int(d["n_devices"])
            wants = d["wants"]
        except KeyError as e:
            raise ConfigurationError(f"scenario is missing key {e}") from None
        packets = d.get("packets")
        if packets is None:
            packets = sorted(set().union(*map(set, wants)))
        eta1 = d.get("eta_stage1", [0.0] * n)
        loss = LossModel(eta1, d.get("eta"), d.get("eps"))
        return cls(n, tuple(packets), tuple(frozenset(w) for w in wants), loss,
                   d.get("coding_mode", "idealized"), int(d.get("seed", 0)),
                   d.get("file_size"))


def load_scenario(path) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as e:
            raise ConfigurationError(f"{path}: {e}") from None
    return Scenario.from_json(data)


def save_scenario(scenario: Scenario, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(scenario.to_json(), fh, indent=2)


def run_stage_one(universe_size, n, stage1_loss, rng, *, eta=None, eps=None,
                  coding_mode=CodingMode.IDEALIZED, seed=0) -> Scenario:
    """Broadcast packets 1..universe_size over lossy cellular links.

    Each device loses each packet independently with its own probability.
    Packets every device received are dropped from the universe.
    """
    if n < 2:
        raise InstanceShapeError("need at least two devices")
    if universe_size < 0:
        raise ConfigurationError("universe_size must be >= 0")
    p = np.asarray(stage1_loss, dtype=float)
    if p.shape != (n,):
        raise InstanceShapeError(f"stage1_loss must have {n} entries")
    lost = rng.random((universe_size, n)) < p[None, :]
    wants = [frozenset(int(i) + 1 for i in np.flatnonzero(lost[:, k])) for k in range(n)]
    packets = tuple(int(i) + 1 for i in np.flatnonzero(lost.any(axis=1)))
    loss = LossModel(tuple(stage1_loss), eta, eps)
    return Scenario(n, packets, tuple(wants), loss, coding_mode, seed, file_size=universe_size)


def run_stage_one_until(missing, n, stage1_loss, rng, **kw) -> Scenario:
    """Stage one continued until exactly ``missing`` packets are lost somewhere.

    Equivalent to conditioning the stage-one outcome on M = ``missing``.
    """
    p = np.asarray(stage1_loss, dtype=float)
    if not p.any() and missing > 0:
        raise ConfigurationError("zero stage-one loss can never produce missing packets")
    rows = []
    sent = 0
    while len(rows) < missing:
        block = rng.random((max(16, 2 * (missing - len(rows))), n)) < p[None, :]
        for row in block:
            sent += 1
            if row.any():
                rows.append(row)
                if len(rows) == missing:
                    break
    wants = [frozenset(i + 1 for i, r in enumerate(rows) if r[k]) for k in range(n)]
    loss = LossModel(tuple(stage1_loss), kw.pop("eta", None), kw.pop("eps", None))
    return Scenario(n, tuple(range(1, missing + 1)), tuple(wants), loss, **kw)


@dataclass(eq=False)
class KnowledgeState:
    """What one device knows: a subspace seeded with its Has set."""

    device: int
    initial_has: frozenset
    wants: frozenset
    subspace: Subspace
    packets: tuple
    decoded: set = field(default_factory=set)
    d2d_innovative: int = 0
    total_innovative: int = 0

    @property
    def rank(self):
        return self.subspace.rank

    @property
    def missing(self) -> frozenset:
        return self.wants - self.decoded

    @property
    def satisfied(self) -> bool:
        return self.wants <= self.decoded

    def receive(self, v, via_d2d: bool) -> bool:
        if self.subspace.rank == self.subspace.m:
            return False
        innovative = self.subspace.insert(v)
        if innovative:
            self.total_innovative += 1
            if via_d2d:
                self.d2d_innovative += 1
            self.decoded = {self.packets[c] for c in self.subspace.decoded_indices()}
        return innovative


def init_states(scenario: Scenario) -> list:
    col = scenario.column
    f = scenario.field
    states = []
    for n in range(scenario.n_devices):
        has = scenario.has(n)
        sub = Subspace.from_unit_vectors([col[p] for p in has], scenario.m, f)
        states.append(KnowledgeState(n, has, scenario.wants[n], sub, scenario.packets,
                                     decoded=set(has)))
    return states


@dataclass
class TransmissionPlan:
    """One slot's decision: at most one cellular and one D2D packet."""

    source_packet: Optional[np.ndarray] = None
    local_packet: Optional[np.ndarray] = None
    local_transmitter: Optional[int] = None
    targeted_receivers_source: frozenset = frozenset()
    targeted_receivers_local: frozenset = frozenset()
    expected_successful_source: float = 0
    expected_successful_local: float = 0
    # IDNC constituents (packet labels), None for RLNC packets
    source_constituents: Optional[frozenset] = None
    local_constituents: Optional[frozenset] = None
    source_kind: str = ""
    local_kind: str = ""

    @property
    def empty(self):
        return self.source_packet is None and self.local_packet is None


def expected_source(targets, loss: LossModel):
    return sum((1 - loss.eta[n] for n in targets), 0)


def expected_local(t, targets, loss: LossModel):
    return sum((1 - loss.eps[t][n] for n in targets), 0)


def check_plan(plan: TransmissionPlan, loss: LossModel, m: int):
    """Raise InstanceShapeError / AssertionError if the plan breaks its invariants."""
    for v in (plan.source_packet, plan.local_packet):
        if v is not None and v.shape != (m,):
            raise InstanceShapeError("packet vector has the wrong length")
    if plan.local_packet is not None:
        t = plan.local_transmitter
        assert t is not None, "local packet without a transmitter"
        assert t not in plan.targeted_receivers_local, "transmitter targets itself"
        exp = expected_local(t, plan.targeted_receivers_local, loss)
        assert abs(exp - plan.expected_successful_local) < 1e-9


class DeviceOutcome(NamedTuple):
    cell_delivered: bool = False
    cell_innovative: bool = False
    d2d_delivered: bool = False
    d2d_innovative: bool = False


def deliver_slot(states: Sequence[KnowledgeState], plan: TransmissionPlan, loss: LossModel,
                 rng, stage2_lossless: bool) -> list:
    """Apply one slot's broadcasts to every device, in place.

    The cellular copy is inserted before the D2D copy. The local transmitter
    only hears the cellular broadcast.
    """
    t = plan.local_transmitter
    n = len(states)
    if plan.source_packet is not None and not stage2_lossless:
        cell_ok = rng.random(n) >= np.asarray(loss.eta, dtype=float)
    else:
        cell_ok = np.ones(n, dtype=bool)
    if plan.local_packet is not None and not stage2_lossless:
        d2d_ok = rng.random(n) >= np.asarray(loss.eps[t], dtype=float)
    else:
        d2d_ok = np.ones(n, dtype=bool)
    out = []
    for s in states:
        k = s.device
        cd = ci = dd = di = False
        if plan.source_packet is not None and cell_ok[k]:
            cd = True
            ci = s.receive(plan.source_packet, via_d2d=False)
        if plan.local_packet is not None and k != t and d2d_ok[k]:
            dd = True
            di = s.receive(plan.local_packet, via_d2d=True)
        out.append(DeviceOutcome(cd, ci, dd, di))
    return out


def all_satisfied(states) -> bool:
    return all(s.satisfied for s in states)


@dataclass
class SlotRecord:
    slot: int
    plan: TransmissionPlan
    outcomes: list


@dataclass
class RunResult:
    completion_time: int
    per_device_satisfaction_slot: tuple
    trace: list
    scheme: str = ""
    fallback_slots: int = 0

    @property
    def T(self):
        return self.completion_time


def run_schedule(scenario: Scenario, next_plan, lossy: bool, scheme: str = "",
                 channel_rng=None, after_slot=None) -> RunResult:
    """Generic plan -> deliver loop shared by every scheduler.

    ``next_plan(states, slot)`` returns the slot's TransmissionPlan;
    ``after_slot(states)``, if given, runs after every delivery.
    """
    states = init_states(scenario)
    loss = scenario.loss if lossy else LossModel.lossless(scenario.n_devices)
    if channel_rng is None:
        channel_rng = scenario.rngs()[2]
    cap = SLOT_CAP_FACTOR * max(scenario.m, 1)
    sat = [0 if s.satisfied else None for s in states]
    trace = []
    fallback = 0
    slot = 0
    while not all_satisfied(states):
        if slot >= cap:
            raise RunawayError(f"{scheme or 'scheduler'} exceeded {cap} slots")
        slot += 1
        plan = next_plan(states, slot)
        if plan.empty:
            raise RunawayError(f"{scheme or 'scheduler'} planned nothing at slot {slot}")
        if plan.source_kind == "mc-fallback":
            fallback += 1
        outcomes = deliver_slot(states, plan, loss, channel_rng, stage2_lossless=not lossy)
        trace.append(SlotRecord(slot, plan, outcomes))
        if after_slot is not None:
            after_slot(states)
        for s in states:
            if sat[s.device] is None and s.satisfied:
                sat[s.device] = slot
    return RunResult(slot, tuple(sat), trace, scheme, fallback)


TIE_MODES = ("random", "lowest")


def check_tie_mode(mode):
    if mode not in TIE_MODES:
        raise ConfigurationError(f"tie-break mode must be one of {TIE_MODES}, got {mode!r}")
    return mode


def choose(candidates, key, rng, mode="random"):
    """Maximiser of ``key``; ties go to the first candidate or a seeded-uniform pick."""
    candidates = list(candidates)
    keys = [key(c) for c in candidates]
    best = max(keys)
    top = [c for c, k in zip(candidates, keys) if k == best]
    if mode == "lowest" or len(top) == 1:
        return top[0]
    return top[int(rng.integers(len(top)))]
