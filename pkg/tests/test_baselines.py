import numpy as np
import pytest
from hypothesis import given, strategies as st

from coopnc.baselines import BASELINES, SCHEMES, run_baseline, run_scheme
from coopnc.batch import run_batch
from coopnc.errors import ConfigurationError
from coopnc.model import LossModel

from conftest import SWAP, scenario, wants_sets


@pytest.mark.parametrize("scheme", ["nonc-multi", "ncsi-batch-cell", "ncsi-instant-d2d"])
def test_swap(scheme):
    assert run_baseline(scenario(SWAP), scheme, tie_mode="lowest").T == 2


def test_nonc_needs_two_slots_on_swap():
    # four distinct uncoded packets, at most two per slot
    for seed in range(20):
        assert run_baseline(scenario(SWAP, seed=seed), "nonc-multi").T == 2


def test_unknown_scheme():
    with pytest.raises(ConfigurationError):
        run_baseline(scenario(SWAP), "ncmi-batch")
    with pytest.raises(ConfigurationError):
        run_scheme(scenario(SWAP), "magic")


def test_batch_d2d_counts_fallback_slots():
    res = run_baseline(scenario([{1, 2}, {1, 3}]), "ncsi-batch-d2d")
    assert res.fallback_slots == 1
    assert res.trace[0].plan.local_packet is None


@given(wants_sets(max_n=5, max_m=12), st.integers(0, 2**31))
def test_dual_interface_dominates_single(wants, seed):
    sc = scenario(wants, seed=seed)
    t = run_batch(sc).T
    assert t <= run_baseline(sc, "ncsi-batch-cell").T
    assert t <= run_baseline(sc, "ncsi-batch-d2d").T


@given(wants_sets(max_n=4, max_m=10), st.integers(0, 2**31), st.booleans())
def test_interface_usage(wants, seed, lossy):
    n = len(wants)
    rng = np.random.default_rng(seed)
    loss = LossModel(rng.uniform(0, .4, n), rng.uniform(0, .4, n), rng.uniform(0, .4, (n, n)))
    sc = scenario(wants, loss=loss, seed=seed)
    for rec in run_baseline(sc, "nonc-multi", lossy).trace:
        for v in (rec.plan.source_packet, rec.plan.local_packet):
            assert v is None or (np.count_nonzero(v) == 1 and v.max() == 1)
    for scheme in BASELINES[1:]:
        for rec in run_baseline(sc, scheme, lossy).trace:
            p = rec.plan
            used = (p.source_packet is not None) + (p.local_packet is not None)
            assert used == 1
            if scheme.endswith("cell"):
                assert p.local_packet is None
            elif p.source_packet is not None:
                assert p.source_kind == "mc-fallback"


@pytest.mark.parametrize("scheme", SCHEMES)
def test_every_scheme_terminates_lossy(scheme):
    rng = np.random.default_rng(5)
    loss = LossModel(rng.uniform(.15, .35, 4), rng.uniform(.15, .35, 4),
                     rng.uniform(.15, .35, (4, 4)))
    wants = [set(rng.choice(np.arange(1, 21), 8, replace=False).tolist()) for _ in range(4)]
    sc = scenario(wants, loss=loss, seed=1)
    res = run_scheme(sc, scheme, lossy=True)
    assert res.T >= 1 and res.scheme == scheme
