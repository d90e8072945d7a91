import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from coopnc.model import LossModel, Scenario

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# device order A, B, C -> 0, 1, 2
SWAP = [{1}, {2}, {3, 4}]
SHARED_HEAD = [{1, 2, 3}, {1, 4, 5}, {1, 6, 7}]
OVERLAP = [{1, 4}, {1, 2, 3}, {1, 4, 5}]
TEN_PACKETS = [{1, 2, 4, 7, 9}, {1, 2, 5, 7, 10}, {1, 3, 6, 8}]
TRIO_1 = [{1, 2, 3, 4, 5}, {1, 2, 3, 4, 6, 7}, {1, 2, 3, 4, 6, 8}]
TRIO_2 = [{1, 2, 5, 8}, {1, 3, 6, 9, 11}, {1, 4, 7, 10, 11}]
TRIO_3 = [{1, 2}, {1, 3, 5, 6, 9}, {1, 4, 5, 7, 8, 10}]

SKEW_ETA = (0.35, 0.4, 0.45)
SKEW_EPS = ((0, 0.1, 0.3),
           (0.1, 0, 0.2),
           (0.3, 0.2, 0))


def skewed_loss():
    return LossModel(SKEW_ETA, SKEW_ETA, SKEW_EPS)


def scenario(wants, **kw):
    return Scenario.from_wants([frozenset(w) for w in wants], **kw)


def random_wants(rng, n, m, p=None):
    """Wants sets of n devices over packets 1..m, each packet wanted by someone."""
    p = rng.uniform(0.05, 0.9) if p is None else p
    lost = rng.random((m, n)) < p
    lost[~lost.any(1), rng.integers(0, n, size=(~lost.any(1)).sum())] = True
    return [frozenset(int(i) + 1 for i in np.flatnonzero(lost[:, k])) for k in range(n)]


@st.composite
def wants_sets(draw, max_n=5, max_m=12, min_n=2):
    n = draw(st.integers(min_n, max_n))
    m = draw(st.integers(1, max_m))
    rows = [draw(st.frozensets(st.integers(1, m), max_size=m)) for _ in range(n)]
    # packets nobody wants get assigned to the device picked for them
    union = frozenset().union(*rows)
    rows = [set(r) for r in rows]
    for p in range(1, m + 1):
        if p not in union:
            rows[draw(st.integers(0, n - 1))].add(p)
    return [frozenset(r) for r in rows]


@st.composite
def loss_models(draw, n, hi=0.6):
    prob = st.floats(0, hi, allow_nan=False)
    eta = [draw(prob) for _ in range(n)]
    eps = [[draw(prob) for _ in range(n)] for _ in range(n)]
    return LossModel(eta, eta, eps)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
