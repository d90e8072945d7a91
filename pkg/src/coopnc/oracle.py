"""Brute-force optimal completion time for tiny lossless instances.

Every device is done exactly when its knowledge is all of F^M, so the search
is over knowledge subspaces. Two action menus are available:

``transmitters`` (default)
    The source sends a generic combination of everything and one device sends
    a generic combination of its whole knowledge. Over a large field, generic
    coding achieves the multicast min-cut for any fixed choice of who
    transmits, so searching transmitter sequences is exact.
``subspaces``
    The source may send a generic element of any coordinate subspace
    span(e_S); a device may send a generic element of its knowledge, of any
    span(e_S) with S inside its decoded packets, or stay idle. Much slower;
    kept as an independent cross-check of the default.
"""

from itertools import combinations

import numpy as np

from .coding import Subspace
from .errors import ConfigurationError, SizeError
from .gf import PrimeField
from .model import Scenario, init_states

MAX_DEVICES = 3
MAX_PACKETS = 4


def _generic(space: Subspace, rng):
    return space.random_vector(rng)


def _coord_space(idx, m):
    return Subspace.from_unit_vectors(idx, m, PrimeField)


def _apply(spaces, src_vec, t, loc_vec):
    out = []
    for k, s in enumerate(spaces):
        s = s.copy()
        if src_vec is not None:
            s.insert(src_vec)
        if loc_vec is not None and k != t:
            s.insert(loc_vec)
        out.append(s)
    return out


def _done(spaces, m):
    return all(s.rank == m for s in spaces)


def _last_slot_ok(spaces, m):
    """Can one slot finish everyone? Generic-all plus a whole-space local packet dominate."""
    n = len(spaces)
    for t in range(n):
        ok = True
        for k, s in enumerate(spaces):
            gain = 1 if s.rank < m else 0
            if k != t and not s.contains_subspace(spaces[t]):
                gain += 1
            if s.rank + gain < m:
                ok = False
                break
        if ok:
            return True
    return False


def _feasible(spaces, depth, m, rng, menu):
    if _done(spaces, m):
        return True
    if depth == 0:
        return False
    # each slot adds at most two dimensions to a non-transmitter
    if any(m - s.rank > 2 * depth for s in spaces):
        return False
    if depth == 1:
        return _last_slot_ok(spaces, m)
    full = _coord_space(range(m), m)
    if menu == "transmitters":
        senders = [t for t in range(len(spaces)) if spaces[t].rank]
        if not senders:
            return _feasible(_apply(spaces, _generic(full, rng), None, None), depth - 1, m, rng,
                             menu)
        for t in senders:
            nxt = _apply(spaces, _generic(full, rng), t, _generic(spaces[t], rng))
            if _feasible(nxt, depth - 1, m, rng, menu):
                return True
        return False
    source_opts = [None] + [_generic(_coord_space(S, m), rng)
                            for r in range(1, m + 1) for S in combinations(range(m), r)]
    local_opts = [(None, None)]
    for t, s in enumerate(spaces):
        if s.rank == 0:
            continue
        local_opts.append((t, _generic(s, rng)))
        dec = sorted(s.decoded_indices())
        for r in range(1, len(dec) + 1):
            for S in combinations(dec, r):
                local_opts.append((t, _generic(_coord_space(S, m), rng)))
    for sv in source_opts:
        for t, lv in local_opts:
            if _feasible(_apply(spaces, sv, t, lv), depth - 1, m, rng, menu):
                return True
    return False


def optimal_completion_time(scenario: Scenario, menu="transmitters", seed=0) -> int:
    if menu not in ("transmitters", "subspaces"):
        raise ConfigurationError(f"unknown oracle menu {menu!r}")
    if scenario.n_devices > MAX_DEVICES or scenario.m > MAX_PACKETS:
        raise SizeError(f"oracle handles N <= {MAX_DEVICES} and M <= {MAX_PACKETS}, "
                        f"got N={scenario.n_devices}, M={scenario.m}")
    m = scenario.m
    # the oracle works over the large prime field regardless of the scenario's mode
    spaces = [s.subspace for s in init_states(scenario.replace(coding_mode="idealized"))]
    if _done(spaces, m):
        return 0
    rng = np.random.default_rng(seed)
    depth = 1
    while not _feasible(spaces, depth, m, rng, menu):
        depth += 1
    return depth
