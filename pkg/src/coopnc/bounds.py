"""Closed-form completion-time bounds.

All arithmetic is exact (``fractions.Fraction``); float loss probabilities are
converted exactly, so the only rounding is the final ceiling.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from .grouping import Groups, group_wants

F = Fraction


def _frac(x):
    return x if isinstance(x, Fraction) else Fraction(x)


def _ceil(x) -> int:
    return max(0, math.ceil(x))


def _sizes(wants):
    return [len(w) for w in wants]


def _mc(wants):
    return len(frozenset.intersection(*map(frozenset, wants))) if wants else 0


def batch_lossless_value(wants, m_c_size=None) -> Fraction:
    w = _sizes(wants)
    mc = _mc(wants) if m_c_size is None else m_c_size
    return max(F(mc), F(max(w) + min(w), 3), F(max(w), 2))


def ub_batch_lossless(wants, m_c_size=None) -> int:
    return _ceil(batch_lossless_value(wants, m_c_size))


def instant_lossless_value(wants, groups: Groups = None) -> Fraction:
    wants = [frozenset(w) for w in wants]
    g = groups or group_wants(wants)
    m = len(frozenset().union(*wants))
    mc, md = len(g.m_c), len(g.m_d)
    wmin = min(_sizes(wants))
    return min(max(F(m, 2), F(mc)),
               max(F(mc), F(2 * wmin + md, 3), F(wmin + md, 2)))


def ub_instant_lossless(wants, groups: Groups = None) -> int:
    return _ceil(instant_lossless_value(wants, groups))


def lb_lossless_value(wants) -> Fraction:
    return max(F(_mc(wants)), F(max(_sizes(wants)), 2))


def lb_lossless(wants) -> int:
    return _ceil(lb_lossless_value(wants))


def _loss(loss):
    eta = [_frac(e) for e in loss.eta]
    eps = [[_frac(e) for e in row] for row in loss.eps]
    return eta, eps


def _argmax(items, key):
    # lowest id wins ties
    best = None
    for i in items:
        k = key(i)
        if best is None or k > best[0]:
            best = (k, i)
    return best[1]


@dataclass(frozen=True)
class BatchLossyBoundTerms:
    x: int
    r: int
    T_x: Fraction
    T_r: Fraction
    T_j: Fraction
    mc_term: Fraction
    value: Fraction
    degenerate: bool = False  # condition denominator <= 0, second branch forced

    @property
    def bound(self) -> int:
        return _ceil(self.value)


def ub_batch_lossy(wants, loss):
    """Returns (terms, ceiled bound)."""
    w = _sizes(wants)
    n = len(w)
    eta, eps = _loss(loss)
    prod = F(1)
    for e in eta:
        prod *= e
    mc_term = F(_mc(wants)) / (1 - prod)
    x = min(range(n), key=lambda i: (w[i], i))
    r = _argmax([i for i in range(n) if i != x], lambda i: F(w[i]) / (2 - eta[i] - eps[x][i]))
    wx, wr = w[x], w[r]
    d = 1 - eta[r] - eps[x][r] + eta[x]
    second = F(wr) / (2 - eta[r] - eps[x][r])
    if d > 0:
        t_x = (wr * (1 - eps[r][x]) + wx * (1 + 2 * eta[x] - 2 * eta[r] + eps[r][x] - 2 * eps[x][r])) \
            / (d * (3 - 2 * eta[x] - eps[r][x]))
        t_r = (wr * (1 - 2 * eta[r] - eps[x][r] + 2 * eta[x]) + wx * (1 - eps[x][r])) \
            / (d * (3 - 2 * eta[r] - eps[x][r]))
        if F(wr - wx) / d <= F(wx) / (1 - eta[x]):
            t_j = max(t_x, t_r)
        else:
            t_j = second
        degenerate = False
    else:
        t_x = t_r = None
        t_j = second
        degenerate = True
    value = max(mc_term, t_j)
    terms = BatchLossyBoundTerms(x, r, t_x, t_r, t_j, mc_term, value, degenerate)
    return terms, terms.bound


@dataclass(frozen=True)
class InstantLossyBoundTerms:
    groups: Groups
    T_sc: Fraction
    T_sl: Fraction
    T_sd: Fraction
    T_ll: Fraction
    T_ld: Fraction
    ml_choices: tuple  # (x, x') per M_l vector
    md_choices: tuple  # x per M_d vector
    value: Fraction

    @property
    def bound(self) -> int:
        return _ceil(self.value)


def ub_instant_lossy(wants, loss):
    """Returns (terms, ceiled bound), evaluated on the first-slot groups."""
    wants = [frozenset(w) for w in wants]
    n = len(wants)
    g = group_wants(wants, n)
    eta, eps = _loss(loss)
    max_eta = max(eta)
    t_sc = F(len(g.m_c)) / (1 - max_eta)
    t_sl = F(len(g.m_l)) / (1 - max_eta)
    t_sd = sum((1 / (1 - max(eta[k] for k in v.targets)) for v in g.m_d), F(0))

    t_ll = F(0)
    ml_choices = []
    for v in g.m_l:
        e = v.entries
        x = _argmax(range(n), lambda i: sum((1 - eps[i][k] for k in range(n) if e[k] != e[i]), F(0)))
        same = [k for k in range(n) if e[k] == e[x]]
        x2 = _argmax([i for i in range(n) if e[i] != e[x]],
                     lambda i: sum((1 - eps[i][k] for k in same), F(0)))
        t_ll += 1 / (1 - max(eps[x][k] for k in range(n) if e[k] != e[x]))
        t_ll += 1 / (1 - max(eps[x2][k] for k in same))
        ml_choices.append((x, x2))

    t_ld = F(0)
    md_choices = []
    for v in g.m_d:
        tg = sorted(v.targets)
        x = _argmax(sorted(v.holders), lambda i: sum((1 - eps[i][k] for k in tg), F(0)))
        t_ld += 1 / (1 - max(eps[x][k] for k in tg))
        md_choices.append(x)

    denom = t_ld + t_ll + t_sd + t_sl
    if denom == 0:
        value = t_sc
    else:
        value = max(t_sc, (t_ld + t_ll) * (t_sc + t_sd + t_sl) / denom)
    terms = InstantLossyBoundTerms(g, t_sc, t_sl, t_sd, t_ll, t_ld, tuple(ml_choices),
                                   tuple(md_choices), value)
    return terms, terms.bound


def lb_lossy(wants, loss):
    """Returns (ceiled bound, exact pre-ceiling value)."""
    w = _sizes(wants)
    n = len(w)
    eta, eps = _loss(loss)
    prod = F(1)
    for e in eta:
        prod *= e
    mc_term = F(_mc(wants)) / (1 - prod)
    per_device = max(min(F(w[k]) / (2 - eta[k] - eps[x][k]) for x in range(n) if x != k)
                     for k in range(n))
    value = max(mc_term, per_device)
    return _ceil(value), value


def all_bounds(scenario) -> dict:
    """Every bound for a scenario, as plain numbers (used by the CLI)."""
    wants, loss = scenario.wants, scenario.loss
    bl, _ = ub_batch_lossy(wants, loss)
    il, _ = ub_instant_lossy(wants, loss)
    lb, lb_val = lb_lossy(wants, loss)
    return {
        "ub_batch_lossless": ub_batch_lossless(wants),
        "ub_instant_lossless": ub_instant_lossless(wants),
        "lb_lossless": lb_lossless(wants),
        "ub_batch_lossy": bl.bound,
        "ub_batch_lossy_value": float(bl.value),
        "ub_batch_lossy_degenerate": bl.degenerate,
        "ub_instant_lossy": il.bound,
        "ub_instant_lossy_value": float(il.value),
        "lb_lossy": lb,
        "lb_lossy_value": float(lb_val),
    }
