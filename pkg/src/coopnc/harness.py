"""Monte Carlo sweeps: draw losses, run stage one, run every scheme on the same outcome."""

import csv
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .baselines import SCHEMES, run_scheme
from .bounds import (batch_lossless_value, instant_lossless_value, lb_lossless_value, lb_lossy,
                     ub_batch_lossy, ub_instant_lossy)
from .errors import ConfigurationError, InvariantViolation
from .model import Scenario, check_tie_mode, run_stage_one, run_stage_one_until

SWEEP_VARS = ("packets", "devices", "network-size", "stage1-loss", "subfile-size")
LOSSLESS_STAGE1 = (0.3, 0.5)
LOSSY_RANGE = (0.15, 0.35)


@dataclass
class ExperimentConfig:
    schemes: tuple
    sweep_var: str
    grid: tuple
    iterations: int = 500
    stage1_range: tuple = LOSSLESS_STAGE1
    stage2_range: Optional[tuple] = None  # None: lossless stage two
    m: int = 50
    n: int = 5
    file_size: int = 100
    seed: int = 0
    tie_mode: str = "random"
    coding_mode: str = "idealized"

    def __post_init__(self):
        self.schemes = tuple(self.schemes)
        self.grid = tuple(self.grid)
        self.stage1_range = tuple(self.stage1_range)
        if self.stage2_range is not None:
            self.stage2_range = tuple(self.stage2_range)
        for s in self.schemes:
            if s not in SCHEMES:
                raise ConfigurationError(f"unknown scheme {s!r}; choose from {SCHEMES}")
        if not self.schemes:
            raise ConfigurationError("no schemes configured")
        if self.sweep_var not in SWEEP_VARS:
            raise ConfigurationError(f"sweep variable must be one of {SWEEP_VARS}")
        if not self.grid:
            raise ConfigurationError("sweep grid is empty")
        if self.iterations < 1:
            raise ConfigurationError("iterations must be >= 1")
        for lo, hi in filter(None, (self.stage1_range, self.stage2_range)):
            if not 0 <= lo <= hi < 1:
                raise ConfigurationError(f"bad loss range ({lo}, {hi})")
        if self.sweep_var == "subfile-size":
            for s in self.grid:
                if s < 1 or self.file_size % s:
                    raise ConfigurationError(f"subfile size {s} does not divide {self.file_size}")
        check_tie_mode(self.tie_mode)

    @property
    def lossy(self) -> bool:
        return self.stage2_range is not None

    @classmethod
    def from_json(cls, d: dict) -> "ExperimentConfig":
        known = set(cls.__dataclass_fields__)
        extra = set(d) - known
        if extra:
            raise ConfigurationError(f"unknown config keys: {sorted(extra)}")
        try:
            return cls(**d)
        except TypeError as e:
            raise ConfigurationError(str(e)) from None

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        with open(path, encoding="utf-8") as fh:
            try:
                return cls.from_json(json.load(fh))
            except json.JSONDecodeError as e:
                raise ConfigurationError(f"{path}: {e}") from None


@dataclass
class PointStats:
    scheme: str
    sweep_var: str
    sweep_value: float
    mean_T: float
    std_T: float
    ci95_lo: float
    ci95_hi: float
    mean_lb: float
    mean_ub: float
    iterations: int
    seed: int
    samples: tuple = field(default=(), repr=False)

    @property
    def ci_half(self):
        return (self.ci95_hi - self.ci95_lo) / 2


def iteration_rng(seed, grid_index, iteration):
    return np.random.default_rng(np.random.SeedSequence([seed, grid_index, iteration]))


def draw_instance(cfg: ExperimentConfig, value, rng) -> Scenario:
    """One stage-one outcome for grid value ``value``."""
    n = int(value) if cfg.sweep_var in ("devices", "network-size") else cfg.n
    if cfg.sweep_var == "stage1-loss":
        eta1 = np.full(n, float(value))
    else:
        eta1 = rng.uniform(*cfg.stage1_range, size=n)
    kw = dict(coding_mode=cfg.coding_mode, seed=int(rng.integers(2**63)))
    if cfg.lossy:
        kw["eta"] = tuple(rng.uniform(*cfg.stage2_range, size=n))
        kw["eps"] = tuple(map(tuple, rng.uniform(*cfg.stage2_range, size=(n, n))))
    eta1 = tuple(eta1)
    if cfg.sweep_var == "packets":
        return run_stage_one_until(int(value), n, eta1, rng, **kw)
    if cfg.sweep_var == "subfile-size":
        return run_stage_one(cfg.file_size, n, eta1, rng, **kw)
    return run_stage_one_until(cfg.m, n, eta1, rng, **kw)


def split_subfiles(scenario: Scenario, subfile_size: int) -> list:
    """Partition a scenario by original packet index into consecutive subfiles."""
    total = scenario.file_size
    if total is None:
        total = max(scenario.packets, default=0)
    if subfile_size < 1 or total % subfile_size:
        raise ConfigurationError(f"subfile size {subfile_size} does not divide {total}")
    parts = []
    for i, start in enumerate(range(1, total + 1, subfile_size)):
        block = frozenset(range(start, start + subfile_size))
        wants = tuple(w & block for w in scenario.wants)
        packets = tuple(p for p in scenario.packets if p in block)
        parts.append(scenario.replace(packets=packets, wants=wants, seed=scenario.seed + i,
                                      file_size=None))
    return parts


def subfile_run(scenario: Scenario, subfile_size: int, scheme: str, lossy=False,
                tie_mode="random") -> int:
    """Total completion time when subfiles are repaired one after another."""
    return sum(run_scheme(s, scheme, lossy, tie_mode).T
               for s in split_subfiles(scenario, subfile_size))


def instance_bounds(scenario: Scenario, lossy: bool) -> dict:
    """Real-valued lb and per-scheme ub for one instance."""
    w = scenario.wants
    if all(not x for x in w):
        return {"lb": 0, "ncmi-batch": 0, "ncmi-instant": 0}
    if lossy:
        return {"lb": float(lb_lossy(w, scenario.loss)[1]),
                "ncmi-batch": float(ub_batch_lossy(w, scenario.loss)[0].value),
                "ncmi-instant": float(ub_instant_lossy(w, scenario.loss)[0].value)}
    return {"lb": math.ceil(lb_lossless_value(w)),
            "ncmi-batch": math.ceil(batch_lossless_value(w)),
            "ncmi-instant": math.ceil(instant_lossless_value(w))}


def _summary(samples):
    a = np.asarray(samples, dtype=float)
    mean = float(a.mean())
    std = float(a.std(ddof=1)) if a.size > 1 else 0.0
    half = 1.96 * std / math.sqrt(a.size)
    return mean, std, mean - half, mean + half


def run_point(cfg: ExperimentConfig, grid_index: int, value):
    """All iterations at one grid point; returns {scheme: (T list, lb list, ub list)}."""
    out = {s: ([], [], []) for s in cfg.schemes}
    for it in range(cfg.iterations):
        rng = iteration_rng(cfg.seed, grid_index, it)
        sc = draw_instance(cfg, value, rng)
        parts = split_subfiles(sc, int(value)) if cfg.sweep_var == "subfile-size" else [sc]
        bounds = [instance_bounds(p, cfg.lossy) for p in parts]
        for scheme in cfg.schemes:
            total = 0
            for p, b in zip(parts, bounds):
                t = run_scheme(p, scheme, cfg.lossy, cfg.tie_mode).T
                if not cfg.lossy and scheme in b and not b["lb"] <= t <= b[scheme]:
                    raise InvariantViolation(
                        f"{scheme}: T={t} outside [{b['lb']}, {b[scheme]}] "
                        f"(seed {cfg.seed}, grid {grid_index}, iteration {it})")
                total += t
            ts, lbs, ubs = out[scheme]
            ts.append(total)
            lbs.append(sum(b["lb"] for b in bounds))
            ubs.append(sum(b[scheme] for b in bounds) if scheme in bounds[0] else math.nan)
    return out


def monte_carlo(cfg: ExperimentConfig, progress=None) -> list:
    results = []
    for gi, value in enumerate(cfg.grid):
        point = run_point(cfg, gi, value)
        for scheme in cfg.schemes:
            ts, lbs, ubs = point[scheme]
            mean, std, lo, hi = _summary(ts)
            results.append(PointStats(scheme, cfg.sweep_var, value, mean, std, lo, hi,
                                      float(np.mean(lbs)), float(np.mean(ubs)),
                                      cfg.iterations, cfg.seed, tuple(ts)))
        if progress:
            progress(gi, value)
    return results


CSV_COLUMNS = ("scheme", "sweep_var", "sweep_value", "mean_T", "std_T", "ci95_lo", "ci95_hi",
               "mean_lb", "mean_ub", "iterations", "seed")


def _fmt(x):
    if isinstance(x, float):
        return "" if math.isnan(x) else f"{x:.6f}"
    return str(x)


def emit_csv(results, path):
    if not results:
        raise ConfigurationError("no results to write")
    rows = [[_fmt(getattr(r, c)) for c in CSV_COLUMNS] for r in results]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        w.writerows(rows)


def results_to_json(results):
    return [{k: v for k, v in asdict(r).items() if k != "samples"} for r in results]
