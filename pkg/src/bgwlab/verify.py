"""Distances, goodness-of-fit tests and parameter sweeps."""
from __future__ import annotations

import csv
import hashlib
import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy import stats

from .errors import DegenerateSupport
from .trees import PlaneTree


@dataclass
class EmpiricalBatch:
    """Observed outcomes of one sampling run plus the context needed to rerun it."""
    samples: list
    family: str = ""
    n: int = 0
    k: int = 0
    seed: int = 0
    sampler: str = ""

    def counts(self) -> Counter:
        return Counter(self.samples)

    def __len__(self):
        return len(self.samples)


def _atoms(x):
    if isinstance(x, EmpiricalBatch):
        c = x.counts()
        N = len(x)
        return {a: v / N for a, v in c.items()}
    if hasattr(x, "atoms"):
        return x.atoms
    return dict(x)


def tv_exact(p, q) -> Fraction:
    pa, qa = _atoms(p), _atoms(q)
    keys = set(pa) | set(qa)
    return sum((abs(Fraction(pa.get(x, 0)) - Fraction(qa.get(x, 0))) for x in keys),
               Fraction(0)) / 2


def tv_empirical(batch, q) -> float:
    """Total variation between an empirical batch and a law (or a second batch)."""
    pa, qa = _atoms(batch), _atoms(q)
    keys = set(pa) | set(qa)
    return 0.5 * sum(abs(float(pa.get(x, 0)) - float(qa.get(x, 0))) for x in keys)


@dataclass
class ChiSquareResult:
    statistic: float
    dof: int
    pvalue: float
    buckets: int


def chi_square_test(batch, q, min_expected: float = 5.0) -> ChiSquareResult:
    """Pearson test of the batch against the exact law q.

    Atoms with expected count below min_expected are pooled into one bucket;
    if that bucket is still too small it is merged into the smallest regular
    bucket.  Any observation outside the support of q gives p-value 0.
    """
    counts = batch.counts() if isinstance(batch, EmpiricalBatch) else Counter(batch)
    N = sum(counts.values())
    law = _atoms(q)
    if any(x not in law or law[x] == 0 for x in counts):
        return ChiSquareResult(float("inf"), 0, 0.0, 0)
    exp_obs = [(N * float(p), counts.get(x, 0)) for x, p in law.items() if p > 0]
    big = [eo for eo in exp_obs if eo[0] >= min_expected]
    small = [eo for eo in exp_obs if eo[0] < min_expected]
    if small:
        pooled = (sum(e for e, _ in small), sum(o for _, o in small))
        if pooled[0] >= min_expected or not big:
            big.append(pooled)
        else:
            i = min(range(len(big)), key=lambda j: big[j][0])
            big[i] = (big[i][0] + pooled[0], big[i][1] + pooled[1])
    if len(big) < 2:
        raise DegenerateSupport("fewer than two buckets after pooling")
    e = np.array([x for x, _ in big])
    o = np.array([y for _, y in big], dtype=float)
    stat = float(((o - e) ** 2 / e).sum())
    dof = len(big) - 1
    return ChiSquareResult(stat, dof, float(stats.chi2.sf(stat, dof)), len(big))


def chi_square(batch, q) -> float:
    return chi_square_test(batch, q).pvalue


def ks_against_beta(samples, a: float, b: float) -> float:
    """Kolmogorov-Smirnov distance between the sample and Beta(a, b)."""
    return float(stats.kstest(np.asarray(samples, dtype=float), stats.beta(a, b).cdf).statistic)


@dataclass
class CondensationStats:
    root_out: int
    max_out: int
    second_max_out: int
    root_is_max: bool


def condensation_stats(t) -> CondensationStats:
    """Root and top outdegrees of a tree or of a core/leaf decomposition."""
    if isinstance(t, PlaneTree):
        degs = t.degrees
    else:
        degs = t.outdegrees()
    root = degs[0]
    top = sorted(degs, reverse=True)
    second = top[1] if len(top) > 1 else 0
    return CondensationStats(root, top[0], second, root == top[0])


def coarse_nonroot_profile(t, cap: int = 20):
    """Decreasing tuple of min(outdegree, cap) over the non-root internal vertices."""
    degs = t.internal_outdegrees() if isinstance(t, PlaneTree) else t.outdegrees()
    return tuple(sorted((min(c, cap) for c in degs[1:]), reverse=True))


# -- sweeps ------------------------------------------------------------------------

@dataclass
class SweepTable:
    metric: str
    rows: list = field(default_factory=list)   # (n, value)
    config: dict = field(default_factory=dict)

    def add(self, n, value):
        if self.rows and n <= self.rows[-1][0]:
            raise ValueError("sweep grid must be strictly increasing")
        self.rows.append((n, value))

    @property
    def values(self):
        return [float(v) for _, v in self.rows]

    def final_lt_initial(self):
        return self.values[-1] < self.values[0]

    def final_gt_initial(self):
        return self.values[-1] > self.values[0]

    def nonincreasing(self):
        v = self.values
        return all(b <= a for a, b in zip(v, v[1:]))

    def nondecreasing(self):
        v = self.values
        return all(b >= a for a, b in zip(v, v[1:]))

    def config_hash(self):
        blob = json.dumps(self.config, sort_keys=True, default=str).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    def write_csv(self, fh, thresholds=None):
        fh.write(f"# metric={self.metric}\n")
        fh.write(f"# config_hash={self.config_hash()}\n")
        for key in ("dist", "k", "seed", "N"):
            if key in self.config:
                fh.write(f"# {key}={self.config[key]}\n")
        for key, val in (thresholds or {}).items():
            fh.write(f"# threshold_{key}={val}\n")
        w = csv.writer(fh)
        w.writerow(["n", "value", "exact"])
        for n, v in self.rows:
            w.writerow([n, repr(float(v)), str(v) if isinstance(v, Fraction) else ""])


def sweep(metric, n_grid, config=None, name=None) -> SweepTable:
    """Evaluate metric(n) over an increasing grid of sizes."""
    table = SweepTable(name or getattr(metric, "__name__", "metric"), config=dict(config or {}))
    for n in n_grid:
        table.add(n, metric(n))
    return table
