"""Seeded statistical estimation with principled comparison to exact values.

Replicates use counter-based streams derived from (master seed, replicate
index) via splitmix64, so estimates are bit-reproducible and independent of
how work is scheduled.  Drivers replay a uniformly random event ordering
prefix (the law depends on times only through their order), which avoids
per-replicate sorting entirely.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from . import _kernels as K
from .dynamics import DepthCapExceeded, tree_sampler_depth_cap
from .graphs import Graph
from .processes import ProcessKind

__all__ = [
    "MCEstimate",
    "CltReport",
    "DegenerateVarianceError",
    "estimate_state_probability",
    "estimate_pair_covariance",
    "estimate_count_variance",
    "estimate_site_average",
    "estimate_tree_root_occupation",
    "count_samples",
    "clt_report",
    "ks_normal",
    "compare",
]

_KIND_CODE = {
    ProcessKind.BLOCKING: K.KIND_BLOCKING,
    ProcessKind.DIMER: K.KIND_DIMER,
    ProcessKind.ANNIHILATION: K.KIND_ANNIHILATION,
    ProcessKind.MAP: K.KIND_MAP,
}


class DegenerateVarianceError(RuntimeError):
    """The sampled statistic is constant, so standardization is impossible."""


@dataclass(frozen=True)
class MCEstimate:
    mean: float
    std_error: float
    n_samples: int
    master_seed: int

    def interval(self, z: float = 1.96):
        return self.mean - z * self.std_error, self.mean + z * self.std_error


@dataclass(frozen=True)
class CltReport:
    standardized_samples: np.ndarray
    ks_statistic: float
    n_replicates: int


def _seed64(seed) -> np.uint64:
    return np.uint64(int(seed) & 0xFFFFFFFFFFFFFFFF)


def _target_states(g: Graph, kind: ProcessKind, targets, t: float, reps: int,
                   seed) -> np.ndarray:
    if not 0.0 <= t <= 1.0:
        raise ValueError("t must lie in [0, 1]")
    if reps < 1:
        raise ValueError("need at least one replicate")
    targets = np.ascontiguousarray(targets, dtype=np.int64)
    if targets.size and (targets.min() < 0 or targets.max() >= g.n_vertices):
        raise ValueError("target vertex out of range")
    return K._mc_states(_KIND_CODE[kind], g.indptr, g.indices,
                        np.ascontiguousarray(g.edges[:, 0]),
                        np.ascontiguousarray(g.edges[:, 1]),
                        targets, float(t), int(reps), _seed64(seed))


def estimate_state_probability(g: Graph, kind: ProcessKind, v: int, state: int,
                               t: float, n: int, seed) -> MCEstimate:
    """Frequency of state at vertex v over n independent seeded trajectories."""
    if state not in (0, 1):
        raise ValueError("state must be 0 or 1")
    x = _target_states(g, kind, [v], t, n, seed)[:, 0].astype(np.float64)
    if state == 0:
        x = 1.0 - x
    mean = float(x.mean())
    se = float(x.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return MCEstimate(mean, se, n, int(seed))


def estimate_pair_covariance(g: Graph, kind: ProcessKind, u: int, v: int,
                             t: float, n: int, seed) -> MCEstimate:
    """Sample covariance of the two occupation indicators, with jackknife
    standard error (closed form over the four cell counts)."""
    if n < 2:
        raise ValueError("need n >= 2 samples")
    states = _target_states(g, kind, [u, v], t, n, seed)
    x = states[:, 0].astype(np.int64)
    y = states[:, 1].astype(np.int64)
    sx, sy, sxy = int(x.sum()), int(y.sum()), int((x * y).sum())
    cov = (sxy - sx * sy / n) / (n - 1)
    cells = np.bincount(2 * x + y, minlength=4)
    thetas = np.empty(4)
    for idx, (a, b) in enumerate(((0, 0), (0, 1), (1, 0), (1, 1))):
        m = n - 1
        sx_, sy_, sxy_ = sx - a, sy - b, sxy - a * b
        thetas[idx] = (sxy_ - sx_ * sy_ / m) / (m - 1) if m > 1 else 0.0
    theta_bar = float((cells * thetas).sum() / n)
    se = math.sqrt((n - 1) / n * float((cells * (thetas - theta_bar) ** 2).sum()))
    return MCEstimate(float(cov), se, n, int(seed))


def count_samples(g: Graph, subset, kind: ProcessKind, t: float, replicates: int,
                  seed) -> np.ndarray:
    """Independent replicates of the occupied count over `subset` at time t."""
    states = _target_states(g, kind, subset, t, replicates, seed)
    return states.sum(axis=1, dtype=np.int64)


def estimate_count_variance(g: Graph, subset, kind: ProcessKind, t: float,
                            replicates: int, seed) -> MCEstimate:
    """Sample variance of the subset count, with the standard error of the
    variance estimate from the fourth central moment."""
    if replicates < 2:
        raise ValueError("need at least two replicates")
    s = count_samples(g, subset, kind, t, replicates, seed).astype(np.float64)
    n = replicates
    var = float(s.var(ddof=1))
    centered = s - s.mean()
    m2 = float((centered ** 2).mean())
    m4 = float((centered ** 4).mean())
    se2 = (m4 - (n - 3) / (n - 1) * m2 * m2) / n
    return MCEstimate(var, math.sqrt(max(se2, 0.0)), n, int(seed))


def estimate_site_average(g: Graph, kind: ProcessKind, t: float, replicates: int,
                          seed) -> MCEstimate:
    """Occupation probability via per-replicate averages over all sites.

    On a vertex-transitive graph every site shares one marginal, so the
    site average estimates it with variance reduced by the graph size.
    """
    states = _target_states(g, kind, np.arange(g.n_vertices), t, replicates, seed)
    means = states.mean(axis=1)
    mean = float(means.mean())
    se = float(means.std(ddof=1) / math.sqrt(replicates)) if replicates > 1 else 0.0
    return MCEstimate(mean, se, replicates, int(seed))


def estimate_tree_root_occupation(k: int, root_degree: int, t: float, n: int,
                                  seed) -> MCEstimate:
    """Exact-sampler estimate of the root occupation for blocking deposition
    on the infinite tree (interior degree k+1)."""
    if k < 1 or root_degree not in (k, k + 1):
        raise ValueError("root degree must be k or k+1 with k >= 1")
    if not 0.0 <= t <= 1.0:
        raise ValueError("t must lie in [0, 1]")
    cap = tree_sampler_depth_cap(k)
    occ, _, err = K._tree_root_samples(k, root_degree, float(t), int(n),
                                       _seed64(seed), cap)
    if err:
        raise DepthCapExceeded(f"recursion exceeded depth cap {cap}")
    p = occ / n
    se = math.sqrt(p * (1.0 - p) * n / (n - 1)) / math.sqrt(n) if n > 1 else 0.0
    return MCEstimate(p, se, n, int(seed))


def ks_normal(samples) -> float:
    """Kolmogorov-Smirnov statistic of standardized samples against the
    standard normal distribution function."""
    samples = np.asarray(samples, dtype=np.float64)
    sd = samples.std(ddof=1)
    if sd == 0.0 or not np.isfinite(sd):
        raise DegenerateVarianceError("samples have zero variance")
    z = (samples - samples.mean()) / sd
    return float(stats.kstest(z, "norm").statistic)


def clt_report(g: Graph, subset, kind: ProcessKind, t: float, replicates: int,
               seed) -> CltReport:
    """Standardize the subset count over replicates and test normality."""
    if replicates < 100:
        raise ValueError("need at least 100 replicates for a CLT diagnostic")
    s = count_samples(g, subset, kind, t, replicates, seed).astype(np.float64)
    sd = s.std(ddof=1)
    if sd == 0.0:
        raise DegenerateVarianceError(
            "the count has zero sample variance; no normal limit applies")
    z = (s - s.mean()) / sd
    z.setflags(write=False)
    return CltReport(z, float(stats.kstest(z, "norm").statistic), replicates)


def compare(est: MCEstimate, exact: float) -> float:
    """Standardized discrepancy (mean - exact) / std_error."""
    if est.std_error <= 0.0:
        raise ValueError("estimate has zero standard error")
    return (est.mean - exact) / est.std_error
