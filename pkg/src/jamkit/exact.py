"""Closed-form site and pair statistics on infinite regular trees, with
rigorous lattice bounds and one-dimensional asymptotic variances.

Quantities live on the infinite tree whose interior vertices have degree
k+1.  The recursion variable is the *branch probability*: the chance that a
designated root is still in its initial state at time t when the tree is
reduced at the root (one branch removed for blocking; all but one branch
removed for dimer/annihilation).  All public functions return
occupancy-oriented values except `blocking_vacancy_upper_bound`, which is
explicitly a vacancy bound.  Pair quantities depend only on the graph
distance m between the two sites.

Series evaluation: every infinite sum here is an exponential-series tail in
g = 2*log(branch), with |g| <= 2 on [0,1], so terms decay factorially.
Tails with short heads are computed as exp(x) minus the head; long-headed
tails are summed term by term until |term| < 1e-15 * max(1, |partial|)
(hard cap 500 terms).
"""
from __future__ import annotations

import math

from .processes import ProcessKind

__all__ = [
    "branch_probability",
    "occupation_probability",
    "covariance",
    "correlation",
    "pair_vacancy_full",
    "pair_vacancy_reduced",
    "pair_vacancy_double_reduced",
    "chain_solution",
    "blocking_vacancy_upper_bound",
    "variance_lower_bound",
    "asymptotic_variance",
]

_REL_EPS = 1e-15
_MAX_TERMS = 500
_TAIL_CROSSOVER = 30


def _check_kt(k: int, t: float) -> None:
    if k < 1:
        raise ValueError("branching k must be >= 1")
    if not 0.0 <= t <= 1.0:
        raise ValueError("t must lie in [0, 1]")


def _exp_tail(x: float, start: int) -> float:
    """sum_{j >= start} x**j / j!"""
    if start < _TAIL_CROSSOVER:
        head = 0.0
        term = 1.0
        for j in range(start):
            head += term
            term *= x / (j + 1)
        return math.exp(x) - head
    total = 0.0
    term = x ** start / math.factorial(start)
    for j in range(start, start + _MAX_TERMS):
        total += term
        if abs(term) < _REL_EPS * max(1.0, abs(total)):
            break
        term *= x / (j + 1)
    return total


def _exp_tail_stride2(x: float, start: int) -> float:
    """sum_{n >= 0} x**(start+2n) / (start+2n)!  (terms all share one sign)."""
    total = 0.0
    term = x ** start / math.factorial(start)
    j = start
    for _ in range(_MAX_TERMS):
        total += term
        if abs(term) < _REL_EPS * max(1.0, abs(total)):
            break
        term *= x * x / ((j + 1) * (j + 2))
        j += 2
    return total


def _exp_head(x: float, last: int) -> float:
    """sum_{j = 0..last} x**j / j!  (empty when last < 0)."""
    total = 0.0
    term = 1.0
    for j in range(last + 1):
        total += term
        term *= x / (j + 1)
    return total


# ---------------------------------------------------------------------------
# Single-site quantities
# ---------------------------------------------------------------------------

def branch_probability(kind: ProcessKind, k: int, t: float) -> float:
    """Probability the reduced-tree root keeps its initial state at time t.

    Solves the branch recursion: the rate of change is -(branch**k) for the
    deposition kinds and half that for annihilation.
    """
    _check_kt(k, t)
    half = 0.5 if kind is ProcessKind.ANNIHILATION else 1.0
    if kind is ProcessKind.MAP:
        raise ValueError("the multiple annihilation process has no branch recursion; "
                         "it is assembled from the blocking one")
    if k == 1:
        return math.exp(-half * t)
    return math.exp(-math.log1p((k - 1) * half * t) / (k - 1))


def _vacancy_blocking(k: int, t: float) -> float:
    b = branch_probability(ProcessKind.BLOCKING, k, t)
    return 0.5 * (1.0 + b * b)


def occupation_probability(kind: ProcessKind, k: int, t: float) -> float:
    """P[site occupied at time t] on the infinite (k+1)-regular tree."""
    _check_kt(k, t)
    if kind is ProcessKind.BLOCKING:
        return 1.0 - _vacancy_blocking(k, t)
    if kind is ProcessKind.DIMER:
        b = branch_probability(kind, k, t)
        return 1.0 - b ** (k + 1)
    if kind is ProcessKind.ANNIHILATION:
        b = branch_probability(kind, k, t)
        return b ** (k + 1)
    # multiple annihilation: occupied = still undecided or decided-occupied,
    # assembled from the coupled blocking quantities (k >= 2 only)
    if k < 2:
        raise ValueError("multiple annihilation occupation requires k >= 2")
    b = branch_probability(ProcessKind.BLOCKING, k, t)
    return (1.0 - t) * b ** (k + 1) + 1.0 - _vacancy_blocking(k, t)


# ---------------------------------------------------------------------------
# Pair helpers for the blocking recursion (all expressed in g = 2 log branch)
# ---------------------------------------------------------------------------

def pair_vacancy_double_reduced(k: int, t: float, m: int) -> float:
    """Both sites vacant at t; the two sites are degree-k roots at distance m.

    For m = -1 the value is defined as 1 (used by the multiple-annihilation
    assembly); m = 0 degenerates to the single reduced-root vacancy.
    """
    _check_kt(k, t)
    if m < -1:
        raise ValueError("m must be >= -1")
    if m == -1:
        return 1.0
    g = 2.0 * math.log(branch_probability(ProcessKind.BLOCKING, k, t))
    return 0.5 * g ** (m + 1) / math.factorial(m + 1) + _exp_head(g, m)


def pair_vacancy_reduced(k: int, t: float, m: int) -> float:
    """Both sites vacant at t: the degree-k root and a site at distance m."""
    _check_kt(k, t)
    if m < 0:
        raise ValueError("m must be >= 0")
    g = 2.0 * math.log(branch_probability(ProcessKind.BLOCKING, k, t))
    return 0.5 * (1.0 + _exp_head(g, m)) * math.exp(0.5 * g)


def pair_vacancy_full(k: int, t: float, m: int) -> float:
    """Both sites vacant at t on the full tree, distance m >= 1 apart."""
    _check_kt(k, t)
    if m < 1:
        raise ValueError("m must be >= 1")
    g = 2.0 * math.log(branch_probability(ProcessKind.BLOCKING, k, t))
    head = sum(g ** (m - 1 - 2 * n) / math.factorial(m - 1 - 2 * n)
               for n in range((m - 1) // 2 + 1))
    return (1.0 + (-1) ** m) / 4.0 + 0.5 * math.exp(g) * (1.0 + head)


def chain_solution(a: float, b: float, c: float, m: int, v: float) -> float:
    """Closed form for the integration chain d f_m / dv = f_{m-1}, f_m(0) = 1,
    seeded by f_1(v) = a - b * exp(v / c):

        f_m = a v^(m-1)/(m-1)! + sum_{j<=m-2} v^j/j!
              - b c^(m-1) sum_{j>=m-1} (v/c)^j / j!
    """
    if c == 0.0:
        raise ValueError("c must be nonzero")
    if m < 1:
        raise ValueError("m must be >= 1")
    lead = a * v ** (m - 1) / math.factorial(m - 1)
    poly = _exp_head(v, m - 2)
    tail = 0.0 if b == 0.0 else b * c ** (m - 1) * _exp_tail(v / c, m - 1)
    return lead + poly - tail


# ---------------------------------------------------------------------------
# Covariance and correlation
# ---------------------------------------------------------------------------

def covariance(kind: ProcessKind, k: int, m: int, t: float) -> float:
    """Cov of the two site-state indicators at distance m >= 1 and time t.

    Complementing both indicators leaves a covariance unchanged, so no
    orientation mapping is needed here.
    """
    _check_kt(k, t)
    if m < 1:
        raise ValueError("distance m must be >= 1")
    if kind is ProcessKind.BLOCKING:
        b = branch_probability(kind, k, t)
        g = 2.0 * math.log(b)
        return -0.5 * b * b * _exp_tail_stride2(g, m + 1)
    if kind is ProcessKind.DIMER:
        b = branch_probability(kind, k, t)
        if k == 1:
            x = -2.0 * t
            return -math.exp(x) * (0.5 * x ** m / math.factorial(m) + _exp_tail(x, m + 1))
        v = 2.0 * math.log(b)
        pair = chain_solution(k / (k - 1.0), 1.0 / (k - 1.0), 2.0 / (1.0 - k), m, v)
        return b ** (2 * k) * (pair - b * b)
    if kind is ProcessKind.ANNIHILATION:
        b = branch_probability(kind, k, t)
        if k == 1:
            return -math.exp(-t) * _exp_tail(-t, m + 1)
        v = 2.0 * math.log(b)
        pair = chain_solution((k + 1.0) / (k - 1.0), 2.0 / (k - 1.0), 2.0 / (1.0 - k), m, v)
        return b ** (2 * k) * (pair - b * b)
    # multiple annihilation, k >= 2: assembled from the blocking ingredients
    if k < 2:
        raise ValueError("multiple annihilation covariance requires k >= 2")
    b = branch_probability(ProcessKind.BLOCKING, k, t)
    vac = _vacancy_blocking(k, t)
    cov_block = covariance(ProcessKind.BLOCKING, k, m, t)
    reduced = pair_vacancy_reduced(k, t, m - 1)
    double = pair_vacancy_double_reduced(k, t, m - 2)
    return (cov_block
            + 2.0 * (1.0 - t) * b ** k * (vac * b - reduced)
            + (1.0 - t) ** 2 * b ** (2 * k) * (double - b * b))


def correlation(kind: ProcessKind, k: int, m: int, t: float) -> float:
    """Pearson correlation: covariance / (p (1 - p)) with p the occupation."""
    p = occupation_probability(kind, k, t)
    denom = p * (1.0 - p)
    if denom <= 0.0:
        raise ValueError("degenerate site variance: occupation is 0 or 1")
    return covariance(kind, k, m, t) / denom


# ---------------------------------------------------------------------------
# Bounds and asymptotics
# ---------------------------------------------------------------------------

def blocking_vacancy_upper_bound(k: int, t: float) -> float:
    """Upper bound for the vacancy probability of blocking deposition on an
    edge-transitive bipartite lattice of degree k+1 (k >= 2): the tree value
    dominates the lattice value."""
    if k < 2:
        raise ValueError("the lattice bound requires k >= 2")
    if not 0.0 <= t <= 1.0:
        raise ValueError("t must lie in [0, 1]")
    return 0.5 * (1.0 + math.exp(-2.0 * math.log1p((k - 1) * t) / (k - 1)))


def variance_lower_bound(kind: ProcessKind, max_degree: int, t: float,
                         card_v: int, card_w_plus: int | None = None) -> float:
    """Lower bound for Var of the occupied count over a card_v-vertex set.

    For 0 <= t < 1 the bound is t(1-t)^(D+1)/(D+1) * card_v for blocking and
    t(1-t)^(2D-1)/(2(2D-1)) * card_v for the edge-driven kinds (no isolated
    vertices assumed).  At t = 1 only blocking has an explicit constant, in
    terms of the number of positive-entropy sites `card_w_plus`.
    """
    d = max_degree
    if d < 1:
        raise ValueError("max degree must be >= 1")
    if card_v < 0:
        raise ValueError("card_v must be >= 0")
    if kind is ProcessKind.MAP:
        raise ValueError("no variance bound is available for multiple annihilation")
    if not 0.0 <= t <= 1.0:
        raise ValueError("t must lie in [0, 1]")
    if t < 1.0:
        if kind is ProcessKind.BLOCKING:
            return t * (1.0 - t) ** (d + 1) / (d + 1) * card_v
        return 0.5 * t * (1.0 - t) ** (2 * d - 1) / (2 * d - 1) * card_v
    if kind is not ProcessKind.BLOCKING:
        raise ValueError(f"no jamming-time variance bound with an explicit "
                         f"constant exists for {kind.value}")
    if card_w_plus is None:
        raise ValueError("the jamming-time bound needs card_w_plus")
    return 2.0 ** (-(d ** 3 * (1 + d) + 1)) / (d ** 6 * (1 + d) ** 2) * card_w_plus


def asymptotic_variance(kind: ProcessKind, t: float) -> float:
    """Limit of Var(occupied count)/n on the n-site line, 0 < t <= 1."""
    if not 0.0 < t <= 1.0:
        raise ValueError("t must lie in (0, 1]")
    if kind is ProcessKind.BLOCKING:
        return t * math.exp(-4.0 * t)
    if kind is ProcessKind.DIMER:
        return 4.0 * t * math.exp(-4.0 * t)
    if kind is ProcessKind.ANNIHILATION:
        return (1.0 + 2.0 * t) * math.exp(-2.0 * t) - math.exp(-t)
    raise ValueError("no line asymptotics are available for multiple annihilation")
