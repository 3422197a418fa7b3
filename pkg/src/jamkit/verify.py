"""Acceptance verification: every top-level criterion as a runnable check.

Each check yields CheckRecord rows (measured value, target, tolerance, seed)
and the CLI `verify` command and the pytest acceptance module both drive the
same functions.  Seeds are frozen so every number is reproducible.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import exact, montecarlo as mc, oracle
from .dynamics import draw_schedule, simulate_coupled_usp
from .graphs import (Graph, TreeSpec, complete, cycle, line, make_tree,
                     positive_entropy, star, torus, triangle_extension,
                     twin_extension)
from .processes import ProcessKind

__all__ = ["CheckRecord", "CHECKS", "run_checks", "fixture_graphs",
           "PAPER_OCCUPATION", "PAPER_CORRELATIONS"]

BLOCKING, DIMER, ANNIHILATION, MAP = (ProcessKind.BLOCKING, ProcessKind.DIMER,
                                      ProcessKind.ANNIHILATION, ProcessKind.MAP)

# Published reference tables: occupation probabilities at jamming (t=1) on the
# infinite (k+1)-regular tree, and pair correlations at t=1 by distance.
PAPER_OCCUPATION = {
    (1, BLOCKING): 0.432, (1, DIMER): 0.865, (1, ANNIHILATION): 0.368,
    (2, BLOCKING): 0.375, (2, DIMER): 0.875, (2, ANNIHILATION): 0.296,
    (3, BLOCKING): 0.333, (3, DIMER): 0.889, (3, ANNIHILATION): 0.250,
    (4, BLOCKING): 0.302, (4, DIMER): 0.901, (4, ANNIHILATION): 0.217,
    (5, BLOCKING): 0.276, (5, DIMER): 0.911, (5, ANNIHILATION): 0.192,
    (10, BLOCKING): 0.200, (10, DIMER): 0.940, (10, ANNIHILATION): 0.124,
    (20, BLOCKING): 0.135, (20, DIMER): 0.964, (20, ANNIHILATION): 0.074,
}
PAPER_CORRELATIONS = {
    (BLOCKING, 3): [-0.5000, 0.1760, -0.0474, 0.0103, -0.0019],
    (BLOCKING, 5): [-0.3820, 0.1003, -0.0200, 0.0032, -0.0004],
    (DIMER, 3): [-0.1250, 0.0070, 0.0085, -0.0041, 0.0012],
    (DIMER, 5): [-0.0982, 0.0103, 0.0007, -0.0005, 0.0001],
    (ANNIHILATION, 3): [-0.3333, 0.0758, -0.0130, 0.0018, -0.0002],
    (ANNIHILATION, 5): [-0.2383, 0.0407, -0.0054, 0.0006, -0.0001],
}

TABLE_KS = (1, 2, 3, 4, 5, 10, 20)
TABLE_KINDS = (BLOCKING, DIMER, ANNIHILATION)


@dataclass
class CheckRecord:
    check_id: str
    passed: bool
    measured: float
    target: float
    tolerance: float
    seed: int | None = None
    note: str = ""

    def as_dict(self) -> dict:
        return {
            "check_id": self.check_id,
            "status": "pass" if self.passed else "fail",
            "measured": self.measured,
            "target": self.target,
            "tolerance": self.tolerance,
            "seed": self.seed,
        }


def fixture_graphs():
    """Small named graphs used across oracle/MC cross-checks."""
    return [
        ("path2", line(2)), ("path3", line(3)), ("path4", line(4)),
        ("path5", line(5)),
        ("cycle3", cycle(3)), ("cycle4", cycle(4)), ("cycle5", cycle(5)),
        ("star3", star(3)), ("star4", star(4)),
        ("k4", complete(4)),
    ]


def _bipartite_fixtures():
    return [("cycle4", cycle(4)), ("cycle6", cycle(6)),
            ("path5", line(5)), ("star3", star(3))]


def _distances(g: Graph):
    from .graphs import _bfs_distances
    return {v: _bfs_distances(g, v) for v in range(g.n_vertices)}


# ---------------------------------------------------------------------------
# 1 & 2: table reproduction
# ---------------------------------------------------------------------------

def check_occupation_table():
    out = []
    for k in TABLE_KS:
        for kind in TABLE_KINDS:
            target = PAPER_OCCUPATION[(k, kind)]
            value = exact.occupation_probability(kind, k, 1.0)
            out.append(CheckRecord(f"occupation-table/k{k}-{kind.value}",
                                   abs(value - target) < 5e-4, value, target, 5e-4))
    return out


def check_correlations_table():
    out = []
    for (kind, k), row in PAPER_CORRELATIONS.items():
        for m, target in enumerate(row, start=1):
            value = exact.correlation(kind, k, m, 1.0)
            out.append(CheckRecord(f"correlations-table/{kind.value}-k{k}-m{m}",
                                   abs(value - target) < 5e-5, value, target, 5e-5))
    return out


# ---------------------------------------------------------------------------
# 3: closed-form identities
# ---------------------------------------------------------------------------

def check_closed_form_identities():
    out = []
    tol = 1e-12
    for k in (1, 2, 3, 5):
        for t in (0.25, 0.5, 1.0):
            b = exact.branch_probability(BLOCKING, k, t)
            vac = 0.5 * (1.0 + b * b)
            target = -((1.0 - vac) ** 2)
            value = exact.covariance(BLOCKING, k, 1, t)
            out.append(CheckRecord(f"identities/blocking-m1-k{k}-t{t}",
                                   abs(value - target) < tol, value, target, tol))
    for k in (1, 2, 3, 5):
        vac = 1.0 - exact.occupation_probability(DIMER, k, 1.0)
        value = exact.covariance(DIMER, k, 1, 1.0)
        out.append(CheckRecord(f"identities/dimer-m1-k{k}",
                               abs(value + vac * vac) < tol, value, -vac * vac, tol))
        occ = exact.occupation_probability(ANNIHILATION, k, 1.0)
        value = exact.covariance(ANNIHILATION, k, 1, 1.0)
        out.append(CheckRecord(f"identities/annihilation-m1-k{k}",
                               abs(value + occ * occ) < tol, value, -occ * occ, tol))
    for k in (2, 3, 5):
        for m in (1, 2, 3, 4):
            target = exact.covariance(BLOCKING, k, m, 1.0)
            value = exact.covariance(MAP, k, m, 1.0)
            out.append(CheckRecord(f"identities/map-equals-blocking-k{k}-m{m}",
                                   abs(value - target) < tol, value, target, tol))
    return out


# ---------------------------------------------------------------------------
# 4: oracle vs Monte Carlo on the fixture set
# ---------------------------------------------------------------------------

def check_oracle_mc(n: int = 10 ** 5, seed: int = 401):
    out = []
    times = (Fraction(3, 10), Fraction(7, 10), Fraction(1))
    for name, g in fixture_graphs():
        targets = sorted({0, g.n_vertices // 2})
        for kind in ProcessKind:
            vals = oracle.joint_values(g, kind, [{v: 1} for v in targets])
            for t in times:
                states = mc._target_states(g, kind, targets, float(t), n, seed)
                for i, v in enumerate(targets):
                    x = states[:, i].astype(np.float64)
                    mean = float(x.mean())
                    se = float(x.std(ddof=1) / math.sqrt(n))
                    ex = float(vals[i].probability(t))
                    out.append(CheckRecord(
                        f"oracle-mc/{name}-{kind.value}-v{v}-t{float(t)}",
                        abs(mean - ex) <= 4.0 * se, mean, ex, 4.0 * se, seed))
    return out


# ---------------------------------------------------------------------------
# 5: forward equations and splitting identities
# ---------------------------------------------------------------------------

def _admissible_w(g: Graph, edge_driven: bool):
    singles = [[v] for v in range(g.n_vertices)]
    pairs = []
    for u in range(g.n_vertices):
        for v in range(u + 1, g.n_vertices):
            if edge_driven and g.has_edge(u, v):
                continue
            pairs.append([u, v])
    return singles + pairs


def check_forward_equations():
    out = []
    tol = 1e-12
    times = (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4))
    for name, g in fixture_graphs():
        for kind in (BLOCKING, DIMER, ANNIHILATION):
            worst = Fraction(0)
            for w in _admissible_w(g, kind.edge_driven):
                for t in times:
                    worst = max(worst, oracle.forward_residual(g, kind, w, t))
            out.append(CheckRecord(f"forward-equations/{name}-{kind.value}",
                                   worst < tol, float(worst), 0.0, tol))
        for kind in (DIMER, ANNIHILATION):
            worst = Fraction(0)
            for w in _admissible_w(g, edge_driven=False):
                for t in times:
                    worst = max(worst, oracle.surgery_residual(g, kind, w, t))
            out.append(CheckRecord(f"forward-equations/surgery-{name}-{kind.value}",
                                   worst == 0, float(worst), 0.0, 0.0,
                                   note="exact rational identity"))
    return out


# ---------------------------------------------------------------------------
# 6: correlation signs on bipartite fixtures
# ---------------------------------------------------------------------------

def check_correlation_signs():
    out = []
    for name, g in _bipartite_fixtures():
        dist = _distances(g)
        pairs = [(u, v) for u in range(g.n_vertices)
                 for v in range(u + 1, g.n_vertices)]
        assignments = []
        for u, v in pairs:
            assignments += [{u: 1, v: 1}, {u: 1}, {v: 1}]
        for kind in (BLOCKING, ANNIHILATION):
            ok = True
            worst_pair = ""
            # one enumeration pass serves every pair and both times
            vals = oracle.joint_values(g, kind, assignments)
            for t in (Fraction(1, 2), Fraction(1)):
                for idx, (u, v) in enumerate(pairs):
                    cov = (vals[3 * idx].probability(t)
                           - vals[3 * idx + 1].probability(t) * vals[3 * idx + 2].probability(t))
                    want_positive = dist[u][v] % 2 == 0
                    if (cov > 0) != want_positive or cov == 0:
                        ok = False
                        worst_pair = f"({u},{v}) at t={t}"
            out.append(CheckRecord(f"correlation-signs/{name}-{kind.value}", ok,
                                   1.0 if ok else 0.0, 1.0, 0.0, note=worst_pair))
    return out


# ---------------------------------------------------------------------------
# 7 & 8: tree estimates
# ---------------------------------------------------------------------------

def check_tree_sampler(n: int = 10 ** 6, seed: int = 701):
    out = []
    for k in (1, 2, 3, 5):
        target = exact.occupation_probability(BLOCKING, k, 1.0)
        est = mc.estimate_tree_root_occupation(k, k + 1, 1.0, n, seed + k)
        out.append(CheckRecord(f"tree-sampler/k{k}",
                               abs(est.mean - target) <= 4.0 * est.std_error,
                               est.mean, target, 4.0 * est.std_error, seed + k))
    return out


def truncation_budget(k: int, depth: int) -> float:
    """Chance a self-avoiding path of length `depth` from the root carries
    decreasing times: (k+1) k^(depth-1) / (depth+1)!."""
    return (k + 1) * k ** (depth - 1) / math.factorial(depth + 1)


def check_truncated_tree(n: int = 10 ** 4, seed: int = 801, depth: int = 10):
    k = 3
    g, (root,) = make_tree(TreeSpec(k, depth, (k + 1,)))
    budget = truncation_budget(k, depth)
    out = []
    for kind, target in ((DIMER, 8.0 / 9.0), (ANNIHILATION, 0.25)):
        est = mc.estimate_state_probability(g, kind, root, 1, 1.0, n, seed)
        tol = 4.0 * est.std_error + budget
        out.append(CheckRecord(f"truncated-tree/{kind.value}-k3-depth{depth}",
                               abs(est.mean - target) <= tol, est.mean, target,
                               tol, seed))
    return out


# ---------------------------------------------------------------------------
# 9: bipartite-lattice bound and jamming density
# ---------------------------------------------------------------------------

def check_lattice_bound(replicates: int = 10 ** 4, seed: int = 901):
    g = torus(2, [50, 50])
    out = []
    for t in (0.5, 1.0):
        est = mc.estimate_site_average(g, BLOCKING, t, replicates, seed)
        vacancy = 1.0 - est.mean
        bound = exact.blocking_vacancy_upper_bound(3, t)
        out.append(CheckRecord(f"lattice-bound/vacancy-t{t}",
                               vacancy <= bound + 3.0 * est.std_error,
                               vacancy, bound, 3.0 * est.std_error, seed))
    jam = mc.estimate_site_average(g, BLOCKING, 1.0, replicates, seed)
    out.append(CheckRecord("lattice-bound/occupation-above-third",
                           jam.mean >= 1.0 / 3.0 - 3.0 * jam.std_error,
                           jam.mean, 1.0 / 3.0, 3.0 * jam.std_error, seed))
    out.append(CheckRecord("lattice-bound/jamming-density",
                           abs(jam.mean - 0.364) < 3e-3, jam.mean, 0.364, 3e-3,
                           seed))
    return out


# ---------------------------------------------------------------------------
# 10: line variance and the dimer/blocking duality
# ---------------------------------------------------------------------------

def check_line_variance(n_sites: int = 10 ** 4, replicates: int = 400,
                        seed: int = 1001):
    g = line(n_sites)
    out = []
    for kind in TABLE_KINDS:
        target = exact.asymptotic_variance(kind, 1.0)
        est = mc.estimate_count_variance(g, range(n_sites), kind, 1.0,
                                         replicates, seed)
        ratio = est.mean / n_sites
        out.append(CheckRecord(f"line-variance/{kind.value}",
                               abs(ratio - target) <= 0.15 * target, ratio,
                               target, 0.15 * target, seed))
    # duality: dimer counts on n sites match twice the blocking counts on n-1
    n_d = 1000
    reps = 2000
    sd = mc.count_samples(line(n_d), range(n_d), DIMER, 1.0, reps, seed + 1)
    sb = mc.count_samples(line(n_d - 1), range(n_d - 1), BLOCKING, 1.0, reps,
                          seed + 2)
    diff = float(sd.mean() - 2.0 * sb.mean())
    se = math.sqrt(sd.var(ddof=1) / reps + 4.0 * sb.var(ddof=1) / reps)
    out.append(CheckRecord("line-variance/dimer-blocking-duality",
                           abs(diff) <= 4.0 * se, diff, 0.0, 4.0 * se, seed + 1))
    return out


# ---------------------------------------------------------------------------
# 11: empirical central limit behavior
# ---------------------------------------------------------------------------

def check_clt(n_sites: int = 2000, replicates: int = 2000, seed: int = 2026):
    g = line(n_sites)
    out = []
    for kind in TABLE_KINDS:
        for t in (0.5, 1.0):
            rep = mc.clt_report(g, range(n_sites), kind, t, replicates, seed)
            out.append(CheckRecord(f"clt/{kind.value}-t{t}",
                                   rep.ks_statistic < 0.05, rep.ks_statistic,
                                   0.0, 0.05, seed))
    return out


# ---------------------------------------------------------------------------
# 12: degenerate-variance constructions
# ---------------------------------------------------------------------------

def check_degenerate_variance(replicates: int = 1000, seed: int = 1201):
    # Pendant-twin and appended-triangle extensions pin the jammed count
    # exactly for blocking deposition over any base graph.  For the
    # annihilation process the same holds only when the gadgets are disjoint
    # (edgeless base); with base edges the count genuinely fluctuates (the
    # oracle test suite pins the exact positive variance for a twin pair).
    out = []
    base = line(3)
    edgeless = Graph.from_edges(3, [])
    cases = [
        ("twin-blocking", twin_extension(base), BLOCKING),
        ("triangle-blocking", triangle_extension(base), BLOCKING),
        ("twin-annihilation", twin_extension(edgeless), ANNIHILATION),
        ("triangle-annihilation", triangle_extension(edgeless), ANNIHILATION),
    ]
    for name, g, kind in cases:
        est = mc.estimate_count_variance(g, range(g.n_vertices), kind, 1.0,
                                         replicates, seed)
        out.append(CheckRecord(f"degenerate-variance/{name}", est.mean == 0.0,
                               est.mean, 0.0, 0.0, seed))
    return out


# ---------------------------------------------------------------------------
# 13: multiple-annihilation / blocking coupling
# ---------------------------------------------------------------------------

def check_usp_coupling(n_seeds: int = 1000, seed: int = 1301):
    out = []
    for name, g in fixture_graphs():
        equal = True
        for i in range(n_seeds):
            sch = draw_schedule(g, MAP, (seed, i))
            traj_map, traj_block = simulate_coupled_usp(g, sch)
            if not np.array_equal(traj_map.final_state, traj_block.final_state):
                equal = False
                break
        out.append(CheckRecord(f"usp-coupling/{name}", equal,
                               1.0 if equal else 0.0, 1.0, 0.0, seed))
    return out


# ---------------------------------------------------------------------------
# 14: variance lower bounds
# ---------------------------------------------------------------------------

def check_variance_bounds(replicates: int = 2000, seed: int = 1401):
    g = torus(2, [20, 20])
    n = g.n_vertices
    out = []
    for kind in TABLE_KINDS:
        bound = exact.variance_lower_bound(kind, 4, 0.5, n)
        est = mc.estimate_count_variance(g, range(n), kind, 0.5, replicates, seed)
        out.append(CheckRecord(f"variance-bounds/{kind.value}-t0.5",
                               est.mean >= bound - 3.0 * est.std_error, est.mean,
                               bound, 3.0 * est.std_error, seed))
    w_plus = sum(1 for v in range(n) if positive_entropy(g, v) is not None)
    bound = exact.variance_lower_bound(BLOCKING, 4, 1.0, n, card_w_plus=w_plus)
    est = mc.estimate_count_variance(g, range(n), BLOCKING, 1.0, replicates, seed)
    out.append(CheckRecord("variance-bounds/blocking-t1", est.mean > bound,
                           est.mean, bound, 0.0, seed,
                           note=f"positive-entropy sites: {w_plus}/{n}"))
    return out


CHECKS = {
    "occupation-table": check_occupation_table,
    "correlations-table": check_correlations_table,
    "identities": check_closed_form_identities,
    "oracle-mc": check_oracle_mc,
    "forward-equations": check_forward_equations,
    "correlation-signs": check_correlation_signs,
    "tree-sampler": check_tree_sampler,
    "truncated-tree": check_truncated_tree,
    "lattice-bound": check_lattice_bound,
    "line-variance": check_line_variance,
    "clt": check_clt,
    "degenerate-variance": check_degenerate_variance,
    "usp-coupling": check_usp_coupling,
    "variance-bounds": check_variance_bounds,
}


def run_checks(only=None):
    """Run the selected checks; returns (records, all_passed)."""
    names = list(CHECKS) if only is None else list(only)
    for name in names:
        if name not in CHECKS:
            raise ValueError(f"unknown check {name!r}; available: {', '.join(CHECKS)}")
    records = []
    for name in names:
        records.extend(CHECKS[name]())
    return records, all(r.passed for r in records)
