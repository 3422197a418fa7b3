"""Exact, simulation-free probabilities on small graphs.

Enumerates every event ordering (times enter only through their order, all
n! orders equally likely) and, for annihilation, every combination of attack
directions.  Each ordering is replayed through the same rule implementation
the simulator uses, yielding the rank at which each vertex flips.  A joint
state requirement at time t then reduces to "the number of events before t
lies in a rank window", whose probability is an exact binomial sum in t:

    P[tau_(r) <= t] = sum_{j=r}^{n} C(n,j) t^j (1-t)^(n-j).

Weights are exact rationals with denominator n! * 2^edges (annihilation) and
the t-dependence stays an integer-coefficient polynomial, so time
derivatives are exact as well.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import comb, factorial

import numpy as np

from . import _kernels as K
from .graphs import Graph, neighborhood, split_vertices
from .processes import ProcessKind

__all__ = [
    "OracleSizeError",
    "OracleValue",
    "joint_state_probability",
    "joint_values",
    "final_distribution",
    "pair_covariance",
    "forward_residual",
    "surgery_residual",
    "MAX_EVENTS",
    "MAX_ANNIHILATION_EDGES",
]

MAX_EVENTS = 8
MAX_ANNIHILATION_EDGES = 8

_KIND_CODE = {
    ProcessKind.BLOCKING: K.KIND_BLOCKING,
    ProcessKind.DIMER: K.KIND_DIMER,
    ProcessKind.ANNIHILATION: K.KIND_ANNIHILATION,
    ProcessKind.MAP: K.KIND_MAP,
}

_PERM_CACHE: dict[int, np.ndarray] = {}


class OracleSizeError(ValueError):
    """Instance exceeds the enumeration caps."""


@dataclass(frozen=True)
class OracleValue:
    """Exact probability as a polynomial in t over the binomial basis.

    coefficients[j] is the probability weight attached to "exactly j events
    occur before t"; the value at t is sum_j coeff[j] * C(n,j) t^j (1-t)^(n-j).
    """

    n_events: int
    coefficients: tuple

    def probability(self, t) -> Fraction:
        t = Fraction(t)
        if not 0 <= t <= 1:
            raise ValueError("t must lie in [0, 1]")
        n = self.n_events
        total = Fraction(0)
        for j, c in enumerate(self.coefficients):
            if c:
                total += c * comb(n, j) * t ** j * (1 - t) ** (n - j)
        return total

    def derivative(self, t) -> Fraction:
        t = Fraction(t)
        n = self.n_events
        total = Fraction(0)
        for j, c in enumerate(self.coefficients):
            if not c:
                continue
            term = Fraction(0)
            if j > 0:
                term += j * t ** (j - 1) * (1 - t) ** (n - j)
            if n - j > 0:
                term -= (n - j) * t ** j * (1 - t) ** (n - j - 1)
            total += c * comb(n, j) * term
        return total


def _event_count(g: Graph, kind: ProcessKind) -> int:
    return g.n_edges if kind.edge_driven else g.n_vertices


def _check_size(g: Graph, kind: ProcessKind) -> int:
    n = _event_count(g, kind)
    if n > MAX_EVENTS:
        raise OracleSizeError(f"{n} events exceeds the cap of {MAX_EVENTS}")
    if kind is ProcessKind.ANNIHILATION and g.n_edges > MAX_ANNIHILATION_EDGES:
        raise OracleSizeError(
            f"{g.n_edges} edges exceeds the annihilation cap of {MAX_ANNIHILATION_EDGES}")
    return n


def _perms(n: int) -> np.ndarray:
    if n not in _PERM_CACHE:
        if n == 0:  # one empty ordering (event-free graph)
            _PERM_CACHE[n] = np.zeros((1, 0), dtype=np.int64)
        else:
            # lexicographic enumeration; shape (n!, n)
            _PERM_CACHE[n] = np.array(list(permutations(range(n))),
                                      dtype=np.int64).reshape(-1, n)
    return _PERM_CACHE[n]


def _kernel_args(g: Graph, kind: ProcessKind):
    n = _check_size(g, kind)
    n_masks = 2 ** g.n_edges if kind is ProcessKind.ANNIHILATION else 1
    return (_KIND_CODE[kind], g.indptr, g.indices,
            np.ascontiguousarray(g.edges[:, 0]), np.ascontiguousarray(g.edges[:, 1]),
            _perms(n), n_masks), n, n_masks


def joint_values(g: Graph, kind: ProcessKind, assignments) -> list:
    """Exact OracleValue for each assignment (a map vertex -> required state),
    sharing a single enumeration pass."""
    (code, indptr, indices, eu, ev, perms, n_masks), n, _ = _kernel_args(g, kind)
    initial = kind.initial_state
    ptr = [0]
    vts, reqs = [], []
    for asg in assignments:
        for v, s in sorted(asg.items()):
            if s not in (0, 1):
                raise ValueError("states must be 0 or 1")
            if not 0 <= v < g.n_vertices:
                raise ValueError(f"vertex {v} not in graph")
            vts.append(v)
            reqs.append(0 if s == initial else 1)
        ptr.append(len(vts))
    counts = np.zeros((len(ptr) - 1, n + 2, n + 2), dtype=np.int64)
    K._oracle_accumulate(code, indptr, indices, eu, ev, perms, n_masks,
                         np.array(ptr, dtype=np.int64),
                         np.array(vts, dtype=np.int64),
                         np.array(reqs, dtype=np.int64), counts)
    total = factorial(n) * n_masks
    out = []
    for a in range(len(ptr) - 1):
        coeff = [Fraction(0)] * (n + 1)
        nz = np.argwhere(counts[a])
        for lo, hi in nz:
            w = Fraction(int(counts[a, lo, hi]), total)
            for j in range(lo, hi):
                coeff[j] += w
        out.append(OracleValue(n, tuple(coeff)))
    return out


def joint_state_probability(g: Graph, kind: ProcessKind, assignment) -> OracleValue:
    """Exact P[every vertex of `assignment` is in its required state at t],
    as a polynomial evaluator.  An inconsistent assignment yields the zero
    polynomial, not an error."""
    return joint_values(g, kind, [assignment])[0]


def final_distribution(g: Graph, kind: ProcessKind) -> dict:
    """Exact distribution over jammed configurations at time 1.

    Keys are state tuples (one 0/1 entry per vertex); probabilities are
    rationals with denominator dividing n! * 2^edges and sum to exactly 1.
    """
    (code, indptr, indices, eu, ev, perms, n_masks), n, _ = _kernel_args(g, kind)
    config_counts = np.zeros(2 ** g.n_vertices, dtype=np.int64)
    K._oracle_final(code, indptr, indices, eu, ev, perms, n_masks, config_counts)
    total = factorial(n) * n_masks
    dist = {}
    for cfg in np.flatnonzero(config_counts):
        states = tuple((int(cfg) >> v) & 1 for v in range(g.n_vertices))
        dist[states] = Fraction(int(config_counts[cfg]), total)
    return dist


def pair_covariance(g: Graph, kind: ProcessKind, u: int, v: int, t) -> Fraction:
    """Exact Cov(state(u,t), state(v,t)) with occupied = 1."""
    if u == v:
        p = joint_state_probability(g, kind, {u: 1}).probability(t)
        return p * (1 - p)
    both, pu, pv = joint_values(g, kind, [{u: 1, v: 1}, {u: 1}, {v: 1}])
    t = Fraction(t)
    return both.probability(t) - pu.probability(t) * pv.probability(t)


def _delete_vertex(g: Graph, v: int):
    """Induced subgraph on V minus v; returns (graph, old->new index map)."""
    keep = [w for w in range(g.n_vertices) if w != v]
    relabel = {w: i for i, w in enumerate(keep)}
    edges = [(relabel[a], relabel[b]) for a, b in g.edges.tolist()
             if a != v and b != v]
    return Graph.from_edges(g.n_vertices - 1, edges), relabel


def forward_residual(g: Graph, kind: ProcessKind, w_set, t) -> Fraction:
    """|d/dt P[W all initial at t] + rate-sum| for the forward equation.

    Blocking: the derivative of the joint vacancy of W equals minus the sum
    over v in W of the joint vacancy of (W union N1(v)) minus v on the graph
    without v.  Edge-driven kinds satisfy the same identity (with a factor
    1/2 for annihilation) once every vertex of W has degree 1; other W are
    routed through the vertex-splitting surgery first, which requires W to
    be an independent set.
    """
    if kind is ProcessKind.MAP:
        raise ValueError("no forward equation is implemented for multiple annihilation")
    w_list = sorted(set(int(x) for x in w_set))
    if not w_list:
        raise ValueError("W must be nonempty")
    t = Fraction(t)
    if kind.edge_driven:
        for a in w_list:
            for b in w_list:
                if a < b and g.has_edge(a, b):
                    raise ValueError("W must be independent for the edge-driven "
                                     "forward equation")
        if any(g.degree(w) != 1 for w in w_list):
            g, w_list = split_vertices(g, w_list)
    initial = kind.initial_state
    lhs = joint_state_probability(g, kind, {w: initial for w in w_list}).derivative(t)
    rate = Fraction(1, 2) if kind is ProcessKind.ANNIHILATION else Fraction(1)
    rhs = Fraction(0)
    for v in w_list:
        closed = set(w_list) | set(neighborhood(g, v, 1).tolist())
        closed.discard(v)
        sub, relabel = _delete_vertex(g, v)
        asg = {relabel[w]: initial for w in closed}
        rhs += rate * joint_state_probability(sub, kind, asg).probability(t)
    return abs(lhs + rhs)


def surgery_residual(g: Graph, kind: ProcessKind, w_set, t) -> Fraction:
    """|P[W all initial on g] - P[W* all initial on the split graph]| at t.

    The vertex-splitting surgery preserves these joint probabilities exactly
    for the edge-driven kinds; both sides are evaluated in rational
    arithmetic, so a true identity returns exactly zero.
    """
    if not kind.edge_driven:
        raise ValueError("the splitting identity applies to edge-driven kinds only")
    w_list = sorted(set(int(x) for x in w_set))
    initial = kind.initial_state
    t = Fraction(t)
    lhs = joint_state_probability(g, kind, {w: initial for w in w_list}).probability(t)
    split_g, w_star = split_vertices(g, w_list)
    rhs = joint_state_probability(split_g, kind,
                                  {w: initial for w in w_star}).probability(t)
    return abs(lhs - rhs)
