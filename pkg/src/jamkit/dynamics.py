"""Event schedules and exact trajectories for the four processes.

A trajectory is a pure function of (graph, kind, schedule): each vertex
changes state at most once, at a recorded flip time.  The multiple
annihilation process is realized only through the undecided-site
construction, which also yields its coupling with blocking deposition.

Trajectories always report occupied = 1 regardless of kind; vacancy/occupancy
orientation of closed-form quantities is handled entirely in `exact`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .graphs import Graph, truncation_radius
from .processes import ProcessKind

__all__ = [
    "EventSchedule",
    "Trajectory",
    "draw_schedule",
    "simulate",
    "simulate_coupled_usp",
    "replay_ranks",
    "count_occupied",
    "sample_blocking_tree_root",
    "tree_sampler_depth_cap",
    "DepthCapExceeded",
]


class DepthCapExceeded(RuntimeError):
    """Lazy tree sampler hit its recursion bound (astronomically unlikely)."""


@dataclass(frozen=True)
class EventSchedule:
    """Uniform event times on the driving index set of one process kind.

    vertex_times is set for vertex-driven kinds (blocking, map), edge_times
    for edge-driven kinds; attack_toward (annihilation only) holds the victim
    side per edge: 0 attacks edges[e][0], 1 attacks edges[e][1].  Ties are
    broken by ascending event index.
    """

    kind: ProcessKind
    vertex_times: np.ndarray | None = None
    edge_times: np.ndarray | None = None
    attack_toward: np.ndarray | None = None

    @property
    def times(self) -> np.ndarray:
        t = self.edge_times if self.kind.edge_driven else self.vertex_times
        if t is None:
            raise ValueError("schedule is missing its driving times")
        return t


@dataclass(frozen=True)
class Trajectory:
    """Outcome of one run: per-vertex flip time (NaN = never) and final state."""

    initial_state: int
    flip_time: np.ndarray
    final_state: np.ndarray

    def state_at(self, t: float) -> np.ndarray:
        flipped = self.flip_time <= t  # NaN compares False
        return np.where(flipped, 1 - self.initial_state, self.initial_state).astype(np.uint8)


def draw_schedule(g: Graph, kind: ProcessKind, seed) -> EventSchedule:
    """I.i.d. uniform(0,1) times on vertices or edges, plus fair attack
    directions for annihilation; fully determined by (g, kind, seed)."""
    rng = np.random.default_rng(seed)
    if kind.edge_driven:
        times = rng.random(g.n_edges)
        toward = None
        if kind is ProcessKind.ANNIHILATION:
            toward = rng.integers(0, 2, size=g.n_edges).astype(np.uint8)
        return EventSchedule(kind, edge_times=times, attack_toward=toward)
    return EventSchedule(kind, vertex_times=rng.random(g.n_vertices))


def _check_schedule(g: Graph, kind: ProcessKind, schedule: EventSchedule) -> np.ndarray:
    if schedule.kind is not kind:
        raise ValueError(f"schedule drawn for {schedule.kind.value}, not {kind.value}")
    times = schedule.times
    expected = g.n_edges if kind.edge_driven else g.n_vertices
    if len(times) != expected:
        raise ValueError(f"schedule has {len(times)} times, graph needs {expected}")
    if len(times) and (times.min() < 0.0 or times.max() > 1.0):
        raise ValueError("event times must lie in [0, 1]")
    return times


def replay_ranks(g: Graph, kind: ProcessKind, order, n_active: int | None = None,
                 victims=None) -> np.ndarray:
    """Replay the first n_active events of `order`; return per-vertex flip ranks.

    This is the single rule implementation shared with the Monte Carlo
    drivers and the exact-enumeration oracle.  Rank is the 0-based position
    in `order` at which the vertex changed state, -1 if it never did.
    For MAP the ranks refer to annihilation events under the undecided-site
    construction.
    """
    order = np.ascontiguousarray(order, dtype=np.int64)
    if n_active is None:
        n_active = len(order)
    flip = np.empty(g.n_vertices, dtype=np.int32)
    occ = np.empty(g.n_vertices, dtype=np.uint8)
    if kind is ProcessKind.BLOCKING:
        K._replay_blocking(order, n_active, g.indptr, g.indices, flip, occ)
    elif kind is ProcessKind.DIMER:
        eu = np.ascontiguousarray(g.edges[:, 0])
        ev = np.ascontiguousarray(g.edges[:, 1])
        K._replay_dimer(order, n_active, eu, ev, flip, occ)
    elif kind is ProcessKind.ANNIHILATION:
        if victims is None:
            raise ValueError("annihilation replay needs attack directions")
        victims = np.ascontiguousarray(victims, dtype=np.uint8)
        eu = np.ascontiguousarray(g.edges[:, 0])
        ev = np.ascontiguousarray(g.edges[:, 1])
        K._replay_annihilation(order, n_active, eu, ev, victims, flip, occ)
    else:
        flip2 = np.empty(g.n_vertices, dtype=np.int32)
        K._replay_usp(order, n_active, g.indptr, g.indices, flip2, flip, occ)
    return flip


def _trajectory_from_ranks(kind: ProcessKind, flip_ranks, order, times) -> Trajectory:
    initial = kind.initial_state
    flip_time = np.full(len(flip_ranks), np.nan)
    flipped = flip_ranks >= 0
    flip_time[flipped] = times[order[flip_ranks[flipped]]]
    final = np.where(flipped, 1 - initial, initial).astype(np.uint8)
    for arr in (flip_time, final):
        arr.setflags(write=False)
    return Trajectory(initial, flip_time, final)


def simulate(g: Graph, kind: ProcessKind, schedule: EventSchedule) -> Trajectory:
    """Run one exact trajectory: events fire in increasing time order."""
    times = _check_schedule(g, kind, schedule)
    order = np.argsort(times, kind="stable")
    flip = replay_ranks(g, kind, order, victims=schedule.attack_toward)
    return _trajectory_from_ranks(kind, flip, order, times)


def simulate_coupled_usp(g: Graph, schedule: EventSchedule):
    """One undecided-site run projected as (MAP trajectory, blocking trajectory).

    Undecided sites count as occupied for MAP and vacant for blocking; at
    time 1 no undecided site remains, so the final states coincide.
    """
    if schedule.kind.edge_driven:
        raise ValueError("the undecided-site process is vertex-driven")
    times = schedule.times
    if len(times) != g.n_vertices:
        raise ValueError("schedule does not match graph")
    order = np.argsort(times, kind="stable")
    flip_block = np.empty(g.n_vertices, dtype=np.int32)
    flip_map = np.empty(g.n_vertices, dtype=np.int32)
    z = np.empty(g.n_vertices, dtype=np.uint8)
    K._replay_usp(order, len(order), g.indptr, g.indices, flip_block, flip_map, z)
    traj_map = _trajectory_from_ranks(ProcessKind.MAP, flip_map, order, times)
    traj_block = _trajectory_from_ranks(ProcessKind.BLOCKING, flip_block, order, times)
    return traj_map, traj_block


def count_occupied(traj: Trajectory, subset, t: float) -> int:
    """Number of occupied vertices of `subset` at time t (occupied = 1)."""
    if not 0.0 <= t <= 1.0:
        raise ValueError("t must lie in [0, 1]")
    subset = np.asarray(subset, dtype=np.int64)
    return int(traj.state_at(t)[subset].sum())


def tree_sampler_depth_cap(k: int) -> int:
    """Recursion bound for the lazy sampler; far beyond any plausible path."""
    return 10 * truncation_radius(k + 1, 1e-12)


def sample_blocking_tree_root(k: int, root_degree: int, t: float, seed) -> int:
    """Exact sample of the root state at time t for blocking deposition on the
    infinite tree whose interior degree is k+1 and root degree is `root_degree`
    (k or k+1).

    Lazy recursion: the root is occupied iff its arrival is by t and no child
    is accepted within its own subtree strictly earlier, each child exploring
    only strictly smaller times.  Raises DepthCapExceeded instead of ever
    returning a silently truncated sample.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if root_degree not in (k, k + 1):
        raise ValueError("root degree must be k or k+1")
    if not 0.0 <= t <= 1.0:
        raise ValueError("t must lie in [0, 1]")
    cap = tree_sampler_depth_cap(k)
    occ, _, err = K._tree_root_samples(k, root_degree, t, 1, np.uint64(seed), cap)
    if err:
        raise DepthCapExceeded(f"recursion exceeded depth cap {cap}")
    return int(occ)
