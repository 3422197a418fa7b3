"""JIT kernels: order-based replay of the processes plus Monte Carlo drivers.

Every consumer of a process rule (trajectory simulation, Monte Carlo
estimation, exact enumeration) goes through the `_replay_*` functions here,
so there is exactly one implementation of each rule.

Replay operates on an event *ordering*: the law of each process depends on
the times only through their order, so a trajectory is a deterministic
function of (graph, ordering, attack directions).  Monte Carlo drivers
exploit the same fact: the state at time t is obtained by replaying the
first N events of a uniformly random ordering, with N binomial(n_events, t).

Randomness is a counter-based splitmix64 stream per replicate, derived from
(master seed, replicate index); results are therefore reproducible and
independent of any scheduling.
"""
from __future__ import annotations

import numpy as np
from numba import njit

KIND_BLOCKING = 0
KIND_DIMER = 1
KIND_ANNIHILATION = 2
KIND_MAP = 3

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_INV53 = 1.0 / 9007199254740992.0  # 2**-53


@njit(cache=True)
def _mix(z):
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


@njit(cache=True)
def _stream_state(master, index):
    # golden-ratio stride is odd, so stream starts are distinct per index
    return _mix(np.uint64(master) + _GOLDEN * (np.uint64(index) + np.uint64(1)))


@njit(cache=True)
def _next_u(state):
    state = state + _GOLDEN
    z = _mix(state)
    return (z >> np.uint64(11)) * _INV53, state


@njit(cache=True)
def _shuffle(order, state):
    n = order.shape[0]
    for i in range(n):
        order[i] = i
    for i in range(n - 1, 0, -1):
        u, state = _next_u(state)
        j = int(u * (i + 1))
        tmp = order[i]
        order[i] = order[j]
        order[j] = tmp
    return state


@njit(cache=True)
def _binomial_count(n, t, state):
    c = 0
    for _ in range(n):
        u, state = _next_u(state)
        if u < t:
            c += 1
    return c, state


# ---------------------------------------------------------------------------
# Replay cores.  `order` lists event indices; only the first `na` fire.
# `flip` receives the 0-based rank at which each vertex changes state
# (-1 = never); `occ` is a scratch state array.
# ---------------------------------------------------------------------------

@njit(cache=True)
def _replay_blocking(order, na, indptr, indices, flip, occ):
    flip[:] = -1
    occ[:] = 0
    for r in range(na):
        v = order[r]
        free = True
        for j in range(indptr[v], indptr[v + 1]):
            if occ[indices[j]] == 1:
                free = False
                break
        if free:
            occ[v] = 1
            flip[v] = r


@njit(cache=True)
def _replay_dimer(order, na, eu, ev, flip, occ):
    flip[:] = -1
    occ[:] = 0
    for r in range(na):
        e = order[r]
        u = eu[e]
        v = ev[e]
        if occ[u] == 0 and occ[v] == 0:
            occ[u] = 1
            occ[v] = 1
            flip[u] = r
            flip[v] = r


@njit(cache=True)
def _replay_annihilation(order, na, eu, ev, victim_side, flip, occ):
    flip[:] = -1
    occ[:] = 1
    for r in range(na):
        e = order[r]
        u = eu[e]
        v = ev[e]
        if occ[u] == 1 and occ[v] == 1:
            target = v if victim_side[e] == 1 else u
            occ[target] = 0
            flip[target] = r


@njit(cache=True)
def _replay_usp(order, na, indptr, indices, flip_block, flip_map, z):
    """Undecided-site replay: z in {0 vacant, 1 occupied, 2 undecided}.

    flip_block records when a site becomes occupied (deposition view),
    flip_map when it becomes vacant (multiple-annihilation view).
    """
    flip_block[:] = -1
    flip_map[:] = -1
    z[:] = 2
    for r in range(na):
        v = order[r]
        if z[v] == 2:
            z[v] = 1
            flip_block[v] = r
            for j in range(indptr[v], indptr[v + 1]):
                w = indices[j]
                if z[w] == 2:
                    z[w] = 0
                    flip_map[w] = r


# ---------------------------------------------------------------------------
# Monte Carlo driver: per-replicate states of target vertices at time t.
# ---------------------------------------------------------------------------

@njit(cache=True)
def _mc_states(kind, indptr, indices, eu, ev, targets, t, reps, master_seed):
    n_vertices = indptr.shape[0] - 1
    n_events = eu.shape[0] if (kind == KIND_DIMER or kind == KIND_ANNIHILATION) else n_vertices
    order = np.empty(n_events, dtype=np.int64)
    flip = np.empty(n_vertices, dtype=np.int32)
    flip2 = np.empty(n_vertices, dtype=np.int32)
    occ = np.empty(n_vertices, dtype=np.uint8)
    victim = np.empty(eu.shape[0], dtype=np.uint8)
    out = np.empty((reps, targets.shape[0]), dtype=np.uint8)
    initial = 1 if (kind == KIND_ANNIHILATION or kind == KIND_MAP) else 0
    for rep in range(reps):
        state = _stream_state(master_seed, rep)
        if t >= 1.0:
            na = n_events
        else:
            na, state = _binomial_count(n_events, t, state)
        state = _shuffle(order, state)
        if kind == KIND_BLOCKING:
            _replay_blocking(order, na, indptr, indices, flip, occ)
        elif kind == KIND_DIMER:
            _replay_dimer(order, na, eu, ev, flip, occ)
        elif kind == KIND_ANNIHILATION:
            for e in range(eu.shape[0]):
                u, state = _next_u(state)
                victim[e] = 1 if u < 0.5 else 0
            _replay_annihilation(order, na, eu, ev, victim, flip, occ)
        else:
            _replay_usp(order, na, indptr, indices, flip2, flip, occ)
        for i in range(targets.shape[0]):
            flipped = flip[targets[i]] >= 0
            out[rep, i] = (1 - initial) if flipped else initial
    return out


# ---------------------------------------------------------------------------
# Lazy exact sampler for deposition on the infinite regular tree.
# ---------------------------------------------------------------------------

@njit(cache=True)
def _tree_root_samples(k, root_children, t, reps, master_seed, depth_cap):
    """Count samples with the root occupied at time t.

    Root occupied iff its own arrival is before t and no child subtree
    accepts an arrival earlier than the root's; child acceptance recurses
    with strictly decreasing thresholds, so exploration terminates a.s.
    Returns (occupied count, deepest recursion seen, error flag).
    """
    children_left = np.empty(depth_cap + 2, dtype=np.int64)
    threshold = np.empty(depth_cap + 2, dtype=np.float64)
    occupied = 0
    max_depth = 0
    for rep in range(reps):
        state = _stream_state(master_seed, rep)
        u, state = _next_u(state)
        if u > t:
            continue
        children_left[0] = root_children
        threshold[0] = u
        depth = 0
        result = -1
        while result < 0:
            if children_left[depth] == 0:
                # no child of this frame accepted: the frame's owner is accepted
                if depth == 0:
                    result = 1  # no child beat the root: root occupied
                elif depth == 1:
                    result = 0  # a root child is accepted: root blocked
                else:
                    depth -= 2  # owner accepted => its parent is not: resume above
                continue
            children_left[depth] -= 1
            u, state = _next_u(state)
            if u < threshold[depth]:
                depth += 1
                if depth > max_depth:
                    max_depth = depth
                if depth > depth_cap:
                    return occupied, max_depth, 1
                children_left[depth] = k
                threshold[depth] = u
        occupied += result
    return occupied, max_depth, 0


# ---------------------------------------------------------------------------
# Exact enumeration support: accumulate order-statistic rank windows.
# ---------------------------------------------------------------------------

@njit(cache=True)
def _oracle_accumulate(kind, indptr, indices, eu, ev, perms, n_masks,
                       assign_ptr, assign_vtx, assign_req, counts):
    """For every (permutation, direction mask) replay the process and, for each
    assignment, record the rank window [lo, hi) such that the assignment holds
    at time t iff the number of events before t lies in the window.

    counts has shape (n_assignments, n_events + 1, n_events + 2) indexed by
    (assignment, lo, hi).
    """
    n_vertices = indptr.shape[0] - 1
    n_events = perms.shape[1]
    flip = np.empty(n_vertices, dtype=np.int32)
    flip2 = np.empty(n_vertices, dtype=np.int32)
    occ = np.empty(n_vertices, dtype=np.uint8)
    victim = np.empty(eu.shape[0], dtype=np.uint8)
    n_assign = assign_ptr.shape[0] - 1
    for p in range(perms.shape[0]):
        order = perms[p]
        for mask in range(n_masks):
            if kind == KIND_BLOCKING:
                _replay_blocking(order, n_events, indptr, indices, flip, occ)
            elif kind == KIND_DIMER:
                _replay_dimer(order, n_events, eu, ev, flip, occ)
            elif kind == KIND_ANNIHILATION:
                for e in range(eu.shape[0]):
                    victim[e] = (mask >> e) & 1
                _replay_annihilation(order, n_events, eu, ev, victim, flip, occ)
            else:
                _replay_usp(order, n_events, indptr, indices, flip2, flip, occ)
            for a in range(n_assign):
                lo = 0
                hi = n_events + 1
                feasible = True
                for j in range(assign_ptr[a], assign_ptr[a + 1]):
                    r = flip[assign_vtx[j]]
                    if assign_req[j] == 1:  # state must have flipped by t
                        if r < 0:
                            feasible = False
                            break
                        if r + 1 > lo:
                            lo = r + 1
                    else:  # state must not have flipped by t
                        if r >= 0 and r + 1 < hi:
                            hi = r + 1
                if feasible and lo < hi:
                    counts[a, lo, hi] += 1


@njit(cache=True)
def _oracle_final(kind, indptr, indices, eu, ev, perms, n_masks, config_counts):
    """Tally jammed configurations (bitmask of occupied vertices) at t=1."""
    n_vertices = indptr.shape[0] - 1
    n_events = perms.shape[1]
    flip = np.empty(n_vertices, dtype=np.int32)
    flip2 = np.empty(n_vertices, dtype=np.int32)
    occ = np.empty(n_vertices, dtype=np.uint8)
    victim = np.empty(eu.shape[0], dtype=np.uint8)
    initial = 1 if (kind == KIND_ANNIHILATION or kind == KIND_MAP) else 0
    for p in range(perms.shape[0]):
        order = perms[p]
        for mask in range(n_masks):
            if kind == KIND_BLOCKING:
                _replay_blocking(order, n_events, indptr, indices, flip, occ)
            elif kind == KIND_DIMER:
                _replay_dimer(order, n_events, eu, ev, flip, occ)
            elif kind == KIND_ANNIHILATION:
                for e in range(eu.shape[0]):
                    victim[e] = (mask >> e) & 1
                _replay_annihilation(order, n_events, eu, ev, victim, flip, occ)
            else:
                _replay_usp(order, n_events, indptr, indices, flip2, flip, occ)
            config = 0
            for v in range(n_vertices):
                s = (1 - initial) if flip[v] >= 0 else initial
                config |= s << v
            config_counts[config] += 1
