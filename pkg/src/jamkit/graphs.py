"""Finite simple graphs: construction, generators, surgery, and queries.

Vertices are 0..n-1 with no gaps.  Every generator documents its vertex
layout and is deterministic, so seeded experiments reproduce bit-identically.
Graphs are immutable after construction; transformations return new graphs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

__all__ = [
    "Graph",
    "TreeSpec",
    "line",
    "cycle",
    "torus",
    "hex_torus",
    "complete",
    "star",
    "make_lattice",
    "make_tree",
    "twin_extension",
    "triangle_extension",
    "split_vertices",
    "neighborhood",
    "is_bipartite",
    "positive_entropy",
    "truncation_radius",
    "parse_edge_list",
    "format_edge_list",
]


@dataclass(frozen=True)
class Graph:
    """Finite undirected simple graph with stable vertex and edge indices.

    `edges` is an (m, 2) int32 array with edges[i] = (u, v), u < v; edge i
    keeps its identity through `split_vertices`.  Adjacency is CSR
    (`indptr`, `indices`) with each neighbor list sorted ascending.
    """

    n_vertices: int
    edges: np.ndarray
    indptr: np.ndarray = field(repr=False)
    indices: np.ndarray = field(repr=False)

    @staticmethod
    def from_edges(n_vertices: int, edges) -> "Graph":
        if n_vertices < 1:
            raise ValueError("graph needs at least one vertex")
        e = np.asarray(list(edges), dtype=np.int32).reshape(-1, 2)
        if e.size:
            if e.min() < 0 or e.max() >= n_vertices:
                raise ValueError("edge endpoint out of range")
            if np.any(e[:, 0] == e[:, 1]):
                raise ValueError("self-loops are not allowed")
            e = np.sort(e, axis=1)
            seen = set(map(tuple, e.tolist()))
            if len(seen) != len(e):
                raise ValueError("duplicate edges are not allowed")
        deg = np.zeros(n_vertices, dtype=np.int64)
        for u, v in e:
            deg[u] += 1
            deg[v] += 1
        indptr = np.zeros(n_vertices + 1, dtype=np.int64)
        np.cumsum(deg, out=indptr[1:])
        indices = np.empty(int(indptr[-1]), dtype=np.int32)
        cursor = indptr[:-1].copy()
        for u, v in e:
            indices[cursor[u]] = v
            cursor[u] += 1
            indices[cursor[v]] = u
            cursor[v] += 1
        for v in range(n_vertices):
            indices[indptr[v]:indptr[v + 1]].sort()
        for arr in (e, indptr, indices):
            arr.setflags(write=False)
        return Graph(n_vertices, e, indptr, indices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.neighbors(u)

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def is_connected(self) -> bool:
        seen = _bfs_distances(self, 0) >= 0
        return bool(seen.all())


def _bfs_distances(g: Graph, source: int, cap: int | None = None) -> np.ndarray:
    """Distances from source; -1 where unreachable or beyond `cap`."""
    dist = np.full(g.n_vertices, -1, dtype=np.int64)
    dist[source] = 0
    frontier = [source]
    d = 0
    while frontier and (cap is None or d < cap):
        d += 1
        nxt = []
        for u in frontier:
            for w in g.neighbors(u):
                if dist[w] < 0:
                    dist[w] = d
                    nxt.append(int(w))
        frontier = nxt
    return dist


# ---------------------------------------------------------------------------
# Lattice generators
# ---------------------------------------------------------------------------

def line(n: int) -> Graph:
    """Path of n vertices 0-1-...-(n-1)."""
    if n < 1:
        raise ValueError("line needs n >= 1")
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    """Cycle on n >= 3 vertices, edges (i, i+1 mod n)."""
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n: int) -> Graph:
    return Graph.from_edges(n, list(combinations(range(n), 2)))


def star(leaves: int) -> Graph:
    """Star with center 0 and `leaves` pendant vertices 1..leaves."""
    if leaves < 1:
        raise ValueError("star needs at least one leaf")
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def torus(dim: int, sides) -> Graph:
    """d-dimensional periodic lattice.

    Vertex (x_0, ..., x_{d-1}) has row-major index sum(x_i * stride_i);
    edges join +1 steps modulo the side length along every axis.  All sides
    must be >= 3 so wrap-around never duplicates an edge.
    """
    sides = list(sides)
    if len(sides) != dim:
        raise ValueError("need one side length per dimension")
    if any(s < 3 for s in sides):
        raise ValueError("torus sides must all be >= 3")
    n = math.prod(sides)
    strides = [math.prod(sides[i + 1:]) for i in range(dim)]
    edges = []
    for idx in range(n):
        coords = []
        rem = idx
        for i in range(dim):
            coords.append(rem // strides[i])
            rem %= strides[i]
        for axis in range(dim):
            step = idx + strides[axis]
            if coords[axis] == sides[axis] - 1:
                step -= sides[axis] * strides[axis]
            edges.append((idx, step))
    return Graph.from_edges(n, edges)


def hex_torus(rows: int, cols: int) -> Graph:
    """Degree-3 (honeycomb) torus via the brick-wall embedding.

    Vertices form a rows x cols grid, index = r*cols + c.  All horizontal
    edges (r,c)-(r,c+1 mod cols) are present; the vertical edge
    (r,c)-(r+1 mod rows,c) is present iff (r+c) is even.  Both dimensions
    must be even (>= 4) so degrees and bipartiteness survive the wrap.
    """
    if rows < 4 or cols < 4 or rows % 2 or cols % 2:
        raise ValueError("hex torus needs even rows, cols >= 4")
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            edges.append((v, r * cols + (c + 1) % cols))
            if (r + c) % 2 == 0:
                edges.append((v, ((r + 1) % rows) * cols + c))
    return Graph.from_edges(rows * cols, edges)


def make_lattice(kind: str, dims) -> Graph:
    """Dispatch by name: line, cycle, torus, hex."""
    dims = list(dims)
    if kind == "line":
        return line(dims[0])
    if kind == "cycle":
        return cycle(dims[0])
    if kind == "torus":
        return torus(len(dims), dims)
    if kind == "hex":
        return hex_torus(dims[0], dims[1])
    raise ValueError(f"unknown lattice kind {kind!r}")


# ---------------------------------------------------------------------------
# Tree generators
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TreeSpec:
    """Truncation of an infinite tree whose interior vertices have degree k+1.

    `root_degrees` designates one or two roots with degree overrides drawn
    from {k+1, k, k-1, 1}; with two roots, `root_separation` >= 1 is their
    distance.  Vertices farther than `depth` from the nearest root are cut.
    """

    k: int
    depth: int
    root_degrees: tuple
    root_separation: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("branching k must be >= 1")
        if self.depth < 0:
            raise ValueError("depth must be >= 0")
        if len(self.root_degrees) not in (1, 2):
            raise ValueError("one or two roots required")
        allowed = {self.k + 1, self.k, self.k - 1, 1}
        for d in self.root_degrees:
            if d not in allowed or d < 0:
                raise ValueError(f"root degree {d} not in {{k+1, k, k-1, 1}}")
        if len(self.root_degrees) == 2:
            if self.root_separation < 1:
                raise ValueError("two roots need separation >= 1")
            if 0 in self.root_degrees:
                raise ValueError("two-root trees need positive root degrees")
            if self.depth < self.root_separation // 2:
                raise ValueError("depth too small: the root-to-root path would be cut")


def make_tree(spec: TreeSpec):
    """Build the truncated tree; returns (graph, roots).

    Layout: with one root, vertex 0 is the root and children are appended in
    BFS order.  With two roots, vertices 0..m are the connecting path
    (roots at 0 and m), then BFS levels.
    """
    k = spec.k
    edges = []
    # frontier entries: (vertex, child budget, distance from nearest root)
    if len(spec.root_degrees) == 1:
        roots = (0,)
        n = 1
        frontier = [(0, spec.root_degrees[0], 0)]
    else:
        m = spec.root_separation
        roots = (0, m)
        n = m + 1
        edges = [(i, i + 1) for i in range(m)]
        frontier = []
        for j in range(m + 1):
            if j == 0:
                budget = spec.root_degrees[0] - 1
            elif j == m:
                budget = spec.root_degrees[1] - 1
            else:
                budget = k - 1  # path occupies two slots of the k+1
            frontier.append((j, budget, min(j, m - j)))
    while frontier:
        nxt = []
        for parent, budget, dist in frontier:
            if dist >= spec.depth:
                continue
            for _ in range(budget):
                child = n
                n += 1
                edges.append((parent, child))
                nxt.append((child, k, dist + 1))
        frontier = nxt
    return Graph.from_edges(n, edges), roots


# ---------------------------------------------------------------------------
# Gadget extensions (degenerate-variance examples)
# ---------------------------------------------------------------------------

def twin_extension(base: Graph) -> Graph:
    """Attach a pendant twin to every vertex: twin of v is base.n_vertices + v."""
    n0 = base.n_vertices
    edges = [tuple(e) for e in base.edges.tolist()]
    edges += [(v, n0 + v) for v in range(n0)]
    return Graph.from_edges(2 * n0, edges)


def triangle_extension(base: Graph) -> Graph:
    """Append a triangle to every vertex: v gets n0+2v and n0+2v+1."""
    n0 = base.n_vertices
    edges = [tuple(e) for e in base.edges.tolist()]
    for v in range(n0):
        a, b = n0 + 2 * v, n0 + 2 * v + 1
        edges += [(v, a), (v, b), (a, b)]
    return Graph.from_edges(3 * n0, edges)


# ---------------------------------------------------------------------------
# Vertex-splitting surgery
# ---------------------------------------------------------------------------

def split_vertices(g: Graph, w_set):
    """Replace every vertex of `w_set` by degree-1 copies, one per incident edge.

    Returns (new_graph, w_star) where w_star lists the replacement vertices.
    Edge i of the result corresponds to edge i of the input (the canonical
    bijection), so a schedule drawn for one graph couples the two processes.
    Kept vertices come first, in ascending original order; replacement
    vertices follow, ordered by (edge index, endpoint slot).
    """
    w_set = set(int(v) for v in w_set)
    for v in w_set:
        if v < 0 or v >= g.n_vertices:
            raise ValueError(f"vertex {v} not in graph")
        if g.degree(v) == 0:
            raise ValueError(f"cannot split isolated vertex {v}")
    keep = [v for v in range(g.n_vertices) if v not in w_set]
    relabel = {v: i for i, v in enumerate(keep)}
    n_new = len(keep)
    new_edges = []
    w_star = []
    for u, v in g.edges.tolist():
        pair = []
        for endpoint in (u, v):
            if endpoint in w_set:
                pair.append(n_new)
                w_star.append(n_new)
                n_new += 1
            else:
                pair.append(relabel[endpoint])
        new_edges.append(tuple(pair))
    return Graph.from_edges(n_new, new_edges), w_star


# ---------------------------------------------------------------------------
# Queries
# ---------------------------------------------------------------------------

def neighborhood(g: Graph, v: int, r: int) -> np.ndarray:
    """All vertices within graph distance r of v (breadth-first), sorted."""
    if v < 0 or v >= g.n_vertices:
        raise ValueError(f"vertex {v} not in graph")
    if r < 0:
        raise ValueError("radius must be >= 0")
    dist = _bfs_distances(g, v, cap=r)
    return np.flatnonzero(dist >= 0)


def is_bipartite(g: Graph):
    """Proper 2-coloring as an int8 array, or None if an odd cycle exists.

    Deterministic: the lowest-index vertex of each component gets color 0.
    """
    color = np.full(g.n_vertices, -1, dtype=np.int8)
    for source in range(g.n_vertices):
        if color[source] >= 0:
            continue
        color[source] = 0
        stack = [source]
        while stack:
            u = stack.pop()
            for w in g.neighbors(u):
                if color[w] < 0:
                    color[w] = 1 - color[u]
                    stack.append(int(w))
                elif color[w] == color[u]:
                    return None
    return color


def positive_entropy(g: Graph, v: int):
    """Blocking set certifying local randomness of the jammed count at v.

    Requires (i) two neighbors of v that are not adjacent to each other and
    (ii) an independent set B inside the distance-3 sphere of v such that
    every vertex at distance exactly 2 from v has a neighbor in B.  Returns
    B (sorted list) or None.  B is built greedily by ascending vertex index.
    """
    nbrs = g.neighbors(v)
    cond_i = any(
        not g.has_edge(int(a), int(b)) for a, b in combinations(nbrs.tolist(), 2)
    )
    if not cond_i:
        return None
    dist = _bfs_distances(g, v, cap=3)
    ring2 = np.flatnonzero(dist == 2)
    ring3 = np.flatnonzero(dist == 3)
    if len(ring2) == 0 or len(ring3) == 0:
        return None
    blocking = []
    chosen = set()
    for w in ring3.tolist():
        if not any(x in chosen for x in g.neighbors(w).tolist()):
            blocking.append(w)
            chosen.add(w)
    for u in ring2.tolist():
        if not any(x in chosen for x in g.neighbors(u).tolist()):
            return None
    return blocking


def truncation_radius(max_degree: int, tol: float) -> int:
    """Smallest r with max_degree**r / r! strictly below tol.

    Influence of the boundary beyond distance r decays like D^r/r!; this is
    the radius at which that bound drops below `tol`.  Computed with
    incremental log-space products so no overflow occurs.
    """
    if max_degree < 1:
        raise ValueError("max degree must be >= 1")
    if not (0.0 < tol < 1.0):
        raise ValueError("tol must lie strictly between 0 and 1")
    log_d = math.log(max_degree)
    log_tol = math.log(tol)
    log_term = 0.0  # log(D^0 / 0!) = 0, never < log(tol) since tol < 1
    r = 0
    while log_term >= log_tol:
        r += 1
        log_term += log_d - math.log(r)
    return r


# ---------------------------------------------------------------------------
# Edge-list text format
# ---------------------------------------------------------------------------

def parse_edge_list(text: str) -> Graph:
    """Parse `n m` header then m lines `u v` (0-based); '#' comments and blank
    lines are ignored."""
    rows = []
    for raw in text.splitlines():
        stripped = raw.split("#", 1)[0].strip()
        if stripped:
            rows.append(stripped.split())
    if not rows:
        raise ValueError("empty edge-list input")
    if len(rows[0]) != 2:
        raise ValueError("header must be 'n m'")
    n, m = int(rows[0][0]), int(rows[0][1])
    body = rows[1:]
    if len(body) != m:
        raise ValueError(f"expected {m} edges, found {len(body)}")
    edges = []
    for parts in body:
        if len(parts) != 2:
            raise ValueError(f"bad edge line: {' '.join(parts)!r}")
        edges.append((int(parts[0]), int(parts[1])))
    return Graph.from_edges(n, edges)


def format_edge_list(g: Graph) -> str:
    lines = [f"{g.n_vertices} {g.n_edges}"]
    lines += [f"{u} {v}" for u, v in g.edges.tolist()]
    return "\n".join(lines) + "\n"
