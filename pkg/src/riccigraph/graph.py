"""Finite simple graphs plus the neighborhood machinery the curvature code runs on.

Vertices are dense nonnegative integers 0..vertex_count-1.  A Graph is immutable
once built and keeps every adjacency list sorted, so all traversals below are
deterministic.  Isolated vertices are allowed.
"""

from __future__ import annotations

from bisect import bisect_left
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .errors import GraphInputError, NotAnEdgeError

MAX_VERTEX_ID = 2**31 - 1

# Largest vertex count for which a dense boolean adjacency matrix is cached.
_DENSE_LIMIT = 4096


class Graph:
    """Undirected simple graph with sorted, immutable adjacency lists."""

    __slots__ = ("_n", "_adj", "_edge_count", "_dense")

    def __init__(self, vertex_count: int, edges: Iterable[tuple[int, int]]):
        if vertex_count < 0 or vertex_count > MAX_VERTEX_ID + 1:
            raise GraphInputError(f"bad vertex count {vertex_count}")
        self._n = vertex_count
        seen = set()
        for u, v in edges:
            if not (isinstance(u, (int, np.integer)) and isinstance(v, (int, np.integer))):
                raise GraphInputError(f"vertex ids must be integers, got ({u!r}, {v!r})")
            u, v = int(u), int(v)
            if u == v:
                raise GraphInputError(f"self-loop at vertex {u}")
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise GraphInputError(f"edge ({u}, {v}) outside vertex range 0..{vertex_count - 1}")
            seen.add((u, v) if u < v else (v, u))
        lists: list[list[int]] = [[] for _ in range(vertex_count)]
        for u, v in seen:
            lists[u].append(v)
            lists[v].append(u)
        self._adj = tuple(tuple(sorted(l)) for l in lists)
        self._edge_count = len(seen)
        self._dense = None

    @classmethod
    def from_arrays(cls, vertex_count: int, us: np.ndarray, vs: np.ndarray) -> "Graph":
        """Fast constructor from parallel endpoint arrays (used by the samplers)."""
        g = cls.__new__(cls)
        if vertex_count < 0 or vertex_count > MAX_VERTEX_ID + 1:
            raise GraphInputError(f"bad vertex count {vertex_count}")
        us = np.asarray(us, dtype=np.int64)
        vs = np.asarray(vs, dtype=np.int64)
        if us.size and (us == vs).any():
            raise GraphInputError("self-loop in edge arrays")
        if us.size and (
            us.min() < 0 or vs.min() < 0 or us.max() >= vertex_count or vs.max() >= vertex_count
        ):
            raise GraphInputError("edge endpoint outside vertex range")
        lo = np.minimum(us, vs)
        hi = np.maximum(us, vs)
        packed = np.unique(lo * vertex_count + hi)
        lo = packed // vertex_count
        hi = packed % vertex_count
        src = np.concatenate([lo, hi])
        dst = np.concatenate([hi, lo])
        order = np.lexsort((dst, src))
        src = src[order]
        dst = dst[order].tolist()
        bounds = np.searchsorted(src, np.arange(vertex_count + 1))
        g._n = vertex_count
        g._adj = tuple(
            tuple(dst[bounds[v] : bounds[v + 1]]) for v in range(vertex_count)
        )
        g._edge_count = len(packed)
        g._dense = None
        return g

    @property
    def vertex_count(self) -> int:
        return self._n

    @property
    def edge_count(self) -> int:
        return self._edge_count

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def has_vertex(self, v: int) -> bool:
        return 0 <= v < self._n

    def has_edge(self, u: int, v: int) -> bool:
        if not (0 <= u < self._n and 0 <= v < self._n):
            return False
        a = self._adj[u] if len(self._adj[u]) <= len(self._adj[v]) else self._adj[v]
        t = v if a is self._adj[u] else u
        i = bisect_left(a, t)
        return i < len(a) and a[i] == t

    def edges(self) -> Iterator[tuple[int, int]]:
        """All edges (u, v) with u < v in lexicographic order."""
        for u in range(self._n):
            for v in self._adj[u]:
                if v > u:
                    yield (u, v)

    def degrees(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self._adj)

    def adjacency_matrix(self) -> np.ndarray:
        """Dense boolean adjacency, cached.  Only for graphs up to _DENSE_LIMIT vertices."""
        if self._dense is None:
            if self._n > _DENSE_LIMIT:
                raise GraphInputError(
                    f"dense adjacency refused for {self._n} vertices (limit {_DENSE_LIMIT})"
                )
            a = np.zeros((self._n, self._n), dtype=bool)
            for u in range(self._n):
                nb = self._adj[u]
                if nb:
                    a[u, list(nb)] = True
            self._dense = a
        return self._dense

    def __repr__(self) -> str:
        return f"Graph(vertices={self._n}, edges={self._edge_count})"


def build_graph(edge_list: Iterable[tuple[int, int]]) -> Graph:
    """Build a graph from vertex-id pairs; vertex count is the largest id plus one.

    Duplicate edges collapse, self-loops are rejected, ids above MAX_VERTEX_ID
    are rejected.
    """
    pairs = []
    top = -1
    for u, v in edge_list:
        u, v = int(u), int(v)
        if u < 0 or v < 0:
            raise GraphInputError(f"negative vertex id in edge ({u}, {v})")
        if u > MAX_VERTEX_ID or v > MAX_VERTEX_ID:
            raise GraphInputError(f"vertex id overflow in edge ({u}, {v})")
        pairs.append((u, v))
        top = max(top, u, v)
    return Graph(top + 1, pairs)


def parse_edge_list(text: str) -> Graph:
    """Parse the plain text edge-list format: one "u v" pair per line.

    Lines starting with '#' and blank lines are ignored.
    """
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise GraphInputError(f"line {lineno}: expected two vertex ids, got {raw!r}")
        try:
            u, v = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise GraphInputError(f"line {lineno}: non-integer vertex id in {raw!r}") from None
        if u < 0 or v < 0:
            raise GraphInputError(f"line {lineno}: negative vertex id in {raw!r}")
        pairs.append((u, v))
    return build_graph(pairs)


def write_edge_list(g: Graph) -> str:
    """Render a graph in the edge-list text format, edges in lexicographic order."""
    return "".join(f"{u} {v}\n" for u, v in g.edges())


def bfs_distance_capped(g: Graph, source: int, cap: int) -> dict[int, int]:
    """Distances from source to every vertex within the cap, as {vertex: distance}."""
    if not g.has_vertex(source):
        raise GraphInputError(f"source {source} out of range")
    if cap < 0:
        raise GraphInputError(f"negative distance cap {cap}")
    dist = {source: 0}
    frontier = deque([source])
    while frontier:
        u = frontier.popleft()
        d = dist[u]
        if d == cap:
            continue
        for w in g.neighbors(u):
            if w not in dist:
                dist[w] = d + 1
                frontier.append(w)
    return dist


def _shortest_cycle_through_edge(g: Graph, u: int, v: int, cap: int) -> int | None:
    # Shortest u-v path avoiding the edge (u, v) itself, capped; cycle = path + 1.
    dist = {u: 0}
    frontier = deque([u])
    while frontier:
        a = frontier.popleft()
        d = dist[a]
        if d >= cap:
            continue
        for w in g.neighbors(a):
            if (a == u and w == v) or (a == v and w == u):
                continue
            if w not in dist:
                if w == v:
                    return d + 2
                dist[w] = d + 1
                frontier.append(w)
    return None


def girth(g: Graph) -> int | None:
    """Length of a shortest cycle, or None for acyclic graphs (infinite girth).

    Exhaustive: every edge is tested for the shortest cycle through it.
    """
    best: int | None = None
    for u, v in g.edges():
        cap = (best - 2) if best is not None else g.vertex_count
        c = _shortest_cycle_through_edge(g, u, v, cap)
        if c is not None and (best is None or c < best):
            best = c
            if best == 3:
                return 3
    return best


def _has_triangle(g: Graph) -> bool:
    for u, v in g.edges():
        a, b = g.neighbors(u), g.neighbors(v)
        i = j = 0
        while i < len(a) and j < len(b):
            if a[i] == b[j]:
                return True
            if a[i] < b[j]:
                i += 1
            else:
                j += 1
    return False


def _has_square(g: Graph) -> bool:
    # A 4-cycle exists iff some vertex pair has two common neighbors.
    seen: set[tuple[int, int]] = set()
    for w in range(g.vertex_count):
        nb = g.neighbors(w)
        for i in range(len(nb)):
            for j in range(i + 1, len(nb)):
                pair = (nb[i], nb[j])
                if pair in seen:
                    return True
                seen.add(pair)
    return False


def girth_at_least(g: Graph, k: int) -> bool:
    """True when g has no cycle shorter than k (vacuously true for forests)."""
    if k <= 3:
        return True
    if k == 4:
        return not _has_triangle(g)
    if k == 5:
        return not _has_triangle(g) and not _has_square(g)
    gv = girth(g)
    return gv is None or gv >= k


def two_coloring(g: Graph) -> tuple[list[int] | None, list[int] | None]:
    """2-color the graph if bipartite.

    Returns (colors, None) on success or (None, odd_cycle) where odd_cycle is a
    vertex list of an odd cycle witnessing non-bipartiteness.
    """
    color = [-1] * g.vertex_count
    parent = [-1] * g.vertex_count
    depth = [0] * g.vertex_count
    for root in range(g.vertex_count):
        if color[root] != -1:
            continue
        color[root] = 0
        frontier = deque([root])
        while frontier:
            u = frontier.popleft()
            for w in g.neighbors(u):
                if color[w] == -1:
                    color[w] = color[u] ^ 1
                    parent[w] = u
                    depth[w] = depth[u] + 1
                    frontier.append(w)
                elif color[w] == color[u]:
                    a, b = u, w
                    pa, pb = [a], [b]
                    while depth[a] > depth[b]:
                        a = parent[a]
                        pa.append(a)
                    while depth[b] > depth[a]:
                        b = parent[b]
                        pb.append(b)
                    while a != b:
                        a = parent[a]
                        b = parent[b]
                        pa.append(a)
                        pb.append(b)
                    cycle = pa + pb[-2::-1]
                    return None, cycle
    return color, None


def connected_components(g: Graph) -> list[tuple[int, ...]]:
    """Vertex sets of the connected components, each sorted, ordered by least vertex."""
    parent = list(range(g.vertex_count))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for u, v in g.edges():
        ru, rv = find(u), find(v)
        if ru != rv:
            if ru < rv:
                parent[rv] = ru
            else:
                parent[ru] = rv
    groups: dict[int, list[int]] = {}
    for v in range(g.vertex_count):
        groups.setdefault(find(v), []).append(v)
    return [tuple(groups[r]) for r in sorted(groups)]


@dataclass(frozen=True)
class NeighborPartition:
    """The edge-local split of the two neighborhoods.

    For an edge (x, y): delta is N(x) & N(y) (triangles on the edge).  A
    remaining z in N(x) lands in n1_x, n2_x or n0_x according to whether its
    distance to N(y) - {x} is 1, 2, or at least 3 (4-cycle neighbors, 5-cycle
    neighbors, and the rest).  p_xy collects vertices at distance exactly 2
    from both x and y.  All fields are sorted tuples.
    """

    x: int
    y: int
    delta: tuple[int, ...]
    n0_x: tuple[int, ...]
    n1_x: tuple[int, ...]
    n2_x: tuple[int, ...]
    n0_y: tuple[int, ...]
    n1_y: tuple[int, ...]
    n2_y: tuple[int, ...]
    p_xy: tuple[int, ...]

    def all_empty(self) -> bool:
        """True when no 3-, 4-, or 5-cycle is supported on the edge."""
        return not (
            self.delta or self.n1_x or self.n2_x or self.n1_y or self.n2_y or self.p_xy
        )


def _classify_distance(g: Graph, z: int, targets: frozenset[int]) -> int:
    # min(d_G(z, targets), 3) assuming z itself is not a target.
    nz = g.neighbors(z)
    for w in nz:
        if w in targets:
            return 1
    for u in nz:
        for w in g.neighbors(u):
            if w in targets:
                return 2
    return 3


def neighbor_partition(g: Graph, x: int, y: int) -> NeighborPartition:
    """Classify both neighborhoods of the edge (x, y); raises NotAnEdgeError otherwise."""
    if not g.has_edge(x, y):
        raise NotAnEdgeError(f"({x}, {y}) is not an edge")
    nx = frozenset(g.neighbors(x))
    ny = frozenset(g.neighbors(y))
    delta = nx & ny

    def split(side_nbrs, other_nbrs, self_v, other_v):
        targets = frozenset(other_nbrs - {self_v})
        n0, n1, n2 = [], [], []
        for z in sorted(side_nbrs - {other_v} - delta):
            t = _classify_distance(g, z, targets)
            (n1 if t == 1 else n2 if t == 2 else n0).append(z)
        return tuple(n0), tuple(n1), tuple(n2)

    n0x, n1x, n2x = split(nx, ny, x, y)
    n0y, n1y, n2y = split(ny, nx, y, x)
    dist_x = bfs_distance_capped(g, x, 2)
    dist_y = bfs_distance_capped(g, y, 2)
    p = tuple(
        sorted(v for v, d in dist_x.items() if d == 2 and dist_y.get(v) == 2)
    )
    return NeighborPartition(
        x=x, y=y, delta=tuple(sorted(delta)),
        n0_x=n0x, n1_x=n1x, n2_x=n2x,
        n0_y=n0y, n1_y=n1y, n2_y=n2y,
        p_xy=p,
    )


class CoreNeighborhood:
    """Induced subgraph on N(x) | N(y) | P(x, y) | {x, y} with phi edges removed.

    Phi edges run between delta and P(x, y); removing them does not change the
    transport problem but shrinks the support the dual oracle has to search.
    Local distances are truncated at 4 (entries for vertex pairs separated or
    disconnected inside the core are recorded as 4), which keeps a metric and
    leaves every distance that matters to transport untouched.
    """

    __slots__ = (
        "graph", "partition", "x", "y", "vertices", "index",
        "adjacency", "_local_distance", "_costs",
    )

    def __init__(self, graph: Graph, partition: NeighborPartition):
        self.graph = graph
        self.partition = partition
        self.x = partition.x
        self.y = partition.y
        nx = set(graph.neighbors(self.x))
        ny = set(graph.neighbors(self.y))
        pset = set(partition.p_xy)
        verts = sorted({self.x, self.y} | nx | ny | pset)
        self.vertices = tuple(verts)
        self.index = {v: i for i, v in enumerate(verts)}
        dset = set(partition.delta)
        inside = self.index
        adj = []
        for v in verts:
            row = []
            for w in graph.neighbors(v):
                if w not in inside:
                    continue
                if (v in dset and w in pset) or (v in pset and w in dset):
                    continue  # phi edge
                row.append(w)
            adj.append(tuple(row))
        self.adjacency = tuple(adj)
        self._local_distance = None
        self._costs = None

    @property
    def rows(self) -> tuple[int, ...]:
        """Sorted N(x), the support of the measure at x."""
        return tuple(sorted(self.graph.neighbors(self.x)))

    @property
    def cols(self) -> tuple[int, ...]:
        """Sorted N(y), the support of the measure at y."""
        return tuple(sorted(self.graph.neighbors(self.y)))

    @property
    def d_x(self) -> int:
        return self.graph.degree(self.x)

    @property
    def d_y(self) -> int:
        return self.graph.degree(self.y)

    def local_distance(self) -> list[list[int]]:
        """Pairwise core distances in core-index order, truncated at 4."""
        if self._local_distance is None:
            n = len(self.vertices)
            idx = self.index
            mat = [[4] * n for _ in range(n)]
            for i, s in enumerate(self.vertices):
                row = mat[i]
                row[i] = 0
                frontier = deque([s])
                dist = {s: 0}
                while frontier:
                    u = frontier.popleft()
                    d = dist[u]
                    if d >= 4:
                        continue
                    for w in self.adjacency[idx[u]]:
                        if w not in dist:
                            dist[w] = d + 1
                            row[idx[w]] = min(d + 1, 4)
                            frontier.append(w)
            self._local_distance = mat
        return self._local_distance

    def transport_costs(self) -> list[list[int]]:
        """Distance matrix d_G(z1, z2) over rows x cols; every entry is in 0..3.

        For z1 in N(x) and z2 in N(y) the path z1-x-y-z2 bounds the distance by
        3, so the entry is 0 (same vertex), 1 (adjacent), 2 (common neighbor)
        or 3.
        """
        if self._costs is not None:
            return self._costs
        g = self.graph
        rows, cols = self.rows, self.cols
        if len(rows) * len(cols) >= 2500 and g.vertex_count <= _DENSE_LIMIT:
            a = g.adjacency_matrix()
            r = np.fromiter(rows, dtype=np.int64)
            c = np.fromiter(cols, dtype=np.int64)
            sub = a[np.ix_(r, c)]
            common = (a[r].astype(np.uint8) @ a[:, c].astype(np.uint8)) > 0
            eq = r[:, None] == c[None, :]
            mat = np.where(eq, 0, np.where(sub, 1, np.where(common, 2, 3)))
            self._costs = mat.astype(int).tolist()
            return self._costs
        col_sets = [frozenset(g.neighbors(z2)) for z2 in cols]
        mat = []
        for z1 in rows:
            n1 = frozenset(g.neighbors(z1))
            row = []
            for z2, n2 in zip(cols, col_sets):
                if z1 == z2:
                    row.append(0)
                elif z2 in n1:
                    row.append(1)
                elif n1 & n2:
                    row.append(2)
                else:
                    row.append(3)
            mat.append(row)
        self._costs = mat
        return self._costs


def core_neighborhood(g: Graph, x: int, y: int) -> CoreNeighborhood:
    """Core neighborhood of the edge (x, y); raises NotAnEdgeError otherwise."""
    return CoreNeighborhood(g, neighbor_partition(g, x, y))


def _family_path(n: int) -> Graph:
    if n < 1:
        raise GraphInputError("path needs n >= 1 vertices")
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def _family_cycle(n: int) -> Graph:
    if n < 3:
        raise GraphInputError("cycle needs n >= 3 vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def _family_star(n: int) -> Graph:
    # Center is vertex 0, leaves are 1..n.
    if n < 1:
        raise GraphInputError("star needs n >= 1 leaves")
    return Graph(n + 1, [(0, i) for i in range(1, n + 1)])


def _family_hypercube(d: int) -> Graph:
    # Vertices are bitmasks 0..2^d - 1, edges join masks at Hamming distance 1.
    if d < 1:
        raise GraphInputError("hypercube needs dimension >= 1")
    if d > 20:
        raise GraphInputError("hypercube dimension too large")
    edges = []
    for v in range(1 << d):
        for b in range(d):
            w = v ^ (1 << b)
            if w > v:
                edges.append((v, w))
    return Graph(1 << d, edges)


def _family_complete_bipartite(p: int, q: int) -> Graph:
    # Left side 0..p-1, right side p..p+q-1.
    if p < 1 or q < 1:
        raise GraphInputError("complete_bipartite needs both sides >= 1")
    return Graph(p + q, [(i, p + j) for i in range(p) for j in range(q)])


def _family_complete(n: int) -> Graph:
    if n < 1:
        raise GraphInputError("complete needs n >= 1 vertices")
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def _family_petersen() -> Graph:
    # Outer 5-cycle 0..4, spokes to 5..9, inner vertices joined at step 2.
    edges = []
    for i in range(5):
        edges.append((i, (i + 1) % 5))
        edges.append((i, 5 + i))
        edges.append((5 + i, 5 + (i + 2) % 5))
    return Graph(10, edges)


_FAMILIES = {
    "path": (1, _family_path),
    "cycle": (1, _family_cycle),
    "star": (1, _family_star),
    "hypercube": (1, _family_hypercube),
    "complete_bipartite": (2, _family_complete_bipartite),
    "complete": (1, _family_complete),
    "petersen": (0, _family_petersen),
}


def generate_family(name: str, params: Iterable[int] = ()) -> Graph:
    """Build a named graph family member.

    Families and parameters: path n, cycle n, star n (n leaves), hypercube d,
    complete_bipartite p q, complete n, petersen.  Vertex numbering is the
    canonical one documented on each builder.
    """
    if name not in _FAMILIES:
        raise GraphInputError(f"unknown family {name!r}")
    arity, builder = _FAMILIES[name]
    args = [int(p) for p in params]
    if len(args) != arity:
        raise GraphInputError(f"family {name!r} expects {arity} parameter(s), got {len(args)}")
    return builder(*args)
