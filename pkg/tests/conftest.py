"""Shared corpus builders and validators for the test suite.

The named corpus mirrors the acceptance list: paths, cycles, stars, cliques,
complete bipartite graphs, small hypercubes, Petersen, plus seeded random
trees, random bipartite graphs, and random girth->=5 graphs.
"""

import random
from fractions import Fraction

from riccigraph import Graph, bfs_distance_capped, generate_family


def path_graph(n):
    return generate_family("path", [n])


def cycle_graph(n):
    return generate_family("cycle", [n])


def star_graph(n):
    # n vertices total: one center, n - 1 leaves.
    return generate_family("star", [n - 1])


def named_corpus():
    """(label, graph) pairs for the fixed part of the corpus."""
    out = []
    for n in range(2, 11):
        out.append((f"P{n}", path_graph(n)))
    for n in range(3, 13):
        out.append((f"C{n}", cycle_graph(n)))
    for n in range(3, 9):
        out.append((f"T{n}", star_graph(n)))
    for n in range(3, 7):
        out.append((f"K{n}", generate_family("complete", [n])))
    for p in range(1, 6):
        for q in range(p, 6):
            out.append((f"K{p},{q}", generate_family("complete_bipartite", [p, q])))
    for d in range(2, 5):
        out.append((f"Q{d}", generate_family("hypercube", [d])))
    out.append(("Petersen", generate_family("petersen", [])))
    return out


def random_tree(rng, n):
    """Uniform labeled tree on n vertices via Pruefer decoding."""
    if n == 1:
        return Graph(1, [])
    if n == 2:
        return Graph(2, [(0, 1)])
    seq = [rng.randrange(n) for _ in range(n - 2)]
    degree = [1] * n
    for v in seq:
        degree[v] += 1
    edges = []
    import heapq

    leaves = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(leaves)
    for v in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, v))
        degree[v] -= 1
        if degree[v] == 1:
            heapq.heappush(leaves, v)
    u, w = heapq.heappop(leaves), heapq.heappop(leaves)
    edges.append((u, w))
    return Graph(n, edges)


def random_trees(seed=90210, count=50, nmax=30):
    rng = random.Random(seed)
    return [random_tree(rng, rng.randint(3, nmax)) for _ in range(count)]


def random_bipartite_graphs(seed=140, count=50):
    """Random bipartite graphs with at most 20 vertices; may be disconnected."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        m = rng.randint(1, 10)
        n = rng.randint(1, 20 - m)
        p = rng.uniform(0.2, 0.8)
        edges = [
            (i, m + j) for i in range(m) for j in range(n) if rng.random() < p
        ]
        out.append(Graph(m + n, edges))
    return out


def _with_chords(rng, g, attempts):
    # Add chords only between vertices at distance >= 4; each addition keeps
    # the girth at 5 or more, so re-checking against the current graph suffices.
    n = g.vertex_count
    edges = list(g.edges())
    for _ in range(attempts):
        u, v = rng.randrange(n), rng.randrange(n)
        if u == v:
            continue
        dist = bfs_distance_capped(g, u, 3)
        if v in dist:
            continue
        edges.append((u, v))
        g = Graph(n, edges)
    return g


def random_girth5_graphs(seed=777, count=50, nmax=20):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(5, nmax)
        g = _with_chords(rng, random_tree(rng, n), 2 * n)
        out.append(g)
    return out


def _degree_shape(g):
    """path / cycle / star / other, from the degree multiset alone."""
    n = g.vertex_count
    degs = sorted(g.degrees())
    if n == 1 or degs == [1, 1]:
        return "path"
    if degs[0] == 2 and degs[-1] == 2:
        return "cycle"
    if degs[:2] == [1, 1] and degs[2:] == [2] * (n - 2):
        return "path"
    if degs[:-1] == [1] * (n - 1) and degs[-1] == n - 1:
        return "star"
    return "other"


def nonfamily_girth5_graphs(seed=4100, count=100):
    """Connected girth->=5 graphs on 5..9 vertices that are not path/cycle/star."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.randint(5, 9)
        g = _with_chords(rng, random_tree(rng, n), 3 * n)
        if _degree_shape(g) == "other":
            out.append(g)
    return out


def full_corpus():
    out = named_corpus()
    out += [(f"tree{i}", g) for i, g in enumerate(random_trees())]
    out += [(f"bip{i}", g) for i, g in enumerate(random_bipartite_graphs())]
    out += [(f"g5_{i}", g) for i, g in enumerate(random_girth5_graphs())]
    return out


def dodecahedron():
    # Generalized Petersen graph on (10, 2): 3-regular, girth 5, 20 vertices.
    edges = []
    for i in range(10):
        edges.append((i, (i + 1) % 10))
        edges.append((i, 10 + i))
        edges.append((10 + i, 10 + (i + 2) % 10))
    return Graph(20, edges)


def wagner_graph():
    # C8 plus the four antipodal chords; 3-regular, girth 4, and Ricci flat.
    return Graph(8, [(i, (i + 1) % 8) for i in range(8)] + [(i, i + 4) for i in range(4)])


def nonflat_cubic_girth4():
    # 3-regular, girth 4; the edge (0, 5) lies on no 4-cycle, so the
    # neighborhoods across it admit no perfect matching and kappa < 0 there.
    edges = [
        (0, 4), (0, 5), (0, 6), (1, 5), (1, 7), (1, 8), (2, 6), (2, 7),
        (2, 8), (3, 5), (3, 8), (3, 9), (4, 7), (4, 9), (6, 9),
    ]
    return Graph(10, edges)


def spider_tree():
    # Path 0-1-2-3-4 with one extra leaf hanging off vertex 2.
    return Graph(6, [(0, 1), (1, 2), (2, 3), (3, 4), (2, 5)])


def disjoint_union(a, b):
    off = a.vertex_count
    edges = list(a.edges()) + [(u + off, v + off) for u, v in b.edges()]
    return Graph(a.vertex_count + b.vertex_count, edges)


def check_certificates(core, cert):
    """Validate a W1Result against its core: marginals, Lipschitz bound, objective."""
    if cert.plan is not None:
        plan = cert.plan
        assert plan.rows == core.rows
        assert plan.cols == core.cols
        sx = Fraction(1, core.d_x)
        sy = Fraction(1, core.d_y)
        assert plan.row_sums() == tuple(sx for _ in core.rows)
        assert plan.col_sums() == tuple(sy for _ in core.cols)
        dist = core.local_distance()
        idx = core.index
        total = Fraction(0)
        for i, u in enumerate(plan.rows):
            for j, v in enumerate(plan.cols):
                m = plan.mass[i][j]
                assert m >= 0
                total += m * dist[idx[u]][idx[v]]
        assert total == cert.value
    if cert.witness is not None:
        w = cert.witness
        dist = core.local_distance()
        idx = core.index
        verts = core.vertices
        assert set(w.values) == set(verts)
        for u in verts:
            assert isinstance(w.values[u], int)
            for v in verts:
                assert abs(w.values[u] - w.values[v]) <= dist[idx[u]][idx[v]]
        obj = Fraction(0)
        for u in core.rows:
            obj += Fraction(w.values[u], core.d_x)
        for v in core.cols:
            obj -= Fraction(w.values[v], core.d_y)
        assert obj == w.objective
    if cert.gap is not None:
        assert cert.gap == 0
