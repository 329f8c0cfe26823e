import random

import pytest

from riccigraph import (
    Graph,
    GraphInputError,
    bfs_distance_capped,
    build_graph,
    connected_components,
    core_neighborhood,
    generate_family,
    girth,
    girth_at_least,
    neighbor_partition,
    parse_edge_list,
    two_coloring,
    write_edge_list,
)
from conftest import cycle_graph, path_graph, random_tree, star_graph


def test_basic_accessors():
    g = Graph(5, [(0, 1), (1, 2), (2, 0), (3, 1)])
    assert g.vertex_count == 5
    assert g.edge_count == 4
    assert g.neighbors(1) == (0, 2, 3)
    assert g.degree(4) == 0
    assert g.has_edge(2, 0) and g.has_edge(0, 2)
    assert not g.has_edge(0, 3)
    assert list(g.edges()) == [(0, 1), (0, 2), (1, 2), (1, 3)]


def test_duplicate_edges_collapse():
    g = Graph(3, [(0, 1), (1, 0), (0, 1)])
    assert g.edge_count == 1


def test_self_loop_rejected():
    with pytest.raises(GraphInputError):
        Graph(3, [(1, 1)])


def test_vertex_out_of_range_rejected():
    with pytest.raises(GraphInputError):
        Graph(2, [(0, 2)])


def test_adjacency_matrix_symmetric():
    g = generate_family("petersen", [])
    a = g.adjacency_matrix()
    assert (a == a.T).all()
    assert a.sum() == 2 * g.edge_count


def test_parse_write_round_trip():
    g = generate_family("hypercube", [3])
    text = write_edge_list(g)
    h = parse_edge_list(text)
    assert h.vertex_count == g.vertex_count
    assert list(h.edges()) == list(g.edges())


def test_parse_ignores_comments_and_blanks():
    g = parse_edge_list("# header\n\n0 1\n  \n1 2\n")
    assert list(g.edges()) == [(0, 1), (1, 2)]


def test_parse_errors():
    with pytest.raises(GraphInputError):
        parse_edge_list("0 1 2\n")
    with pytest.raises(GraphInputError):
        parse_edge_list("0 x\n")
    with pytest.raises(GraphInputError):
        parse_edge_list("-1 0\n")


def test_build_graph_vertex_count_from_ids():
    g = build_graph([(0, 7)])
    assert g.vertex_count == 8


def test_bfs_distance_capped():
    g = path_graph(10)
    d = bfs_distance_capped(g, 0, 3)
    assert d == {0: 0, 1: 1, 2: 2, 3: 3}
    full = bfs_distance_capped(g, 0, 100)
    assert full[9] == 9


def test_girth_named():
    assert girth(generate_family("complete", [4])) == 3
    assert girth(cycle_graph(7)) == 7
    assert girth(generate_family("hypercube", [3])) == 4
    assert girth(generate_family("petersen", [])) == 5
    assert girth(path_graph(6)) is None
    assert girth(star_graph(5)) is None


def test_girth_at_least_matches_girth():
    rng = random.Random(5)
    for _ in range(40):
        n = rng.randint(3, 12)
        edges = [
            (i, j)
            for i in range(n)
            for j in range(i + 1, n)
            if rng.random() < 0.3
        ]
        g = Graph(n, edges)
        gg = girth(g)
        for k in (3, 4, 5, 6):
            expect = gg is None or gg >= k
            assert girth_at_least(g, k) == expect


def test_two_coloring_bipartite():
    g = generate_family("complete_bipartite", [3, 4])
    colors, odd = two_coloring(g)
    assert odd is None
    for u, v in g.edges():
        assert colors[u] != colors[v]


def test_two_coloring_odd_cycle_witness():
    g = cycle_graph(9)
    colors, cyc = two_coloring(g)
    assert colors is None
    assert len(cyc) % 2 == 1
    for a, b in zip(cyc, cyc[1:]):
        assert g.has_edge(a, b)
    assert g.has_edge(cyc[0], cyc[-1])


def test_connected_components_ordering():
    g = Graph(7, [(2, 3), (5, 6), (0, 1)])
    comps = connected_components(g)
    assert comps == [(0, 1), (2, 3), (4,), (5, 6)]


def test_neighbor_partition_cycle4():
    g = cycle_graph(4)
    part = neighbor_partition(g, 0, 1)
    assert part.delta == ()
    assert part.n1_x == (3,)
    assert part.n1_y == (2,)
    assert not part.n2_x and not part.n2_y and not part.p_xy


def test_neighbor_partition_cycle5():
    g = cycle_graph(5)
    part = neighbor_partition(g, 0, 1)
    assert part.delta == () and not part.n1_x and not part.n1_y
    assert part.n2_x == (4,)
    assert part.n2_y == (2,)
    assert part.p_xy == (3,)


def test_neighbor_partition_tree_all_empty():
    g = random_tree(random.Random(3), 15)
    for u, v in g.edges():
        part = neighbor_partition(g, u, v)
        assert part.all_empty()


def test_neighbor_partition_complete():
    g = generate_family("complete", [5])
    part = neighbor_partition(g, 0, 1)
    assert part.delta == (2, 3, 4)


def test_partition_rejects_non_edge():
    from riccigraph import NotAnEdgeError

    g = cycle_graph(5)
    with pytest.raises(NotAnEdgeError):
        neighbor_partition(g, 0, 2)


def test_core_neighborhood_petersen():
    g = generate_family("petersen", [])
    core = core_neighborhood(g, 0, 1)
    assert core.d_x == 3 and core.d_y == 3
    assert core.rows == tuple(sorted(g.neighbors(0)))
    assert core.cols == tuple(sorted(g.neighbors(1)))
    dist = core.local_distance()
    nv = len(core.vertices)
    for i in range(nv):
        assert dist[i][i] == 0
        for j in range(nv):
            assert dist[i][j] == dist[j][i]
            assert 0 <= dist[i][j] <= 4


def test_core_removes_triangle_to_pentagon_edges():
    # Delta-P edges are dropped inside the core, so a common neighbor sits at
    # local distance 2 from a P vertex it is adjacent to in the full graph.
    g = Graph(6, [(0, 1), (0, 2), (1, 2), (0, 3), (1, 4), (3, 5), (4, 5), (2, 5)])
    part = neighbor_partition(g, 0, 1)
    assert 2 in part.delta
    assert 5 in part.p_xy
    assert g.has_edge(2, 5)
    core = core_neighborhood(g, 0, 1)
    idx = core.index
    assert core.local_distance()[idx[2]][idx[5]] >= 2


def test_generate_family_errors():
    with pytest.raises(GraphInputError):
        generate_family("moebius", [8])
    with pytest.raises(GraphInputError):
        generate_family("cycle", [])
    with pytest.raises(GraphInputError):
        generate_family("cycle", [2])
    with pytest.raises(GraphInputError):
        generate_family("petersen", [5])


def test_family_shapes():
    assert generate_family("path", [1]).edge_count == 0
    q4 = generate_family("hypercube", [4])
    assert q4.vertex_count == 16 and q4.edge_count == 32
    assert set(q4.degrees()) == {4}
    p = generate_family("petersen", [])
    assert p.vertex_count == 10 and p.edge_count == 15
    assert set(p.degrees()) == {3}
    k = generate_family("complete_bipartite", [2, 5])
    assert k.edge_count == 10
    colors, _ = two_coloring(k)
    assert colors is not None
