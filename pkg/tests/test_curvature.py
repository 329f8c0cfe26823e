import random
from fractions import Fraction

import pytest

from riccigraph import (
    Graph,
    NotApplicableError,
    bipartite_upper_bound,
    core_neighborhood,
    curvature_all,
    curvature_bounds,
    generate_family,
    jost_liu_bounds,
    neighbor_partition,
    result_to_dict,
    ricci_auto,
    ricci_bipartite_formula,
    ricci_formula,
    ricci_girth5_formula,
    ricci_girth6_formula,
    ricci_lp,
    ricci_oracle,
    w1_primal_value,
)
from conftest import (
    cycle_graph,
    dodecahedron,
    random_bipartite_graphs,
    random_girth5_graphs,
    random_trees,
    spider_tree,
    star_graph,
)


def kappa(g, u, v):
    return ricci_lp(g, u, v).kappa


def test_complete_graphs():
    # K_n edge: kappa = (n - 2)/(n - 1) + ... checked against known small values
    for n, expect in ((3, Fraction(1, 2)), (4, Fraction(2, 3)), (5, Fraction(3, 4))):
        g = generate_family("complete", [n])
        for u, v in g.edges():
            assert kappa(g, u, v) == expect


def test_cycles():
    assert kappa(cycle_graph(3), 0, 1) == Fraction(1, 2)
    for n in range(4, 10):
        g = cycle_graph(n)
        for u, v in g.edges():
            assert kappa(g, u, v) == 0


def test_single_edge():
    g = Graph(2, [(0, 1)])
    assert kappa(g, 0, 1) == 0


def test_petersen_value_and_breakdown():
    g = generate_family("petersen", [])
    for u, v in g.edges():
        res = ricci_girth5_formula(g, u, v)
        assert res.kappa == Fraction(-1, 3)
        assert res.detail.kappa0 == Fraction(-1, 3)
        assert res.detail.kappa1 == 0
        assert kappa(g, u, v) == Fraction(-1, 3)


def test_hypercubes_flat():
    for d in (2, 3, 4):
        g = generate_family("hypercube", [d])
        for u, v in g.edges():
            assert kappa(g, u, v) == 0


def test_complete_bipartite_flat():
    for p in range(1, 6):
        for q in range(p, 6):
            g = generate_family("complete_bipartite", [p, q])
            for u, v in g.edges():
                assert ricci_bipartite_formula(g, u, v).kappa == 0


def test_double_star():
    g = Graph(6, [(0, 1), (0, 2), (0, 3), (1, 4), (1, 5)])
    res = ricci_auto(g, 0, 1)
    assert res.kappa == Fraction(-2, 3)
    assert res.method == "tree_girth6"


def test_tree_formula_matches_lp():
    for g in random_trees(seed=61, count=25, nmax=20):
        for u, v in g.edges():
            res = ricci_girth6_formula(g, u, v)
            expect = -2 * max(
                Fraction(0), 1 - Fraction(1, g.degree(u)) - Fraction(1, g.degree(v))
            )
            assert res.kappa == expect
            assert res.kappa == kappa(g, u, v)


def test_girth6_formula_rejects_short_cycles():
    g = cycle_graph(4)
    with pytest.raises(NotApplicableError):
        ricci_girth6_formula(g, 0, 1)
    g = cycle_graph(5)
    with pytest.raises(NotApplicableError):
        ricci_girth6_formula(g, 0, 1)
    # girth 6 itself is fine
    assert ricci_girth6_formula(cycle_graph(6), 0, 1).kappa == 0


def test_bipartite_formula_matches_lp_and_is_symmetric():
    for g in random_bipartite_graphs(seed=88, count=30):
        for u, v in g.edges():
            a = ricci_bipartite_formula(g, u, v)
            b = ricci_bipartite_formula(g, v, u)
            assert a.kappa == b.kappa
            assert a.kappa == kappa(g, u, v)


def test_bipartite_formula_rejects_odd_cycle():
    with pytest.raises(NotApplicableError):
        ricci_bipartite_formula(cycle_graph(5), 0, 1)


def test_girth5_formula_matches_lp():
    for g in random_girth5_graphs(seed=17, count=30, nmax=16):
        for u, v in g.edges():
            res = ricci_girth5_formula(g, u, v)
            assert res.kappa == kappa(g, u, v)
            assert res.kappa <= 0
            assert res.kappa == min(res.detail.kappa0, res.detail.kappa1, Fraction(0))


def test_girth5_formula_rejects_square():
    with pytest.raises(NotApplicableError):
        ricci_girth5_formula(cycle_graph(4), 0, 1)


def test_dodecahedron_uniform():
    g = dodecahedron()
    for u, v in g.edges():
        res = ricci_auto(g, u, v, verify=True)
        assert res.method == "girth5"
        assert res.kappa == Fraction(-1, 3)


def test_dispatch_method_tags():
    assert ricci_auto(star_graph(5), 0, 1).method == "tree_girth6"
    assert ricci_auto(cycle_graph(6), 0, 1).method == "tree_girth6"
    assert ricci_auto(cycle_graph(4), 0, 1).method == "bipartite"
    assert ricci_auto(cycle_graph(5), 0, 1).method == "girth5"
    assert ricci_auto(generate_family("complete", [4]), 0, 1).method == "lp"
    # square present but graph not bipartite and girth not 5: LP fallback
    g = Graph(6, [(0, 1), (0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 0)])
    assert ricci_auto(g, 0, 1).method == "lp"


def test_auto_equals_lp_everywhere():
    rng = random.Random(444)
    for _ in range(40):
        n = rng.randint(4, 10)
        edges = [
            (i, j)
            for i in range(n)
            for j in range(i + 1, n)
            if rng.random() < 0.35
        ]
        g = Graph(n, edges)
        for u, v in g.edges():
            auto = ricci_auto(g, u, v, verify=True)
            assert auto.kappa == kappa(g, u, v)
            assert Fraction(-2) <= auto.kappa <= 1


def test_oracle_route_agrees():
    g = generate_family("petersen", [])
    res = ricci_oracle(g, 0, 1)
    assert res.method == "oracle"
    assert res.kappa == Fraction(-1, 3)
    assert res.certificates.witness is not None
    assert res.certificates.plan is None


def test_locality_under_distant_attachments():
    # grafting a path onto a vertex at distance >= 2 from both endpoints
    # leaves the edge curvature unchanged
    rng = random.Random(3131)
    for g in random_girth5_graphs(seed=52, count=10, nmax=12):
        u, v = next(iter(g.edges()))
        before = ricci_auto(g, u, v).kappa
        near = set(g.neighbors(u)) | set(g.neighbors(v)) | {u, v}
        far = [w for w in range(g.vertex_count) if w not in near]
        if not far:
            continue
        anchor = rng.choice(far)
        n = g.vertex_count
        extra = list(g.edges()) + [(anchor, n), (n, n + 1), (n + 1, n + 2)]
        h = Graph(n + 3, extra)
        assert ricci_auto(h, u, v).kappa == before


def test_jost_liu_tight_on_cliques():
    for n, expect in ((3, Fraction(1, 2)), (4, Fraction(2, 3))):
        g = generate_family("complete", [n])
        bp = jost_liu_bounds(g, 0, 1)
        assert bp.lower == bp.upper == expect


def test_jost_liu_triangle_free_upper_is_zero():
    for g in random_bipartite_graphs(seed=303, count=10):
        for u, v in g.edges():
            assert jost_liu_bounds(g, u, v).upper == 0


def test_bipartite_upper_bound_c4():
    bp = bipartite_upper_bound(cycle_graph(4), 0, 1)
    assert bp.upper == 0
    assert bp.note == "r_connected"
    with pytest.raises(NotApplicableError):
        bipartite_upper_bound(cycle_graph(5), 0, 1)


def test_cho_paeng_bound_tight_on_petersen():
    g = generate_family("petersen", [])
    bounds = {bp.source: bp for bp in curvature_bounds(g, 0, 1)}
    bp = bounds["cho_paeng_girth5"]
    assert bp.upper == Fraction(-1, 3)
    assert kappa(g, 0, 1) == bp.upper


def test_bounds_sandwich_random():
    rng = random.Random(59)
    for _ in range(25):
        n = rng.randint(4, 10)
        edges = [
            (i, j)
            for i in range(n)
            for j in range(i + 1, n)
            if rng.random() < 0.4
        ]
        g = Graph(n, edges)
        for u, v in g.edges():
            k = kappa(g, u, v)
            for bp in curvature_bounds(g, u, v):
                assert bp.lower <= k <= bp.upper, (bp.source, u, v)


def test_triangle_free_bound_emitted_only_without_triangles():
    sources = {bp.source for bp in curvature_bounds(cycle_graph(4), 0, 1)}
    assert "triangle_free" in sources
    sources = {bp.source for bp in curvature_bounds(generate_family("complete", [3]), 0, 1)}
    assert "triangle_free" not in sources


def test_ricci_formula_refusal_on_clique():
    g = generate_family("complete", [4])
    with pytest.raises(NotApplicableError) as info:
        ricci_formula(g, 0, 1)
    assert info.value.witness is not None


def test_formula_applies_to_spider():
    res = ricci_formula(spider_tree(), 1, 2)
    assert res.method == "tree_girth6"
    assert res.kappa == Fraction(-1, 3)


def test_curvature_all_order_and_methods():
    g = generate_family("complete_bipartite", [2, 2])
    results = curvature_all(g)
    assert [r.edge for r in results] == list(g.edges())
    assert all(r.kappa == 0 for r in results)
    lp = curvature_all(g, method="lp")
    assert all(r.method == "lp" for r in lp)
    with pytest.raises(NotApplicableError):
        curvature_all(generate_family("complete", [4]), method="formula")
    with pytest.raises(ValueError):
        curvature_all(g, method="simplex")


def test_verify_flag_passes_on_formula_paths():
    for g in (cycle_graph(5), cycle_graph(4), star_graph(6)):
        for u, v in g.edges():
            ricci_auto(g, u, v, verify=True)


def test_result_serialization():
    g = generate_family("petersen", [])
    res = ricci_auto(g, 0, 1)
    payload = result_to_dict(res, curvature_bounds(g, 0, 1))
    assert payload["edge"] == [0, 1]
    assert payload["kappa"] == "-1/3"
    assert payload["kappa_float"] == -0.333333
    assert payload["method"] == "girth5"
    assert payload["detail"] == {"kappa0": "-1/3", "kappa1": "0/1"}
    assert payload["bounds"]["jost_liu"]["upper"] == "0/1"
    assert payload["bounds"]["cho_paeng_girth5"]["upper"] == "-1/3"


def test_lp_certificates_attached_under_cap():
    g = cycle_graph(6)
    res = ricci_lp(g, 0, 1)
    assert res.certificates.witness is not None
    assert res.certificates.gap == 0
    big = generate_family("complete_bipartite", [5, 5])
    res = ricci_lp(big, 0, 5, cap=4)
    assert res.certificates.witness is None
    assert res.certificates.plan is not None


def test_kappa_range_bounds():
    # extreme cases: kappa = 1 needs W1 = 0 which a simple graph cannot reach,
    # the clique K_n approaches it; stars push toward flat from below
    g = generate_family("complete", [6])
    assert kappa(g, 0, 1) == Fraction(4, 5)
    assert kappa(star_graph(8), 0, 1) == 0
