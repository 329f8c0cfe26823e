"""Edge curvature kappa(x,y) = 1 - W1(m_x, m_y).

Four routes to the same number: the transport LP, and closed forms for three
structural regimes (no short cycles through the edge, bipartite host, global
girth at least five).  ricci_auto dispatches cheapest-first and can be asked
to re-check any formula answer against the LP.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .errors import NotApplicableError, VerificationError
from .graph import (
    Graph,
    NeighborPartition,
    core_neighborhood,
    girth_at_least,
    neighbor_partition,
    two_coloring,
)
from .matching import BoundPair, matching_lower_bound, two_matching_lower_bound
from .rationals import format_rational, positive_part
from .transport import (
    DEFAULT_ORACLE_CAP,
    W1Result,
    w1_dual_oracle,
    w1_primal,
    w1_primal_value,
)

ONE = Fraction(1)
TWO = Fraction(2)


@dataclass(frozen=True)
class Girth5Breakdown:
    """The two candidate values whose minimum is kappa on a girth >= 5 edge."""

    kappa0: Fraction
    kappa1: Fraction


@dataclass(frozen=True)
class CurvatureResult:
    edge: tuple[int, int]
    kappa: Fraction
    method: str
    detail: Girth5Breakdown | None = None
    certificates: W1Result | None = None


def _components_within(g: Graph, vertices) -> list[tuple[int, ...]]:
    """Connected components of the subgraph induced on `vertices`, by least member."""
    vs = sorted(vertices)
    inside = set(vs)
    parent = {v: v for v in vs}

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for v in vs:
        for w in g.neighbors(v):
            if w > v and w in inside:
                ra, rb = find(v), find(w)
                if ra != rb:
                    if rb < ra:
                        ra, rb = rb, ra
                    parent[rb] = ra
    groups: dict[int, list[int]] = {}
    for v in vs:
        groups.setdefault(find(v), []).append(v)
    return [tuple(groups[r]) for r in sorted(groups)]


def ricci_lp(
    g: Graph, x: int, y: int, *, cap: int = DEFAULT_ORACLE_CAP
) -> CurvatureResult:
    """Exact curvature via the transport LP on the core neighborhood.

    When the core fits under the dual-oracle cap the independent Lipschitz
    certificate is computed as well and must agree bit for bit.
    """
    core = core_neighborhood(g, x, y)
    value, plan = w1_primal(core)
    certificates = W1Result(value=value, plan=plan, witness=None, gap=None)
    if len(core.vertices) <= cap:
        dual_value, witness = w1_dual_oracle(core, cap)
        certificates = W1Result(
            value=value, plan=plan, witness=witness, gap=value - dual_value
        )
        if dual_value != value:
            raise VerificationError((x, y), 1 - dual_value, 1 - value, "lp")
    return CurvatureResult(
        edge=(x, y), kappa=1 - value, method="lp", certificates=certificates
    )


def ricci_oracle(
    g: Graph, x: int, y: int, *, cap: int = DEFAULT_ORACLE_CAP
) -> CurvatureResult:
    """Curvature from the dual enumeration alone (no transport plan)."""
    core = core_neighborhood(g, x, y)
    value, witness = w1_dual_oracle(core, cap)
    certificates = W1Result(value=value, plan=None, witness=witness, gap=None)
    return CurvatureResult(
        edge=(x, y), kappa=1 - value, method="oracle", certificates=certificates
    )


def _partition_witness(part: NeighborPartition):
    for label, members in (
        ("delta", part.delta),
        ("n1_x", part.n1_x),
        ("n1_y", part.n1_y),
        ("n2_x", part.n2_x),
        ("n2_y", part.n2_y),
        ("p_xy", part.p_xy),
    ):
        if members:
            return (label, members[0])
    return None


def _girth6_value(g: Graph, x: int, y: int) -> Fraction:
    return -2 * positive_part(ONE - Fraction(1, g.degree(x)) - Fraction(1, g.degree(y)))


def ricci_girth6_formula(g: Graph, x: int, y: int) -> CurvatureResult:
    """Closed form for edges supporting no 3-, 4-, or 5-cycle: -2(1 - 1/d_x - 1/d_y)_+.

    Covers every tree edge and every edge of a girth >= 6 graph.
    """
    part = neighbor_partition(g, x, y)
    if not part.all_empty():
        raise NotApplicableError(
            "a 3-, 4-, or 5-cycle is supported on the edge",
            witness=_partition_witness(part),
        )
    return _girth6_from_partition(g, x, y)


def _girth6_from_partition(g: Graph, x: int, y: int) -> CurvatureResult:
    return CurvatureResult(
        edge=(x, y), kappa=_girth6_value(g, x, y), method="tree_girth6"
    )


def ricci_bipartite_formula(g: Graph, x: int, y: int) -> CurvatureResult:
    """Closed form for edges of a bipartite graph.

    kappa = -2(1 - 1/d_x - 1/d_y - |N1(y)|/d_y + sum_a M_a)_+

    summed over connected components R_a of the subgraph induced on
    N1(x) u N1(y), where M_a = max over subsets T of the component's
    N1(y) side of |T|/d_y - |N(T)|/d_x, computed exactly as a minimum
    cut.  Restricting T to the empty or full side gives the weaker
    indicator form, which is not always tight: a proper subset wins
    whenever part of one side sees few partners across the component.
    The value is symmetric in x and y although the expression reads
    one-sided.
    """
    colors, odd_cycle = two_coloring(g)
    if colors is None:
        raise NotApplicableError("graph is not bipartite", witness=odd_cycle)
    part = neighbor_partition(g, x, y)
    return _bipartite_from_partition(g, x, y, part)


def _max_flow(n: int, source: int, sink: int, arcs) -> int:
    """Integer max flow (Dinic); arcs is a list of (tail, head, capacity)."""
    head_of: list[list[int]] = [[] for _ in range(n)]
    to: list[int] = []
    cap: list[int] = []
    for u, v, c in arcs:
        head_of[u].append(len(to))
        to.append(v)
        cap.append(c)
        head_of[v].append(len(to))
        to.append(u)
        cap.append(0)
    total = 0
    while True:
        level = [-1] * n
        level[source] = 0
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for e in head_of[u]:
                if cap[e] > 0 and level[to[e]] < 0:
                    level[to[e]] = level[u] + 1
                    queue.append(to[e])
        if level[sink] < 0:
            return total
        cursor = [0] * n

        def augment(u: int, limit: int) -> int:
            if u == sink:
                return limit
            while cursor[u] < len(head_of[u]):
                e = head_of[u][cursor[u]]
                v = to[e]
                if cap[e] > 0 and level[v] == level[u] + 1:
                    got = augment(v, min(limit, cap[e]))
                    if got:
                        cap[e] -= got
                        cap[e ^ 1] += got
                        return got
                cursor[u] += 1
            return 0

        while True:
            pushed = augment(source, sum(cap))
            if not pushed:
                break
            total += pushed


def _subset_gain(lows, ups, adj, dx: int, dy: int) -> Fraction:
    """Largest |T|/d_y - |N(T)|/d_x over subsets T of lows, N read from adj.

    Equals |lows|/d_y minus a minimum cut: dropping a low vertex costs 1/d_y,
    claiming an upper one costs 1/d_x, scaled by d_x*d_y to stay integral.
    """
    up_index = {v: i for i, v in enumerate(ups)}
    n = len(lows) + len(ups) + 2
    source, sink = n - 2, n - 1
    blocked = dx * dy * (len(lows) + len(ups) + 1)
    arcs: list[tuple[int, int, int]] = []
    for i, v in enumerate(lows):
        arcs.append((source, i, dx))
        for w in adj[v]:
            arcs.append((i, len(lows) + up_index[w], blocked))
    for j in range(len(ups)):
        arcs.append((len(lows) + j, sink, dy))
    cut = _max_flow(n, source, sink, arcs)
    return Fraction(len(lows), dy) - Fraction(cut, dx * dy)


def _bipartite_from_partition(
    g: Graph, x: int, y: int, part: NeighborPartition
) -> CurvatureResult:
    # no triangles in a bipartite graph, so the common neighborhood is empty
    assert not part.delta
    dx, dy = g.degree(x), g.degree(y)
    side_x = set(part.n1_x)
    inner = ONE - Fraction(1, dx) - Fraction(1, dy) - Fraction(len(part.n1_y), dy)
    for comp in _components_within(g, part.n1_x + part.n1_y):
        lows = [v for v in comp if v not in side_x]
        ups = [v for v in comp if v in side_x]
        up_set = set(ups)
        adj = {v: [w for w in g.neighbors(v) if w in up_set] for v in lows}
        inner += _subset_gain(lows, ups, adj, dx, dy)
    kappa = -2 * positive_part(inner)
    return CurvatureResult(edge=(x, y), kappa=kappa, method="bipartite")


def ricci_girth5_formula(g: Graph, x: int, y: int) -> CurvatureResult:
    """Closed form for edges of a graph with girth at least five.

    kappa = min(kappa0, kappa1) with kappa0 = -(1 - 1/d_x - 1/d_y)_+ and

    kappa1 = -(2 - 2/d_x - 2/d_y - sum_a (|A_a|/d_y - M_a))_+

    over connected components of the subgraph induced on N2(x) u N2(y) u P.
    A_a is the component's N2(y) share, and M_a = max over subsets T of A_a
    of |T|/d_y - |N(T)|/d_x, where N pairs vertices of N2(y) and N2(x) that
    share a middle vertex in P; the same minimum cut as the bipartite form.
    Symmetric in x and y despite the one-sided expression.
    """
    if not girth_at_least(g, 5):
        raise NotApplicableError("graph has girth below five")
    part = neighbor_partition(g, x, y)
    return _girth5_from_partition(g, x, y, part)


def _girth5_from_partition(
    g: Graph, x: int, y: int, part: NeighborPartition
) -> CurvatureResult:
    dx, dy = g.degree(x), g.degree(y)
    kappa0 = -positive_part(ONE - Fraction(1, dx) - Fraction(1, dy))
    side_x = set(part.n2_x)
    side_y = set(part.n2_y)
    middles = set(part.p_xy)
    inner = TWO - Fraction(2, dx) - Fraction(2, dy)
    for comp in _components_within(g, part.n2_x + part.n2_y + part.p_xy):
        lows = [v for v in comp if v in side_y]
        ups = [v for v in comp if v in side_x]
        adj: dict[int, set[int]] = {v: set() for v in lows}
        # girth five keeps middles off both neighborhoods, so pentagon pairs
        # are exactly the (N2(x), N2(y)) pairs with a common neighbor in P
        for m in comp:
            if m not in middles:
                continue
            mx = [z for z in g.neighbors(m) if z in side_x]
            my = [w for w in g.neighbors(m) if w in side_y]
            for w in my:
                adj[w].update(mx)
        inner -= Fraction(len(lows), dy) - _subset_gain(lows, ups, adj, dx, dy)
    kappa1 = -positive_part(inner)
    kappa = min(kappa0, kappa1, Fraction(0))
    return CurvatureResult(
        edge=(x, y),
        kappa=kappa,
        method="girth5",
        detail=Girth5Breakdown(kappa0=kappa0, kappa1=kappa1),
    )


def jost_liu_bounds(g: Graph, x: int, y: int) -> BoundPair:
    """Triangle-count sandwich valid on every edge of every graph."""
    part = neighbor_partition(g, x, y)
    dx, dy = g.degree(x), g.degree(y)
    dmax, dmin = max(dx, dy), min(dx, dy)
    tri = len(part.delta)
    upper = Fraction(tri, dmax)
    base = ONE - Fraction(1, dx) - Fraction(1, dy)
    lower = (
        upper
        - positive_part(base - Fraction(tri, dmin))
        - positive_part(base - Fraction(tri, dmax))
    )
    return BoundPair(lower=lower, upper=upper, source="jost_liu")


def bipartite_upper_bound(g: Graph, x: int, y: int) -> BoundPair:
    """Upper bound for bipartite hosts; equality candidate when R(x,y) is connected."""
    colors, odd_cycle = two_coloring(g)
    if colors is None:
        raise NotApplicableError("graph is not bipartite", witness=odd_cycle)
    part = neighbor_partition(g, x, y)
    dx, dy = g.degree(x), g.degree(y)
    share = min(Fraction(len(part.n1_x), dx), Fraction(len(part.n1_y), dy))
    upper = -2 * positive_part(ONE - Fraction(1, dx) - Fraction(1, dy) - share)
    components = _components_within(g, part.n1_x + part.n1_y)
    note = "r_connected" if len(components) <= 1 else None
    return BoundPair(lower=Fraction(-2), upper=upper, source="bipartite_upper", note=note)


def curvature_bounds(g: Graph, x: int, y: int) -> list[BoundPair]:
    """Every bound pair whose hypotheses hold on this edge, in a fixed order."""
    part = neighbor_partition(g, x, y)
    dx, dy = g.degree(x), g.degree(y)
    bounds = [jost_liu_bounds(g, x, y)]
    if not part.delta:
        bounds.append(
            BoundPair(
                lower=-2 * positive_part(ONE - Fraction(1, dx) - Fraction(1, dy)),
                upper=Fraction(0),
                source="triangle_free",
            )
        )
    bounds.append(matching_lower_bound(g, x, y))
    bounds.append(two_matching_lower_bound(g, x, y))
    colors, _ = two_coloring(g)
    if colors is not None:
        bounds.append(bipartite_upper_bound(g, x, y))
    if girth_at_least(g, 5):
        delta_min = min(g.degrees(), default=0)
        if delta_min >= 1:
            bounds.append(
                BoundPair(
                    lower=Fraction(-2),
                    upper=Fraction(-1) + Fraction(2, delta_min),
                    source="cho_paeng_girth5",
                )
            )
    return bounds


def ricci_auto(
    g: Graph,
    x: int,
    y: int,
    *,
    verify: bool = False,
    cap: int = DEFAULT_ORACLE_CAP,
) -> CurvatureResult:
    """Cheapest applicable route: girth6 formula, bipartite formula, girth5 formula, LP.

    A common neighbor on the edge rules out both bipartiteness and girth 5, and
    a 4-cycle through the edge rules out girth 5, so the global scans only run
    when the local partition leaves the regime possible.  With verify=True any
    formula answer is recomputed through the LP (while the core is within the
    oracle cap) and a mismatch raises rather than returns.
    """
    part = neighbor_partition(g, x, y)
    if part.all_empty():
        result = _girth6_from_partition(g, x, y)
    elif part.delta:
        result = ricci_lp(g, x, y, cap=cap)
    else:
        colors, _ = two_coloring(g)
        if colors is not None:
            result = _bipartite_from_partition(g, x, y, part)
        elif not part.n1_x and not part.n1_y and girth_at_least(g, 5):
            result = _girth5_from_partition(g, x, y, part)
        else:
            result = ricci_lp(g, x, y, cap=cap)
    if verify and result.method != "lp":
        core = core_neighborhood(g, x, y)
        if len(core.vertices) <= cap:
            lp_kappa = 1 - w1_primal_value(core)
            if lp_kappa != result.kappa:
                raise VerificationError((x, y), result.kappa, lp_kappa, result.method)
    return result


def ricci_formula(g: Graph, x: int, y: int) -> CurvatureResult:
    """The applicable closed form, or NotApplicableError when no formula regime holds."""
    part = neighbor_partition(g, x, y)
    if part.all_empty():
        return _girth6_from_partition(g, x, y)
    if not part.delta:
        colors, _ = two_coloring(g)
        if colors is not None:
            return _bipartite_from_partition(g, x, y, part)
        if not part.n1_x and not part.n1_y and girth_at_least(g, 5):
            return _girth5_from_partition(g, x, y, part)
    raise NotApplicableError(
        "no closed-form regime applies to this edge",
        witness=_partition_witness(part),
    )


def curvature_all(
    g: Graph,
    *,
    method: str = "auto",
    verify: bool = False,
    cap: int = DEFAULT_ORACLE_CAP,
) -> list[CurvatureResult]:
    """One result per edge in lexicographic (u, v) order."""
    if method not in ("auto", "lp", "formula"):
        raise ValueError(f"unknown method {method!r}")
    results = []
    for u, v in g.edges():
        if method == "auto":
            results.append(ricci_auto(g, u, v, verify=verify, cap=cap))
        elif method == "lp":
            results.append(ricci_lp(g, u, v, cap=cap))
        else:
            results.append(ricci_formula(g, u, v))
    return results


def bounds_to_dict(bounds: list[BoundPair]) -> dict:
    out = {}
    for bp in bounds:
        entry = {
            "lower": format_rational(bp.lower),
            "upper": format_rational(bp.upper),
            "lower_float": round(float(bp.lower), 6),
            "upper_float": round(float(bp.upper), 6),
        }
        if bp.note is not None:
            entry["note"] = bp.note
        out[bp.source] = entry
    return out


def result_to_dict(
    result: CurvatureResult, bounds: list[BoundPair] | None = None
) -> dict:
    """JSON-ready form: exact "p/q" string plus a display-only float."""
    payload = {
        "edge": [result.edge[0], result.edge[1]],
        "kappa": format_rational(result.kappa),
        "kappa_float": round(float(result.kappa), 6),
        "method": result.method,
    }
    if result.detail is not None:
        payload["detail"] = {
            "kappa0": format_rational(result.detail.kappa0),
            "kappa1": format_rational(result.detail.kappa1),
        }
    if bounds is not None:
        payload["bounds"] = bounds_to_dict(bounds)
    return payload
