"""Exact W1 transport between the two neighborhood measures of an edge.

Two independent routes compute the same number.  The primal route scales both
uniform measures by L = lcm(d_x, d_y) and solves an integral min-cost
transportation problem (total unimodularity makes the integer optimum the LP
optimum).  The dual route exhaustively maximizes sum f d(m_x - m_y) over
integer-valued 1-Lipschitz functions anchored at f(x) = 0.  verify_duality
runs both and insists they agree to the last bit.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .errors import DualityGapError, OracleCapExceededError
from .graph import CoreNeighborhood

DEFAULT_ORACLE_CAP = 18


@dataclass(frozen=True)
class TransportPlan:
    """A feasible transport plan: mass[i][j] moves rows[i] -> cols[j]."""

    rows: tuple[int, ...]
    cols: tuple[int, ...]
    mass: tuple[tuple[Fraction, ...], ...]

    def row_sums(self) -> tuple[Fraction, ...]:
        return tuple(sum(r, Fraction(0)) for r in self.mass)

    def col_sums(self) -> tuple[Fraction, ...]:
        return tuple(sum(col, Fraction(0)) for col in zip(*self.mass))


@dataclass(frozen=True)
class LipschitzWitness:
    """Integer-valued 1-Lipschitz function on the core attaining the dual optimum."""

    values: dict[int, int]
    objective: Fraction


@dataclass(frozen=True)
class W1Result:
    value: Fraction
    plan: TransportPlan | None
    witness: LipschitzWitness | None
    gap: Fraction | None


def solve_transportation(
    cost: list[list[int]], supply: list[int], demand: list[int]
) -> tuple[int, list[list[int]]]:
    """Exact integral min-cost transportation.

    cost is an R x C matrix of nonnegative integers, supply and demand are
    integer vectors with equal totals.  Successive shortest paths with node
    potentials; after each Dijkstra pass a blocking flow is pushed through the
    zero-reduced-cost subnetwork, so the number of Dijkstra passes is bounded
    by the largest path cost rather than the flow value.  The final potentials
    are an integer dual certificate and are checked against the primal cost
    before returning.
    """
    nr, nc = len(supply), len(demand)
    if sum(supply) != sum(demand):
        raise ValueError("supply and demand totals differ")
    if any(s < 0 for s in supply) or any(d < 0 for d in demand):
        raise ValueError("negative supply or demand")
    pot = [0] * (nr + nc)
    flow = [[0] * nc for _ in range(nr)]
    rem_s = list(supply)
    rem_d = list(demand)
    # insertion-ordered set of rows with positive flow into each column
    back: list[dict[int, None]] = [dict() for _ in range(nc)]
    remaining = sum(supply)

    while remaining > 0:
        # Dijkstra over the residual network from all rows with remaining supply.
        dist: dict[int, int] = {}
        heap = []
        for i in range(nr):
            if rem_s[i] > 0:
                heapq.heappush(heap, (0, i))
        target = -1
        dstar = 0
        while heap:
            d, node = heapq.heappop(heap)
            if node in dist:
                continue
            dist[node] = d
            if node >= nr:
                j = node - nr
                if rem_d[j] > 0:
                    target, dstar = j, d
                    break
                pj = pot[node]
                for i in back[j]:
                    w = pj - cost[i][j] - pot[i]
                    if i not in dist:
                        heapq.heappush(heap, (d + w, i))
            else:
                i = node
                ci = cost[i]
                pi = pot[i]
                for j in range(nc):
                    nj = nr + j
                    if nj not in dist:
                        w = ci[j] + pi - pot[nj]
                        heapq.heappush(heap, (d + w, nj))
        if target < 0:
            raise RuntimeError("transportation problem infeasible")
        for node in range(nr + nc):
            dn = dist.get(node)
            pot[node] += dn if dn is not None and dn <= dstar else dstar

        # Push a blocking flow through the admissible (zero reduced cost) arcs.
        while remaining > 0:
            adm = [
                [j for j in range(nc) if cost[i][j] + pot[i] - pot[nr + j] == 0]
                for i in range(nr)
            ]
            level = [-1] * (nr + nc)
            queue = []
            for i in range(nr):
                if rem_s[i] > 0:
                    level[i] = 0
                    queue.append(i)
            qi = 0
            sink_seen = False
            while qi < len(queue):
                node = queue[qi]
                qi += 1
                if node < nr:
                    for j in adm[node]:
                        if level[nr + j] < 0:
                            level[nr + j] = level[node] + 1
                            queue.append(nr + j)
                            if rem_d[j] > 0:
                                sink_seen = True
                else:
                    j = node - nr
                    for i in list(back[j]):
                        if (
                            level[i] < 0
                            and flow[i][j] > 0
                            and cost[i][j] + pot[i] - pot[nr + j] == 0
                        ):
                            level[i] = level[node] + 1
                            queue.append(i)
            if not sink_seen:
                break
            ptr_row = [0] * nr
            ptr_col = [0] * nc
            back_snapshot = [list(back[j]) for j in range(nc)]

            def push_row(i: int, amount: int) -> int:
                while ptr_row[i] < len(adm[i]):
                    j = adm[i][ptr_row[i]]
                    if level[nr + j] == level[i] + 1:
                        got = push_col(j, amount)
                        if got > 0:
                            flow[i][j] += got
                            back[j][i] = None
                            return got
                    ptr_row[i] += 1
                return 0

            def push_col(j: int, amount: int) -> int:
                if rem_d[j] > 0:
                    got = min(amount, rem_d[j])
                    rem_d[j] -= got
                    return got
                snap = back_snapshot[j]
                while ptr_col[j] < len(snap):
                    i2 = snap[ptr_col[j]]
                    if (
                        level[i2] == level[nr + j] + 1
                        and flow[i2][j] > 0
                        and cost[i2][j] + pot[i2] - pot[nr + j] == 0
                    ):
                        got = push_row(i2, min(amount, flow[i2][j]))
                        if got > 0:
                            flow[i2][j] -= got
                            if flow[i2][j] == 0:
                                del back[j][i2]
                            return got
                    ptr_col[j] += 1
                return 0

            for i in range(nr):
                while rem_s[i] > 0:
                    got = push_row(i, rem_s[i])
                    if got == 0:
                        break
                    rem_s[i] -= got
                    remaining -= got

    total = sum(
        flow[i][j] * cost[i][j] for i in range(nr) for j in range(nc) if flow[i][j]
    )
    # Certify optimality: potentials form a feasible dual with matching objective.
    for i in range(nr):
        for j in range(nc):
            rc = cost[i][j] + pot[i] - pot[nr + j]
            if rc < 0 or (flow[i][j] > 0 and rc != 0):
                raise RuntimeError("transport solver lost complementary slackness")
    dual = sum(demand[j] * pot[nr + j] for j in range(nc)) - sum(
        supply[i] * pot[i] for i in range(nr)
    )
    if dual != total:
        raise RuntimeError("transport dual certificate does not match primal cost")
    return total, flow


def _primal_flow(core: CoreNeighborhood) -> tuple[Fraction, list[list[int]], int]:
    dx, dy = core.d_x, core.d_y
    scale = lcm(dx, dy)
    supply = [scale // dx] * dx
    demand = [scale // dy] * dy
    total, flow = solve_transportation(core.transport_costs(), supply, demand)
    return Fraction(total, scale), flow, scale


def w1_primal_value(core: CoreNeighborhood) -> Fraction:
    """W1 value only, skipping plan materialization (hot path for experiments)."""
    value, _, _ = _primal_flow(core)
    return value


def w1_primal(core: CoreNeighborhood) -> tuple[Fraction, TransportPlan]:
    """Exact W1 between m_x and m_y with an optimal transport plan."""
    value, flow, scale = _primal_flow(core)
    mass = tuple(
        tuple(Fraction(f, scale) for f in row) for row in flow
    )
    return value, TransportPlan(rows=core.rows, cols=core.cols, mass=mass)


def w1_dual_oracle(
    core: CoreNeighborhood, cap: int = DEFAULT_ORACLE_CAP
) -> tuple[Fraction, LipschitzWitness]:
    """Exhaustive dual search over integer 1-Lipschitz functions on the core.

    Vertices are enumerated in ascending id; every vertex's feasible values
    form an interval (an intersection of distance constraints against the
    already assigned prefix), tried best-contribution first under a
    branch-and-bound cutoff.  The first optimum found under that order is the
    returned witness.  Maximizes E_x(f) - E_y(f); the reverse orientation
    gives the same value via f -> -f.
    """
    verts = core.vertices
    n = len(verts)
    if n > cap:
        raise OracleCapExceededError(n, cap)
    dmat = core.local_distance()
    xi = core.index[core.x]
    dx, dy = core.d_x, core.d_y
    scale = lcm(dx, dy)
    in_x = set(core.graph.neighbors(core.x))
    in_y = set(core.graph.neighbors(core.y))
    coef = [
        (scale // dx if v in in_x else 0) - (scale // dy if v in in_y else 0)
        for v in verts
    ]
    lo = [-dmat[xi][i] for i in range(n)]
    hi = [dmat[xi][i] for i in range(n)]
    vals = [0] * n
    best: int | None = None
    best_vals: list[int] | None = None

    def extend(i: int, acc: int) -> None:
        nonlocal best, best_vals
        if i == n:
            if best is None or acc > best:
                best = acc
                best_vals = vals.copy()
            return
        if best is not None:
            bound = acc
            for k in range(i, n):
                ck = coef[k]
                bound += ck * (hi[k] if ck > 0 else lo[k])
            if bound <= best:
                return
        ci = coef[i]
        if lo[i] > hi[i]:
            return
        if ci > 0:
            candidates = range(hi[i], lo[i] - 1, -1)
        else:
            candidates = range(lo[i], hi[i] + 1)
        di = dmat[i]
        for t in candidates:
            vals[i] = t
            undo = []
            feasible = True
            for k in range(i + 1, n):
                d = di[k]
                nlo, nhi = t - d, t + d
                olo, ohi = lo[k], hi[k]
                if nlo > olo or nhi < ohi:
                    undo.append((k, olo, ohi))
                    if nlo > olo:
                        lo[k] = nlo
                    if nhi < ohi:
                        hi[k] = nhi
                    if lo[k] > hi[k]:
                        feasible = False
                        break
            if feasible:
                extend(i + 1, acc + ci * t)
            for k, olo, ohi in undo:
                lo[k] = olo
                hi[k] = ohi

    extend(0, 0)
    assert best is not None and best_vals is not None
    value = Fraction(best, scale)
    witness = LipschitzWitness(
        values={v: best_vals[i] for i, v in enumerate(verts)}, objective=value
    )
    return value, witness


def verify_duality(core: CoreNeighborhood, cap: int = DEFAULT_ORACLE_CAP) -> W1Result:
    """Run both transport routes; agreement is mandatory, a gap is an internal bug."""
    primal_value, plan = w1_primal(core)
    dual_value, witness = w1_dual_oracle(core, cap)
    if primal_value != dual_value:
        raise DualityGapError(primal_value, dual_value, plan, witness)
    return W1Result(value=primal_value, plan=plan, witness=witness, gap=Fraction(0))
