"""Exact optimal-transport and set liftings used by every metric here.

Two ground costs occur: the discrete 0/1 cost, and its quotient by an
idempotent canonicalization (items are free to move within a class, cost 1
across classes).  For both, the optimal transport cost between two
distributions collapses to total variation on the (canonicalized) supports,
which is the production path.  A generic min-cost-flow solver over exact
rationals is kept alongside as an independent oracle and witness producer.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .core import Dist


@dataclass(frozen=True)
class Discrete:
    """0/1 ground cost: distance 0 exactly on equal items."""

    def canonical(self, item):
        return item

    def distance(self, x, y) -> Fraction:
        return Fraction(0) if x == y else Fraction(1)


@dataclass(frozen=True)
class DiscreteQuotient:
    """0/1 ground cost on classes of an idempotent canonicalization."""

    canonicalize: Callable

    def canonical(self, item):
        return self.canonicalize(item)

    def distance(self, x, y) -> Fraction:
        return Fraction(0) if self.canonicalize(x) == self.canonicalize(y) else Fraction(1)


GroundMetric = Discrete | DiscreteQuotient
DISCRETE = Discrete()


def kantorovich_01(p: Dist, q: Dist, metric: GroundMetric = DISCRETE) -> Fraction:
    """Minimum cost of transporting ``p`` onto ``q`` under a 0/1 ground cost.

    Since moving mass within a canonical class is free and across classes
    costs 1, the optimum is the total variation distance between the
    canonicalized distributions: the surplus mass that must cross classes.
    """
    if not p.is_probability or not q.is_probability:
        raise ValueError("kantorovich_01 requires probability distributions")
    ph = p.pushforward(metric.canonical)
    qh = q.pushforward(metric.canonical)
    surplus = Fraction(0)
    for key, weight in ph.items_sorted:
        gap = weight - qh.get(key, Fraction(0))
        if gap > 0:
            surplus += gap
    return surplus


@dataclass(frozen=True)
class Matching:
    """A transport plan: joint weights whose marginals are the two inputs."""

    joint: Mapping[tuple, Fraction]

    def cost(self, cost_fn: Callable) -> Fraction:
        return sum((w * cost_fn(x, y) for (x, y), w in self.joint.items()), Fraction(0))

    def is_valid_for(self, p: Dist, q: Dist) -> bool:
        left: dict = {}
        right: dict = {}
        for (x, y), w in self.joint.items():
            if w < 0:
                return False
            left[x] = left.get(x, Fraction(0)) + w
            right[y] = right.get(y, Fraction(0)) + w
        return left == dict(p.items_sorted) and right == dict(q.items_sorted)


class _FlowNetwork:
    """Tiny exact min-cost-flow network (successive shortest paths with
    potentials; Dijkstra on reduced costs, all arithmetic in Fractions)."""

    def __init__(self, n: int):
        self.n = n
        self.adj: list[list[int]] = [[] for _ in range(n)]
        # Parallel edge arrays: to, capacity, cost.
        self.to: list[int] = []
        self.cap: list[Fraction] = []
        self.cost: list[Fraction] = []

    def add_edge(self, u: int, v: int, cap: Fraction, cost: Fraction) -> int:
        idx = len(self.to)
        self.adj[u].append(idx)
        self.to.append(v)
        self.cap.append(cap)
        self.cost.append(cost)
        self.adj[v].append(idx + 1)
        self.to.append(u)
        self.cap.append(Fraction(0))
        self.cost.append(-cost)
        return idx

    def min_cost_flow(self, source: int, sink: int, amount: Fraction) -> Fraction:
        total_cost = Fraction(0)
        potential = [Fraction(0)] * self.n
        remaining = amount
        while remaining > 0:
            dist: list[Fraction | None] = [None] * self.n
            parent_edge = [-1] * self.n
            dist[source] = Fraction(0)
            counter = 0
            heap: list[tuple[Fraction, int, int]] = [(Fraction(0), counter, source)]
            while heap:
                d, _, u = heapq.heappop(heap)
                if dist[u] is None or d > dist[u]:
                    continue
                for idx in self.adj[u]:
                    if self.cap[idx] <= 0:
                        continue
                    v = self.to[idx]
                    nd = d + self.cost[idx] + potential[u] - potential[v]
                    if dist[v] is None or nd < dist[v]:
                        dist[v] = nd
                        parent_edge[v] = idx
                        counter += 1
                        heapq.heappush(heap, (nd, counter, v))
            if dist[sink] is None:
                raise ValueError("flow demand is infeasible")
            for v in range(self.n):
                if dist[v] is not None:
                    potential[v] += dist[v]
            # Bottleneck along the shortest path, then push.
            push = remaining
            v = sink
            while v != source:
                idx = parent_edge[v]
                push = min(push, self.cap[idx])
                v = self.to[idx ^ 1]
            v = sink
            while v != source:
                idx = parent_edge[v]
                self.cap[idx] -= push
                self.cap[idx ^ 1] += push
                total_cost += push * self.cost[idx]
                v = self.to[idx ^ 1]
            remaining -= push
        return total_cost


def kantorovich_oracle(
    p: Dist,
    q: Dist,
    cost: Callable,
    with_matching: bool = False,
) -> "Fraction | tuple[Fraction, Matching]":
    """Exact optimal transport cost by min-cost flow on the support graph.

    ``cost`` maps a pair of items to a nonnegative rational.  Independent of
    ``kantorovich_01``; used to vet it and to exhibit an optimal plan.
    """
    if not p.is_probability or not q.is_probability:
        raise ValueError("kantorovich_oracle requires probability distributions")
    left = p.support
    right = q.support
    n = len(left) + len(right) + 2
    source = n - 2
    sink = n - 1
    net = _FlowNetwork(n)
    for i, x in enumerate(left):
        net.add_edge(source, i, p[x], Fraction(0))
    pair_edges: dict[int, tuple] = {}
    for i, x in enumerate(left):
        for j, y in enumerate(right):
            c = Fraction(cost(x, y))
            if c < 0:
                raise ValueError("ground costs must be nonnegative")
            idx = net.add_edge(i, len(left) + j, Fraction(1), c)
            pair_edges[idx] = (x, y)
    for j, y in enumerate(right):
        net.add_edge(len(left) + j, sink, q[y], Fraction(0))
    value = net.min_cost_flow(source, sink, Fraction(1))
    if not with_matching:
        return value
    joint = {}
    for idx, pair in pair_edges.items():
        flow = net.cap[idx ^ 1]  # reverse capacity equals pushed flow
        if flow > 0:
            joint[pair] = flow
    return value, Matching(joint)


def hausdorff_witness(
    items_a: Sequence,
    items_b: Sequence,
    distance: Callable,
) -> tuple[Fraction, "tuple[int, int] | None"]:
    """Hausdorff lifting with an attaining index pair.

    Conventions for empty sets: the inner infimum over an empty set is 1 and
    the outer supremum over an empty set is 0.  The witness is the first
    (max-side, then min-side) pair in input order realizing the value; the
    first set wins ties between the two directions.
    """
    if not items_a and not items_b:
        return Fraction(0), None
    if not items_a or not items_b:
        return Fraction(1), None

    def directed(xs: Sequence, ys: Sequence) -> tuple[Fraction, int, int]:
        best = None
        for i, x in enumerate(xs):
            row_min = None
            row_arg = 0
            for j, y in enumerate(ys):
                d = distance(x, y)
                if row_min is None or d < row_min:
                    row_min, row_arg = d, j
            if best is None or row_min > best[0]:
                best = (row_min, i, row_arg)
        return best

    d_ab, i_ab, j_ab = directed(items_a, items_b)
    d_ba, j_ba, i_ba = directed(items_b, items_a)
    if d_ab >= d_ba:
        return d_ab, (i_ab, j_ab)
    return d_ba, (i_ba, j_ba)


def hausdorff(items_a: Sequence, items_b: Sequence, distance: Callable) -> Fraction:
    """max of the two directed sup-inf distances between finite sets;
    ``distance`` must be symmetric on the union."""
    return hausdorff_witness(list(items_a), list(items_b), distance)[0]
