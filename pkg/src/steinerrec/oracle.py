"""Exhaustive group Steiner solver for small instances (test oracle)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional

from .corpus import Query
from .errors import CapacityError
from .graph import GraphView
from .steiner import SteinerResult


@dataclass(frozen=True)
class OracleLimits:
    max_vertices: int = 15
    max_keywords: int = 5


def _induced_mst(view: GraphView, subset) -> Optional[tuple]:
    """Kruskal over the subgraph induced by ``subset``; None if disconnected."""
    members = set(subset)
    edges = sorted(
        (Fraction(1, c), u, v)
        for u in members
        for v, c in view.adj[u].items()
        if v in members and u < v
    )
    parent = {v: v for v in members}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    chosen, total = [], Fraction(0)
    for w, u, v in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            chosen.append((u, v))
            total += w
    if len(chosen) != len(members) - 1:
        return None
    return total, frozenset(chosen)


def all_optimal_sets(view: GraphView, q: Query, lim: OracleLimits = OracleLimits()) -> tuple:
    """Return ``(cost, [vertex sets])`` of every optimal cover, or ``(None, [])``."""
    n = len(view)
    if n > lim.max_vertices:
        raise CapacityError(f"view has {n} vertices; oracle limit is {lim.max_vertices}")
    if len(q) > lim.max_keywords:
        raise CapacityError(f"query has {len(q)} keywords; oracle limit is {lim.max_keywords}")
    need = set(q.keywords)
    verts = view.vertices
    best_cost, best_sets = None, []
    for size in range(1, n + 1):
        for subset in combinations(verts, size):
            covered = set().union(*(view.keywords[v] for v in subset))
            if not need <= covered:
                continue
            mst = _induced_mst(view, subset)
            if mst is None:
                continue
            cost = mst[0]
            if best_cost is None or cost < best_cost:
                best_cost, best_sets = cost, [(frozenset(subset), mst[1])]
            elif cost == best_cost:
                best_sets.append((frozenset(subset), mst[1]))
    return best_cost, best_sets


def brute_force_group_steiner(
    view: GraphView, q: Query, lim: OracleLimits = OracleLimits()
) -> Optional[SteinerResult]:
    """Minimum over covering connected vertex subsets of the induced MST cost.

    Ties resolve to the lexicographically smallest sorted vertex sequence.
    """
    cost, sets = all_optimal_sets(view, q, lim)
    if cost is None:
        return None
    nodes, edges = min(sets, key=lambda item: sorted(item[0]))
    return SteinerResult(vertices=nodes, edges=edges, cost=cost, covered=q.keywords)
