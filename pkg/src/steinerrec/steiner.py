"""Minimum group Steiner tree search by best-first dynamic programming.

A search state is a tree rooted at a vertex together with the exact set of
query keywords its vertices cover (a bit mask over query positions). States
are expanded cheapest-first through two transitions:

* growth: attach a neighbour ``u`` of the root, re-rooting the tree at ``u``;
* merging: fuse two settled trees sharing only their root, when each one
  covers a keyword the other lacks.

Only one state per ``(root, mask)`` is kept, the cheapest (ties go to the
lexicographically smaller vertex set). Edge costs are ``1 / count``; they are
scaled to integers by the lcm of the counts in the view, so every comparison
is exact.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .corpus import Query
from .errors import CapacityError
from .graph import GraphView

R_MAX = 10


@dataclass(frozen=True)
class SteinerResult:
    vertices: frozenset
    edges: frozenset
    cost: Fraction
    covered: tuple
    root: Optional[int] = None

    @property
    def compatibility(self) -> float:
        """Reciprocal of the total cost; ``inf`` marks a single-vertex tree."""
        if self.cost == 0:
            return math.inf
        return float(1 / self.cost)

    @property
    def sorted_vertices(self) -> tuple:
        return tuple(sorted(self.vertices))


class _State:
    __slots__ = ("cost", "root", "mask", "nodes", "prov", "seq")

    def __init__(self, cost, root, mask, nodes, prov, seq):
        self.cost = cost
        self.root = root
        self.mask = mask
        self.nodes = nodes
        # None for a single vertex, (child, None) after growth, (left, right) after a merge
        self.prov = prov
        self.seq = seq


@dataclass
class SearchStats:
    """Counters and the dequeued cost sequence of one search, for diagnostics."""

    pushed: int = 0
    popped: int = 0
    merges: list = field(default_factory=list)
    dequeued: list = field(default_factory=list)
    record: bool = False


def _edge_scale(view: GraphView) -> int:
    scale = 1
    for nbrs in view.adj.values():
        for c in nbrs.values():
            scale = math.lcm(scale, c)
    return scale


def _query_masks(view: GraphView, q: Query) -> dict:
    pos = {k: i for i, k in enumerate(q.keywords)}
    masks = {}
    for v, kws in view.keywords.items():
        m = 0
        for k in kws:
            i = pos.get(k)
            if i is not None:
                m |= 1 << i
        masks[v] = m
    return masks


def _edges_of(state: _State) -> set:
    edges = set()
    stack = [state]
    while stack:
        s = stack.pop()
        if s.prov is None:
            continue
        left, right = s.prov
        if right is None:
            u, v = s.root, left.root
            edges.add((u, v) if u < v else (v, u))
            stack.append(left)
        else:
            stack.append(left)
            stack.append(right)
    return edges


def _check_query(q: Query, r_max: int):
    if len(q) == 0:
        raise CapacityError("empty query")
    if len(q) > r_max:
        raise CapacityError(f"query has {len(q)} keywords; at most {r_max} supported")


class _Search:
    def __init__(self, view: GraphView, q: Query, dominance: bool = True, stats: Optional[SearchStats] = None):
        self.view = view
        self.q = q
        self.full = (1 << len(q)) - 1
        self.scale = _edge_scale(view)
        self.kmask = _query_masks(view, q)
        self.dominance = dominance
        self.stats = stats
        self.heap: list = []
        self.best: dict = {}
        self.settled_keys: set = set()
        self.settled_at: dict = {}
        self.seen_trees: set = set()
        self.seq = 0
        for v in sorted(view.keywords):
            m = self.kmask[v]
            if m:
                self._offer(0, v, m, frozenset((v,)), None)

    def _dominated(self, cost, key):
        """True if a state for ``key`` at ``cost`` cannot beat what is known."""
        if key in self.settled_keys:
            return True
        cur = self.best.get(key)
        return cur is not None and cost > cur.cost

    def _offer(self, cost, root, mask, nodes, prov):
        key = (root, mask)
        if self.dominance:
            if self._dominated(cost, key):
                return
            cur = self.best.get(key)
            if cur is not None and cost == cur.cost and sorted(nodes) >= sorted(cur.nodes):
                return
        self.seq += 1
        state = _State(cost, root, mask, nodes, prov, self.seq)
        if not self.dominance:
            ident = (root, frozenset(_edges_of(state)), nodes)
            if ident in self.seen_trees:
                return
            self.seen_trees.add(ident)
        self.best[key] = state
        heapq.heappush(self.heap, (cost, self.seq, state))
        if self.stats is not None:
            self.stats.pushed += 1

    def pop(self) -> Optional[_State]:
        while self.heap:
            cost, seq, state = heapq.heappop(self.heap)
            if self.dominance:
                key = (state.root, state.mask)
                if self.best.get(key) is not state or key in self.settled_keys:
                    continue
                self.settled_keys.add(key)
            if self.stats is not None:
                self.stats.popped += 1
                if self.stats.record:
                    self.stats.dequeued.append(cost)
            return state
        return None

    def peek_cost(self):
        while self.heap:
            cost, seq, state = self.heap[0]
            if self.dominance and (
                self.best.get((state.root, state.mask)) is not state
                or (state.root, state.mask) in self.settled_keys
            ):
                heapq.heappop(self.heap)
                continue
            return cost
        return None

    def expand(self, s: _State):
        v, X, nodes, cost = s.root, s.mask, s.nodes, s.cost
        dom = self.dominance
        scale, kmask = self.scale, self.kmask
        for u, count in self.view.adj[v].items():
            if u in nodes:
                continue
            nc = cost + scale // count
            m = X | kmask[u]
            if dom and self._dominated(nc, (u, m)):
                continue
            self._offer(nc, u, m, nodes | {u}, (s, None))
        peers = self.settled_at.setdefault(v, [])
        for t in peers:
            union = X | t.mask
            if union == X or union == t.mask:
                continue
            nc = cost + t.cost
            if dom and self._dominated(nc, (v, union)):
                continue
            if len(nodes & t.nodes) != 1:
                continue
            if self.stats is not None and self.stats.record:
                self.stats.merges.append((X, t.mask))
            self._offer(nc, v, union, nodes | t.nodes, (s, t))
        peers.append(s)

    def result(self, s: _State) -> SteinerResult:
        return SteinerResult(
            vertices=s.nodes,
            edges=frozenset(_edges_of(s)),
            cost=Fraction(s.cost, self.scale),
            covered=self.q.keywords,
            root=s.root,
        )


def min_group_steiner(
    view: GraphView,
    q: Query,
    r_max: int = R_MAX,
    dominance: bool = True,
    stats: Optional[SearchStats] = None,
) -> Optional[SteinerResult]:
    """Cheapest tree in ``view`` touching at least one vertex per keyword of ``q``.

    Returns ``None`` when no connected cover exists. Among equal-cost optima
    the lexicographically smallest sorted vertex sequence found is returned.
    """
    _check_query(q, r_max)
    search = _Search(view, q, dominance=dominance, stats=stats)
    found = []
    while True:
        s = search.pop()
        if s is None:
            break
        if found and s.cost > found[0].cost:
            break
        if s.mask == search.full:
            found.append(s)
            nxt = search.peek_cost()
            if nxt is None or nxt > s.cost:
                break
            continue
        search.expand(s)
    if not found:
        return None
    return search.result(min(found, key=lambda s: sorted(s.nodes)))


def search_full_trees(
    view: GraphView,
    q: Query,
    limit: int,
    r_max: int = R_MAX,
) -> list:
    """Up to ``limit`` full-coverage trees, cheapest first, distinct by vertex set.

    Full trees are collected as they leave the queue and are not expanded
    further, so each root contributes at most its own cheapest full tree.
    """
    _check_query(q, r_max)
    if limit < 1:
        return []
    search = _Search(view, q)
    by_nodes: dict = {}
    last_cost = None
    while True:
        if len(by_nodes) >= limit:
            nxt = search.peek_cost()
            if nxt is None or nxt > last_cost:
                break
        s = search.pop()
        if s is None:
            break
        if s.mask == search.full:
            prev = by_nodes.get(s.nodes)
            if prev is None or s.cost < prev.cost:
                by_nodes[s.nodes] = s
            last_cost = s.cost
            continue
        search.expand(s)
    ranked = sorted(by_nodes.values(), key=lambda s: (s.cost, sorted(s.nodes)))
    return [search.result(s) for s in ranked[:limit]]


def verify_tree(view: GraphView, q: Query, res: SteinerResult) -> None:
    """Raise ``AssertionError`` unless ``res`` is a valid covering tree of ``view``."""
    verts, edges = set(res.vertices), set(res.edges)
    assert verts, "empty tree"
    assert len(edges) == len(verts) - 1, "edge count is not |V| - 1"
    parent = {v: v for v in verts}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    total = Fraction(0)
    for u, v in edges:
        assert u in verts and v in verts, "edge leaves the vertex set"
        assert v in view.adj[u], f"({u}, {v}) is not an edge of the view"
        total += view.cost(u, v)
        ru, rv = find(u), find(v)
        assert ru != rv, "cycle"
        parent[ru] = rv
    assert len({find(v) for v in verts}) == 1, "disconnected"
    assert total == res.cost, f"cost {res.cost} != edge sum {total}"
    covered = set().union(*(view.keywords[v] for v in verts))
    missing = [k for k in q.keywords if k not in covered]
    assert not missing, f"uncovered keywords {missing}"
