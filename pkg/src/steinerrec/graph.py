"""Weighted API correlation graph built from app co-usage."""

from __future__ import annotations

import json
from collections import deque
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Iterable, Optional

from .corpus import Ecosystem, Query, normalize_keyword
from .errors import EmptyInputError, IntegrityError, ParseError, UncoverableKeywordError


class ApiGraph:
    """Undirected graph of APIs; each edge stores how many apps used both ends.

    The search cost of an edge is ``1 / count``. Only counts are stored, so
    the cost can be produced either as an exact ``Fraction`` or a float.
    Instances are treated as immutable once built.
    """

    def __init__(self, keywords: dict, adjacency: dict):
        self.keywords = keywords
        self.adj = adjacency
        index: dict = {}
        for v, kws in keywords.items():
            for k in kws:
                index.setdefault(k, set()).add(v)
        self.keyword_index = {k: frozenset(vs) for k, vs in index.items()}

    @classmethod
    def from_edges(cls, keywords: dict, edges: Iterable) -> "ApiGraph":
        kw = {v: frozenset(normalize_keyword(k) for k in ks) for v, ks in keywords.items()}
        adj: dict = {v: {} for v in kw}
        for u, v, count in edges:
            if u == v:
                raise IntegrityError(f"self-loop on vertex {u}")
            if u not in adj or v not in adj:
                raise IntegrityError(f"edge ({u}, {v}) references an unknown vertex")
            if int(count) < 1:
                raise IntegrityError(f"edge ({u}, {v}) has count {count} < 1")
            adj[u][v] = adj[v][u] = int(count)
        return cls(kw, adj)

    def __len__(self):
        return len(self.keywords)

    def __contains__(self, v):
        return v in self.keywords

    @property
    def vertices(self) -> list:
        return sorted(self.keywords)

    def neighbors(self, v) -> dict:
        return self.adj[v]

    def count(self, u, v) -> int:
        return self.adj[u][v]

    def cost(self, u, v) -> Fraction:
        return Fraction(1, self.adj[u][v])

    def edges(self):
        """Yield ``(u, v, count)`` once per undirected edge with ``u < v``."""
        for u in sorted(self.adj):
            for v, c in sorted(self.adj[u].items()):
                if u < v:
                    yield u, v, c

    def n_edges(self) -> int:
        return sum(len(n) for n in self.adj.values()) // 2

    def subgraph(self, nodes: Iterable) -> "ApiGraph":
        """Induced restriction to ``nodes``; vertex ids and edge data unchanged."""
        keep = {v for v in nodes if v in self.keywords}
        kw = {v: self.keywords[v] for v in keep}
        adj = {v: {u: c for u, c in self.adj[v].items() if u in keep} for v in keep}
        return ApiGraph(kw, adj)

    def components(self) -> list:
        seen = set()
        comps = []
        for start in sorted(self.keywords):
            if start in seen:
                continue
            comp = {start}
            queue = deque([start])
            seen.add(start)
            while queue:
                v = queue.popleft()
                for u in self.adj[v]:
                    if u not in seen:
                        seen.add(u)
                        comp.add(u)
                        queue.append(u)
            comps.append(comp)
        return comps

    def to_dict(self) -> dict:
        return {
            "vertices": [{"id": v, "keywords": sorted(self.keywords[v])} for v in self.vertices],
            "edges": [{"u": u, "v": v, "count": c} for u, v, c in self.edges()],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ApiGraph":
        try:
            keywords = {int(r["id"]): r["keywords"] for r in data["vertices"]}
            edges = [(int(r["u"]), int(r["v"]), int(r["count"])) for r in data["edges"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad graph snapshot ({exc})") from exc
        return cls.from_edges(keywords, edges)

    def __eq__(self, other):
        return (
            isinstance(other, ApiGraph)
            and self.keywords == other.keywords
            and self.adj == other.adj
        )

    def __repr__(self):
        return f"ApiGraph(|V|={len(self)}, |E|={self.n_edges()})"


GraphView = ApiGraph


def build_graph(e: Ecosystem, exclude_app: Optional[int] = None) -> ApiGraph:
    """Vertices for every API some app invokes; one edge per co-used pair.

    Each app adds at most 1 to a pair's count. ``exclude_app`` drops one
    app's contribution (leave-one-out evaluation).
    """
    lookup = e.api_by_id()
    counts: dict = {}
    used = set()
    for app in e.apps:
        if app.id == exclude_app:
            continue
        members = sorted(app.apis)
        used.update(members)
        for pair in combinations(members, 2):
            counts[pair] = counts.get(pair, 0) + 1
    keywords = {a: lookup[a].keywords for a in used}
    adj: dict = {a: {} for a in used}
    for (u, v), c in counts.items():
        adj[u][v] = adj[v][u] = c
    return ApiGraph(keywords, adj)


def max_component(g: ApiGraph) -> ApiGraph:
    if len(g) == 0:
        raise EmptyInputError("graph has no vertices")
    comps = g.components()
    best = min(comps, key=lambda c: (-len(c), min(c)))
    if len(best) == len(g):
        return g
    return g.subgraph(best)


def keyword_nodes(g: ApiGraph, q: Query) -> list:
    """Vertex sets covering each query keyword, in query order."""
    out = []
    for k in q.keywords:
        nodes = g.keyword_index.get(k)
        if not nodes:
            raise UncoverableKeywordError(k)
        out.append(nodes)
    return out


def save_graph(g: ApiGraph, path) -> None:
    Path(path).write_text(json.dumps(g.to_dict(), indent=1) + "\n", encoding="utf-8")


def load_graph(path) -> ApiGraph:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from exc
    return ApiGraph.from_dict(data)
