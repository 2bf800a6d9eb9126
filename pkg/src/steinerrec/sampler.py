"""Random-walk subgraph sampling seeded from query keyword vertices."""

from __future__ import annotations

import json
import logging
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .corpus import Query
from .errors import NoValidSampleError, ParameterError
from .graph import ApiGraph, GraphView, keyword_nodes

log = logging.getLogger(__name__)

_MASK64 = (1 << 64) - 1


def stream_seed(seed: int, index: int, attempt: int = 0) -> int:
    """64-bit seed for one sample attempt, independent across indices."""
    ss = np.random.SeedSequence([seed & _MASK64, index, attempt])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


@dataclass(frozen=True)
class SubgraphSample:
    index: int
    nodes: frozenset
    view: GraphView
    seed: int

    def to_dict(self) -> dict:
        return {"index": self.index, "seed": self.seed, "nodes": sorted(self.nodes)}


def _neighbor_lists(g: ApiGraph) -> dict:
    cached = getattr(g, "_sorted_nbrs", None)
    if cached is None:
        cached = {v: sorted(n) for v, n in g.adj.items()}
        g._sorted_nbrs = cached
    return cached


def random_walk(g: ApiGraph, start, p: int, rng: random.Random) -> set:
    """Grow a vertex set of size ``p`` by walking from ``start``.

    Each step moves to a uniform neighbour of the current vertex. When every
    neighbour is already sampled the walker jumps to a uniform sampled vertex;
    the walk stops early once no sampled vertex has an unsampled neighbour.
    """
    nbrs = _neighbor_lists(g)
    sampled = {start}
    order = [start]
    current = start
    while len(sampled) < p:
        options = nbrs[current]
        if all(u in sampled for u in options):
            if not any(u not in sampled for v in order for u in nbrs[v]):
                break
            current = order[rng.randrange(len(order))]
            continue
        nxt = options[rng.randrange(len(options))]
        if nxt not in sampled:
            sampled.add(nxt)
            order.append(nxt)
        current = nxt
    return sampled


def _covers(nodes, groups) -> bool:
    return all(not nodes.isdisjoint(group) for group in groups)


def draw_sample(g: ApiGraph, q: Query, p: int, seed: int, index: int, max_retries: int = 10) -> Optional[SubgraphSample]:
    """Sample ``index`` of a batch, or None if no attempt covered the query."""
    groups = keyword_nodes(g, q)
    starts = sorted(set().union(*groups))
    for attempt in range(max_retries + 1):
        s = stream_seed(seed, index, attempt)
        rng = random.Random(s)
        start = starts[rng.randrange(len(starts))]
        nodes = random_walk(g, start, p, rng)
        if _covers(nodes, groups):
            nodes = frozenset(nodes)
            return SubgraphSample(index, nodes, g.subgraph(nodes), s)
    return None


def sample_subgraphs(
    g: ApiGraph,
    q: Query,
    z: int = 100,
    p: int = 100,
    seed: int = 42,
    max_retries: int = 10,
    skipped: Optional[list] = None,
) -> list:
    """Draw ``z`` keyword-covering samples of at most ``p`` vertices each.

    Samples that fail coverage after ``max_retries`` fresh walks are dropped
    and their indices appended to ``skipped`` when given.
    """
    if z < 1:
        raise ParameterError(f"z must be >= 1, got {z}")
    if p < len(q):
        raise ParameterError(f"p={p} cannot host one vertex for each of {len(q)} keywords")
    keyword_nodes(g, q)
    out = []
    for i in range(z):
        sample = draw_sample(g, q, p, seed, i, max_retries)
        if sample is None:
            log.debug("sample %d skipped: keywords not covered after %d retries", i, max_retries)
            if skipped is not None:
                skipped.append(i)
            continue
        out.append(sample)
    if not out:
        raise NoValidSampleError(f"none of {z} samples covered query {list(q.keywords)}")
    return out


def dump_samples(samples, path) -> None:
    rows = [{"index": s.index, "seed": s.seed, "nodes": sorted(s.nodes)} for s in samples]
    Path(path).write_text(json.dumps(rows) + "\n", encoding="utf-8")


def mean_pairwise_jaccard_distance(samples) -> float:
    sets = [s.nodes for s in samples]
    if len(sets) < 2:
        return 0.0
    total, n = 0.0, 0
    for i in range(len(sets)):
        for j in range(i + 1, len(sets)):
            a, b = sets[i], sets[j]
            total += 1 - len(a & b) / len(a | b)
            n += 1
    return total / n
