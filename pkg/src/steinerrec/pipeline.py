"""Sample -> search -> rank composition, the no-sampling baseline, and evaluation."""

from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from . import metrics
from .corpus import Ecosystem, Query
from .errors import NoValidSampleError, ParameterError, RecommenderError
from .graph import ApiGraph, build_graph, keyword_nodes, max_component
from .ranker import DEPLOYMENT, EVALUATION, Recommendation, rank_and_diversify
from .sampler import draw_sample
from .steiner import min_group_steiner, search_full_trees

log = logging.getLogger(__name__)

DEFAULTS = dict(z=100, p=100, K=10, theta=0.5, seed=42)


@dataclass(frozen=True)
class SampleOutcome:
    index: int
    seed: Optional[int]
    nodes: Optional[frozenset]
    tree: object
    seconds: float


def _solve_one(g: ApiGraph, q: Query, p: int, seed: int, index: int, max_retries: int) -> SampleOutcome:
    t0 = time.perf_counter()
    sample = draw_sample(g, q, p, seed, index, max_retries)
    if sample is None:
        return SampleOutcome(index, None, None, None, time.perf_counter() - t0)
    tree = min_group_steiner(sample.view, q)
    return SampleOutcome(index, sample.seed, sample.nodes, tree, time.perf_counter() - t0)


_worker_graph: Optional[ApiGraph] = None


def _init_worker(g):
    global _worker_graph
    _worker_graph = g


def _solve_in_worker(args):
    q, p, seed, index, max_retries = args
    return _solve_one(_worker_graph, q, p, seed, index, max_retries)


def solve_samples(
    g: ApiGraph,
    q: Query,
    z: int,
    p: int,
    seed: int,
    max_retries: int = 10,
    workers: int = 1,
) -> list:
    """One optimal tree per sample index ``0..z-1``, in index order.

    Sample ``i`` depends only on ``(g, q, p, seed, i)``, so serial and
    parallel runs agree and a run with larger ``z`` extends a smaller one.
    """
    if z < 1:
        raise ParameterError(f"z must be >= 1, got {z}")
    if p < len(q):
        raise ParameterError(f"p={p} cannot host one vertex for each of {len(q)} keywords")
    keyword_nodes(g, q)
    if workers <= 1:
        return [_solve_one(g, q, p, seed, i, max_retries) for i in range(z)]
    tasks = [(q, p, seed, i, max_retries) for i in range(z)]
    with ProcessPoolExecutor(max_workers=workers, initializer=_init_worker, initargs=(g,)) as pool:
        out = list(pool.map(_solve_in_worker, tasks, chunksize=max(1, z // (4 * workers))))
    return sorted(out, key=lambda o: o.index)


def candidates_from(outcomes: Iterable[SampleOutcome]) -> list:
    return [
        Recommendation(o.tree.vertices, o.tree.cost, o.index)
        for o in outcomes
        if o.tree is not None
    ]


def rank_outcomes(outcomes, K, theta, mode, ground_truth=None):
    outcomes = list(outcomes)
    cands = candidates_from(outcomes)
    if not cands:
        if all(o.nodes is None for o in outcomes):
            raise NoValidSampleError(f"none of {len(outcomes)} samples covered the query")
        raise NoValidSampleError("no sample contained a connected cover of the query")
    return rank_and_diversify(cands, K, theta, mode, ground_truth)


def recommend(
    g: ApiGraph,
    q: Query,
    z: int = 100,
    p: int = 100,
    K: int = 10,
    theta: float = 0.5,
    seed: int = 42,
    mode: str = DEPLOYMENT,
    ground_truth=None,
    max_retries: int = 10,
    workers: int = 1,
):
    """Full pipeline on a prebuilt graph; returns ``(RecommendationSet, outcomes)``."""
    outcomes = solve_samples(g, q, z, p, seed, max_retries, workers)
    return rank_outcomes(outcomes, K, theta, mode, ground_truth), outcomes


def baseline(
    g: ApiGraph,
    q: Query,
    K: int = 10,
    theta: float = 0.5,
    limit: int = 100,
    mode: str = DEPLOYMENT,
    ground_truth=None,
):
    """Rank the ``limit`` cheapest full trees of the whole graph (no sampling)."""
    keyword_nodes(g, q)
    trees = search_full_trees(g, q, limit)
    if not trees:
        raise NoValidSampleError("the graph has no connected cover of the query")
    cands = [Recommendation(t.vertices, t.cost, i) for i, t in enumerate(trees)]
    return rank_and_diversify(cands, K, theta, mode, ground_truth)


def instance_graph(e: Ecosystem, full: ApiGraph, app_id: int, leave_one_out: bool) -> ApiGraph:
    if not leave_one_out:
        return full
    return max_component(build_graph(e, exclude_app=app_id))


def evaluate_instance(
    g: ApiGraph,
    q: Query,
    truth,
    z_values: Sequence[int],
    p: int,
    K: int,
    theta: float,
    seed: int,
    app_id=None,
    timing: bool = True,
    workers: int = 1,
    max_retries: int = 10,
) -> list:
    """Metric reports for each ``z`` in ``z_values`` from one shared batch of samples."""
    z_max = max(z_values)
    outcomes = solve_samples(g, q, z_max, p, seed, max_retries, workers)
    reports = []
    for z in z_values:
        t0 = time.perf_counter()
        prefix = outcomes[:z]
        recs = rank_outcomes(prefix, K, theta, EVALUATION, truth)
        elapsed = time.perf_counter() - t0 + sum(o.seconds for o in prefix)
        reports.append(
            metrics.report(
                recs,
                truth,
                r=len(q),
                z=z,
                p=p,
                time_seconds=round(elapsed, 6) if timing else None,
                query=q.keywords,
                app_id=app_id,
            )
        )
    return reports


def evaluate(
    e: Ecosystem,
    pairs: Sequence,
    z_values: Sequence[int] = (100,),
    p: int = 100,
    K: int = 10,
    theta: float = 0.5,
    seed: int = 42,
    leave_one_out: bool = False,
    timing: bool = True,
    workers: int = 1,
    graph: Optional[ApiGraph] = None,
):
    """Yield ``(app_id, reports_or_error)`` per derived query, in input order."""
    full = graph if graph is not None else max_component(build_graph(e))
    for q, app in pairs:
        try:
            g = instance_graph(e, full, app.id, leave_one_out)
            reports = evaluate_instance(
                g, q, app.apis, z_values, p, K, theta, seed, app.id, timing, workers
            )
        except RecommenderError as exc:
            log.info("app %s failed: %s", app.id, exc)
            yield app.id, exc
            continue
        yield app.id, reports
