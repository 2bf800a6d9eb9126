"""Accuracy- or compatibility-ordered top-K selection under a diversity threshold."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from .errors import DomainError, EmptyResultError, ParameterError

EVALUATION = "evaluation"
DEPLOYMENT = "deployment"
PERFECT = "perfect"


def pairwise_diversity(a: Iterable, b: Iterable) -> float:
    """``1 - |a & b| / (|a| + |b|)``; 0.5 for identical sets, 1.0 for disjoint ones."""
    a, b = set(a), set(b)
    if not a or not b:
        raise DomainError("diversity is undefined for an empty API set")
    return 1 - len(a & b) / (len(a) + len(b))


@dataclass(frozen=True)
class Recommendation:
    apis: frozenset
    cost: Fraction
    sample_index: Optional[int] = None
    score: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "apis", frozenset(self.apis))
        if not self.apis:
            raise DomainError("a recommendation needs at least one API")

    @property
    def compatibility(self) -> float:
        return math.inf if self.cost == 0 else float(1 / Fraction(self.cost))

    def to_dict(self, names: Optional[dict] = None) -> dict:
        out = {"apis": sorted(self.apis)}
        if names is not None:
            out["names"] = [names.get(a, "") for a in sorted(self.apis)]
        comp = self.compatibility
        out["cost"] = float(self.cost)
        out["compatibility"] = PERFECT if math.isinf(comp) else comp
        out["score"] = PERFECT if self.score is not None and math.isinf(self.score) else self.score
        out["sample_index"] = self.sample_index
        return out


@dataclass(frozen=True)
class RecommendationSet:
    items: tuple
    theta: float
    scoring_mode: str
    diagnostics: dict = field(default_factory=dict, compare=False)

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    @property
    def lists(self) -> list:
        return [r.apis for r in self.items]

    def to_dict(self, names: Optional[dict] = None) -> dict:
        return {
            "theta": self.theta,
            "scoring_mode": self.scoring_mode,
            "k": len(self.items),
            "lists": [r.to_dict(names) for r in self.items],
        }


def _score(rec: Recommendation, mode: str, truth) -> float:
    if mode == EVALUATION:
        return len(rec.apis & truth) / len(rec.apis)
    return rec.compatibility


def rank_and_diversify(
    candidates: Iterable[Recommendation],
    K: int = 10,
    theta: float = 0.5,
    mode: str = DEPLOYMENT,
    ground_truth: Optional[Iterable] = None,
) -> RecommendationSet:
    """Rank candidates and keep up to ``K`` whose pairwise diversity exceeds ``theta``.

    Evaluation mode scores by precision against ``ground_truth``; deployment
    mode scores by compatibility. Ties fall back to lower cost, then to the
    sorted API id sequence. Selection is a single greedy pass in rank order.
    """
    if K < 1:
        raise ParameterError(f"K must be >= 1, got {K}")
    if not 0 <= theta <= 1:
        raise ParameterError(f"theta must lie in [0, 1], got {theta}")
    if mode not in (EVALUATION, DEPLOYMENT):
        raise ParameterError(f"unknown scoring mode {mode!r}")
    truth = None
    if mode == EVALUATION:
        if not ground_truth:
            raise ParameterError("evaluation mode needs a non-empty ground truth")
        truth = frozenset(ground_truth)

    unique: dict = {}
    n_in = 0
    for c in candidates:
        n_in += 1
        prev = unique.get(c.apis)
        if prev is None or (c.cost, c.sample_index or 0) < (prev.cost, prev.sample_index or 0):
            unique[c.apis] = c
    scored = [
        Recommendation(c.apis, c.cost, c.sample_index, _score(c, mode, truth))
        for c in unique.values()
    ]
    scored.sort(key=lambda c: (-c.score, c.cost, sorted(c.apis)))

    chosen: list = []
    for c in scored:
        if len(chosen) == K:
            break
        if all(pairwise_diversity(c.apis, s.apis) > theta for s in chosen):
            chosen.append(c)
    if not chosen:
        raise EmptyResultError("no candidate survived ranking", candidates=n_in, unique=len(unique))
    return RecommendationSet(
        tuple(chosen),
        theta,
        mode,
        diagnostics={"candidates": n_in, "unique": len(unique)},
    )
