"""Evaluation measures for one recommendation instance."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from itertools import permutations
from typing import Optional, Sequence

from .errors import DomainError


def hmd(a, b) -> float:
    """Inter-list distance ``1 - |a & b| / (|a| + |b|)``."""
    a, b = set(a), set(b)
    if not a or not b:
        raise DomainError("hmd is undefined for an empty list")
    return 1 - len(a & b) / (len(a) + len(b))


def mild(lists: Sequence) -> float:
    """Mean hmd over all ordered pairs of distinct lists."""
    k = len(lists)
    if k < 2:
        raise DomainError(f"mild needs at least 2 lists, got {k}")
    total = sum(hmd(lists[i], lists[j]) for i, j in permutations(range(k), 2))
    return total / (k * (k - 1))


def milc(recs) -> tuple:
    """Mean of per-list ``1 / cost`` and the number of zero-cost lists left out.

    Returns ``(mean, n_perfect)``; the mean is ``None`` when every list is a
    zero-cost single API.
    """
    values, perfect = [], 0
    for r in recs:
        c = r.compatibility
        if math.isinf(c):
            perfect += 1
        else:
            values.append(c)
    if not values:
        return None, perfect
    return sum(values) / len(values), perfect


def _check(lists, truth):
    if len(lists) < 1:
        raise DomainError("need at least one recommendation list")
    if not truth:
        raise DomainError("ground truth is empty")
    if any(len(rl) == 0 for rl in lists):
        raise DomainError("empty recommendation list")


def mp(lists: Sequence, truth) -> float:
    truth = set(truth)
    _check(lists, truth)
    return sum(len(set(rl) & truth) / len(set(rl)) for rl in lists) / len(lists)


def mr(lists: Sequence, truth) -> float:
    truth = set(truth)
    _check(lists, truth)
    return sum(len(set(rl) & truth) / len(truth) for rl in lists) / len(lists)


def harmonic(mp_value: float, mild_value: float) -> float:
    """F2-style blend weighting precision: ``5 * mp * mild / (4 * mp + mild)``."""
    denom = 4 * mp_value + mild_value
    if denom == 0:
        return 0.0
    return 5 * mp_value * mild_value / denom


@dataclass
class MetricsReport:
    mild: Optional[float]
    milc: Optional[float]
    mp: float
    mr: float
    harmonic: Optional[float]
    time_seconds: Optional[float]
    k: int
    r: int
    z: int
    p: int
    query: Optional[list] = None
    app_id: Optional[int] = None
    milc_perfect: int = 0

    def to_dict(self) -> dict:
        return asdict(self)


def report(recs, truth, r: int, z: int, p: int, time_seconds=None, query=None, app_id=None) -> MetricsReport:
    lists = [rec.apis for rec in recs]
    m_p, m_r = mp(lists, truth), mr(lists, truth)
    m_ild = mild(lists) if len(lists) >= 2 else None
    m_ilc, perfect = milc(recs)
    return MetricsReport(
        mild=m_ild,
        milc=m_ilc,
        mp=m_p,
        mr=m_r,
        harmonic=harmonic(m_p, m_ild) if m_ild is not None else None,
        time_seconds=time_seconds,
        k=len(lists),
        r=r,
        z=z,
        p=p,
        query=list(query) if query is not None else None,
        app_id=app_id,
        milc_perfect=perfect,
    )


def aggregate(reports: Sequence[MetricsReport]) -> dict:
    """Field-wise means, skipping undefined values; counts how many went in."""
    out: dict = {"instances": len(reports)}
    for name in ("mild", "milc", "mp", "mr", "harmonic", "time_seconds", "k", "r"):
        vals = [getattr(rep, name) for rep in reports if getattr(rep, name) is not None]
        out[name] = sum(vals) / len(vals) if vals else None
    return out
