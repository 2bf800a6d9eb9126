import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from steinerrec import metrics
from steinerrec.errors import DomainError
from steinerrec.ranker import Recommendation


def test_hmd():
    assert metrics.hmd({1, 2}, {3, 4}) == 1.0
    assert metrics.hmd({1, 2, 3}, {1, 2, 3}) == 0.5
    assert metrics.hmd({"a", "b", "c"}, {"a", "d"}) == pytest.approx(0.8)
    with pytest.raises(DomainError):
        metrics.hmd([], {1})


def test_mild():
    assert metrics.mild([{1}, {2}]) == 1.0
    assert metrics.mild([{1, 2}] * 3) == 0.5
    with pytest.raises(DomainError):
        metrics.mild([{1}])


def test_milc():
    one = [Recommendation({1, 2}, Fraction(1, 4))]
    assert metrics.milc(one) == (4.0, 0)
    two = [Recommendation({1, 2}, Fraction(1, 2)), Recommendation({3, 4}, Fraction(1, 4))]
    assert metrics.milc(two) == (3.0, 0)
    with_perfect = two + [Recommendation({5}, Fraction(0))]
    assert metrics.milc(with_perfect) == (3.0, 1)
    assert metrics.milc([Recommendation({5}, Fraction(0))]) == (None, 1)


def test_mp_mr():
    assert metrics.mp([{1, 2}], {1, 2}) == 1.0
    assert metrics.mp([{"a", "b", "c"}], {"a", "b", "d"}) == pytest.approx(2 / 3)
    assert metrics.mr([{1, 2, 3}], {1, 2}) == 1.0
    assert metrics.mr([{"a"}], {"a", "b"}) == 0.5
    with pytest.raises(DomainError):
        metrics.mp([], {1})
    with pytest.raises(DomainError):
        metrics.mr([{1}], set())


def test_harmonic():
    assert metrics.harmonic(0.3, 0.9) == pytest.approx(5 * 0.27 / (1.2 + 0.9))
    assert metrics.harmonic(0.3, 0.9) == pytest.approx(0.642857142857, abs=1e-12)
    assert metrics.harmonic(0, 0) == 0.0


def test_report_fields():
    recs = [Recommendation({1, 2}, Fraction(1, 2)), Recommendation({2, 3}, Fraction(1, 4))]
    rep = metrics.report(recs, {1, 2}, r=3, z=10, p=50, time_seconds=0.1)
    assert rep.k == 2
    assert rep.mild == pytest.approx(0.75)
    assert rep.mp == pytest.approx(0.75)
    assert rep.harmonic == pytest.approx(metrics.harmonic(rep.mp, rep.mild))
    d = rep.to_dict()
    assert d["z"] == 10 and d["milc"] == 3.0
    single = metrics.report(recs[:1], {1}, r=3, z=10, p=50)
    assert single.mild is None and single.harmonic is None


lists_strategy = st.lists(st.frozensets(st.integers(0, 15), min_size=1, max_size=6), min_size=2, max_size=8)


@settings(max_examples=200, deadline=None)
@given(lists=lists_strategy, truth=st.frozensets(st.integers(0, 15), min_size=1, max_size=6),
       seed=st.integers(0, 10**6))
def test_metric_properties(lists, truth, seed):
    rng = random.Random(seed)
    for value in (metrics.mp(lists, truth), metrics.mr(lists, truth), metrics.mild(lists)):
        assert 0 <= value <= 1
    assert metrics.mild(lists) >= 0.5
    permuted = lists[:]
    rng.shuffle(permuted)
    assert metrics.mild(permuted) == pytest.approx(metrics.mild(lists))
    relabel = list(range(16))
    rng.shuffle(relabel)
    mapped = [frozenset(relabel[x] for x in rl) for rl in lists]
    mapped_truth = frozenset(relabel[x] for x in truth)
    assert metrics.mild(mapped) == pytest.approx(metrics.mild(lists))
    assert metrics.mp(mapped, mapped_truth) == pytest.approx(metrics.mp(lists, truth))
    assert metrics.mr(mapped, mapped_truth) == pytest.approx(metrics.mr(lists, truth))


def test_aggregate_skips_missing():
    a = metrics.MetricsReport(mild=None, milc=2.0, mp=0.5, mr=0.5, harmonic=None,
                              time_seconds=None, k=1, r=3, z=10, p=10)
    b = metrics.MetricsReport(mild=0.8, milc=4.0, mp=1.0, mr=0.5, harmonic=0.9,
                              time_seconds=None, k=2, r=3, z=10, p=10)
    agg = metrics.aggregate([a, b])
    assert agg["mild"] == 0.8 and agg["milc"] == 3.0 and agg["mp"] == 0.75
    assert agg["time_seconds"] is None and agg["instances"] == 2
