import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from steinerrec.errors import DomainError, EmptyResultError, ParameterError
from steinerrec.ranker import (
    DEPLOYMENT,
    EVALUATION,
    Recommendation,
    pairwise_diversity,
    rank_and_diversify,
)


def rec(apis, cost, idx=0):
    return Recommendation(frozenset(apis), Fraction(cost), idx)


def test_diversity_values():
    assert pairwise_diversity({"api1", "api2", "api3"}, {"api1", "api4"}) == pytest.approx(0.8, abs=0)
    assert pairwise_diversity({1, 2}, {3}) == 1.0
    assert pairwise_diversity({1, 2, 3}, {1, 2, 3}) == 0.5
    with pytest.raises(DomainError):
        pairwise_diversity(set(), {1})


def test_identical_candidates_collapse_to_one():
    cands = [rec({1, 2, 3}, Fraction(1, 2), i) for i in range(100)]
    out = rank_and_diversify(cands, K=10, theta=0.5)
    assert len(out) == 1
    assert out.items[0].sample_index == 0


def test_zero_theta_takes_k_distinct():
    cands = [rec({i, i + 1}, Fraction(1, i + 1), i) for i in range(20)]
    out = rank_and_diversify(cands, K=10, theta=0.0)
    assert len(out) == 10


def test_deployment_orders_by_compatibility():
    cands = [rec({1, 2}, Fraction(1, 2)), rec({3, 4}, Fraction(1, 4)), rec({5}, 0)]
    out = rank_and_diversify(cands, K=3, theta=0.5, mode=DEPLOYMENT)
    assert [sorted(r.apis) for r in out] == [[5], [3, 4], [1, 2]]
    assert out.items[0].score == float("inf")
    assert out.to_dict()["lists"][0]["compatibility"] == "perfect"


def test_evaluation_orders_by_precision_then_cost():
    truth = {1, 2, 3}
    cands = [rec({1, 9}, Fraction(1, 5)), rec({1, 2}, Fraction(1, 2)), rec({2, 3, 8}, Fraction(1, 3)),
             rec({1, 3}, Fraction(1, 4))]
    out = rank_and_diversify(cands, K=4, theta=0.0, mode=EVALUATION, ground_truth=truth)
    assert [sorted(r.apis) for r in out] == [[1, 3], [1, 2], [2, 3, 8], [1, 9]]
    assert [r.score for r in out] == [1.0, 1.0, pytest.approx(2 / 3), 0.5]


def test_threshold_is_strict():
    # diversity({1,2},{1,3}) = 0.75
    cands = [rec({1, 2}, 1), rec({1, 3}, 2)]
    assert len(rank_and_diversify(cands, K=5, theta=0.75)) == 1
    assert len(rank_and_diversify(cands, K=5, theta=0.74)) == 2


def test_errors():
    with pytest.raises(ParameterError):
        rank_and_diversify([rec({1}, 1)], K=0)
    with pytest.raises(ParameterError):
        rank_and_diversify([rec({1}, 1)], mode=EVALUATION)
    with pytest.raises(EmptyResultError) as info:
        rank_and_diversify([], K=3)
    assert info.value.counts == {"candidates": 0, "unique": 0}


candidate_lists = st.lists(
    st.tuples(st.frozensets(st.integers(0, 12), min_size=1, max_size=5), st.integers(1, 30)),
    min_size=1,
    max_size=30,
)


@settings(max_examples=80, deadline=None)
@given(raw=candidate_lists, K=st.integers(1, 10), theta=st.sampled_from([0.0, 0.5, 0.6, 0.75, 0.9]),
       seed=st.integers(0, 1000))
def test_selection_properties(raw, K, theta, seed):
    cands = [rec(a, Fraction(1, c), i) for i, (a, c) in enumerate(raw)]
    out = rank_and_diversify(cands, K=K, theta=theta)
    assert 1 <= len(out) <= K
    for a, b in combinations(out.lists, 2):
        assert pairwise_diversity(a, b) > theta
    scores = [r.score for r in out]
    assert scores == sorted(scores, reverse=True)
    shuffled = cands[:]
    random.Random(seed).shuffle(shuffled)
    again = rank_and_diversify(shuffled, K=K, theta=theta)
    assert again.lists == out.lists
    scaled = [rec(c.apis, c.cost * 7, c.sample_index) for c in cands]
    assert rank_and_diversify(scaled, K=K, theta=theta).lists == out.lists
