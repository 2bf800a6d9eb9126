import json
import random
from pathlib import Path

import pytest

from steinerrec.corpus import Query, derive_queries, load_ecosystem
from steinerrec.graph import ApiGraph, build_graph, max_component

FIXTURES = Path(__file__).parent / "fixtures"
FIXTURE_ECO = FIXTURES / "synthetic.json"


def ten_vertex_graph() -> ApiGraph:
    """Ten-API example graph with two components (sizes 8 and 2).

    Keyword placement and counts are chosen so that:
    API 3 carries {q1, q4, q12}, API 0 carries {q7}, and they share count 4;
    count(2, 3) > count(3, 4); q7 is covered by APIs 0 and 2;
    Q = {q1, q2, q3, q5} is answered by {5, 1, 2};
    Q = {q1, q3, q7} has exactly two optimal answers, {5, 1, 2} and {5, 1, 0}.
    """
    keywords = {
        0: {"q7"},
        1: {"q1"},
        2: {"q2", "q7"},
        3: {"q1", "q4", "q12"},
        4: {"q2", "q6"},
        5: {"q3", "q5"},
        6: {"q8"},
        7: {"q10"},
        8: {"q11"},
        9: {"q13"},
    }
    edges = [
        (0, 1, 2),
        (1, 2, 2),
        (1, 5, 3),
        (0, 3, 4),
        (2, 3, 5),
        (3, 4, 1),
        (4, 6, 2),
        (5, 6, 1),
        (6, 7, 1),
        (8, 9, 1),
    ]
    return ApiGraph.from_edges(keywords, edges)


def random_instance(rng: random.Random, max_vertices=12, max_keywords=4, density=0.35):
    n = rng.randint(1, max_vertices)
    r = rng.randint(1, max_keywords)
    kws = [f"q{i}" for i in range(r)]
    keywords = {}
    for v in range(n):
        tags = {rng.choice(kws + ["filler"])}
        if rng.random() < 0.3:
            tags.add(rng.choice(kws))
        keywords[v] = tags
    edges = [
        (u, v, rng.randint(1, 5))
        for u in range(n)
        for v in range(u + 1, n)
        if rng.random() < density
    ]
    return ApiGraph.from_edges(keywords, edges), Query(tuple(kws))


@pytest.fixture
def ten_vertex():
    return ten_vertex_graph()


@pytest.fixture(scope="session")
def manifest():
    return json.loads((FIXTURES / "manifest.json").read_text())


@pytest.fixture(scope="session")
def fixture_eco():
    return load_ecosystem(FIXTURE_ECO)


@pytest.fixture(scope="session")
def fixture_graph(fixture_eco):
    return max_component(build_graph(fixture_eco))


@pytest.fixture(scope="session")
def fixture_pairs(fixture_eco):
    return derive_queries(fixture_eco, (3, 6))
