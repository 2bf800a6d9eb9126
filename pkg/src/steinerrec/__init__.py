"""Recommend diverse, mutually compatible API compositions for a keyword query.

Random walks sample subgraphs of the API co-usage graph; a minimum group
Steiner tree is solved on each sample, and the resulting trees are ranked
and filtered so that every pair of returned lists is sufficiently different.
"""

from .corpus import ApiRecord, AppRecord, Ecosystem, Query, derive_queries, gen_synthetic, load_ecosystem
from .graph import ApiGraph, build_graph, keyword_nodes, max_component
from .pipeline import baseline, recommend
from .ranker import Recommendation, RecommendationSet, pairwise_diversity, rank_and_diversify
from .sampler import random_walk, sample_subgraphs
from .steiner import SteinerResult, min_group_steiner, search_full_trees

__version__ = "0.1.0"
