"""Claim-graph construction and longitudinal analytics (C++ core)."""

from ._core import (  # noqa: F401
    ClaimGraph,
    Corpus,
    DataError,
    InvalidArgument,
    KeyMismatchError,
    age_rank,
    build_graph,
    cluster_claims,
    convergence_divergence,
    cosine_similarity,
    edge_density,
    kaplan_meier,
    load_corpus,
    macro_prf,
    modularity,
    norm_influence,
    parse_corpus,
    relation_distribution,
    restrict_citations,
    run_metric,
    spearman,
    stratified_split,
    validate,
)

__version__ = "0.1.0"
