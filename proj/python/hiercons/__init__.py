"""Hierarchical consensus clustering of multiresolution partition ensembles.

Partitions are lists of integer labels, one per node; an ensemble is a list
of partitions over the same nodes.
"""

from ._hiercons import (
    ConsensusTree,
    DomainError,
    Error,
    Graph,
    IterationError,
    ParseError,
    __version__,
    ami,
    benchmark,
    beta,
    coclassification,
    consensus,
    entropy,
    expected_mi,
    gamma_max,
    gamma_min,
    generate_ensemble,
    hierarchical_consensus,
    lf_consensus,
    load_edge_list,
    louvain,
    modularity,
    mutual_information,
    nmi,
    sample_gammas,
)


def hierarchy(graph, count=250, alpha=0.05, strategy="event", seed=0, workers=0):
    """Full pipeline: sample gammas, build the ensemble, return (tree, gammas, ensemble)."""
    gammas = sample_gammas(graph, strategy, count, seed=seed)
    ensemble = generate_ensemble(graph, gammas, seed=seed + 1, workers=workers)
    return hierarchical_consensus(ensemble, alpha, seed=seed + 2, workers=workers), gammas, ensemble


__all__ = [name for name in dir() if not name.startswith("_")]
