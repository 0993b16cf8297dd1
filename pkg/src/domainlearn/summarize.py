"""Summary construction: compress a digraph to its unique (up to
isomorphism) irreducible quotient.

The summary of G groups indistinguishable vertices into protection domains.
The construction here picks the minimum-id vertex of each equivalence class
as its representative, takes the induced subgraph on the representatives as
the summary, and maps every vertex to its class representative.  The result
is therefore both a subgraph of G and canonical: relabelling G yields an
isomorphic (not identical) summary.
"""

from __future__ import annotations

from .digraph import DomainPolicy, LabeledDigraph, equivalence_partition, induced_subgraph


def summarize(g: LabeledDigraph) -> DomainPolicy:
    """Compute the canonical summary policy of ``g``.

    Returns a policy whose summary is irreducible, whose assignment is a
    surjective strong homomorphism from g onto it, and whose vertex set is
    the minimum-id representative of each indistinguishability class.
    Runs in time polynomial in |V(g)| and k.
    """
    partition = equivalence_partition(g)
    assignment: dict[int, int] = {}
    representatives = []
    for vertex_class in partition:
        rep = vertex_class[0]  # classes are sorted; min id is the representative
        representatives.append(rep)
        for v in vertex_class:
            assignment[v] = rep
    summary = induced_subgraph(g, representatives)
    return DomainPolicy(summary=summary, assignment=assignment)
