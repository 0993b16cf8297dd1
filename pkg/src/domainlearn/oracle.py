"""Independent brute-force reference implementations used to validate the
production algorithms and the learners.

Nothing here is on any measured path: these functions may read teacher
ground truth and are wired only into tests and verify mode.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .digraph import LabeledDigraph, is_irreducible, is_strong_homomorphism

ORACLE_VERTEX_LIMIT = 256
ISOMORPHISM_VERTEX_LIMIT = 12


class OracleLimitError(ValueError):
    """Raised when an input exceeds the oracle's desk-scale limit."""


def _pair_masks(g: LabeledDigraph) -> tuple[list[dict[int, int]], list[dict[int, int]]]:
    # Rebuild adjacency bitmasks from the raw edge set, independently of the
    # graph's own cached masks.
    out: list[dict[int, int]] = [{} for _ in range(g.k)]
    inn: list[dict[int, int]] = [{} for _ in range(g.k)]
    for u, a, v in g.iter_edges():
        out[a][u] = out[a].get(u, 0) | (1 << v)
        inn[a][v] = inn[a].get(v, 0) | (1 << u)
    return out, inn


def oracle_partition(
    g: LabeledDigraph, limit: int = ORACLE_VERTEX_LIMIT
) -> list[list[int]]:
    """Indistinguishability classes by exhaustive pairwise comparison.

    Deliberately distinct from the production partition: adjacency masks are
    rebuilt from the edge list, every candidate is compared against *all*
    current members of a class (not just its representative), and a partial
    match aborts loudly instead of being merged.  Refuses graphs above the
    desk-scale ``limit``.
    """
    vertices = g.vertices
    if len(vertices) > limit:
        raise OracleLimitError(
            f"oracle_partition limited to {limit} vertices, got {len(vertices)}"
        )
    out, inn = _pair_masks(g)
    k = g.k

    def same(u: int, v: int) -> bool:
        pair = (1 << u) | (1 << v)
        for a in range(k):
            ou = out[a].get(u, 0)
            ov = out[a].get(v, 0)
            four = (
                ((ou >> u) & 1) + ((ou >> v) & 1) + ((ov >> u) & 1) + ((ov >> v) & 1)
            )
            if four != 0 and four != 4:
                return False
            if (ou ^ ov) & ~pair:
                return False
            if (inn[a].get(u, 0) ^ inn[a].get(v, 0)) & ~pair:
                return False
        return True

    classes: list[list[int]] = []
    for v in vertices:
        hits = [cls for cls in classes if all(same(member, v) for member in cls)]
        partial = [
            cls
            for cls in classes
            if cls not in hits and any(same(member, v) for member in cls)
        ]
        if partial:
            raise AssertionError(
                f"indistinguishability is not transitive at vertex {v}: {partial}"
            )
        if len(hits) > 1:
            raise AssertionError(
                f"vertex {v} matches multiple classes {hits}: relation not transitive"
            )
        if hits:
            hits[0].append(v)
        else:
            classes.append([v])
    return classes


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class InvariantReport:
    checks: tuple[CheckResult, ...]

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]


def _assignment_partition(assignment: Mapping[int, int]) -> list[list[int]]:
    by_domain: dict[int, list[int]] = {}
    for v in sorted(assignment):
        by_domain.setdefault(assignment[v], []).append(v)
    return sorted(by_domain.values(), key=lambda cls: cls[0])


def replay_classification(tree, vertex: int, g: LabeledDigraph) -> int:
    """Walk a decision tree answering its tests from graph edges directly
    (no queries); returns the leaf label the tree would classify to."""
    node = tree
    while not node.is_leaf:
        test = node.test
        answer = g.has_edge(*test.request_for(vertex))
        node = node.yes if answer else node.no
    return node.label


def check_round_invariants(
    ground_truth: LabeledDigraph,
    summary: LabeledDigraph,
    assignment: Mapping[int, int],
    tree=None,
    *,
    limit: int = ORACLE_VERTEX_LIMIT,
) -> InvariantReport:
    """Validate a learner's working state against the revealed ground truth.

    Checks, in order: the summary is a subgraph of the revealed graph; the
    assignment is a strong homomorphism onto it; the assignment is
    surjective; the summary is irreducible; the assignment partition matches
    the brute-force oracle partition; and (when a decision tree is given)
    replaying the tree classifies every revealed vertex to its assigned
    domain, with exactly one leaf per domain.
    """
    checks: list[CheckResult] = []

    missing_vertices = [v for v in summary.vertices if not ground_truth.has_vertex(v)]
    missing_edges = [e for e in summary.edges() if not ground_truth.has_edge(*e)]
    checks.append(
        CheckResult(
            "summary-subgraph",
            not missing_vertices and not missing_edges,
            f"foreign vertices {missing_vertices}, foreign edges {missing_edges}"
            if missing_vertices or missing_edges
            else "",
        )
    )

    try:
        hom = is_strong_homomorphism(ground_truth, summary, assignment)
        detail = "" if hom else "some request decided differently by policy"
    except ValueError as exc:
        hom = False
        detail = str(exc)
    checks.append(CheckResult("strong-homomorphism", hom, detail))

    surjective = set(assignment.values()) == set(summary.vertices)
    checks.append(
        CheckResult(
            "assignment-surjective",
            surjective,
            ""
            if surjective
            else f"range {sorted(set(assignment.values()))} vs "
            f"summary vertices {list(summary.vertices)}",
        )
    )

    irreducible = is_irreducible(summary)
    checks.append(
        CheckResult(
            "summary-irreducible",
            irreducible,
            "" if irreducible else "two summary vertices are indistinguishable",
        )
    )

    expected = oracle_partition(ground_truth, limit=limit)
    actual = _assignment_partition(assignment)
    checks.append(
        CheckResult(
            "partition-matches-oracle",
            actual == expected,
            "" if actual == expected else f"assignment {actual} vs oracle {expected}",
        )
    )

    if tree is not None:
        mismatches = [
            v
            for v in sorted(assignment)
            if replay_classification(tree, v, ground_truth) != assignment[v]
        ]
        checks.append(
            CheckResult(
                "classify-agreement",
                not mismatches,
                "" if not mismatches else f"misclassified vertices {mismatches}",
            )
        )
        leaf_count = tree.leaf_count
        domain_count = len(set(assignment.values()))
        checks.append(
            CheckResult(
                "leaf-count",
                leaf_count == domain_count,
                ""
                if leaf_count == domain_count
                else f"{leaf_count} leaves vs {domain_count} domains",
            )
        )

    return InvariantReport(tuple(checks))


def _vertex_signature(g: LabeledDigraph, v: int) -> tuple[tuple[int, int, int], ...]:
    # Per-right (out-degree, in-degree, has-loop): preserved by isomorphism.
    sig = []
    for a in range(g.k):
        out = g.out_mask(a, v)
        sig.append((bin(out).count("1"), bin(g.in_mask(a, v)).count("1"), (out >> v) & 1))
    return tuple(sig)


def isomorphic_small(
    g1: LabeledDigraph, g2: LabeledDigraph, limit: int = ISOMORPHISM_VERTEX_LIMIT
) -> bool:
    """Decide whether an edge-label-preserving bijection exists between two
    small digraphs.

    Backtracking search over vertices ordered by candidate-pool size, pruned
    by per-vertex degree signatures.  Refuses graphs above ``limit``.
    """
    if g1.vertex_count > limit or g2.vertex_count > limit:
        raise OracleLimitError(
            f"isomorphic_small limited to {limit} vertices, got "
            f"{g1.vertex_count} and {g2.vertex_count}"
        )
    if g1.k != g2.k:
        return False
    if g1.vertex_count != g2.vertex_count or g1.edge_count != g2.edge_count:
        return False

    sig1 = {v: _vertex_signature(g1, v) for v in g1.vertices}
    sig2 = {v: _vertex_signature(g2, v) for v in g2.vertices}
    pool: dict[tuple, list[int]] = {}
    for v in g2.vertices:
        pool.setdefault(sig2[v], []).append(v)
    if sorted(sig1.values()) != sorted(sig2.values()):
        return False

    order = sorted(g1.vertices, key=lambda v: (len(pool[sig1[v]]), v))
    mapping: dict[int, int] = {}
    used: set[int] = set()

    def consistent(u: int, image: int) -> bool:
        for w, w_image in mapping.items():
            for a in range(g1.k):
                if g1.has_edge(u, a, w) != g2.has_edge(image, a, w_image):
                    return False
                if g1.has_edge(w, a, u) != g2.has_edge(w_image, a, image):
                    return False
        for a in range(g1.k):
            if g1.has_edge(u, a, u) != g2.has_edge(image, a, image):
                return False
        return True

    def extend(index: int) -> bool:
        if index == len(order):
            return True
        u = order[index]
        for image in pool[sig1[u]]:
            if image in used or not consistent(u, image):
                continue
            mapping[u] = image
            used.add(image)
            if extend(index + 1):
                return True
            del mapping[u]
            used.discard(image)
        return False

    return extend(0)
