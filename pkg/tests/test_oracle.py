"""The brute-force conformance oracle: cross-checks, isomorphism search, and
round-invariant reports."""

from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from domainlearn import (
    ConservativeLearner,
    LabeledDigraph,
    Session,
    equivalence_partition,
    summarize,
)
from domainlearn.oracle import (
    OracleLimitError,
    check_round_invariants,
    isomorphic_small,
    oracle_partition,
)
from domainlearn.teacher import IidUniform, SyntheticTeacher, generate_template

from .strategies import digraphs, random_digraph


class TestOraclePartition:
    def test_empty_graph_has_no_classes(self):
        assert oracle_partition(LabeledDigraph(1)) == []

    def test_complete_digraph_single_class(self):
        edges = [(u, a, v) for u in range(4) for a in range(2) for v in range(4)]
        g = LabeledDigraph(2, range(4), edges)
        assert oracle_partition(g) == [[0, 1, 2, 3]]

    def test_limit_enforced(self):
        g = LabeledDigraph(1, range(5))
        with pytest.raises(OracleLimitError):
            oracle_partition(g, limit=4)

    @given(digraphs())
    @settings(max_examples=150)
    def test_agrees_with_production_partition(self, g):
        assert oracle_partition(g) == equivalence_partition(g)

    def test_agrees_on_seeded_corpus(self):
        # 1,000 seeded random graphs, n <= 16, k <= 3
        for i in range(1_000):
            n = (i % 16) + 1
            k = (i % 3) + 1
            density = ((i * 7) % 10) / 10.0
            g = random_digraph(seed=i, n=n, k=k, density=density)
            assert oracle_partition(g) == equivalence_partition(g), f"graph {i}"


class TestIsomorphicSmall:
    def test_graph_isomorphic_to_itself(self):
        g = random_digraph(seed=3, n=6, k=2, density=0.4)
        assert isomorphic_small(g, g)

    def test_relabelled_copy(self):
        g = random_digraph(seed=4, n=6, k=2, density=0.4)
        permutation = {0: 5, 1: 3, 2: 0, 3: 4, 4: 1, 5: 2}
        relabelled = LabeledDigraph(
            g.k,
            range(6),
            [(permutation[u], a, permutation[v]) for u, a, v in g.edges()],
        )
        assert isomorphic_small(g, relabelled)

    def test_different_edge_count_not_isomorphic(self):
        a = LabeledDigraph(1, range(2), [(0, 0, 1)])
        b = LabeledDigraph(1, range(2), [(0, 0, 1), (1, 0, 0)])
        assert not isomorphic_small(a, b)

    def test_same_degrees_different_structure(self):
        # 4-cycle vs two 2-cycles: identical degree signatures everywhere
        cycle4 = LabeledDigraph(1, range(4), [(0, 0, 1), (1, 0, 2), (2, 0, 3), (3, 0, 0)])
        two_cycles = LabeledDigraph(1, range(4), [(0, 0, 1), (1, 0, 0), (2, 0, 3), (3, 0, 2)])
        assert not isomorphic_small(cycle4, two_cycles)

    def test_label_mismatch_not_isomorphic(self):
        a = LabeledDigraph(2, range(2), [(0, 0, 1)])
        b = LabeledDigraph(2, range(2), [(0, 1, 1)])
        assert not isomorphic_small(a, b)

    def test_limit_enforced(self):
        g = LabeledDigraph(1, range(13))
        with pytest.raises(OracleLimitError):
            isomorphic_small(g, g)
        assert isomorphic_small(g, g, limit=13)


def learner_after_rounds(seed: int, rounds: int, m: int = 3, k: int = 2):
    template = generate_template(seed, m=m, k=k, edge_density=0.5)
    teacher = SyntheticTeacher(template, IidUniform(), draw_seed=seed + 1)
    session = Session(teacher)
    learner = ConservativeLearner(session)
    for _ in range(rounds):
        learner.run_round()
    return learner, teacher


class TestRoundInvariants:
    def test_clean_state_passes(self):
        learner, teacher = learner_after_rounds(seed=11, rounds=8)
        report = check_round_invariants(
            teacher.peek_ground_truth(),
            learner.summary,
            learner.assignment,
            learner.tree,
        )
        assert report.all_passed, report.failures()

    def test_corrupted_assignment_fails_partition_check(self):
        learner, teacher = learner_after_rounds(seed=12, rounds=8)
        corrupted = dict(learner.assignment)
        reps = sorted(set(corrupted.values()))
        if len(reps) < 2:
            pytest.skip("world collapsed to one domain")
        victim = max(v for v in corrupted if corrupted[v] == reps[0])
        corrupted[victim] = reps[1]
        report = check_round_invariants(
            teacher.peek_ground_truth(), learner.summary, corrupted, learner.tree
        )
        failed = {c.name for c in report.failures()}
        assert "partition-matches-oracle" in failed

    def test_deleted_summary_edge_fails_homomorphism(self):
        learner, teacher = learner_after_rounds(seed=13, rounds=8)
        summary = learner.summary
        if summary.edge_count == 0:
            pytest.skip("edgeless summary")
        kept = summary.edges()[1:]
        broken = LabeledDigraph(summary.k, summary.vertices, kept)
        report = check_round_invariants(
            teacher.peek_ground_truth(), broken, learner.assignment, learner.tree
        )
        failed = {c.name for c in report.failures()}
        assert "strong-homomorphism" in failed

    def test_summary_matches_reference_summary(self):
        learner, teacher = learner_after_rounds(seed=14, rounds=10)
        reference = summarize(teacher.peek_ground_truth()).summary
        assert isomorphic_small(reference, learner.summary)
