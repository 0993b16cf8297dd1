"""Session monitor: success-criteria enforcement and ledger accounting."""

from __future__ import annotations

import pytest

from domainlearn import (
    LabeledDigraph,
    ProtocolViolation,
    SC1Violation,
    SC2Violation,
    Session,
)
from domainlearn.teacher import Scripted, SyntheticTeacher, WorldTemplate


def edge_world(with_loop: bool = False) -> WorldTemplate:
    edges = [(0, 0, 1)] + ([(0, 0, 0)] if with_loop else [])
    return WorldTemplate(LabeledDigraph(1, range(2), edges), seed=0)


def make_session(script=(0, 1, 0, 1), with_loop=False) -> Session:
    teacher = SyntheticTeacher(edge_world(with_loop), Scripted(tuple(script)), draw_seed=5)
    return Session(teacher)


def clean_hypothesis_for(session: Session) -> tuple[LabeledDigraph, dict[int, int]]:
    """An enforcing single-domain hypothesis for a revealed prefix that has
    no edges yet (first reveal of the edge_world script)."""
    (u,) = session.revealed
    return LabeledDigraph(1, [u]), {u: u}


class TestSC2:
    def test_first_nvq_succeeds(self):
        session = make_session()
        assert session.next_vertex() == 0
        assert session.ledger.nvq_count == 1

    def test_nvq_without_clean_htq_violates(self):
        session = make_session()
        session.next_vertex()
        with pytest.raises(SC2Violation):
            session.next_vertex()

    def test_nvq_after_clean_htq_succeeds(self):
        session = make_session()
        session.next_vertex()
        summary, assignment = clean_hypothesis_for(session)
        assert not session.hypothesis_test(summary, assignment)
        assert session.next_vertex() == 1

    def test_dirty_htq_does_not_close_round(self):
        session = make_session(script=(0, 1))
        session.next_vertex()
        summary, assignment = clean_hypothesis_for(session)
        session.hypothesis_test(summary, assignment)
        session.next_vertex()
        # hypothesis keeps both vertices in one domain: misses edge (0,r,1)
        dirty = {0: 0, 1: 0}
        errors = session.hypothesis_test(LabeledDigraph(1, [0]), dirty)
        assert len(errors) == 1
        with pytest.raises(SC2Violation):
            session.next_vertex()


class TestSC1:
    def test_reducible_hypothesis_rejected(self):
        session = make_session()
        session.next_vertex()
        session.hypothesis_test(*clean_hypothesis_for(session))
        session.next_vertex()
        # two isolated vertices are mutually indistinguishable: reducible
        reducible = LabeledDigraph(1, [0, 1])
        with pytest.raises(SC1Violation, match="reducible"):
            session.hypothesis_test(reducible, {0: 0, 1: 1})

    def test_non_surjective_assignment_rejected(self):
        session = make_session()
        session.next_vertex()
        session.hypothesis_test(*clean_hypothesis_for(session))
        session.next_vertex()
        summary = LabeledDigraph(1, [0, 1], [(0, 0, 1)])
        with pytest.raises(SC1Violation, match="surjective"):
            session.hypothesis_test(summary, {0: 0, 1: 0})


class TestProtocolChecks:
    def test_connection_requires_revealed_vertices(self):
        session = make_session()
        session.next_vertex()
        with pytest.raises(ProtocolViolation):
            session.connection(0, 0, 1)

    def test_connection_rejects_bad_right(self):
        session = make_session()
        session.next_vertex()
        with pytest.raises(ProtocolViolation):
            session.connection(0, 5, 0)

    def test_htq_domain_must_equal_revealed_set(self):
        session = make_session()
        session.next_vertex()
        with pytest.raises(ProtocolViolation, match="revealed"):
            session.hypothesis_test(LabeledDigraph(1, [0]), {0: 0, 7: 0})


class TestLedger:
    def test_connection_answers_and_counts(self):
        session = make_session(script=(0, 1))
        session.next_vertex()
        session.hypothesis_test(*clean_hypothesis_for(session))
        session.next_vertex()
        assert session.connection(0, 0, 1) is True
        assert session.connection(1, 0, 0) is False
        assert session.connection(0, 0, 0) is False
        assert session.ledger.cnq_count == 3

    def test_cnq_not_cached(self):
        session = make_session()
        session.next_vertex()
        session.connection(0, 0, 0)
        session.connection(0, 0, 0)
        assert session.ledger.cnq_count == 2

    def test_snapshot_per_completed_round(self):
        session = make_session(script=(0, 1))
        session.next_vertex()
        session.hypothesis_test(*clean_hypothesis_for(session))
        session.next_vertex()
        errors = session.hypothesis_test(LabeledDigraph(1, [0]), {0: 0, 1: 0})
        assert errors
        good = LabeledDigraph(1, [0, 1], [(0, 0, 1)])
        assert not session.hypothesis_test(good, {0: 0, 1: 1})
        ledger = session.ledger
        assert [snap.n for snap in ledger.per_round] == [1, 2]
        assert ledger.per_round[1].htq_cum == 3
        assert ledger.per_round[1].errors_cum == 1
        assert ledger.errors_cumulative == 1

    def test_errors_accumulate_per_htq(self):
        session = make_session(script=(0, 1))
        session.next_vertex()
        session.hypothesis_test(*clean_hypothesis_for(session))
        session.next_vertex()
        dirty_summary, dirty_assignment = LabeledDigraph(1, [0]), {0: 0, 1: 0}
        session.hypothesis_test(dirty_summary, dirty_assignment)
        session.hypothesis_test(dirty_summary, dirty_assignment)
        assert session.ledger.errors_cumulative == 2
        assert session.ledger.htq_count == 3
