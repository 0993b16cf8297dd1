"""The teacher/learner query protocol: three queries, a cost ledger, and the
success-criteria monitor.

A learner interrogates a teacher holding a fixed ground-truth graph through
three queries: next-vertex (a new entity joins), connection (deliberate on a
single access-control cell), and hypothesis-test (release a policy and
collect its errors over the revealed subgraph).  The :class:`Session`
monitor mediates every query, owns the cost ledger, and enforces the two
success criteria:

* SC-1: every hypothesis submitted must be irreducible with a surjective
  assignment.
* SC-2: after a next-vertex query, the learner must obtain at least one
  error-free hypothesis test before requesting another vertex.

Violations abort the run with a diagnostic; they are learner failures, not
recoverable conditions.
"""

from __future__ import annotations

import abc
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping

from .digraph import ErrorSet, LabeledDigraph, is_irreducible


class ProtocolViolation(RuntimeError):
    """A query was malformed: unrevealed vertex, wrong assignment domain, ..."""


class SC1Violation(ProtocolViolation):
    """A hypothesis test broke success criterion 1 (irreducible + surjective)."""


class SC2Violation(ProtocolViolation):
    """A next-vertex query arrived before the current round was closed by an
    error-free hypothesis test (success criterion 2)."""


class Teacher(abc.ABC):
    """Contract for the party holding ground truth.

    Implementations must be truthful: all answers consistent with one fixed
    graph and the set of vertices revealed so far.
    """

    @property
    @abc.abstractmethod
    def k(self) -> int:
        """Number of access rights."""

    @abc.abstractmethod
    def next_vertex(self) -> int:
        """Reveal a never-before-seen vertex."""

    @abc.abstractmethod
    def connection(self, u: int, a: int, v: int) -> bool:
        """Whether edge (u, a, v) exists; u and v must be revealed."""

    @abc.abstractmethod
    def hypothesis_test(
        self, summary: LabeledDigraph, assignment: Mapping[int, int]
    ) -> ErrorSet:
        """Errors of the policy over the revealed induced subgraph."""


class Phase(Enum):
    MAY_ADVANCE = "may-advance"
    AWAITING_CLEAN = "awaiting-clean"


@dataclass(frozen=True)
class RoundSnapshot:
    """Cumulative ledger state at the moment a round completed."""

    n: int
    cnq_cum: int
    htq_cum: int
    errors_cum: int


@dataclass
class QueryLedger:
    """Monotone query counters; the cost metric of a learning run.

    ``nvq_count`` doubles as the round counter.  ``errors_cumulative`` sums
    the sizes of every returned error set.  One snapshot is appended per
    completed round (a round completes at its first clean hypothesis test).
    """

    nvq_count: int = 0
    cnq_count: int = 0
    htq_count: int = 0
    errors_cumulative: int = 0
    per_round: list[RoundSnapshot] = field(default_factory=list)


class Session:
    """Monitored protocol session binding one learner to one teacher.

    The monitor, not the learner, owns the ledger, so reported cost cannot
    be understated.  Strictly single-threaded; run independent sessions for
    parallel experiments.
    """

    def __init__(self, teacher: Teacher):
        self._teacher = teacher
        self.ledger = QueryLedger()
        self._phase = Phase.MAY_ADVANCE
        self._revealed: list[int] = []
        self._revealed_set: set[int] = set()

    @property
    def k(self) -> int:
        return self._teacher.k

    @property
    def phase(self) -> Phase:
        return self._phase

    @property
    def revealed(self) -> tuple[int, ...]:
        """Vertices revealed so far, in revelation order."""
        return tuple(self._revealed)

    def next_vertex(self) -> int:
        if self._phase is not Phase.MAY_ADVANCE:
            raise SC2Violation(
                "next-vertex query issued before an error-free hypothesis test "
                f"closed round {self.ledger.nvq_count}"
            )
        vertex = self._teacher.next_vertex()
        if vertex in self._revealed_set:
            raise ProtocolViolation(f"teacher repeated vertex {vertex}")
        self.ledger.nvq_count += 1
        self._phase = Phase.AWAITING_CLEAN
        self._revealed.append(vertex)
        self._revealed_set.add(vertex)
        return vertex

    def connection(self, u: int, a: int, v: int) -> bool:
        if u not in self._revealed_set or v not in self._revealed_set:
            raise ProtocolViolation(
                f"connection query ({u}, {a}, {v}) references an unrevealed vertex"
            )
        if not 0 <= a < self.k:
            raise ProtocolViolation(f"right index {a} out of range [0, {self.k})")
        self.ledger.cnq_count += 1
        return self._teacher.connection(u, a, v)

    def hypothesis_test(
        self, summary: LabeledDigraph, assignment: Mapping[int, int]
    ) -> ErrorSet:
        if set(assignment) != self._revealed_set:
            raise ProtocolViolation(
                "hypothesis assignment domain must be exactly the revealed set; "
                f"got {sorted(assignment)} vs {sorted(self._revealed_set)}"
            )
        if not is_irreducible(summary):
            raise SC1Violation("submitted summary is reducible")
        if set(assignment.values()) != set(summary.vertices):
            raise SC1Violation(
                "submitted assignment is not surjective onto the summary vertices"
            )
        errors = self._teacher.hypothesis_test(summary, assignment)
        ledger = self.ledger
        ledger.htq_count += 1
        ledger.errors_cumulative += len(errors)
        if not errors and self._phase is Phase.AWAITING_CLEAN:
            ledger.per_round.append(
                RoundSnapshot(
                    n=ledger.nvq_count,
                    cnq_cum=ledger.cnq_count,
                    htq_cum=ledger.htq_count,
                    errors_cum=ledger.errors_cumulative,
                )
            )
            self._phase = Phase.MAY_ADVANCE
        return errors
