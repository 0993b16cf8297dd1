"""Synthetic teacher: a concrete ground truth generated from an irreducible
domain template.

The world behind the teacher is conceptually infinite: every vertex is an
instance of one of m protection domains, and (u, a, v) is an edge iff the
template has the edge (domain(u), a, domain(v)).  Instances are minted
lazily as the revelation schedule asks for them, so only the revealed
induced subgraph is ever materialized.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping

from .digraph import (
    Alphabet,
    ErrorSet,
    DomainPolicy,
    LabeledDigraph,
    error_set,
    induced_subgraph,
    is_irreducible,
)
from .graphio import digraph_from_text, digraph_to_text
from .oracle import oracle_partition
from .protocol import ProtocolViolation, Teacher
from .rng import SplitMix64, mix64


class TemplateGenerationError(RuntimeError):
    """Random template generation failed to reach irreducibility."""


class TeacherExhausted(RuntimeError):
    """A scripted revelation schedule has no more vertices to reveal."""


@dataclass(frozen=True)
class WorldTemplate:
    """An irreducible digraph over m domain-vertices, plus its provenance seed."""

    graph: LabeledDigraph
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.graph.vertex_count < 1:
            raise ValueError("template needs at least one domain")
        if tuple(self.graph.vertices) != tuple(range(self.graph.vertex_count)):
            raise ValueError("template domains must be numbered 0..m-1")
        if not is_irreducible(self.graph):
            raise ValueError("template must be irreducible")

    @property
    def m(self) -> int:
        return self.graph.vertex_count

    @property
    def k(self) -> int:
        return self.graph.k


MAX_GENERATION_ATTEMPTS = 10_000


def generate_template(
    seed: int, m: int, k: int, edge_density: float
) -> WorldTemplate:
    """Sample an irreducible m-domain template.

    Each of the m*m*k candidate edges is kept independently with probability
    ``edge_density``.  Deterministic given (seed, m, k, edge_density): failed
    attempts retry with a seed derived by remixing the previous one.
    """
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if not 0.0 <= edge_density <= 1.0:
        raise ValueError(f"edge_density must be in [0, 1], got {edge_density}")
    attempt_seed = seed
    for _ in range(MAX_GENERATION_ATTEMPTS):
        rng = SplitMix64(attempt_seed)
        graph = LabeledDigraph(k, range(m))
        for u in range(m):
            for a in range(k):
                for v in range(m):
                    if rng.random() < edge_density:
                        graph.add_edge(u, a, v)
        if is_irreducible(graph):
            return WorldTemplate(graph=graph, seed=seed)
        attempt_seed = mix64(attempt_seed)
    raise TemplateGenerationError(
        f"no irreducible template after {MAX_GENERATION_ATTEMPTS} attempts "
        f"(seed={seed}, m={m}, k={k}, edge_density={edge_density})"
    )


def template_to_text(template: WorldTemplate, alphabet: Alphabet | None = None) -> str:
    return f"domains m={template.m}\n" + digraph_to_text(template.graph, alphabet)


def template_from_text(text: str, alphabet: Alphabet | None = None) -> WorldTemplate:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("domains m="):
        raise ValueError("template text must start with a 'domains m=<m>' line")
    m = int(lines[0].removeprefix("domains m="))
    graph = digraph_from_text("\n".join(lines[1:]), alphabet)
    if graph.vertex_count != m:
        raise ValueError(f"manifest says m={m} but graph has {graph.vertex_count}")
    return WorldTemplate(graph=graph, seed=None)


# -- revelation schedules ---------------------------------------------------


@dataclass(frozen=True)
class Scripted:
    """Reveal instances of exactly these domains, in order, then stop."""

    domains: tuple[int, ...]


@dataclass(frozen=True)
class IidUniform:
    """Each reveal draws a domain uniformly; never exhausts."""


@dataclass(frozen=True)
class IidWeighted:
    """Each reveal draws domain i with probability probs[i]; never exhausts."""

    probs: tuple[float, ...]

    def __post_init__(self) -> None:
        if any(p <= 0.0 for p in self.probs):
            raise ValueError("all schedule probabilities must be positive")
        if abs(sum(self.probs) - 1.0) > 1e-9:
            raise ValueError(f"probabilities must sum to 1, got {sum(self.probs)}")


@dataclass(frozen=True)
class NovelLast:
    """Adversarial order: domain 0 for ``prefix_len`` reveals, then one fresh
    instance of every remaining domain in ascending order, then stop."""

    prefix_len: int

    def __post_init__(self) -> None:
        if self.prefix_len < 1:
            raise ValueError("prefix_len must be >= 1")


RevelationSchedule = Scripted | IidUniform | IidWeighted | NovelLast


def domain_sequence(
    schedule: RevelationSchedule, m: int, rng: SplitMix64
) -> Iterator[int]:
    """Domain indices drawn per the schedule; finite for Scripted/NovelLast."""
    if isinstance(schedule, Scripted):
        for d in schedule.domains:
            if not 0 <= d < m:
                raise ValueError(f"scripted domain {d} out of range [0, {m})")
            yield d
    elif isinstance(schedule, IidUniform):
        while True:
            yield rng.randrange(m)
    elif isinstance(schedule, IidWeighted):
        if len(schedule.probs) != m:
            raise ValueError(
                f"schedule has {len(schedule.probs)} probabilities for m={m} domains"
            )
        cumulative = []
        acc = 0.0
        for p in schedule.probs:
            acc += p
            cumulative.append(acc)
        while True:
            x = rng.random()
            for i, threshold in enumerate(cumulative):
                if x < threshold:
                    yield i
                    break
            else:
                yield m - 1  # guard against fp rounding at the top end
    elif isinstance(schedule, NovelLast):
        for _ in range(schedule.prefix_len):
            yield 0
        for d in range(1, m):
            yield d
    else:
        raise TypeError(f"unknown schedule {schedule!r}")


def parse_schedule(text: str) -> RevelationSchedule:
    """Parse a schedule spec string.

    Forms: ``iid-uniform``, ``iid-weighted:<p0>,<p1>,...``,
    ``scripted:<d0>,<d1>,...``, ``novel-last:<prefix_len>``.
    """
    kind, _, arg = text.partition(":")
    kind = kind.strip()
    if kind == "iid-uniform":
        return IidUniform()
    if kind == "iid-weighted":
        probs = tuple(float(p) for p in arg.split(",") if p.strip())
        return IidWeighted(probs)
    if kind == "scripted":
        domains = tuple(int(d) for d in arg.split(",") if d.strip())
        return Scripted(domains)
    if kind == "novel-last":
        return NovelLast(int(arg))
    raise ValueError(f"unknown schedule spec {text!r}")


def schedule_probabilities(schedule: RevelationSchedule, m: int) -> tuple[float, ...]:
    """Per-domain draw probabilities of an IID schedule."""
    if isinstance(schedule, IidUniform):
        return tuple(1.0 / m for _ in range(m))
    if isinstance(schedule, IidWeighted):
        if len(schedule.probs) != m:
            raise ValueError(
                f"schedule has {len(schedule.probs)} probabilities for m={m} domains"
            )
        return schedule.probs
    raise ValueError(f"schedule {schedule!r} is not an IID schedule")


# -- the teacher itself ------------------------------------------------------


class SyntheticTeacher(Teacher):
    """Teacher over a template world with a configurable revelation schedule.

    Vertex ids are minted 0, 1, 2, ... in revelation order.  The revealed
    induced subgraph is maintained incrementally so hypothesis tests are
    evaluated directly against it.
    """

    def __init__(
        self,
        template: WorldTemplate,
        schedule: RevelationSchedule,
        draw_seed: int,
    ):
        self._template = template
        self._schedule = schedule
        self._draws = domain_sequence(schedule, template.m, SplitMix64(draw_seed))
        self._domain_of: dict[int, int] = {}
        self._revealed: list[int] = []
        self._graph = LabeledDigraph(template.k)
        self._class_count_cache: dict[frozenset[int], int] = {}

    @property
    def k(self) -> int:
        return self._template.k

    @property
    def template(self) -> WorldTemplate:
        return self._template

    @property
    def revealed(self) -> tuple[int, ...]:
        return tuple(self._revealed)

    def next_vertex(self) -> int:
        try:
            domain = next(self._draws)
        except StopIteration:
            raise TeacherExhausted(
                f"revelation schedule exhausted after {len(self._revealed)} vertices"
            ) from None
        vertex = len(self._revealed)
        self._domain_of[vertex] = domain
        self._revealed.append(vertex)
        graph = self._graph
        template = self._template.graph
        graph.add_vertex(vertex)
        for a in range(template.k):
            for other in self._revealed:
                other_domain = self._domain_of[other]
                if template.has_edge(domain, a, other_domain):
                    graph.add_edge(vertex, a, other)
                if other != vertex and template.has_edge(other_domain, a, domain):
                    graph.add_edge(other, a, vertex)
        return vertex

    def connection(self, u: int, a: int, v: int) -> bool:
        if u not in self._domain_of or v not in self._domain_of:
            raise ProtocolViolation(
                f"connection query ({u}, {a}, {v}) references an unrevealed vertex"
            )
        return self._template.graph.has_edge(self._domain_of[u], a, self._domain_of[v])

    def hypothesis_test(
        self, summary: LabeledDigraph, assignment: Mapping[int, int]
    ) -> ErrorSet:
        if set(assignment) != set(self._revealed):
            raise ProtocolViolation(
                "hypothesis assignment domain must be exactly the revealed set"
            )
        policy = DomainPolicy(summary=summary, assignment=dict(assignment))
        return error_set(self._graph, policy)

    # -- ground-truth backdoors: verification and tests only ----------------

    def peek_ground_truth(self) -> LabeledDigraph:
        """The revealed induced subgraph.  Verification/test harness only;
        learners must never touch this.  Treat as read-only."""
        return self._graph

    def domain_of(self, v: int) -> int:
        """Template domain of a revealed vertex (ground-truth backdoor)."""
        return self._domain_of[v]

    def revealed_domains(self) -> tuple[int, ...]:
        """Domains of revealed vertices in revelation order (backdoor)."""
        return tuple(self._domain_of[v] for v in self._revealed)

    def revealed_class_count(self) -> int:
        """Number of indistinguishability classes of the revealed subgraph.

        Computed on the template restricted to the revealed domains, which
        by the instance edge rule has exactly the same class structure as
        the revealed subgraph itself (instances of one domain are always
        mutually indistinguishable).  Ground-truth backdoor.
        """
        revealed = frozenset(self._domain_of[v] for v in self._revealed)
        cached = self._class_count_cache.get(revealed)
        if cached is None:
            sub = induced_subgraph(self._template.graph, revealed)
            cached = len(oracle_partition(sub))
            self._class_count_cache[revealed] = cached
        return cached
