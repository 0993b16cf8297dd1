"""Text and DOT serialization for digraphs and policies.

The fixture text format is line-oriented:

    digraph k=<k> n=<n>
    <u> <right-name> <v>

with one line per edge.  It requires the vertex set to be exactly
0..n-1 (which holds for world templates and test fixtures); graphs with id
gaps are rejected.  Policy debug dumps use a looser format with an explicit
vertex list, because summaries keep their original representative ids.
"""

from __future__ import annotations

from typing import Mapping

from .digraph import Alphabet, LabeledDigraph


def digraph_to_text(g: LabeledDigraph, alphabet: Alphabet | None = None) -> str:
    alphabet = alphabet or Alphabet.default(g.k)
    if len(alphabet) != g.k:
        raise ValueError(f"alphabet has {len(alphabet)} rights, graph has k={g.k}")
    n = g.vertex_count
    if set(g.vertices) != set(range(n)):
        raise ValueError("text format requires dense vertex ids 0..n-1")
    lines = [f"digraph k={g.k} n={n}"]
    for u, a, v in g.edges():
        lines.append(f"{u} {alphabet[a].name} {v}")
    return "\n".join(lines) + "\n"


def digraph_from_text(text: str, alphabet: Alphabet | None = None) -> LabeledDigraph:
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    if not lines:
        raise ValueError("empty graph text")
    header = lines[0].split()
    if len(header) != 3 or header[0] != "digraph":
        raise ValueError(f"malformed header line: {lines[0]!r}")
    try:
        k = int(header[1].removeprefix("k="))
        n = int(header[2].removeprefix("n="))
    except ValueError:
        raise ValueError(f"malformed header line: {lines[0]!r}") from None
    alphabet = alphabet or Alphabet.default(k)
    if len(alphabet) != k:
        raise ValueError(f"alphabet has {len(alphabet)} rights, header says k={k}")
    g = LabeledDigraph(k, range(n))
    for line in lines[1:]:
        parts = line.split()
        if len(parts) != 3:
            raise ValueError(f"malformed edge line: {line!r}")
        u, name, v = parts
        g.add_edge(int(u), alphabet.index_of(name), int(v))
    return g


def digraph_to_dot(
    g: LabeledDigraph, alphabet: Alphabet | None = None, name: str = "G"
) -> str:
    alphabet = alphabet or Alphabet.default(g.k)
    lines = [f"digraph {name} {{"]
    for v in g.vertices:
        lines.append(f'  "{v}";')
    for u, a, v in g.edges():
        lines.append(f'  "{u}" -> "{v}" [label="{alphabet[a].name}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def policy_to_text(
    summary: LabeledDigraph,
    assignment: Mapping[int, int],
    alphabet: Alphabet | None = None,
) -> str:
    """Debug dump of a policy: summary vertices and edges, then one
    ``assign <entity> -> <domain>`` line per entity."""
    alphabet = alphabet or Alphabet.default(summary.k)
    vertex_list = ",".join(str(v) for v in summary.vertices)
    lines = [f"summary k={summary.k} vertices={vertex_list}"]
    for u, a, v in summary.edges():
        lines.append(f"edge {u} {alphabet[a].name} {v}")
    for v in sorted(assignment):
        lines.append(f"assign {v} -> {assignment[v]}")
    return "\n".join(lines) + "\n"


def policy_to_dot(
    summary: LabeledDigraph,
    assignment: Mapping[int, int],
    alphabet: Alphabet | None = None,
) -> str:
    """DOT rendering of a policy: domain nodes sized by membership."""
    alphabet = alphabet or Alphabet.default(summary.k)
    members: dict[int, list[int]] = {v: [] for v in summary.vertices}
    for entity in sorted(assignment):
        members[assignment[entity]].append(entity)
    lines = ["digraph policy {"]
    for v in summary.vertices:
        lines.append(f'  "{v}" [label="domain {v}\\n{len(members[v])} member(s)"];')
    for u, a, v in summary.edges():
        lines.append(f'  "{u}" -> "{v}" [label="{alphabet[a].name}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
