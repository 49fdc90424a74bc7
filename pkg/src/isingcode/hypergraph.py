"""Hypergraphs, vertex/edge duality and the text interchange format.

A hypergraph carries either a CSS-code sector (vertices = qubits, one
edge per check) or a classical spin model (vertices = spins, one edge
per interaction). Dualizing exchanges the two roles.

Text format: first line is the vertex count, then one line per edge
listing its vertex indices, space-separated.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import TextIO

from isingcode.errors import NotDualizableError


@dataclass(frozen=True)
class Hypergraph:
    n_vertices: int
    edges: tuple[frozenset[int], ...]

    def __post_init__(self):
        if self.n_vertices < 0:
            raise ValueError("negative vertex count")
        for i, e in enumerate(self.edges):
            if not e:
                raise ValueError(f"edge {i} is empty")
            bad = [v for v in e if not 0 <= v < self.n_vertices]
            if bad:
                raise ValueError(f"edge {i} references invalid vertices {sorted(bad)}")

    @classmethod
    def from_edge_lists(cls, n_vertices: int, edges) -> "Hypergraph":
        return cls(n_vertices, tuple(frozenset(e) for e in edges))

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def vertex_degrees(self) -> list[int]:
        deg = [0] * self.n_vertices
        for e in self.edges:
            for v in e:
                deg[v] += 1
        return deg

    def isolated_vertices(self) -> list[int]:
        return [v for v, d in enumerate(self.vertex_degrees()) if d == 0]

    def edge_size_histogram(self) -> dict[int, int]:
        hist: dict[int, int] = {}
        for e in self.edges:
            hist[len(e)] = hist.get(len(e), 0) + 1
        return hist

    def canonical_edges(self) -> tuple[tuple[int, ...], ...]:
        """Edges as sorted tuples, in sorted order (edge-order independent)."""
        return tuple(sorted(tuple(sorted(e)) for e in self.edges))


def hypergraphs_equal(a: Hypergraph, b: Hypergraph) -> bool:
    """Equality up to edge ordering, under the identity vertex labeling."""
    return a.n_vertices == b.n_vertices and a.canonical_edges() == b.canonical_edges()


def dual_hypergraph(h: Hypergraph) -> Hypergraph:
    """Exchange vertices and edges: dual vertex j = edge j of ``h``, dual
    edge i = the set of h-edges containing vertex i.

    Requires every vertex to sit in at least one edge. Duplicate edges
    are collapsed first (with a warning), since duality cannot
    distinguish them.
    """
    isolated = h.isolated_vertices()
    if isolated:
        raise NotDualizableError(isolated)
    unique = list(dict.fromkeys(h.edges))
    if len(unique) < h.n_edges:
        warnings.warn(
            f"collapsed {h.n_edges - len(unique)} duplicate hyperedges before dualizing",
            stacklevel=2,
        )
    membership: list[set[int]] = [set() for _ in range(h.n_vertices)]
    for j, e in enumerate(unique):
        for v in e:
            membership[v].add(j)
    return Hypergraph.from_edge_lists(len(unique), membership)


def write_hypergraph(h: Hypergraph, stream: TextIO) -> None:
    stream.write(f"{h.n_vertices}\n")
    for e in h.edges:
        stream.write(" ".join(str(v) for v in sorted(e)) + "\n")


def read_hypergraph(stream: TextIO) -> Hypergraph:
    """Parse the text format; errors carry the offending line number."""
    header = stream.readline()
    if not header.strip():
        raise ValueError("line 1: missing vertex-count header")
    try:
        n_vertices = int(header)
    except ValueError:
        raise ValueError(f"line 1: vertex count is not an integer: {header.strip()!r}") from None
    edges = []
    for lineno, line in enumerate(stream, start=2):
        if not line.strip():
            continue
        try:
            verts = [int(tok) for tok in line.split()]
        except ValueError:
            raise ValueError(f"line {lineno}: non-integer vertex index in {line.strip()!r}") from None
        bad = [v for v in verts if not 0 <= v < n_vertices]
        if bad:
            raise ValueError(f"line {lineno}: vertex indices {bad} out of range [0, {n_vertices})")
        if not verts:
            raise ValueError(f"line {lineno}: empty edge")
        edges.append(verts)
    return Hypergraph.from_edge_lists(n_vertices, edges)


def lattice_interaction_hypergraph(lattice) -> Hypergraph:
    """The Ising interaction hypergraph of a lattice: one 2-vertex edge
    per lattice edge."""
    return Hypergraph.from_edge_lists(lattice.n_vertices, [set(e) for e in lattice.edges])
