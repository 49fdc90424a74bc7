"""2D square lattices with open (clamped) or toroidal boundary.

Vertex spins live on vertices, edge qubits on edges, face checks on
plaquettes. On the open lattice all fixed boundary spins are merged
into a single ghost vertex (index ``width * height``) clamped to +1;
every boundary plaquette then becomes a 3-edge check, except the four
corner plaquettes which close through the ghost with only 2 edges.

Edge indexing is frozen (bit positions in every BitVector depend on it):

Torus (width w, height h), vertex (r, c) has index r*w + c:
    per row r, first the w horizontal edges (r,c)-(r,c+1 mod w) for
    c = 0..w-1, then the w vertical edges (r,c)-(r+1 mod h,c).

Open (w x h free vertices plus ghost g = w*h):
    first the w top ghost verticals g-(0,c);
    then per row r: the w+1 horizontals g-(r,0), (r,0)-(r,1), ...,
    (r,w-1)-g, followed by the w verticals (r,c)-(r+1,c), where row h
    is the ghost.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from isingcode.errors import InvalidDimensionError, UnsupportedBoundaryError
from isingcode.gf2 import BitVector


class Boundary(Enum):
    OPEN = "open"
    TORUS = "torus"


@dataclass(frozen=True)
class Lattice2D:
    """Square lattice geometry with precomputed incidence.

    ``edges[i]`` is a vertex pair, ``faces[f]`` the edge indices of
    plaquette f, ``vertex_edges[v]`` the edge indices incident to v.
    On the open lattice the ghost vertex is the last entry.
    """

    width: int
    height: int
    boundary: Boundary
    edges: tuple[tuple[int, int], ...]
    faces: tuple[tuple[int, ...], ...]
    vertex_edges: tuple[tuple[int, ...], ...]

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_vertices(self) -> int:
        return len(self.vertex_edges)

    @property
    def n_free_spins(self) -> int:
        """Spins summed over in the partition function."""
        if self.boundary is Boundary.TORUS:
            return self.width * self.height
        return self.width * self.height  # ghost is clamped

    @property
    def ghost(self) -> Optional[int]:
        if self.boundary is Boundary.OPEN:
            return self.width * self.height
        return None

    def vertex_index(self, row: int, col: int) -> int:
        if self.boundary is Boundary.TORUS:
            return (row % self.height) * self.width + (col % self.width)
        if not (0 <= row < self.height and 0 <= col < self.width):
            raise IndexError(f"vertex ({row}, {col}) outside open lattice")
        return row * self.width + col

    @property
    def center_site(self) -> int:
        return self.vertex_index(self.height // 2, self.width // 2)

    def face_support(self, f: int) -> BitVector:
        return BitVector.from_indices(self.n_edges, self.faces[f])

    def vertex_support(self, v: int) -> BitVector:
        return BitVector.from_indices(self.n_edges, self.vertex_edges[v])

    def face_supports(self) -> list[BitVector]:
        return [self.face_support(f) for f in range(len(self.faces))]

    def vertex_supports(self) -> list[BitVector]:
        return [self.vertex_support(v) for v in range(self.n_vertices)]

    def loop_generators(self) -> list[BitVector]:
        """Independent generators of the X-loop group span{A_v}.

        Open: the star of every free vertex (the ghost star is their
        product). Torus: all vertex stars but the last.
        """
        if self.boundary is Boundary.OPEN:
            return [self.vertex_support(v) for v in range(self.width * self.height)]
        return [self.vertex_support(v) for v in range(self.n_vertices - 1)]


@dataclass(frozen=True)
class StringPath:
    """Edge support of a string from the fixed boundary to a site."""

    edge_set: BitVector
    endpoint_site: int
    anchored: bool = True


def _build_torus(w: int, h: int) -> Lattice2D:
    def vid(r, c):
        return (r % h) * w + (c % w)

    def h_edge(r, c):
        return (r % h) * 2 * w + (c % w)

    def v_edge(r, c):
        return (r % h) * 2 * w + w + (c % w)

    edges: list[tuple[int, int]] = []
    for r in range(h):
        for c in range(w):
            edges.append((vid(r, c), vid(r, c + 1)))
        for c in range(w):
            edges.append((vid(r, c), vid(r + 1, c)))

    faces = []
    for r in range(h):
        for c in range(w):
            faces.append((h_edge(r, c), h_edge(r + 1, c), v_edge(r, c), v_edge(r, c + 1)))

    vertex_edges = []
    for r in range(h):
        for c in range(w):
            vertex_edges.append(
                tuple(sorted((h_edge(r, c), h_edge(r, c - 1), v_edge(r, c), v_edge(r - 1, c))))
            )
    return Lattice2D(w, h, Boundary.TORUS, tuple(edges), tuple(faces), tuple(vertex_edges))


def _build_open(w: int, h: int) -> Lattice2D:
    ghost = w * h

    def vid(r, c):
        # Rows -1 and h, columns -1 and w are the clamped boundary (ghost).
        if r < 0 or r >= h or c < 0 or c >= w:
            return ghost
        return r * w + c

    def h_edge(r, c):
        # Horizontal edge (r,c)-(r,c+1), c in -1..w-1, r in 0..h-1.
        return w + r * (2 * w + 1) + (c + 1)

    def v_edge(r, c):
        # Vertical edge (r,c)-(r+1,c), r in -1..h-1, c in 0..w-1.
        if r < 0:
            return c
        return w + r * (2 * w + 1) + (w + 1) + c

    n_edges = 2 * w * h + w + h
    edges_by_id: dict[int, tuple[int, int]] = {}
    for c in range(w):
        edges_by_id[v_edge(-1, c)] = (ghost, vid(0, c))
    for r in range(h):
        for c in range(-1, w):
            edges_by_id[h_edge(r, c)] = (vid(r, c), vid(r, c + 1))
        for c in range(w):
            edges_by_id[v_edge(r, c)] = (vid(r, c), vid(r + 1, c))
    assert len(edges_by_id) == n_edges
    edges = tuple(edges_by_id[i] for i in range(n_edges))

    # Plaquettes of the extended grid; edges fully between boundary spins
    # do not exist, so boundary faces have 3 edges and corners 2.
    faces = []
    for pr in range(-1, h):
        for pc in range(-1, w):
            es = []
            if 0 <= pr:
                es.append(h_edge(pr, pc))
            if pr + 1 < h:
                es.append(h_edge(pr + 1, pc))
            if 0 <= pc:
                es.append(v_edge(pr, pc))
            if pc + 1 < w:
                es.append(v_edge(pr, pc + 1))
            faces.append(tuple(sorted(es)))

    incident: list[list[int]] = [[] for _ in range(w * h + 1)]
    for i, (a, b) in enumerate(edges):
        incident[a].append(i)
        incident[b].append(i)
    vertex_edges = tuple(tuple(sorted(es)) for es in incident)
    return Lattice2D(w, h, Boundary.OPEN, edges, tuple(faces), vertex_edges)


def build_square_lattice(width: int, height: int, boundary: Boundary) -> Lattice2D:
    """Build a width x height square lattice with the given boundary."""
    if width < 2 or height < 2:
        raise InvalidDimensionError(f"lattice extent must be >= 2, got {width}x{height}")
    if boundary is Boundary.TORUS:
        return _build_torus(width, height)
    return _build_open(width, height)


def torus_logical_loops(lattice: Lattice2D) -> tuple[BitVector, BitVector]:
    """Canonical X-type noncontractible loops (T_x^1, T_x^2) on the torus.

    T_x^1 is the row-0 ladder of vertical edges (winding along direction
    1), T_x^2 the column-0 ladder of horizontal edges. Both commute with
    every face check; T_x^i crosses T_z^j once exactly when i != j.
    """
    if lattice.boundary is not Boundary.TORUS:
        raise UnsupportedBoundaryError("logical loops exist only on the torus")
    w, h, m = lattice.width, lattice.height, lattice.n_edges
    tx1 = BitVector.from_indices(m, [w + c for c in range(w)])
    tx2 = BitVector.from_indices(m, [r * 2 * w for r in range(h)])
    return tx1, tx2


def torus_z_loops(lattice: Lattice2D) -> tuple[BitVector, BitVector]:
    """Canonical Z-type noncontractible loops (T_z^1, T_z^2) on the torus."""
    if lattice.boundary is not Boundary.TORUS:
        raise UnsupportedBoundaryError("logical loops exist only on the torus")
    w, h, m = lattice.width, lattice.height, lattice.n_edges
    tz1 = BitVector.from_indices(m, [c for c in range(w)])  # row-0 horizontals
    tz2 = BitVector.from_indices(m, [r * 2 * w + w for r in range(h)])  # col-0 verticals
    return tz1, tz2


def shortest_boundary_path(lattice: Lattice2D, site: int) -> StringPath:
    """Deterministic shortest edge path from the fixed boundary to ``site``.

    BFS from the ghost vertex, expanding lowest-index neighbors first,
    so repeated calls return the same path. The particular path is
    irrelevant to any observable (paths differ by face supports).
    """
    if lattice.boundary is not Boundary.OPEN:
        raise UnsupportedBoundaryError("boundary paths require an open lattice")
    if not 0 <= site < lattice.n_vertices:
        raise IndexError(f"site {site} out of range")
    ghost = lattice.ghost
    if site == ghost:
        return StringPath(BitVector.zeros(lattice.n_edges), site, anchored=True)

    parent_edge: dict[int, int] = {ghost: -1}
    queue = deque([ghost])
    while queue:
        v = queue.popleft()
        if v == site:
            break
        steps = []
        for e in lattice.vertex_edges[v]:
            a, b = lattice.edges[e]
            u = b if a == v else a
            steps.append((u, e))
        for u, e in sorted(steps):
            if u not in parent_edge:
                parent_edge[u] = e
                queue.append(u)

    path_edges = []
    v = site
    while v != ghost:
        e = parent_edge[v]
        path_edges.append(e)
        a, b = lattice.edges[e]
        v = b if a == v else a
    return StringPath(BitVector.from_indices(lattice.n_edges, path_edges), site, anchored=True)
