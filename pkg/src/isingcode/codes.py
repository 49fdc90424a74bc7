"""CSS codes, their hypergraphs, and the dual classical spin models.

A CSS code's X (or Z) sector is a hypergraph with qubits as vertices
and one hyperedge per check; dualizing it gives the interaction
hypergraph of the corresponding classical spin model. Builders cover
the toric/planar code on any square lattice, a brick-wall hexagonal
2-colex color code, and the X-cube fracton code on a periodic cubic
lattice.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import TextIO

from isingcode.errors import InvalidDimensionError
from isingcode.gf2 import BitVector, gf2_rank
from isingcode.hypergraph import Hypergraph, dual_hypergraph
from isingcode.lattice import Boundary, Lattice2D


class Sector(Enum):
    X = "x"
    Z = "z"


@dataclass(frozen=True)
class CssCode:
    n_qubits: int
    x_checks: tuple[BitVector, ...]
    z_checks: tuple[BitVector, ...]
    name: str = ""

    def __post_init__(self):
        for ch in self.x_checks + self.z_checks:
            if ch.length != self.n_qubits:
                raise ValueError("check length does not match qubit count")
        for x in self.x_checks:
            for z in self.z_checks:
                if x.overlap(z) % 2 != 0:
                    raise ValueError(
                        f"X check {x} and Z check {z} overlap oddly; not a CSS code"
                    )

    def n_logical_qubits(self) -> int:
        return self.n_qubits - gf2_rank(list(self.x_checks)) - gf2_rank(list(self.z_checks))

    def degeneracy(self) -> int:
        return 1 << self.n_logical_qubits()


@dataclass(frozen=True)
class SpinModel:
    """Classical spin model read off a hypergraph: one k-body
    interaction per hyperedge; signs are assigned downstream."""

    n_spins: int
    interactions: tuple[tuple[int, ...], ...]

    @property
    def body_size_histogram(self) -> dict[int, int]:
        hist: dict[int, int] = {}
        for it in self.interactions:
            hist[len(it)] = hist.get(len(it), 0) + 1
        return hist

    def write_couplings(self, stream: TextIO) -> None:
        """One line per interaction: vertex indices, then a placeholder
        sign column (always +1; samplers overwrite it)."""
        stream.write(f"{self.n_spins} {len(self.interactions)}\n")
        for it in self.interactions:
            stream.write(" ".join(str(v) for v in it) + " +1\n")


def code_to_hypergraph(code: CssCode, sector: Sector) -> Hypergraph:
    """Vertices = qubits, one hyperedge per check support."""
    checks = code.x_checks if sector is Sector.X else code.z_checks
    if not checks:
        raise ValueError(f"code {code.name!r} has no {sector.value.upper()} checks")
    return Hypergraph.from_edge_lists(code.n_qubits, [set(c.indices()) for c in checks])


def spin_model_from_hypergraph(h: Hypergraph) -> SpinModel:
    return SpinModel(h.n_vertices, tuple(tuple(sorted(e)) for e in h.edges))


def dual_spin_model(code: CssCode, sector: Sector) -> SpinModel:
    """The classical model dual to a code sector: spins on the dual
    vertices (one per check), one interaction per qubit."""
    return spin_model_from_hypergraph(dual_hypergraph(code_to_hypergraph(code, sector)))


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------


def build_toric(lattice: Lattice2D) -> CssCode:
    """Toric (Torus) or planar (Open) code on a square lattice: X checks
    on vertex stars, Z checks on plaquettes (3-local at the open
    boundary)."""
    n = lattice.n_edges
    if lattice.boundary is Boundary.OPEN:
        x_checks = [lattice.vertex_support(v) for v in range(lattice.width * lattice.height)]
    else:
        x_checks = lattice.vertex_supports()
    z_checks = lattice.face_supports()
    name = f"toric-{lattice.width}x{lattice.height}-{lattice.boundary.value}"
    return CssCode(n, tuple(x_checks), tuple(z_checks), name)


def build_color_2d(extent: int) -> CssCode:
    """Brick-wall hexagonal 2-colex patch with open boundary.

    Qubits on vertices; every hexagonal plaquette carries both an X and
    a Z check of weight 6. ``extent`` counts hexagon bands in each
    direction. Bulk qubits sit in 3 plaquettes, so the dual model has
    3-body interactions.
    """
    if extent < 2:
        raise InvalidDimensionError(f"color-code extent must be >= 2, got {extent}")
    n_rows = extent + 1
    n_cols = 2 * extent + 2
    # Hexagon (r, c): vertices {(r, c..c+2), (r+1, c..c+2)}; a brick
    # exists when (r + c) is even, giving the masonry offset.
    hexes = []
    for r in range(n_rows - 1):
        for c in range(n_cols - 2):
            if (r + c) % 2 == 0:
                hexes.append([(r, c + k) for k in range(3)] + [(r + 1, c + k) for k in range(3)])
    used = sorted({v for hx in hexes for v in hx})
    qubit_of = {v: i for i, v in enumerate(used)}
    checks = tuple(
        BitVector.from_indices(len(used), [qubit_of[v] for v in hx]) for hx in hexes
    )
    return CssCode(len(used), checks, checks, name=f"color2d-{extent}")


def build_xcube(lx: int, ly: int, lz: int) -> CssCode:
    """X-cube fracton code on a periodic cubic lattice.

    Qubits on links (3 L^3 of them); one 12-link X check per cubic
    cell; three 4-link planar cross Z checks per vertex. Every link
    sits in 4 cells, so the dual model is 4-body.
    """
    if min(lx, ly, lz) < 2:
        raise InvalidDimensionError(f"X-cube extents must be >= 2, got {(lx, ly, lz)}")
    dims = (lx, ly, lz)

    def link(axis: int, x: int, y: int, z: int) -> int:
        # Link along ``axis`` starting at vertex (x, y, z), periodic.
        x, y, z = x % lx, y % ly, z % lz
        return 3 * ((x * ly + y) * lz + z) + axis

    n_qubits = 3 * lx * ly * lz

    def cube_links(x: int, y: int, z: int) -> list[int]:
        ls = []
        for dy in (0, 1):
            for dz in (0, 1):
                ls.append(link(0, x, y + dy, z + dz))
        for dx in (0, 1):
            for dz in (0, 1):
                ls.append(link(1, x + dx, y, z + dz))
        for dx in (0, 1):
            for dy in (0, 1):
                ls.append(link(2, x + dx, y + dy, z))
        return ls

    x_checks = []
    for x in range(lx):
        for y in range(ly):
            for z in range(lz):
                x_checks.append(BitVector.from_indices(n_qubits, cube_links(x, y, z)))

    # Vertex crosses: the 4 links at (x,y,z) within each coordinate plane.
    z_checks = []
    plane_axes = ((0, 1), (1, 2), (0, 2))
    for x in range(lx):
        for y in range(ly):
            for z in range(lz):
                for a, b in plane_axes:
                    links = [
                        link(a, x, y, z),
                        link(a, x - (a == 0), y - (a == 1), z - (a == 2)),
                        link(b, x, y, z),
                        link(b, x - (b == 0), y - (b == 1), z - (b == 2)),
                    ]
                    z_checks.append(BitVector.from_indices(n_qubits, links))
    return CssCode(n_qubits, tuple(x_checks), tuple(z_checks), name=f"xcube-{lx}x{ly}x{lz}")
