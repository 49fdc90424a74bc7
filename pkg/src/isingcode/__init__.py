"""Random-bond Ising model / noisy Toric code duality toolkit.

Small-instance exact engines, large-lattice Monte Carlo with quenched
disorder, and hypergraph duality for CSS stabilizer codes, all sharing
one lattice / GF(2) backbone.
"""

from isingcode.errors import (
    InstanceTooLargeError,
    InvalidDimensionError,
    NotBracketedError,
    NotDualizableError,
    UnsupportedBoundaryError,
)
from isingcode.gf2 import BitVector, gf2_rank, gf2_solve_membership
from isingcode.hypergraph import Hypergraph, dual_hypergraph
from isingcode.lattice import Boundary, Lattice2D, StringPath, build_square_lattice, shortest_boundary_path

__all__ = [
    "BitVector",
    "Boundary",
    "Hypergraph",
    "InstanceTooLargeError",
    "InvalidDimensionError",
    "Lattice2D",
    "NotBracketedError",
    "NotDualizableError",
    "StringPath",
    "UnsupportedBoundaryError",
    "build_square_lattice",
    "dual_hypergraph",
    "gf2_rank",
    "gf2_solve_membership",
    "shortest_boundary_path",
]
