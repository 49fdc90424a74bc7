"""Exception types shared across the toolkit."""


class InvalidDimensionError(ValueError):
    """Lattice or code extent below the minimum buildable size."""


class InstanceTooLargeError(ValueError):
    """Instance exceeds the exact-enumeration bound; use the MC path."""


class UnsupportedBoundaryError(ValueError):
    """Operation requires the other boundary condition (Open vs Torus)."""


class NotBracketedError(RuntimeError):
    """No cumulant crossing inside the scanned parameter range."""


class NotDualizableError(ValueError):
    """Hypergraph has isolated vertices, so its dual is undefined."""

    def __init__(self, isolated_vertices):
        self.isolated_vertices = sorted(isolated_vertices)
        super().__init__(
            f"hypergraph has isolated vertices {self.isolated_vertices}; "
            "the dual is undefined"
        )
