import pytest
from hypothesis import given, strategies as st

from isingcode.errors import InvalidDimensionError
from isingcode.gf2 import BitVector, gf2_rank
from isingcode.lattice import (
    Boundary,
    build_square_lattice,
    shortest_boundary_path,
    torus_logical_loops,
    torus_z_loops,
)

DIMS = st.integers(2, 5)


class TestCounts:
    @given(DIMS, DIMS)
    def test_open_edge_count(self, w, h):
        lat = build_square_lattice(w, h, Boundary.OPEN)
        assert lat.n_edges == 2 * w * h + w + h
        assert lat.n_free_spins == w * h

    @given(DIMS, DIMS)
    def test_torus_edge_count(self, w, h):
        lat = build_square_lattice(w, h, Boundary.TORUS)
        assert lat.n_edges == 2 * w * h
        assert lat.ghost is None

    def test_too_small_rejected(self):
        with pytest.raises(InvalidDimensionError):
            build_square_lattice(1, 3, Boundary.OPEN)


class TestFaces:
    @given(DIMS, DIMS, st.sampled_from(list(Boundary)))
    def test_every_edge_in_exactly_two_faces(self, w, h, boundary):
        lat = build_square_lattice(w, h, boundary)
        counts = [0] * lat.n_edges
        for f in range(len(lat.faces)):
            for e in lat.face_support(f).indices():
                counts[e] += 1
        assert all(c == 2 for c in counts)

    @given(DIMS, DIMS, st.sampled_from(list(Boundary)))
    def test_faces_xor_to_zero(self, w, h, boundary):
        lat = build_square_lattice(w, h, boundary)
        acc = BitVector.zeros(lat.n_edges)
        for f in lat.face_supports():
            acc = acc ^ f
        assert acc.weight == 0

    def test_open_face_sizes(self):
        # Extended-grid plaquettes: 4 corner faces are 2-local, other
        # boundary faces 3-local, interior faces 4-local.
        lat = build_square_lattice(3, 3, Boundary.OPEN)
        sizes = sorted(f.weight for f in lat.face_supports())
        assert sizes.count(2) == 4
        assert sizes.count(3) == 8
        assert sizes.count(4) == 4

    @given(DIMS, DIMS)
    def test_face_rank_spans_cycle_space(self, w, h):
        # Open patch: cycle space dim = E - V + 1 (connected, with ghost).
        lat = build_square_lattice(w, h, Boundary.OPEN)
        n_vertices = w * h + 1
        assert gf2_rank(list(lat.face_supports())) == lat.n_edges - n_vertices + 1

    @given(DIMS, DIMS)
    def test_torus_face_rank(self, w, h):
        lat = build_square_lattice(w, h, Boundary.TORUS)
        assert gf2_rank(list(lat.face_supports())) == w * h - 1


class TestStars:
    @given(DIMS, DIMS, st.sampled_from(list(Boundary)))
    def test_vertex_stars_are_4_local(self, w, h, boundary):
        lat = build_square_lattice(w, h, boundary)
        for v in range(w * h):
            assert lat.vertex_support(v).weight == 4

    @given(DIMS, DIMS, st.sampled_from(list(Boundary)))
    def test_stars_commute_with_faces(self, w, h, boundary):
        lat = build_square_lattice(w, h, boundary)
        for v in range(w * h):
            star = lat.vertex_support(v)
            for f in lat.face_supports():
                assert star.overlap(f) % 2 == 0


class TestBoundaryPaths:
    def test_center_of_3x3(self):
        lat = build_square_lattice(3, 3, Boundary.OPEN)
        path = shortest_boundary_path(lat, lat.center_site)
        assert path.edge_set.weight == 2
        assert path.anchored

    def test_center_of_5x5(self):
        lat = build_square_lattice(5, 5, Boundary.OPEN)
        assert shortest_boundary_path(lat, lat.center_site).edge_set.weight == 3

    def test_ghost_site_gives_empty_path(self):
        lat = build_square_lattice(3, 3, Boundary.OPEN)
        assert shortest_boundary_path(lat, lat.ghost).edge_set.weight == 0

    @given(DIMS, DIMS)
    def test_path_endpoints(self, w, h):
        # A valid string has odd degree exactly at its endpoint vertex
        # (plus the ghost), even degree elsewhere.
        lat = build_square_lattice(w, h, Boundary.OPEN)
        for site in range(w * h):
            path = shortest_boundary_path(lat, site)
            deg = [0] * (w * h + 1)
            for e in path.edge_set.indices():
                a, b = lat.edges[e]
                deg[a] += 1
                deg[b] += 1
            odd = [v for v, d in enumerate(deg) if d % 2 == 1]
            assert odd == sorted([site, lat.ghost])


class TestTorusLoops:
    @given(DIMS, DIMS)
    def test_logical_crossing_parities(self, w, h):
        lat = build_square_lattice(w, h, Boundary.TORUS)
        tx1, tx2 = torus_logical_loops(lat)
        tz1, tz2 = torus_z_loops(lat)
        # Same-index pairs share edges evenly, opposite-index oddly.
        assert tx1.overlap(tz1) % 2 == 0
        assert tx2.overlap(tz2) % 2 == 0
        assert tx1.overlap(tz2) % 2 == 1
        assert tx2.overlap(tz1) % 2 == 1

    @given(DIMS, DIMS)
    def test_loops_commute_with_faces(self, w, h):
        lat = build_square_lattice(w, h, Boundary.TORUS)
        for loop in torus_logical_loops(lat):
            for f in lat.face_supports():
                assert loop.overlap(f) % 2 == 0

    @given(DIMS, DIMS)
    def test_loops_outside_face_span(self, w, h):
        from isingcode.gf2 import gf2_solve_membership

        lat = build_square_lattice(w, h, Boundary.TORUS)
        faces = list(lat.face_supports())
        for loop in torus_logical_loops(lat):
            assert gf2_solve_membership(loop, faces) is None
