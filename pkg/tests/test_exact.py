import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from isingcode import exact
from isingcode.errors import InstanceTooLargeError, UnsupportedBoundaryError
from isingcode.gf2 import BitVector
from isingcode.lattice import Boundary, build_square_lattice, shortest_boundary_path
from isingcode.rng import bernoulli_bitvector, stream


def brute_force_z(couplings):
    """Independent oracle: literal sum over +-1 spin configurations,
    written against the public edge list only."""
    lat = couplings.lattice
    n_free = lat.width * lat.height
    total = 0.0
    for config in itertools.product((-1, 1), repeat=n_free):
        spins = list(config) + ([1] if lat.ghost is not None else [])
        energy = sum(
            couplings.edge_coupling(e) * spins[a] * spins[b]
            for e, (a, b) in enumerate(lat.edges)
        )
        total += math.exp(couplings.beta * energy)
    return total


def brute_force_m(couplings, site):
    lat = couplings.lattice
    n_free = lat.width * lat.height
    num = z = 0.0
    for config in itertools.product((-1, 1), repeat=n_free):
        spins = list(config) + ([1] if lat.ghost is not None else [])
        energy = sum(
            couplings.edge_coupling(e) * spins[a] * spins[b]
            for e, (a, b) in enumerate(lat.edges)
        )
        w = math.exp(couplings.beta * energy)
        z += w
        num += w * spins[site]
    return num / z


def random_couplings(w, h, boundary, seed, beta_j=None):
    lat = build_square_lattice(w, h, boundary)
    rng = stream(seed, "test", w, h)
    if beta_j is None:
        beta_j = 0.1 + 1.9 * rng.random()
    signs = bernoulli_bitvector(lat.n_edges, 0.4, rng)
    return exact.CouplingAssignment(lat, signs, beta=beta_j)


class TestNishimoriMap:
    @given(st.floats(1e-4, 0.5))
    def test_roundtrip(self, q):
        assert exact.q_from_beta_j(exact.beta_j_from_q(q)) == pytest.approx(q, rel=1e-12)

    def test_known_value(self):
        # q = 1/(1+e^2): beta J = 1.
        assert exact.beta_j_from_q(1 / (1 + math.e**2)) == pytest.approx(1.0, rel=1e-12)

    def test_invalid_q(self):
        with pytest.raises(ValueError):
            exact.beta_j_from_q(0.0)
        with pytest.raises(ValueError):
            exact.beta_j_from_q(0.6)


class TestDirectRoute:
    def test_beta_zero_counts_states(self):
        lat = build_square_lattice(3, 3, Boundary.OPEN)
        ca = exact.CouplingAssignment(lat, BitVector.zeros(lat.n_edges), beta=0.0)
        assert exact.partition_function_direct(ca) == 512.0

    @pytest.mark.parametrize("boundary", list(Boundary))
    def test_against_literal_enumeration(self, boundary):
        ca = random_couplings(2, 3, boundary, seed=11)
        assert exact.partition_function_direct(ca) == pytest.approx(
            brute_force_z(ca), rel=1e-12
        )

    def test_magnetization_against_literal_enumeration(self):
        ca = random_couplings(2, 2, Boundary.OPEN, seed=5)
        for site in range(4):
            assert exact.magnetization_direct(ca, site) == pytest.approx(
                brute_force_m(ca, site), abs=1e-12
            )

    def test_ghost_site_is_clamped(self):
        ca = random_couplings(2, 2, Boundary.OPEN, seed=5)
        assert exact.magnetization_direct(ca, ca.lattice.ghost) == 1.0

    def test_enum_bound_enforced(self):
        lat = build_square_lattice(6, 6, Boundary.OPEN)
        ca = exact.CouplingAssignment(lat, BitVector.zeros(lat.n_edges), beta=1.0)
        with pytest.raises(InstanceTooLargeError):
            exact.partition_function_direct(ca)


class TestQuantumRoute:
    @pytest.mark.parametrize("seed", range(5))
    def test_partition_functions_agree(self, seed):
        ca = random_couplings(3, 3, Boundary.OPEN, seed=seed)
        zq = exact.partition_function_quantum(ca)
        zd = exact.partition_function_direct(ca)
        assert abs(zq - zd) / zd < 1e-12

    def test_torus_partition_functions_agree(self):
        ca = random_couplings(3, 3, Boundary.TORUS, seed=3)
        zq = exact.partition_function_quantum(ca)
        zd = exact.partition_function_direct(ca)
        assert abs(zq - zd) / zd < 1e-12

    @pytest.mark.parametrize("seed", range(3))
    def test_magnetizations_agree(self, seed):
        ca = random_couplings(3, 3, Boundary.OPEN, seed=seed)
        for site in range(9):
            path = shortest_boundary_path(ca.lattice, site)
            mq = exact.magnetization_quantum(ca, path)
            md = exact.magnetization_direct(ca, site)
            assert abs(mq - md) < 1e-12

    def test_path_independence(self):
        ca = random_couplings(3, 3, Boundary.OPEN, seed=9)
        lat = ca.lattice
        site = lat.center_site
        path = shortest_boundary_path(lat, site)
        m_ref = exact.magnetization_quantum(ca, path)
        from isingcode.lattice import StringPath

        for f in range(len(lat.faces)):
            alt = StringPath(path.edge_set ^ lat.face_support(f), site, True)
            assert abs(exact.magnetization_quantum(ca, alt) - m_ref) < 1e-12

    def test_unanchored_path_rejected(self):
        ca = random_couplings(2, 2, Boundary.OPEN, seed=1)
        from isingcode.lattice import StringPath

        bad = StringPath(BitVector.zeros(ca.lattice.n_edges), 0, False)
        with pytest.raises(ValueError):
            exact.magnetization_quantum(ca, bad)

    def test_torus_magnetization_rejected(self):
        ca = random_couplings(2, 2, Boundary.TORUS, seed=1)
        from isingcode.lattice import StringPath

        path = StringPath(BitVector.zeros(ca.lattice.n_edges), 0, True)
        with pytest.raises(UnsupportedBoundaryError):
            exact.magnetization_quantum(ca, path)


class TestCoherence:
    @pytest.mark.parametrize("p,q", [(0.05, 0.1), (0.1, 0.2), (0.2, 0.3)])
    def test_identity_with_dual_magnetization(self, p, q):
        lat = build_square_lattice(3, 3, Boundary.OPEN)
        site = lat.center_site
        path = shortest_boundary_path(lat, site)
        for i in range(5):
            eta = bernoulli_bitvector(lat.n_edges, p, stream(77, "eta", i))
            order = exact.loop_parity_weights(lat, eta, q, path).order
            m = exact.magnetization_direct(exact.nishimori_coupling(lat, eta, q), site)
            assert abs(order - m) < 1e-12

    def test_no_noise_gives_full_coherence(self):
        lat = build_square_lattice(2, 2, Boundary.OPEN)
        path = shortest_boundary_path(lat, lat.center_site)
        eta = BitVector.zeros(lat.n_edges)
        res = exact.loop_parity_weights(lat, eta, 1e-6, path)
        assert res.order == pytest.approx(1.0, abs=1e-4)

    def test_maximal_noise_kills_coherence(self):
        lat = build_square_lattice(2, 2, Boundary.OPEN)
        path = shortest_boundary_path(lat, lat.center_site)
        eta = BitVector.zeros(lat.n_edges)
        res = exact.loop_parity_weights(lat, eta, 0.5, path)
        assert abs(res.order) < 1e-12

    def test_invalid_q_rejected(self):
        lat = build_square_lattice(2, 2, Boundary.OPEN)
        path = shortest_boundary_path(lat, lat.center_site)
        with pytest.raises(ValueError):
            exact.loop_parity_weights(lat, BitVector.zeros(lat.n_edges), 0.7, path)

    def test_scan_matches_single_calls(self):
        lat = build_square_lattice(2, 2, Boundary.OPEN)
        site = lat.center_site
        est = exact.coherence_scan_exact(lat, site, p=0.1, q=0.2, n_eta_samples=4, seed=3)
        path = shortest_boundary_path(lat, site)
        orders = []
        for i in range(4):
            eta = bernoulli_bitvector(lat.n_edges, 0.1, stream(3, "eta", i))
            orders.append(exact.loop_parity_weights(lat, eta, 0.2, path).order)
        assert est.mean == pytest.approx(sum(orders) / 4, abs=1e-14)
        assert est.n_samples == 4


class TestHomology:
    def test_probabilities_sum_to_one(self):
        lat = build_square_lattice(3, 3, Boundary.TORUS)
        eta = bernoulli_bitvector(lat.n_edges, 0.1, stream(1, "eta", 0))
        dist = exact.homology_distribution(lat, eta, 0.1)
        total = sum(dist.prob(mu, nu) for mu in (0, 1) for nu in (0, 1))
        assert total == pytest.approx(1.0, abs=1e-12)

    def test_low_noise_concentrates_on_trivial_class(self):
        lat = build_square_lattice(3, 3, Boundary.TORUS)
        dist = exact.homology_distribution(lat, BitVector.zeros(lat.n_edges), 0.01)
        assert dist.prob(0, 0) > 0.999

    def test_logical_shift_moves_the_class(self):
        from isingcode.lattice import torus_logical_loops

        lat = build_square_lattice(3, 3, Boundary.TORUS)
        tx1, _ = torus_logical_loops(lat)
        dist = exact.homology_distribution(lat, tx1, 0.01)
        assert dist.max_prob == pytest.approx(dist.prob(1, 0))

    def test_maximal_noise_is_uniform(self):
        lat = build_square_lattice(2, 2, Boundary.TORUS)
        eta = bernoulli_bitvector(lat.n_edges, 0.3, stream(8, "eta", 0))
        dist = exact.homology_distribution(lat, eta, 0.5)
        for mu in (0, 1):
            for nu in (0, 1):
                assert dist.prob(mu, nu) == pytest.approx(0.25, abs=1e-12)

    def test_open_lattice_rejected(self):
        lat = build_square_lattice(2, 2, Boundary.OPEN)
        with pytest.raises(UnsupportedBoundaryError):
            exact.homology_distribution(lat, BitVector.zeros(lat.n_edges), 0.1)


class TestFidelityProportionality:
    @pytest.mark.parametrize("L,q", [(2, 0.05), (3, 0.15)])
    def test_ratio_constant_across_disorder(self, L, q):
        lat = build_square_lattice(L, L, Boundary.TORUS)
        etas = [bernoulli_bitvector(lat.n_edges, q, stream(5, "eta", i)) for i in range(10)]
        assert exact.fidelity_vs_partition_proportionality(lat, etas, q) < 1e-10
