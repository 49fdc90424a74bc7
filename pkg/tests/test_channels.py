import pytest

from isingcode import exact
from isingcode.channels import (
    ChannelSpec,
    SyndromeSet,
    coherence_experiment,
    sample_error_pattern,
    syndromes_of,
    threshold_experiment,
)
from isingcode.errors import InstanceTooLargeError
from isingcode.gf2 import BitVector
from isingcode.lattice import Boundary, build_square_lattice
from isingcode.mc import McParams
from isingcode.rng import stream


class TestChannelSpec:
    def test_nishimori_line_detection(self):
        assert ChannelSpec(0.1, 0.1).on_nishimori_line
        assert not ChannelSpec(0.1, 0.2).on_nishimori_line

    def test_beta_j(self):
        assert ChannelSpec(0.1, 0.1).beta_j == pytest.approx(exact.beta_j_from_q(0.1))

    def test_invalid_probabilities(self):
        with pytest.raises(ValueError):
            ChannelSpec(0.8, 0.1)
        with pytest.raises(ValueError):
            ChannelSpec(0.1, 0.0)


class TestSyndromes:
    def test_single_error_flags_two_faces(self):
        lat = build_square_lattice(3, 3, Boundary.TORUS)
        err = BitVector.from_indices(lat.n_edges, [0])
        assert len(syndromes_of(lat, err)) == 2

    def test_stabilizer_loops_are_invisible(self):
        # X errors forming vertex-star loops commute with every face check.
        lat = build_square_lattice(3, 3, Boundary.TORUS)
        for v in range(lat.n_vertices):
            assert len(syndromes_of(lat, lat.vertex_support(v))) == 0

    def test_syndromes_add_mod_2(self):
        lat = build_square_lattice(3, 3, Boundary.TORUS)
        a = sample_error_pattern(lat, 0.3, stream(0, "eta", 0))
        b = sample_error_pattern(lat, 0.3, stream(0, "eta", 1))
        assert syndromes_of(lat, a ^ b) == syndromes_of(lat, a) ^ syndromes_of(lat, b)

    def test_length_mismatch_rejected(self):
        lat = build_square_lattice(3, 3, Boundary.TORUS)
        with pytest.raises(ValueError):
            syndromes_of(lat, BitVector.zeros(5))


class TestCoherenceExperiment:
    def test_exact_path_matches_scan(self):
        lat = build_square_lattice(3, 3, Boundary.OPEN)
        spec = ChannelSpec(0.1, 0.2)
        params = McParams(3, Boundary.OPEN, spec.beta_j, 0.1, seed=4)
        est = coherence_experiment(lat, lat.center_site, spec, n_eta=6, mc_params=params, seed=4)
        ref = exact.coherence_scan_exact(lat, lat.center_site, 0.1, 0.2, 6, seed=4)
        assert est.mean == pytest.approx(ref.mean, abs=1e-12)

    def test_perfect_channel_is_fully_coherent(self):
        lat = build_square_lattice(3, 3, Boundary.OPEN)
        spec = ChannelSpec(0.0, 1e-6)
        params = McParams(3, Boundary.OPEN, spec.beta_j, 0.0, seed=0)
        est = coherence_experiment(lat, lat.center_site, spec, n_eta=3, mc_params=params, seed=0)
        assert est.mean == pytest.approx(1.0, abs=1e-4)


class TestThresholdExperiment:
    def test_success_decreases_with_noise(self):
        rows = threshold_experiment(3, [0.02, 0.25], n_eta=60, seed=1)
        assert rows[0]["success_mean"] > rows[1]["success_mean"]

    def test_noiseless_limit_is_certain(self):
        rows = threshold_experiment(3, [0.0], n_eta=5, seed=0)
        assert rows[0]["success_mean"] == pytest.approx(1.0, abs=1e-6)

    def test_row_schema(self):
        rows = threshold_experiment(2, [0.1], n_eta=4, seed=0)
        assert set(rows[0]) == {
            "p", "success_mean", "success_stderr",
            "correct_mean", "correct_stderr", "n_eta", "L",
        }
        assert rows[0]["L"] == 2

    def test_oversized_lattice_rejected(self):
        with pytest.raises(InstanceTooLargeError):
            threshold_experiment(8, [0.1], n_eta=1, seed=0)

    def test_invalid_p_rejected(self):
        with pytest.raises(ValueError):
            threshold_experiment(2, [0.7], n_eta=1, seed=0)
