"""Tests for scenario generation, path expansion and channel realization."""

import numpy as np
import pytest

from mimo_manifold import (ChannelEnsemble, Cluster, SteeringModel,
                           expand_paths, generate_scenario, normalize_ensemble,
                           path_gains, realize_h, realize_h0,
                           three_cluster_demo)
from mimo_manifold.errors import EmptyRange, EvenM, ZeroEnergy
from mimo_manifold.scattering import ARRAY_INDEPENDENT, PHYSICAL, PathSet

PI = np.pi


def _single_path(var=1.0, phi_t=0.0, phi_r=0.0):
    return PathSet(gain_variance=np.array([var]), phi_t=np.array([phi_t]),
                   phi_r=np.array([phi_r]))


class TestGenerateScenario:
    def test_deterministic(self):
        a = generate_scenario(1234)
        b = generate_scenario(1234)
        assert a == b

    def test_seed_changes_output(self):
        assert generate_scenario(1) != generate_scenario(2)

    def test_cluster_count_uniform(self):
        # multinomial 3-sigma band around 10^4/5 per count
        counts = np.zeros(5)
        for seed in range(10_000):
            counts[len(generate_scenario(seed)) - 1] += 1
        expected = 10_000 / 5
        sigma = np.sqrt(10_000 * 0.2 * 0.8)
        assert np.all(np.abs(counts - expected) < 3 * sigma)

    def test_ranges(self):
        for seed in range(200):
            for cl in generate_scenario(seed):
                assert -PI <= cl.center_t < PI and -PI <= cl.center_r < PI
                assert 0 <= cl.spread_t <= PI / 2 and 0 <= cl.spread_r <= PI / 2
                assert cl.n_paths == 50 and cl.power == 1.0

    def test_empty_range_rejected(self):
        with pytest.raises(EmptyRange):
            generate_scenario(0, n_cluster_range=(3, 2))

    def test_demo_scenario(self):
        clusters = three_cluster_demo()
        assert [c.center_t / PI for c in clusters] == pytest.approx([-0.3, 0.0, 0.3])
        assert all(c.spread_t == pytest.approx(0.1 * PI) for c in clusters)
        assert all(c.n_paths == 50 for c in clusters)


class TestExpandPaths:
    def test_zero_spread_collapses_to_center(self):
        cl = Cluster(center_t=0.7, center_r=-0.4, spread_t=0.0, spread_r=0.0,
                     n_paths=10)
        paths = expand_paths([cl], rng_seed=5)
        np.testing.assert_allclose(paths.phi_t, 0.7)
        np.testing.assert_allclose(paths.phi_r, -0.4)

    def test_sample_statistics(self):
        cl = Cluster(center_t=0.0, center_r=0.0, spread_t=0.1 * PI,
                     spread_r=0.1 * PI, n_paths=10_000)
        paths = expand_paths([cl], rng_seed=6)
        assert abs(paths.phi_t.mean()) < 0.01
        assert abs(paths.phi_t.std() - 0.1 * PI) / (0.1 * PI) < 0.05

    def test_power_conserved(self):
        clusters = [Cluster(0.1, 0.2, 0.1, 0.1, n_paths=7, power=2.0),
                    Cluster(-0.5, 0.3, 0.2, 0.1, n_paths=13, power=0.5)]
        paths = expand_paths(clusters, rng_seed=7)
        assert paths.total_power == pytest.approx(2.5)
        assert len(paths) == 20

    def test_angles_wrapped(self):
        cl = Cluster(center_t=3.1, center_r=-3.1, spread_t=0.5, spread_r=0.5,
                     n_paths=1000)
        paths = expand_paths([cl], rng_seed=8)
        assert np.all(paths.phi_t >= -PI) and np.all(paths.phi_t < PI)
        assert np.all(paths.phi_r >= -PI) and np.all(paths.phi_r < PI)

    def test_deterministic(self):
        clusters = three_cluster_demo()
        a = expand_paths(clusters, rng_seed=9)
        b = expand_paths(clusters, rng_seed=9)
        np.testing.assert_array_equal(a.phi_t, b.phi_t)
        np.testing.assert_array_equal(a.phi_r, b.phi_r)


class TestPathGains:
    def test_whiteness(self):
        paths = expand_paths(three_cluster_demo(n_paths=10), rng_seed=1)
        alpha = path_gains(paths, 10_000, rng_seed=2)
        cross = alpha.conj().T @ alpha / alpha.shape[0]
        sd = np.sqrt(paths.gain_variance)
        bound = 4 / np.sqrt(10_000) * np.outer(sd, sd)
        off = np.abs(cross - np.diag(np.diag(cross)))
        assert np.all(off < bound)

    def test_variance(self):
        paths = _single_path(var=0.3)
        alpha = path_gains(paths, 20_000, rng_seed=3)
        assert np.mean(np.abs(alpha) ** 2) == pytest.approx(0.3, rel=0.05)

    def test_shared_stream_between_h_and_h0(self):
        paths = expand_paths(three_cluster_demo(n_paths=5), rng_seed=4)
        model = SteeringModel.ula(3, 0.5, PI / 2)
        e_phys = realize_h(paths, model, model, 8, rng_seed=42)
        e_h0 = realize_h0(paths, 5, 5, 8, rng_seed=42)
        # same alpha stream: the all-path coherent sums agree after removing
        # the steering structure; verify via a single shared-path scenario
        single = _single_path()
        a = realize_h(single, model, model, 16, rng_seed=7).realizations[:, 1, 1]
        b = realize_h0(single, 3, 3, 16, rng_seed=7).realizations[:, 1, 1] * 3
        np.testing.assert_allclose(a, b, atol=1e-12)
        assert e_phys.kind == PHYSICAL and e_h0.kind == ARRAY_INDEPENDENT


class TestRealize:
    def test_single_path_rank_one_uniform(self):
        # one on-axis path with the gain stream replaced by a unit draw:
        # H0 entries are all 1/sqrt(Mt*Mr) at phi = 0
        paths = _single_path()
        e = realize_h0(paths, 3, 5, 1, rng_seed=1)
        h0 = e.realizations[0]
        alpha = path_gains(paths, 1, rng_seed=1)[0, 0]
        np.testing.assert_allclose(h0, alpha * np.ones((5, 3)) / np.sqrt(15),
                                   atol=1e-12)
        assert np.linalg.matrix_rank(h0) == 1

    def test_single_path_all_ones_physical(self):
        # phi = phi0 +/- pi/2 at both ends makes every steering entry 1
        paths = _single_path(phi_t=PI / 2, phi_r=PI / 2)
        model = SteeringModel.ula(4, 0.5, 0.0)
        e = realize_h(paths, model, model, 1, rng_seed=2)
        alpha = path_gains(paths, 1, rng_seed=2)[0, 0]
        np.testing.assert_allclose(e.realizations[0], alpha * np.ones((4, 4)),
                                   atol=1e-12)

    def test_energy_conservation(self):
        # unit-norm basis columns: E||H0||_F^2 = total path power
        paths = expand_paths(three_cluster_demo(n_paths=20), rng_seed=3)
        e = realize_h0(paths, 7, 7, 10_000, rng_seed=4)
        energy = np.sum(np.abs(e.realizations) ** 2, axis=(1, 2))
        se = energy.std() / np.sqrt(len(energy))
        assert abs(energy.mean() - paths.total_power) < 3 * se

    def test_even_m_rejected(self):
        with pytest.raises(EvenM):
            realize_h0(_single_path(), 4, 5, 1, rng_seed=0)

    def test_determinism_bitwise(self):
        paths = expand_paths(three_cluster_demo(n_paths=5), rng_seed=5)
        model = SteeringModel.uca(4, 0.5)
        a = realize_h(paths, model, model, 10, rng_seed=6).realizations
        b = realize_h(paths, model, model, 10, rng_seed=6).realizations
        np.testing.assert_array_equal(a, b)

    def test_redraw_angles_rerandomizes_geometry(self):
        paths = expand_paths(three_cluster_demo(n_paths=5), rng_seed=10)
        frozen = realize_h0(paths, 5, 5, 4, rng_seed=11)
        redrawn = realize_h0(paths, 5, 5, 4, rng_seed=11, redraw_angles=True)
        # same gain stream, different geometry per realization
        assert not np.allclose(frozen.realizations, redrawn.realizations)
        again = realize_h0(paths, 5, 5, 4, rng_seed=11, redraw_angles=True)
        np.testing.assert_array_equal(redrawn.realizations, again.realizations)

    def test_redraw_requires_cluster_provenance(self):
        bare = PathSet(gain_variance=np.ones(1), phi_t=np.zeros(1),
                       phi_r=np.zeros(1))
        model = SteeringModel.ula(3, 0.5)
        with pytest.raises(ValueError, match="provenance"):
            realize_h(bare, model, model, 2, rng_seed=12, redraw_angles=True)


class TestNormalize:
    def test_idempotent(self):
        paths = expand_paths(three_cluster_demo(n_paths=5), rng_seed=7)
        model = SteeringModel.ula(5, 0.5, PI / 2)
        e = normalize_ensemble(realize_h(paths, model, model, 50, rng_seed=8))
        e2 = normalize_ensemble(e)
        np.testing.assert_allclose(e.realizations, e2.realizations, rtol=1e-12)
        assert e.normalization == "average_energy"

    def test_all_ones_unchanged(self):
        e = ChannelEnsemble(realizations=np.ones((1, 5, 5), dtype=complex),
                            kind=PHYSICAL)
        out = normalize_ensemble(e)
        np.testing.assert_allclose(out.realizations, e.realizations)

    def test_scale_equivariance(self):
        rng = np.random.default_rng(9)
        h = rng.standard_normal((4, 3, 3)) + 1j * rng.standard_normal((4, 3, 3))
        a = normalize_ensemble(ChannelEnsemble(realizations=h, kind=PHYSICAL))
        b = normalize_ensemble(ChannelEnsemble(realizations=7.0 * h, kind=PHYSICAL))
        np.testing.assert_allclose(a.realizations, b.realizations, rtol=1e-12)

    def test_target_energy(self):
        rng = np.random.default_rng(10)
        h = rng.standard_normal((6, 4, 5)) + 1j * rng.standard_normal((6, 4, 5))
        out = normalize_ensemble(ChannelEnsemble(realizations=h, kind=PHYSICAL))
        assert out.mean_energy == pytest.approx(20.0, rel=1e-9)

    def test_zero_energy_rejected(self):
        e = ChannelEnsemble(realizations=np.zeros((2, 3, 3), dtype=complex),
                            kind=PHYSICAL)
        with pytest.raises(ZeroEnergy):
            normalize_ensemble(e)
