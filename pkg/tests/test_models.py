"""Tests for the stochastic channel models and their fits."""

import warnings

import numpy as np
import pytest

from mimo_manifold import (Aism1Params, PathSet, SteeringMatrix, SteeringModel,
                           aism1_sample, aism1_sample_h0, aism2_sample,
                           aism2_sample_h0, dft_matrix, fit_aism1_from_ensemble,
                           fit_aism1_method1, fit_aism2, fit_sayeed,
                           fit_weichselberger, sayeed_sample, steering_matrix,
                           virtual_angles, weichselberger_sample)
from mimo_manifold.errors import MissingSteering, NotUla
from mimo_manifold.metrics import vec
from mimo_manifold.models import SayeedParams
from mimo_manifold.rng import complex_normal, generator
from mimo_manifold.scattering import (ARRAY_INDEPENDENT, PHYSICAL,
                                      ChannelEnsemble, expand_paths, realize_h0,
                                      three_cluster_demo)

PI = np.pi


def _unitary_steering(m: int) -> SteeringMatrix:
    """Square unitary stand-in steering matrix for algebraic tests."""
    return SteeringMatrix(entries=dft_matrix(m) * np.sqrt(m),
                          virtual_angles=virtual_angles(m),
                          source=SteeringModel.ula(m, 0.5))


class TestFitAism1Method1:
    def test_single_on_grid_path_one_hot(self):
        m = 7
        angles = virtual_angles(m)
        paths = PathSet(gain_variance=np.ones(1), phi_t=np.array([angles[5]]),
                        phi_r=np.array([angles[1]]))
        for mode in ("kernel", "partition"):
            params = fit_aism1_method1(paths, m, m, mode=mode)
            assert params.omega_angle[1, 5] == pytest.approx(1.0)
            assert np.count_nonzero(params.omega_angle > 1e-9) == 1

    def test_two_paths_same_bin_partition(self):
        m = 7
        paths = PathSet(gain_variance=np.array([1.0, 3.0]),
                        phi_t=np.array([0.01, -0.02]),
                        phi_r=np.array([0.02, 0.01]))
        params = fit_aism1_method1(paths, m, m, mode="partition")
        assert params.omega_angle[3, 3] == pytest.approx(2.0)

    def test_kernel_matches_monte_carlo(self):
        # two independent estimators of the same per-entry variance
        m = 19
        paths = expand_paths(three_cluster_demo(), rng_seed=1)
        kernel = fit_aism1_method1(paths, m, m, mode="kernel")
        e = realize_h0(paths, m, m, 10_000, rng_seed=2)
        mc = fit_aism1_from_ensemble(e)
        rel = np.linalg.norm(kernel.omega_angle - mc.omega_angle) \
            / np.linalg.norm(kernel.omega_angle)
        assert rel < 0.10


class TestFitAism1FromEnsemble:
    def test_single_realization_is_abs_hv(self):
        from mimo_manifold import to_virtual
        rng = generator(3, "one")
        h0 = complex_normal(rng, (1, 5, 5))
        e = ChannelEnsemble(realizations=h0, kind=ARRAY_INDEPENDENT)
        params = fit_aism1_from_ensemble(e)
        np.testing.assert_allclose(params.omega_angle,
                                   np.abs(to_virtual(h0[0]).entries), atol=1e-12)

    def test_fit_sample_fixed_point(self):
        m = 9
        rng = generator(4, "omega")
        omega_true = rng.uniform(0.1, 1.0, (m, m))
        params = Aism1Params(omega_angle=omega_true, m_t=m, m_r=m)
        e = aism1_sample_h0(params, 10_000, rng_seed=5)
        recovered = fit_aism1_from_ensemble(e).omega_angle
        rel = np.linalg.norm(recovered - omega_true) / np.linalg.norm(omega_true)
        assert rel < 0.05

    def test_zero_ensemble_gives_zero(self):
        e = ChannelEnsemble(realizations=np.zeros((3, 5, 5), dtype=complex),
                            kind=ARRAY_INDEPENDENT)
        np.testing.assert_array_equal(fit_aism1_from_ensemble(e).omega_angle,
                                      np.zeros((5, 5)))


class TestAism1Sample:
    def test_one_hot_rank_one_unit_energy(self):
        m = 5
        omega = np.zeros((m, m))
        omega[1, 3] = 1.0
        params = Aism1Params(omega_angle=omega, m_t=m, m_r=m) \
            .with_steering(_unitary_steering(m), _unitary_steering(m))
        e = aism1_sample(params, 2000, rng_seed=6)
        ranks = [np.linalg.matrix_rank(h, tol=1e-9) for h in e.realizations[:20]]
        assert all(r == 1 for r in ranks)
        # unitary columns have norm 1 here only after the sqrt(m) scaling:
        # E||H||_F^2 = sum omega^2 * ||b_r||^2 ||b_t||^2 = m * m
        energy = np.mean(np.sum(np.abs(e.realizations) ** 2, axis=(1, 2)))
        assert energy == pytest.approx(m * m, rel=0.1)

    def test_second_moment_closed_form(self):
        # E[vec(H) vec(H)^H] = (B_T^* kron B_R) diag(vec(omega^2)) (.)^H
        m, n_draws = 5, 10_000
        model = SteeringModel.ula(3, 0.5, PI / 2)
        b = steering_matrix(model, m)
        rng = generator(7, "omega")
        omega = rng.uniform(0.2, 1.0, (m, m))
        params = Aism1Params(omega_angle=omega, m_t=m, m_r=m).with_steering(b, b)
        e = aism1_sample(params, n_draws, rng_seed=8)
        v = vec(e.realizations)
        emp = v.T @ v.conj() / n_draws
        mix = np.kron(b.entries.conj(), b.entries)
        closed = mix @ np.diag(vec(omega ** 2)) @ mix.conj().T
        rel = np.linalg.norm(emp - closed) / np.linalg.norm(closed)
        assert rel < 0.10

    def test_deterministic(self):
        m = 5
        params = Aism1Params(omega_angle=np.ones((m, m)), m_t=m, m_r=m) \
            .with_steering(_unitary_steering(m), _unitary_steering(m))
        a = aism1_sample(params, 4, rng_seed=9).realizations
        b = aism1_sample(params, 4, rng_seed=9).realizations
        np.testing.assert_array_equal(a, b)

    def test_missing_steering_rejected(self):
        params = Aism1Params(omega_angle=np.ones((3, 3)), m_t=3, m_r=3)
        with pytest.raises(MissingSteering):
            aism1_sample(params, 1, rng_seed=0)


class TestFitAism2:
    def test_iid_ensemble_flat_coupling(self):
        m, n = 7, 6000
        rng = generator(10, "iid")
        e = ChannelEnsemble(realizations=complex_normal(rng, (n, m, m)),
                            kind=ARRAY_INDEPENDENT)
        params = fit_aism2(e)
        # all eigenmodes carry equal unit power for white H0
        assert np.max(np.abs(params.omega_eigen - 1.0)) < 0.12
        assert np.max(np.abs(params.lambda_t - m)) / m < 0.15

    def test_rank_one_deterministic(self):
        m = 5
        rng = generator(11, "uv")
        u = complex_normal(rng, m)
        u /= np.linalg.norm(u)
        v = complex_normal(rng, m)
        v /= np.linalg.norm(v)
        h0 = 2.0 * np.outer(u, v.conj())
        e = ChannelEnsemble(realizations=h0[None], kind=ARRAY_INDEPENDENT)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            params = fit_aism2(e)
        assert params.lambda_r[0] == pytest.approx(4.0)
        assert np.all(params.lambda_r[1:] < 1e-9)
        assert params.omega_eigen[0, 0] == pytest.approx(2.0)
        assert np.sum(params.omega_eigen > 1e-6) == 1

    def test_marginal_identity(self):
        # estimator identity: row/column sums of omega^2 equal the
        # eigenvalues of the same empirical correlations
        m = 9
        paths = expand_paths(three_cluster_demo(n_paths=20), rng_seed=12)
        e = realize_h0(paths, m, m, 200, rng_seed=13)
        params = fit_aism2(e)
        np.testing.assert_allclose(np.sum(params.omega_eigen ** 2, axis=1),
                                   params.lambda_r, rtol=1e-6)
        np.testing.assert_allclose(np.sum(params.omega_eigen ** 2, axis=0),
                                   params.lambda_t, rtol=1e-6)

    def test_unitary_eigenbases(self):
        paths = expand_paths(three_cluster_demo(n_paths=20), rng_seed=14)
        e = realize_h0(paths, 9, 9, 200, rng_seed=15)
        params = fit_aism2(e)
        for u in (params.u_t, params.u_r):
            assert np.max(np.abs(u.conj().T @ u - np.eye(9))) < 1e-9

    def test_warns_on_few_realizations(self):
        paths = expand_paths(three_cluster_demo(n_paths=5), rng_seed=16)
        e = realize_h0(paths, 9, 9, 20, rng_seed=17)
        with pytest.warns(UserWarning, match="realizations"):
            fit_aism2(e)


class TestAism2Sample:
    @staticmethod
    def _fitted_params(m=9, seed=18):
        paths = expand_paths(three_cluster_demo(n_paths=20), rng_seed=seed)
        e = realize_h0(paths, m, m, 400, rng_seed=seed + 1)
        return fit_aism2(e)

    def test_one_sided_correlation_reproduced(self):
        params = self._fitted_params()
        e = aism2_sample_h0(params, 10_000, rng_seed=19)
        h0 = e.realizations
        r_r = np.einsum("imq,ipq->mp", h0, h0.conj()) / len(h0)
        closed = params.u_r @ np.diag(params.lambda_r) @ params.u_r.conj().T
        rel = np.linalg.norm(r_r - closed) / np.linalg.norm(closed)
        assert rel < 0.10

    def test_one_hot_coupling_rank_one(self):
        m = 5
        params = self._fitted_params(m=m)
        omega = np.zeros((m, m))
        omega[0, 0] = 1.0
        from dataclasses import replace
        params = replace(params, omega_eigen=omega)
        e = aism2_sample_h0(params, 10, rng_seed=20)
        for h0 in e.realizations:
            assert np.linalg.matrix_rank(h0, tol=1e-9) == 1

    def test_gamma_route_equals_steering_route(self):
        m = 7
        model = SteeringModel.ula(4, 0.5, PI / 2)
        b = steering_matrix(model, m)
        params = self._fitted_params(m=m).with_steering(b, b)
        gamma = b.entries @ dft_matrix(m).conj().T
        via_b = aism2_sample(params, 6, rng_seed=21).realizations
        via_gamma = aism2_sample(params, 6, rng_seed=21,
                                 gamma_t=gamma, gamma_r=gamma).realizations
        np.testing.assert_allclose(via_b, via_gamma, atol=1e-12)


class TestWeichselberger:
    def test_iid_flat(self):
        n = 5
        rng = generator(22, "iid")
        e = ChannelEnsemble(realizations=complex_normal(rng, (4000, n, n)),
                            kind=PHYSICAL)
        params = fit_weichselberger(e)
        assert np.max(np.abs(params.omega - 1.0)) < 0.15

    def test_fit_sample_preserves_correlation(self):
        paths = expand_paths(three_cluster_demo(n_paths=20), rng_seed=23)
        from mimo_manifold import realize_h
        model = SteeringModel.ula(5, 0.5, PI / 2)
        e = realize_h(paths, model, model, 2000, rng_seed=24)
        params = fit_weichselberger(e)
        resampled = weichselberger_sample(params, 10_000, rng_seed=25)
        h = resampled.realizations
        r_emp = np.einsum("imq,ipq->mp", h, h.conj()) / len(h)
        h0 = e.realizations
        r_ref = np.einsum("imq,ipq->mp", h0, h0.conj()) / len(h0)
        assert np.linalg.norm(r_emp - r_ref) / np.linalg.norm(r_ref) < 0.10

    def test_single_realization_degenerate_fit(self):
        # one sample: the eigenbases collapse to that sample's SVD, so the
        # coupling matrix is diagonal with its singular values
        rng = generator(26, "single")
        h = complex_normal(rng, (1, 4, 4))
        e = ChannelEnsemble(realizations=h, kind=PHYSICAL)
        params = fit_weichselberger(e)
        sv = np.linalg.svd(h[0], compute_uv=False)
        np.testing.assert_allclose(np.diag(params.omega), sv, rtol=1e-9)
        off = params.omega[~np.eye(4, dtype=bool)]
        assert np.all(off < 1e-9 * sv[0])


class TestSayeed:
    def test_one_hot_round_trip(self):
        n = 5
        omega = np.zeros((n, n))
        omega[2, 2] = 1.3
        seeded = sayeed_sample(SayeedParams(omega_v=omega, n_t=n, n_r=n),
                               8000, rng_seed=27)
        model = SteeringModel.ula(n, 0.5, PI / 2)
        fitted = fit_sayeed(seeded, model, model)
        assert fitted.omega_v[2, 2] == pytest.approx(1.3, rel=0.05)
        mask = np.ones((n, n), dtype=bool)
        mask[2, 2] = False
        assert np.all(fitted.omega_v[mask] < 0.05)

    def test_fit_sample_preserves_virtual_variances(self):
        paths = expand_paths(three_cluster_demo(), rng_seed=28)
        from mimo_manifold import realize_h
        model = SteeringModel.ula(5, 0.5, PI / 2)
        e = realize_h(paths, model, model, 4000, rng_seed=29)
        params = fit_sayeed(e, model, model)
        resampled = sayeed_sample(params, 10_000, rng_seed=30)
        refit = fit_sayeed(resampled, model, model)
        rel = np.linalg.norm(refit.omega_v - params.omega_v) \
            / np.linalg.norm(params.omega_v)
        assert rel < 0.10

    def test_requires_ula(self):
        rng = generator(31, "uca")
        e = ChannelEnsemble(realizations=complex_normal(rng, (10, 5, 5)),
                            kind=PHYSICAL)
        with pytest.raises(NotUla):
            fit_sayeed(e, SteeringModel.uca(5, 0.5), SteeringModel.ula(5, 0.5))


class TestArrayIndependence:
    def test_one_fit_serves_two_arrays(self):
        # parameters fitted once from the array-independent channel produce
        # consistent ensembles for different target arrays without refit
        m = 9
        paths = expand_paths(three_cluster_demo(n_paths=20), rng_seed=32)
        e = realize_h0(paths, m, m, 400, rng_seed=33)
        params1 = fit_aism1_from_ensemble(e)
        params2 = fit_aism2(e)
        total = float(np.sum(params1.omega_angle ** 2))
        for model in (SteeringModel.ula(5, 0.5, PI / 2),
                      SteeringModel.uca(4, 0.5)):
            b = steering_matrix(model, m)
            n_el = model.n_elements
            e1 = aism1_sample(params1.with_steering(b, b), 4000, rng_seed=34)
            # unit-modulus elements: E||H||_F^2 = N_r N_t sum(omega^2)
            energy = np.mean(np.sum(np.abs(e1.realizations) ** 2, axis=(1, 2)))
            assert energy == pytest.approx(n_el * n_el * total, rel=0.1)
            e2 = aism2_sample(params2.with_steering(b, b), 50, rng_seed=35)
            assert e2.realizations.shape == (50, n_el, n_el)
