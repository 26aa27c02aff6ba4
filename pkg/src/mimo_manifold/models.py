"""Stochastic channel models: coupling-matrix fits and samplers.

Four models share one sampling form, left @ (coupling .* G) @ right^H with
G i.i.d. complex Gaussian:

* aism1    -- couples virtual angle pairs; left/right are target-array
              steering matrices at the fixed virtual angles.
* aism2    -- couples eigenmodes of the array-independent one-sided
              correlation matrices; projected onto target arrays through
              the Fourier basis.
* weichselberger -- the array-dependent eigenmode baseline fitted
              directly on physical ensembles.
* sayeed   -- the conventional ULA-only virtual-domain baseline.

aism1/aism2 parameters are fitted once per environment from the
array-independent channel and can then be sampled for any target arrays
without refitting; the two baselines must be refitted whenever the
arrays change.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .arrays import SteeringMatrix, SteeringModel
from .errors import EmptyEnsemble, EvenM, MissingSteering, NotUla, ShapeMismatch
from .manifold import dft_matrix
from .rng import complex_normal, generator
from .scattering import (ARRAY_INDEPENDENT, PHYSICAL, ChannelEnsemble, PathSet)
from .vcr import conventional_dft, dirichlet_kernel, partition_paths, to_virtual


@dataclass(frozen=True)
class Aism1Params:
    """Virtual-angle coupling model parameters.

    ``omega_angle`` holds per-(receive, transmit) virtual angle pair
    standard deviations; steering matrices are attached for the target
    arrays before sampling.
    """

    omega_angle: np.ndarray
    m_t: int
    m_r: int
    b_t: Optional[SteeringMatrix] = None
    b_r: Optional[SteeringMatrix] = None

    def __post_init__(self):
        om = np.asarray(self.omega_angle, dtype=float)
        if om.shape != (self.m_r, self.m_t):
            raise ShapeMismatch(f"omega_angle must be {self.m_r}x{self.m_t}")
        if np.any(om < 0):
            raise ValueError("omega_angle entries must be nonnegative")
        object.__setattr__(self, "omega_angle", om)

    def with_steering(self, b_t: SteeringMatrix, b_r: SteeringMatrix) -> "Aism1Params":
        return replace(self, b_t=b_t, b_r=b_r)


@dataclass(frozen=True)
class Aism2Params:
    """Eigenmode coupling model parameters over the Fourier basis."""

    omega_eigen: np.ndarray
    u_t: np.ndarray
    u_r: np.ndarray
    lambda_t: np.ndarray
    lambda_r: np.ndarray
    m_t: int
    m_r: int
    b_t: Optional[SteeringMatrix] = None
    b_r: Optional[SteeringMatrix] = None

    def with_steering(self, b_t: SteeringMatrix, b_r: SteeringMatrix) -> "Aism2Params":
        return replace(self, b_t=b_t, b_r=b_r)


@dataclass(frozen=True)
class WeichselbergerParams:
    """Array-dependent eigenmode coupling fitted on a physical ensemble."""

    omega: np.ndarray
    u_t: np.ndarray
    u_r: np.ndarray
    lambda_t: np.ndarray
    lambda_r: np.ndarray


@dataclass(frozen=True)
class SayeedParams:
    """Conventional virtual-domain variance mask for ULA link ends."""

    omega_v: np.ndarray
    n_t: int
    n_r: int


def fit_aism1_method1(paths: PathSet, m_t: int, m_r: int,
                      mode: str = "kernel") -> Aism1Params:
    """Coupling matrix directly from known path parameters.

    ``kernel`` mode (default) evaluates the exact per-entry variance
    sum_l var_l * f_Mr(phi_r,l - phi_q)^2 * f_Mt(phi_t,l - phi_p)^2; the
    ``partition`` mode replaces the kernels by bin indicators, i.e. the
    variance sum over each virtual bin.
    """
    if m_t % 2 == 0 or m_r % 2 == 0:
        raise EvenM("basis sizes must be odd")
    if mode == "partition":
        part = partition_paths(paths, m_t, m_r)
        half_t, half_r = (m_t - 1) // 2, (m_r - 1) // 2
        power = np.zeros((m_r, m_t))
        for (q, p), idx in part.bins.items():
            power[q + half_r, p + half_t] = paths.gain_variance[idx].sum()
    elif mode == "kernel":
        from .arrays import virtual_angles
        ker_t = dirichlet_kernel(m_t, paths.phi_t[None, :] - virtual_angles(m_t)[:, None]) ** 2
        ker_r = dirichlet_kernel(m_r, paths.phi_r[None, :] - virtual_angles(m_r)[:, None]) ** 2
        power = ker_r @ (paths.gain_variance[:, None] * ker_t.T)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return Aism1Params(omega_angle=np.sqrt(power), m_t=m_t, m_r=m_r)


def fit_aism1_from_ensemble(e: ChannelEnsemble) -> Aism1Params:
    """Coupling matrix as the RMS of virtual-channel entries."""
    if e.kind != ARRAY_INDEPENDENT:
        raise ValueError("fit requires an array-independent ensemble")
    hv = to_virtual(e.realizations).entries
    omega = np.sqrt(np.mean(np.abs(hv) ** 2, axis=0))
    m_r, m_t = omega.shape
    return Aism1Params(omega_angle=omega, m_t=m_t, m_r=m_r)


def _coupled_sample(left: np.ndarray, omega: np.ndarray, right: np.ndarray,
                    n: int, rng_seed: int, label: str) -> np.ndarray:
    rng = generator(rng_seed, label)
    g = complex_normal(rng, (n, *omega.shape))
    return left @ (omega * g) @ right.conj().T


def aism1_sample(params: Aism1Params, n: int, rng_seed: int) -> ChannelEnsemble:
    """Physical realizations B_R (omega .* G) B_T^H for the target arrays."""
    if params.b_t is None or params.b_r is None:
        raise MissingSteering("attach target steering matrices before sampling")
    if (params.b_t.n_virtual, params.b_r.n_virtual) != (params.m_t, params.m_r):
        raise ShapeMismatch("steering matrices do not match the coupling size")
    h = _coupled_sample(params.b_r.entries, params.omega_angle, params.b_t.entries,
                        n, rng_seed, "aism1")
    return ChannelEnsemble(realizations=h, kind=PHYSICAL, seed=rng_seed)


def aism1_sample_h0(params: Aism1Params, n: int, rng_seed: int) -> ChannelEnsemble:
    """Array-independent realizations D_R (omega .* G) D_T^H."""
    h0 = _coupled_sample(dft_matrix(params.m_r), params.omega_angle,
                         dft_matrix(params.m_t), n, rng_seed, "aism1")
    return ChannelEnsemble(realizations=h0, kind=ARRAY_INDEPENDENT, seed=rng_seed)


def _phase_fix(u: np.ndarray) -> np.ndarray:
    """Rotate each eigenvector so its largest-magnitude component is real positive."""
    idx = np.argmax(np.abs(u), axis=0)
    lead = u[idx, np.arange(u.shape[1])]
    phase = np.where(np.abs(lead) > 0, lead / np.abs(np.where(lead == 0, 1, lead)), 1.0)
    return u / phase[None, :]


def _eigen_fit(ensemble: np.ndarray):
    """Sorted PSD eigendecompositions of the empirical one-sided correlations."""
    n = ensemble.shape[0]
    r_t = np.einsum("iqm,iqp->mp", ensemble.conj(), ensemble) / n
    r_r = np.einsum("imq,ipq->mp", ensemble, ensemble.conj()) / n
    out = []
    for r in (r_t, r_r):
        r = (r + r.conj().T) / 2.0
        lam, u = np.linalg.eigh(r)
        lam, u = lam[::-1], u[:, ::-1]           # descending
        lam = np.clip(lam, 0.0, None)            # numerical noise -> PSD
        out.append((lam, _phase_fix(u)))
    (lam_t, u_t), (lam_r, u_r) = out
    return lam_t, u_t, lam_r, u_r


def _eigen_coupling(ensemble: np.ndarray, u_t: np.ndarray, u_r: np.ndarray) -> np.ndarray:
    proj = u_r.conj().T @ ensemble @ u_t
    return np.sqrt(np.mean(np.abs(proj) ** 2, axis=0))


def fit_aism2(e: ChannelEnsemble) -> Aism2Params:
    """Eigenbases and eigenmode coupling from an array-independent ensemble."""
    if e.kind != ARRAY_INDEPENDENT:
        raise ValueError("fit requires an array-independent ensemble")
    if len(e) == 0:
        raise EmptyEnsemble("need at least one realization")
    m_r, m_t = e.shape
    if len(e) < 10 * max(m_t, m_r):
        warnings.warn(f"only {len(e)} realizations for {m_r}x{m_t}; "
                      "eigenvector estimates may be unstable", stacklevel=2)
    lam_t, u_t, lam_r, u_r = _eigen_fit(e.realizations)
    omega = _eigen_coupling(e.realizations, u_t, u_r)
    return Aism2Params(omega_eigen=omega, u_t=u_t, u_r=u_r,
                       lambda_t=lam_t, lambda_r=lam_r, m_t=m_t, m_r=m_r)


def aism2_sample_h0(params: Aism2Params, n: int, rng_seed: int) -> ChannelEnsemble:
    """Array-independent realizations U_R (omega .* G) U_T^H."""
    h0 = _coupled_sample(params.u_r, params.omega_eigen, params.u_t,
                         n, rng_seed, "aism2")
    return ChannelEnsemble(realizations=h0, kind=ARRAY_INDEPENDENT, seed=rng_seed)


def aism2_sample(params: Aism2Params, n: int, rng_seed: int,
                 gamma_t: np.ndarray | None = None,
                 gamma_r: np.ndarray | None = None) -> ChannelEnsemble:
    """Physical realizations B_R D_R^H U_R (omega .* G) U_T^H D_T B_T^H.

    When sampling matrices are supplied they replace the B D^H projectors
    (the two routes coincide up to the decomposition residual).
    """
    if gamma_t is not None and gamma_r is not None:
        proj_t, proj_r = np.asarray(gamma_t), np.asarray(gamma_r)
    else:
        if params.b_t is None or params.b_r is None:
            raise MissingSteering("attach target steering matrices before sampling")
        if (params.b_t.n_virtual, params.b_r.n_virtual) != (params.m_t, params.m_r):
            raise ShapeMismatch("steering matrices do not match the coupling size")
        proj_t = params.b_t.entries @ dft_matrix(params.m_t).conj().T
        proj_r = params.b_r.entries @ dft_matrix(params.m_r).conj().T
    h = _coupled_sample(proj_r @ params.u_r, params.omega_eigen,
                        proj_t @ params.u_t, n, rng_seed, "aism2")
    return ChannelEnsemble(realizations=h, kind=PHYSICAL, seed=rng_seed)


def fit_weichselberger(e: ChannelEnsemble) -> WeichselbergerParams:
    """Eigenmode coupling fitted directly on a physical ensemble."""
    if e.kind != PHYSICAL:
        raise ValueError("fit requires a physical ensemble")
    if len(e) == 0:
        raise EmptyEnsemble("need at least one realization")
    lam_t, u_t, lam_r, u_r = _eigen_fit(e.realizations)
    omega = _eigen_coupling(e.realizations, u_t, u_r)
    return WeichselbergerParams(omega=omega, u_t=u_t, u_r=u_r,
                                lambda_t=lam_t, lambda_r=lam_r)


def weichselberger_sample(params: WeichselbergerParams, n: int,
                          rng_seed: int) -> ChannelEnsemble:
    h = _coupled_sample(params.u_r, params.omega, params.u_t, n, rng_seed,
                        "weichselberger")
    return ChannelEnsemble(realizations=h, kind=PHYSICAL, seed=rng_seed)


def fit_sayeed(e: ChannelEnsemble, model_t: SteeringModel,
               model_r: SteeringModel) -> SayeedParams:
    """Variance mask in the conventional virtual domain (ULAs only)."""
    if e.kind != PHYSICAL:
        raise ValueError("fit requires a physical ensemble")
    if model_t.kind != "ula" or model_r.kind != "ula":
        raise NotUla("conventional model requires ULAs at both link ends")
    n_r, n_t = e.shape
    if (n_r, n_t) != (model_r.n_elements, model_t.n_elements):
        raise ShapeMismatch("ensemble shape does not match the array models")
    hv = conventional_dft(n_r).conj().T @ e.realizations @ conventional_dft(n_t)
    return SayeedParams(omega_v=np.sqrt(np.mean(np.abs(hv) ** 2, axis=0)),
                        n_t=n_t, n_r=n_r)


def sayeed_sample(params: SayeedParams, n: int, rng_seed: int) -> ChannelEnsemble:
    h = _coupled_sample(conventional_dft(params.n_r), params.omega_v,
                        conventional_dft(params.n_t), n, rng_seed, "sayeed")
    return ChannelEnsemble(realizations=h, kind=PHYSICAL, seed=rng_seed)
