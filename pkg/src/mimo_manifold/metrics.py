"""Capacity, correlation, and angular power spectrum metrics.

Capacity uses the equal-power log-det mutual information evaluated
through singular values for numerical stability on ill-conditioned
channels; ensembles must be average-energy normalized first so the
evaluation SNR is meaningful.  The 2-D angular power spectrum is
estimated with Capon's beamformer against the full channel correlation
matrix under mild diagonal loading.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .arrays import SteeringModel, condition_number, steering_vector
from .errors import (EmptyEnsemble, NonFinite, SingularCorrelation,
                     UnnormalizedEnsemble)
from .scattering import ChannelEnsemble

#: Default diagonal loading for the Capon correlation inverse.
DEFAULT_LOADING = 1e-6


@dataclass(frozen=True)
class CapacityStats:
    """Per-realization capacities plus their mean and empirical CDF support."""

    per_realization: np.ndarray
    ergodic: float
    cdf: np.ndarray
    snr_db: float


@dataclass(frozen=True)
class ApsGrid:
    """Capon power values over a (receive, transmit) azimuth grid."""

    values: np.ndarray
    grid_t: np.ndarray
    grid_r: np.ndarray
    loading: float


def capacity(h: np.ndarray, snr_db: float) -> float:
    """Equal-power capacity log2 det(I + rho/N H H^H) in bits/s/Hz.

    Evaluated as sum over singular values of log2(1 + rho/N s^2), which
    stays accurate when the channel is nearly rank deficient.
    """
    h = np.asarray(h, dtype=complex)
    if not np.all(np.isfinite(h)):
        raise NonFinite("channel matrix contains non-finite entries")
    rho = 10.0 ** (snr_db / 10.0)
    n = h.shape[-1]
    sv = np.linalg.svd(h, compute_uv=False)
    return float(np.sum(np.log2(1.0 + (rho / n) * sv ** 2)))


def capacity_logdet(h: np.ndarray, snr_db: float) -> float:
    """Cross-check path: capacity via the complex log-determinant."""
    h = np.asarray(h, dtype=complex)
    rho = 10.0 ** (snr_db / 10.0)
    n_r, n = h.shape
    sign, logdet = np.linalg.slogdet(np.eye(n_r) + (rho / n) * (h @ h.conj().T))
    return float(logdet / np.log(2.0))


def ergodic_capacity(e: ChannelEnsemble, snr_db: float) -> CapacityStats:
    """Capacity statistics over a normalized ensemble."""
    if e.normalization != "average_energy":
        raise UnnormalizedEnsemble("normalize the ensemble before capacity evaluation")
    if len(e) == 0:
        raise EmptyEnsemble("need at least one realization")
    rho = 10.0 ** (snr_db / 10.0)
    n = e.shape[1]
    sv = np.linalg.svd(e.realizations, compute_uv=False)
    caps = np.sum(np.log2(1.0 + (rho / n) * sv ** 2), axis=1)
    return CapacityStats(per_realization=caps, ergodic=float(caps.mean()),
                         cdf=np.sort(caps), snr_db=float(snr_db))


def vec(h: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization; works on a matrix or a stack."""
    h = np.asarray(h)
    return h.swapaxes(-1, -2).reshape(*h.shape[:-2], -1)


def full_correlation(e: ChannelEnsemble) -> np.ndarray:
    """Hermitian PSD estimate of E[vec(H) vec(H)^H]."""
    if len(e) == 0:
        raise EmptyEnsemble("need at least one realization")
    v = vec(e.realizations)
    r = v.T @ v.conj() / len(e)
    return (r + r.conj().T) / 2.0


def capon_aps(e: ChannelEnsemble, model_t: SteeringModel, model_r: SteeringModel,
              grid_t: np.ndarray | None = None, grid_r: np.ndarray | None = None,
              loading: float = DEFAULT_LOADING) -> ApsGrid:
    """2-D angular power spectrum P(phi_t, phi_r) = 1 / (b~^H R^-1 b~).

    b~ = conj(b_T(phi_t)) kron b_R(phi_r) matches the vec signature of a
    single path.  R is the empirical full correlation matrix, diagonally
    loaded by ``loading * trace(R)/dim``; with fewer realizations than
    matrix dimensions the estimate is singular, so loading is increased
    and a warning issued.
    """
    if grid_t is None:
        grid_t = np.linspace(-np.pi, np.pi, 181, endpoint=False)
    if grid_r is None:
        grid_r = np.linspace(-np.pi, np.pi, 181, endpoint=False)
    grid_t = np.asarray(grid_t, dtype=float)
    grid_r = np.asarray(grid_r, dtype=float)
    if grid_t.size == 0 or grid_r.size == 0:
        raise ValueError("azimuth grids must be nonempty")
    r = full_correlation(e)
    dim = r.shape[0]
    if len(e) < dim:
        warnings.warn(f"{len(e)} realizations < correlation dimension {dim}; "
                      "increasing diagonal loading", stacklevel=2)
        loading = max(loading, 1e-3)
    r_loaded = r + (loading * np.trace(r).real / dim) * np.eye(dim)
    try:
        r_inv = np.linalg.inv(r_loaded)
    except np.linalg.LinAlgError as exc:
        raise SingularCorrelation("correlation inverse failed after loading") from exc
    b_t = steering_vector(model_t, grid_t)      # N_T x G_T
    b_r = steering_vector(model_r, grid_r)      # N_R x G_R
    values = np.empty((len(grid_r), len(grid_t)))
    for j in range(len(grid_t)):
        bt = np.kron(b_t[:, j].conj()[:, None], b_r)          # (N_T*N_R) x G_R
        quad = np.real(np.sum(bt.conj() * (r_inv @ bt), axis=0))
        values[:, j] = 1.0 / quad
    return ApsGrid(values=values, grid_t=grid_t, grid_r=grid_r, loading=float(loading))


@dataclass(frozen=True)
class ConditionReport:
    """Steering and channel conditioning next to the achieved capacity."""

    kappa_b_t: float
    kappa_b_r: float
    mean_kappa_h: float
    ergodic_capacity: float


def condition_report(e: ChannelEnsemble, b_t, b_r, snr_db: float) -> ConditionReport:
    """Row of conditioning statistics for one array configuration."""
    stats = ergodic_capacity(e, snr_db)
    sv = np.linalg.svd(e.realizations, compute_uv=False)
    nonzero = np.where(sv > sv[:, :1] * 1e-12, sv, np.nan)
    kappas = sv[:, 0] / np.nanmin(nonzero, axis=1)
    return ConditionReport(kappa_b_t=condition_number(b_t),
                           kappa_b_r=condition_number(b_r),
                           mean_kappa_h=float(kappas.mean()),
                           ergodic_capacity=stats.ergodic)
