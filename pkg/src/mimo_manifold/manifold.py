"""Fourier spatial basis and the array/environment channel factorization.

The steering vector of any 2-D array can be written b(phi) ~ Gamma d(phi)
where d(phi) is an M-term Fourier basis on the circle and Gamma is an
N x M sampling matrix holding all array information.  The channel then
factors as H ~ Gamma_R H0 Gamma_T^H with H0 independent of both arrays.
This module evaluates the basis, builds the unitary DFT matrices at the
fixed virtual angles, computes sampling matrices with their residual
diagnostics, and inverts the factorization for square sounding arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .arrays import SteeringMatrix, SteeringModel, steering_vector, virtual_angles
from .errors import (EvenM, GridTooCoarse, IllConditioned, NonSquare, ShapeMismatch,
                     ZeroChannel)

TWO_PI = 2.0 * np.pi

#: Condition-number gate for Method-2 style steering-matrix inversion.
DEFAULT_COND_THRESHOLD = 1e6


def basis_indices(m: int) -> np.ndarray:
    """Harmonic indices in printed order: +(M-1)/2 down to -(M-1)/2."""
    if m < 1 or m % 2 == 0:
        raise EvenM(f"basis size must be odd and >= 1, got {m}")
    half = (m - 1) // 2
    return np.arange(half, -half - 1, -1)


def fourier_basis(m: int, phi) -> np.ndarray:
    """Unit-norm Fourier basis vector(s) d(phi); component k is e^{jk phi}/sqrt(M).

    Returns shape (M,) for scalar phi and (M, K) for a vector of azimuths.
    """
    k = basis_indices(m)
    phi = np.asarray(phi, dtype=float)
    scalar = phi.ndim == 0
    out = np.exp(1j * np.outer(k, np.atleast_1d(phi))) / np.sqrt(m)
    return out[:, 0] if scalar else out


def dft_matrix(m: int) -> np.ndarray:
    """Unitary M x M matrix of basis vectors at the fixed virtual angles."""
    return fourier_basis(m, virtual_angles(m))


@dataclass(frozen=True)
class SamplingMatrix:
    """Array-only factor Gamma plus its worst-case decomposition residual.

    ``residual_sup`` is the sup over a dense azimuth grid of
    ||b(phi) - Gamma d(phi)||, the empirical magnitude of the basis
    truncation error for this array at this M.
    """

    entries: np.ndarray
    residual_sup: float
    m: int


def sampling_matrix(model: SteeringModel, m: int, grid_size: int = 4096) -> SamplingMatrix:
    """Project an array's response onto the Fourier basis.

    Gamma = (M / 2 pi) * integral of b(phi) d(phi)^H over the circle,
    approximated by a uniform grid (spectrally accurate for the smooth
    periodic integrand).  The residual is evaluated on the same grid.
    """
    if m < 1 or m % 2 == 0:
        raise EvenM(f"basis size must be odd and >= 1, got {m}")
    if grid_size < 4 * m:
        raise GridTooCoarse(f"grid_size {grid_size} < 4*M = {4 * m}")
    phis = -np.pi + TWO_PI * np.arange(grid_size) / grid_size
    b = steering_vector(model, phis)          # N x G
    d = fourier_basis(m, phis)                # M x G
    gamma = (m / grid_size) * (b @ d.conj().T)
    residual = np.linalg.norm(b - gamma @ d, axis=0)
    return SamplingMatrix(entries=gamma, residual_sup=float(residual.max()), m=m)


def _as_matrix(x) -> np.ndarray:
    if isinstance(x, SteeringMatrix):
        return x.entries
    if isinstance(x, SamplingMatrix):
        return x.entries
    return np.asarray(x)


def synthesize_channel(h0: np.ndarray, b_t=None, b_r=None,
                       gamma_t=None, gamma_r=None) -> np.ndarray:
    """Project an array-independent channel onto physical arrays.

    Accepts either steering matrices (projector B D^H) or sampling
    matrices (projector Gamma); the two agree up to the decomposition
    residual.  Works on a single matrix or a stack of realizations.
    """
    pt, pr = _projectors(h0, b_t, b_r, gamma_t, gamma_r)
    return pr @ h0 @ pt.conj().swapaxes(-1, -2)


def _projectors(h0, b_t, b_r, gamma_t, gamma_r):
    m_r, m_t = np.asarray(h0).shape[-2:]
    if (gamma_t is None) != (gamma_r is None) or (b_t is None) != (b_r is None):
        raise ValueError("provide both transmit and receive matrices")
    if gamma_t is not None:
        pt, pr = _as_matrix(gamma_t), _as_matrix(gamma_r)
    elif b_t is not None:
        bt, br = _as_matrix(b_t), _as_matrix(b_r)
        pt = bt @ dft_matrix(m_t).conj().T
        pr = br @ dft_matrix(m_r).conj().T
    else:
        raise ValueError("provide steering matrices or sampling matrices")
    if pt.shape[1] != m_t or pr.shape[1] != m_r:
        raise ShapeMismatch(f"projector columns {pt.shape[1]}x{pr.shape[1]} "
                            f"do not match H0 shape {m_r}x{m_t}")
    return pt, pr


def factorize_channel(h: np.ndarray, b_t=None, b_r=None, gamma_t=None, gamma_r=None,
                      cond_threshold: float = DEFAULT_COND_THRESHOLD) -> np.ndarray:
    """Recover the array-independent channel from a sounded channel matrix.

    Steering-matrix route: H0 = D_R B_R^-1 H B_T^-H D_T^H; sampling-matrix
    route: H0 = Gamma_R^-1 H Gamma_T^-H.  Requires square matrices
    (M == N at both ends) below the condition-number gate; a
    rank-deficient sounding array is an error, not a silent degradation.
    Accepts a single matrix or a stack of realizations.
    """
    h = np.asarray(h, dtype=complex)
    n_r, n_t = h.shape[-2:]
    if (gamma_t is None) != (gamma_r is None) or (b_t is None) != (b_r is None):
        raise ValueError("provide both transmit and receive matrices")
    if gamma_t is not None:
        mt_mat, mr_mat = _as_matrix(gamma_t), _as_matrix(gamma_r)
        post_t = post_r = None
    elif b_t is not None:
        mt_mat, mr_mat = _as_matrix(b_t), _as_matrix(b_r)
        post_t, post_r = dft_matrix(mt_mat.shape[1]), dft_matrix(mr_mat.shape[1])
    else:
        raise ValueError("provide steering matrices or sampling matrices")
    for side, mat, n in (("transmit", mt_mat, n_t), ("receive", mr_mat, n_r)):
        if mat.shape[0] != mat.shape[1] or mat.shape[0] != n:
            raise NonSquare(f"{side} matrix is {mat.shape[0]}x{mat.shape[1]}, "
                            f"needs to be square {n}x{n}")
        kappa = np.linalg.cond(mat)
        if not np.isfinite(kappa) or kappa > cond_threshold:
            raise IllConditioned(f"{side} matrix condition number {kappa:.3g} exceeds "
                                 f"gate {cond_threshold:.3g}; unsuitable sounding array")
    # H0 = inv(R) H inv(T)^H computed via LU solves for stability
    x = np.linalg.solve(mr_mat, h.reshape(-1, n_r, n_t) if h.ndim == 3 else h)
    y = np.linalg.solve(mt_mat, x.conj().swapaxes(-1, -2)).conj().swapaxes(-1, -2)
    if post_t is not None:
        y = post_r @ y @ post_t.conj().T
    return y if h.ndim == 3 else np.asarray(y)


def reconstruction_residual(h: np.ndarray, h0: np.ndarray, b_t=None, b_r=None,
                            gamma_t=None, gamma_r=None) -> float:
    """Relative Frobenius error of the two-sided factorization of H.

    ||H - Gamma_R H0 Gamma_T^H||_F / ||H||_F, the empirical size of the
    basis truncation term dropped from the factorization.
    """
    h = np.asarray(h, dtype=complex)
    denom = np.linalg.norm(h)
    if denom == 0.0:
        raise ZeroChannel("residual undefined for a zero channel")
    recon = synthesize_channel(np.asarray(h0, dtype=complex), b_t=b_t, b_r=b_r,
                               gamma_t=gamma_t, gamma_r=gamma_r)
    return float(np.linalg.norm(h - recon) / denom)
