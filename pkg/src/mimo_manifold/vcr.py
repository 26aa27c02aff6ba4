"""Virtual channel representation over the Fourier basis.

The array-independent channel H0 transforms unitarily into a virtual
channel H_V whose entries sample a smoothed version of the spatial
spreading function at the fixed virtual azimuths.  The smoothing kernel
is the periodic Dirichlet kernel f_M; the conventional ULA-only virtual
representation with its spatial-angle kernel g_N is kept alongside as
the baseline.  Paths partition into virtual bins of size 2*pi/M, which
yields the coherent-sum approximation of H_V and the cluster sub-matrix
imaging interpretation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .arrays import SteeringModel, virtual_angles, wrap_angle
from .errors import EmptyEnsemble, EvenM, NotUla, ShapeMismatch
from .manifold import dft_matrix
from .scattering import ARRAY_INDEPENDENT, ChannelEnsemble, Cluster, PathSet

TWO_PI = 2.0 * np.pi

#: |sin(phi/2)| below this evaluates kernels by their series limit.
SINGULARITY_EPS = 1e-9


def dirichlet_kernel(m: int, phi) -> np.ndarray:
    """Periodic smoothing kernel f_M(phi) = sin(M phi/2) / (M sin(phi/2)).

    Equals d(0)^H d(phi); for odd M the removable singularities at
    multiples of 2*pi evaluate to 1.  Zero at the other virtual angles.
    """
    if m < 1 or m % 2 == 0:
        raise EvenM(f"kernel order must be odd, got {m}")
    phi = np.asarray(phi, dtype=float)
    half = np.sin(phi / 2.0)
    singular = np.abs(half) < SINGULARITY_EPS
    safe = np.where(singular, 1.0, half)
    out = np.where(singular, 1.0, np.sin(m * phi / 2.0) / (m * safe))
    return out if out.ndim else float(out)


def sayeed_kernel(n: int, r: float, phi) -> np.ndarray:
    """Conventional-representation kernel g_N evaluated in azimuth.

    g_N(s) = sin(pi N s) / (N sin(pi s)) at the spatial angle s = r sin(phi);
    its zeros sit at s = k/N, nonuniformly spaced in azimuth, and for
    r < 0.5 part of the spatial grid is never reached.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if r <= 0:
        raise ValueError("r must be > 0")
    s = r * np.sin(np.asarray(phi, dtype=float))
    den = np.sin(np.pi * s)
    singular = np.abs(den) < SINGULARITY_EPS
    safe = np.where(singular, 1.0, den)
    # at the singularities s ~ integer, so cos(pi*s) = +/-1
    limit = np.cos(np.pi * n * s) / np.where(singular, np.cos(np.pi * s), 1.0)
    out = np.where(singular, limit, np.sin(np.pi * n * s) / (n * safe))
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class VirtualChannel:
    """Unitary transform of H0 onto the virtual-angle grid."""

    entries: np.ndarray
    virtual_angles_t: np.ndarray
    virtual_angles_r: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape[-2:]


def to_virtual(h0: np.ndarray, d_t: np.ndarray | None = None,
               d_r: np.ndarray | None = None) -> VirtualChannel:
    """H_V = D_R^H H0 D_T.  Works on a single matrix or a stack."""
    h0 = np.asarray(h0, dtype=complex)
    m_r, m_t = h0.shape[-2:]
    d_t = dft_matrix(m_t) if d_t is None else np.asarray(d_t)
    d_r = dft_matrix(m_r) if d_r is None else np.asarray(d_r)
    if d_t.shape != (m_t, m_t) or d_r.shape != (m_r, m_r):
        raise ShapeMismatch("DFT matrices do not match the channel shape")
    hv = d_r.conj().T @ h0 @ d_t
    return VirtualChannel(entries=hv, virtual_angles_t=virtual_angles(m_t),
                          virtual_angles_r=virtual_angles(m_r))


def from_virtual(hv, d_t: np.ndarray | None = None,
                 d_r: np.ndarray | None = None) -> np.ndarray:
    """Inverse transform H0 = D_R H_V D_T^H; exact by unitarity."""
    entries = hv.entries if isinstance(hv, VirtualChannel) else np.asarray(hv, dtype=complex)
    m_r, m_t = entries.shape[-2:]
    d_t = dft_matrix(m_t) if d_t is None else np.asarray(d_t)
    d_r = dft_matrix(m_r) if d_r is None else np.asarray(d_r)
    if d_t.shape != (m_t, m_t) or d_r.shape != (m_r, m_r):
        raise ShapeMismatch("DFT matrices do not match the channel shape")
    return d_r @ entries @ d_t.conj().T


def virtual_bin_index(phi, m: int) -> np.ndarray:
    """Index of the half-open virtual bin [phi_k - pi/M, phi_k + pi/M) holding phi."""
    if m % 2 == 0:
        raise EvenM("bin count must be odd")
    phi = wrap_angle(phi)
    return np.floor(phi * m / TWO_PI + 0.5).astype(int)


@dataclass(frozen=True)
class PathPartition:
    """Disjoint assignment of path indices to virtual-angle bins (q, p)."""

    bins: dict
    resolution: tuple[float, float]
    m_t: int
    m_r: int


def partition_paths(paths: PathSet, m_t: int, m_r: int) -> PathPartition:
    """Assign every path to the virtual bin pair holding its azimuths."""
    p_idx = virtual_bin_index(paths.phi_t, m_t)
    q_idx = virtual_bin_index(paths.phi_r, m_r)
    bins: dict[tuple[int, int], list[int]] = {}
    for l, (q, p) in enumerate(zip(q_idx, p_idx)):
        bins.setdefault((int(q), int(p)), []).append(l)
    return PathPartition(bins=bins, resolution=(TWO_PI / m_t, TWO_PI / m_r),
                         m_t=m_t, m_r=m_r)


def approx_virtual_from_partition(partition: PathPartition, gains: np.ndarray) -> np.ndarray:
    """Bin-wise coherent gain sums: entry (q, p) sums alpha over its bin.

    The on-grid approximation of the virtual channel; exact when every
    path sits exactly on a virtual angle pair.
    """
    gains = np.asarray(gains)
    half_t = (partition.m_t - 1) // 2
    half_r = (partition.m_r - 1) // 2
    out = np.zeros((partition.m_r, partition.m_t), dtype=complex)
    for (q, p), idx in partition.bins.items():
        out[q + half_r, p + half_t] = gains[idx].sum()
    return out


def cluster_submatrix_bounds(cluster: Cluster, m_t: int, m_r: int,
                             n_sigma: float = 2.0) -> tuple[int, int, int, int]:
    """Virtual index window (P-, P+, Q-, Q+) of a cluster's dominant sub-matrix.

    The cluster's angular support is taken as center +/- n_sigma * spread;
    bounds are floor/ceil of M * phi / (2*pi), clamped to the virtual index
    range [-(M-1)/2, (M-1)/2].
    """
    half_t = (m_t - 1) // 2
    half_r = (m_r - 1) // 2
    eps = 1e-9   # keep exactly-on-grid supports from rounding outward
    p_lo = int(np.floor(m_t * (cluster.center_t - n_sigma * cluster.spread_t) / TWO_PI + eps))
    p_hi = int(np.ceil(m_t * (cluster.center_t + n_sigma * cluster.spread_t) / TWO_PI - eps))
    q_lo = int(np.floor(m_r * (cluster.center_r - n_sigma * cluster.spread_r) / TWO_PI + eps))
    q_hi = int(np.ceil(m_r * (cluster.center_r + n_sigma * cluster.spread_r) / TWO_PI - eps))
    clamp = lambda v, half: max(-half, min(half, v))
    return (clamp(p_lo, half_t), clamp(p_hi, half_t),
            clamp(q_lo, half_r), clamp(q_hi, half_r))


def virtual_power_image(e: ChannelEnsemble) -> np.ndarray:
    """Entrywise mean |H_V| over realizations, normalized to max 1.

    The imaging interpretation of the scattering environment: clusters
    appear as dominant sub-matrices on the virtual grid.
    """
    if e.kind != ARRAY_INDEPENDENT:
        raise ValueError("virtual power image requires an array-independent ensemble")
    if len(e) == 0:
        raise EmptyEnsemble("need at least one realization")
    hv = to_virtual(e.realizations).entries
    img = np.mean(np.abs(hv), axis=0)
    peak = img.max()
    if peak > 0:
        img = img / peak
    return img


def conventional_dft(n: int) -> np.ndarray:
    """Unitary element-space DFT for the conventional ULA representation.

    Columns are centered spatial-frequency vectors at the fixed spatial
    angles i/N spanning the principal period; for odd N, i runs over
    -(N-1)/2 ... (N-1)/2.
    """
    if n % 2 == 1:
        i = np.arange(-(n - 1) // 2, (n - 1) // 2 + 1)
    else:
        i = np.arange(-n // 2, n // 2)
    rows = np.arange(n)[:, None] - (n - 1) / 2.0
    return np.exp(-1j * TWO_PI * rows * i[None, :] / n) / np.sqrt(n)


def _require_ula(model: SteeringModel, side: str):
    if model.kind != "ula":
        raise NotUla(f"{side} array must be a ULA for the conventional representation")


def sayeed_vcr_transform(h: np.ndarray, model_t: SteeringModel,
                         model_r: SteeringModel) -> np.ndarray:
    """Conventional (array-dependent) virtual transform A_R^H H A_T."""
    _require_ula(model_t, "transmit")
    _require_ula(model_r, "receive")
    h = np.asarray(h, dtype=complex)
    n_r, n_t = h.shape[-2:]
    if (n_r, n_t) != (model_r.n_elements, model_t.n_elements):
        raise ShapeMismatch("channel shape does not match the array models")
    return conventional_dft(n_r).conj().T @ h @ conventional_dft(n_t)


def sayeed_vcr_inverse(hv: np.ndarray) -> np.ndarray:
    """Inverse of the conventional transform (unitary round trip)."""
    hv = np.asarray(hv, dtype=complex)
    n_r, n_t = hv.shape[-2:]
    return conventional_dft(n_r) @ hv @ conventional_dft(n_t).conj().T
