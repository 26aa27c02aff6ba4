"""Synthetic scattering environments and channel ensemble generation.

A scenario is a list of clusters; each cluster expands into discrete
multipath components with Gaussian-distributed azimuths around the
cluster centers and an equal share of the cluster power.  Channel
realizations draw independent zero-mean circular complex Gaussian path
gains over a frozen geometry, so an ensemble is randomized over gains
only; physical and array-independent ensembles built from the same seed
share the identical gain stream, enabling paired comparisons.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .arrays import SteeringModel, steering_vector, wrap_angle
from .errors import EmptyEnsemble, EmptyRange, EvenM, ZeroEnergy
from .manifold import fourier_basis
from .rng import complex_normal, generator

PHYSICAL = "physical"
ARRAY_INDEPENDENT = "array_independent"


@dataclass(frozen=True)
class Cluster:
    """One scattering cluster: angular centers, spreads, path count, power."""

    center_t: float
    center_r: float
    spread_t: float
    spread_r: float
    n_paths: int = 50
    power: float = 1.0

    def __post_init__(self):
        if self.spread_t < 0 or self.spread_r < 0:
            raise ValueError("spreads must be >= 0")
        if self.n_paths < 1:
            raise ValueError("n_paths must be >= 1")
        if self.power <= 0:
            raise ValueError("power must be > 0")


@dataclass(frozen=True)
class PathSet:
    """Discrete multipath components: gain variances and azimuth pairs."""

    gain_variance: np.ndarray
    phi_t: np.ndarray
    phi_r: np.ndarray
    seed: Optional[int] = None
    clusters: tuple = field(default=(), repr=False)

    def __post_init__(self):
        gv = np.asarray(self.gain_variance, dtype=float)
        pt = wrap_angle(self.phi_t)
        pr = wrap_angle(self.phi_r)
        if not (len(gv) == len(pt) == len(pr)):
            raise ValueError("gain_variance, phi_t, phi_r must have equal length")
        if np.any(gv <= 0) or gv.sum() <= 0:
            raise ValueError("gain variances must be positive")
        object.__setattr__(self, "gain_variance", gv)
        object.__setattr__(self, "phi_t", pt)
        object.__setattr__(self, "phi_r", pr)

    def __len__(self) -> int:
        return len(self.gain_variance)

    @property
    def total_power(self) -> float:
        return float(self.gain_variance.sum())


@dataclass(frozen=True)
class ChannelEnsemble:
    """Stack of channel matrix realizations with generation metadata."""

    realizations: np.ndarray
    kind: str
    seed: Optional[int] = None
    normalization: str = "none"

    def __post_init__(self):
        arr = np.asarray(self.realizations, dtype=complex)
        if arr.ndim != 3 or arr.shape[0] == 0:
            raise EmptyEnsemble("ensemble needs shape (n_realizations, rows, cols) with n >= 1")
        if self.kind not in (PHYSICAL, ARRAY_INDEPENDENT):
            raise ValueError(f"unknown ensemble kind {self.kind!r}")
        object.__setattr__(self, "realizations", arr)

    def __len__(self) -> int:
        return self.realizations.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self.realizations.shape[1:]

    @property
    def mean_energy(self) -> float:
        return float(np.mean(np.sum(np.abs(self.realizations) ** 2, axis=(1, 2))))


def generate_scenario(rng_seed: int, n_cluster_range: tuple[int, int] = (1, 5),
                      paths_per_cluster: int = 50) -> list[Cluster]:
    """Random scenario: cluster count uniform on the range, centers uniform
    on [-pi, pi), spreads uniform on [0, pi/2], unit power per cluster."""
    lo, hi = n_cluster_range
    if hi < lo or lo < 1:
        raise EmptyRange(f"invalid cluster count range {n_cluster_range}")
    rng = generator(rng_seed, "scenario")
    n_clusters = int(rng.integers(lo, hi + 1))
    clusters = []
    for _ in range(n_clusters):
        clusters.append(Cluster(
            center_t=float(rng.uniform(-np.pi, np.pi)),
            center_r=float(rng.uniform(-np.pi, np.pi)),
            spread_t=float(rng.uniform(0.0, np.pi / 2)),
            spread_r=float(rng.uniform(0.0, np.pi / 2)),
            n_paths=paths_per_cluster,
        ))
    return clusters


def three_cluster_demo(n_paths: int = 50) -> list[Cluster]:
    """The symmetric three-cluster benchmark environment.

    Clusters centered at -0.3*pi, 0 and +0.3*pi on both link ends with
    0.1*pi angular spread and equal power; the standard imaging / capacity
    test scenario.
    """
    spread = 0.1 * np.pi
    return [Cluster(center_t=c, center_r=c, spread_t=spread, spread_r=spread,
                    n_paths=n_paths)
            for c in (-0.3 * np.pi, 0.0, 0.3 * np.pi)]


def expand_paths(clusters: list[Cluster], rng_seed: int) -> PathSet:
    """Draw the discrete multipath components of a scenario.

    Per path, transmit and receive azimuths are drawn independently from
    Gaussians centered on the cluster centers with sd equal to the spread,
    wrapped to [-pi, pi); each path carries an equal share power/n_paths
    of its cluster's power.
    """
    if not clusters:
        raise ValueError("need at least one cluster")
    phi_t, phi_r, var = [], [], []
    for i, cl in enumerate(clusters):
        rng = generator(rng_seed, "paths", i)
        phi_t.append(rng.normal(cl.center_t, cl.spread_t, cl.n_paths))
        phi_r.append(rng.normal(cl.center_r, cl.spread_r, cl.n_paths))
        var.append(np.full(cl.n_paths, cl.power / cl.n_paths))
    return PathSet(gain_variance=np.concatenate(var),
                   phi_t=wrap_angle(np.concatenate(phi_t)),
                   phi_r=wrap_angle(np.concatenate(phi_r)),
                   seed=rng_seed, clusters=tuple(clusters))


def path_gains(paths: PathSet, n_realizations: int, rng_seed: int) -> np.ndarray:
    """(n, L) complex Gaussian gain draws, E[a_l a_l'^*] = var_l delta(l-l').

    The stream depends only on (seed, n, L); physical and array-independent
    ensembles realized with the same seed therefore share identical gains.
    """
    if n_realizations < 1:
        raise ValueError("n_realizations must be >= 1")
    rng = generator(rng_seed, "gains")
    g = complex_normal(rng, (n_realizations, len(paths)))
    return g * np.sqrt(paths.gain_variance)


def _rank_one_sum(left: np.ndarray, alpha: np.ndarray, right: np.ndarray,
                  chunk: int = 256) -> np.ndarray:
    """Stack of sums over paths: out[i] = left @ diag(alpha[i]) @ right^H."""
    n = alpha.shape[0]
    out = np.empty((n, left.shape[0], right.shape[0]), dtype=complex)
    right_h = right.conj().T
    for start in range(0, n, chunk):
        block = alpha[start:start + chunk]
        out[start:start + len(block)] = (block[:, None, :] * left[None, :, :]) @ right_h
    return out


def _redrawn_paths(paths: PathSet, rng_seed: int, index: int) -> PathSet:
    if not paths.clusters:
        raise ValueError("redraw_angles requires cluster provenance on the path set")
    from .rng import derive_seed
    return expand_paths(list(paths.clusters), derive_seed(rng_seed, "redraw", index))


def realize_h0(paths: PathSet, m_t: int, m_r: int, n_realizations: int,
               rng_seed: int, redraw_angles: bool = False) -> ChannelEnsemble:
    """Array-independent channel ensemble over the Fourier basis.

    Each realization is the rank-one sum of d_R(phi_r,l) d_T^H(phi_t,l)
    weighted by freshly drawn gains; the geometry is frozen across
    realizations unless ``redraw_angles`` re-expands the clusters per
    realization.
    """
    if m_t % 2 == 0 or m_r % 2 == 0:
        raise EvenM("basis sizes must be odd")
    alpha = path_gains(paths, n_realizations, rng_seed)
    if redraw_angles:
        h0 = np.empty((n_realizations, m_r, m_t), dtype=complex)
        for i in range(n_realizations):
            p = _redrawn_paths(paths, rng_seed, i)
            h0[i] = (fourier_basis(m_r, p.phi_r) * alpha[i]) \
                @ fourier_basis(m_t, p.phi_t).conj().T
    else:
        h0 = _rank_one_sum(fourier_basis(m_r, paths.phi_r), alpha,
                           fourier_basis(m_t, paths.phi_t))
    return ChannelEnsemble(realizations=h0, kind=ARRAY_INDEPENDENT, seed=rng_seed)


def realize_h(paths: PathSet, model_t: SteeringModel, model_r: SteeringModel,
              n_realizations: int, rng_seed: int,
              redraw_angles: bool = False) -> ChannelEnsemble:
    """Physical channel ensemble: rank-one sums of steering vector outer
    products, sharing the gain stream of :func:`realize_h0` per seed."""
    alpha = path_gains(paths, n_realizations, rng_seed)
    if redraw_angles:
        n_r, n_t = model_r.n_elements, model_t.n_elements
        h = np.empty((n_realizations, n_r, n_t), dtype=complex)
        for i in range(n_realizations):
            p = _redrawn_paths(paths, rng_seed, i)
            h[i] = (steering_vector(model_r, p.phi_r) * alpha[i]) \
                @ steering_vector(model_t, p.phi_t).conj().T
    else:
        h = _rank_one_sum(steering_vector(model_r, paths.phi_r), alpha,
                          steering_vector(model_t, paths.phi_t))
    return ChannelEnsemble(realizations=h, kind=PHYSICAL, seed=rng_seed)


def normalize_ensemble(e: ChannelEnsemble) -> ChannelEnsemble:
    """Scale so the mean squared Frobenius norm equals rows * cols."""
    energy = e.mean_energy
    if energy == 0.0:
        raise ZeroEnergy("cannot normalize an all-zero ensemble")
    rows, cols = e.shape
    scale = np.sqrt(rows * cols / energy)
    return replace(e, realizations=e.realizations * scale, normalization="average_energy")
