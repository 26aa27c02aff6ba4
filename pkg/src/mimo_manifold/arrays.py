"""Steering-vector models and steering matrices at fixed virtual angles.

Supported array kinds are the parametric uniform linear array (ULA) and
uniform circular array (UCA) with isotropic unit-gain elements, plus a
tabulated kind backed by sampled far-field responses with periodic
interpolation.  Steering matrices collect the steering vectors at the M
fixed virtual azimuths 2*pi*m/M and feed both the stochastic channel
models and the condition-number studies.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import EmptyTable, EvenM, UnsortedTable, ZeroMatrix

TWO_PI = 2.0 * np.pi

#: Relative threshold below which a singular value counts as zero.
RANK_TOLERANCE = 1e-12


def wrap_angle(phi):
    """Wrap azimuths to the canonical interval [-pi, pi)."""
    return np.mod(np.asarray(phi, dtype=float) + np.pi, TWO_PI) - np.pi


def virtual_angles(m: int) -> np.ndarray:
    """The M fixed virtual azimuths 2*pi*k/M for k = -(M-1)/2 ... (M-1)/2."""
    if m < 1 or m % 2 == 0:
        raise EvenM(f"number of virtual angles must be odd and >= 1, got {m}")
    half = (m - 1) // 2
    return TWO_PI * np.arange(-half, half + 1) / m


@dataclass(frozen=True)
class SteeringModel:
    """An antenna array's complex response b(phi) to a far-field source.

    ``kind`` is one of ``"ula"``, ``"uca"``, ``"tabulated"``.  For the
    parametric kinds ``spacing_r`` is the adjacent-element spacing in
    wavelengths and ``orientation_phi0`` the array orientation.  The
    tabulated kind stores sampled responses on a strictly increasing
    azimuth grid in [-pi, pi) and interpolates component-wise with
    periodic wrap-around.
    """

    kind: str
    n_elements: int
    spacing_r: float = 0.5
    orientation_phi0: float = 0.0
    table_azimuths: Optional[np.ndarray] = field(default=None, repr=False)
    table_responses: Optional[np.ndarray] = field(default=None, repr=False)
    interpolation: str = "linear"

    def __post_init__(self):
        if self.kind not in ("ula", "uca", "tabulated"):
            raise ValueError(f"unknown array kind {self.kind!r}")
        if self.n_elements < 1:
            raise ValueError("n_elements must be positive")
        if self.kind in ("ula", "uca") and self.spacing_r <= 0:
            raise ValueError("spacing_r must be positive")
        if self.kind == "tabulated":
            az, resp = self.table_azimuths, self.table_responses
            if az is None or resp is None or len(az) == 0:
                raise EmptyTable("tabulated model requires at least one sample")
            az = np.asarray(az, dtype=float)
            resp = np.asarray(resp, dtype=complex)
            if resp.shape != (len(az), self.n_elements):
                raise ValueError("table_responses must have shape (n_samples, n_elements)")
            if np.any(np.diff(az) <= 0) or az[0] < -np.pi or az[-1] >= np.pi:
                raise UnsortedTable("table azimuths must be strictly increasing in [-pi, pi)")
            if self.interpolation not in ("linear", "nearest"):
                raise ValueError(f"unknown interpolation scheme {self.interpolation!r}")
            object.__setattr__(self, "table_azimuths", az)
            object.__setattr__(self, "table_responses", resp)

    @classmethod
    def ula(cls, n_elements: int, spacing_r: float = 0.5, orientation_phi0: float = 0.0):
        return cls(kind="ula", n_elements=n_elements, spacing_r=spacing_r,
                   orientation_phi0=orientation_phi0)

    @classmethod
    def uca(cls, n_elements: int, spacing_r: float = 0.5, orientation_phi0: float = 0.0):
        return cls(kind="uca", n_elements=n_elements, spacing_r=spacing_r,
                   orientation_phi0=orientation_phi0)

    @classmethod
    def tabulated(cls, azimuths, responses, interpolation: str = "linear"):
        responses = np.asarray(responses, dtype=complex)
        return cls(kind="tabulated", n_elements=responses.shape[1],
                   table_azimuths=np.asarray(azimuths, dtype=float),
                   table_responses=responses, interpolation=interpolation)


def ula_steering(model: SteeringModel, phi) -> np.ndarray:
    """ULA steering vector(s); component n is exp(-j*pi*(2n-N+1)*r*cos(phi-phi0)).

    Elements sit on a line through the origin at azimuth ``orientation_phi0``
    with spacing ``spacing_r`` wavelengths, symmetric about the centroid, so
    the middle component is 1 for odd N.  Returns shape (N,) for scalar phi
    and (N, K) for a length-K azimuth vector.
    """
    if model.kind != "ula":
        raise ValueError("model is not a ULA")
    phi = wrap_angle(phi)
    scalar = phi.ndim == 0
    offsets = 2.0 * np.arange(model.n_elements) - (model.n_elements - 1)
    phase = -np.pi * model.spacing_r * np.outer(offsets, np.cos(np.atleast_1d(phi) - model.orientation_phi0))
    out = np.exp(1j * phase)
    return out[:, 0] if scalar else out


def uca_steering(model: SteeringModel, phi) -> np.ndarray:
    """UCA steering vector(s); element n sits at circle angle 2*pi*n/N + phi0.

    The circumradius implied by the adjacent-element spacing r is
    r / (2 sin(pi/N)) wavelengths, which gives the per-element phase
    -pi * r * cos(phi - 2*pi*n/N - phi0) / sin(pi/N).
    """
    if model.kind != "uca":
        raise ValueError("model is not a UCA")
    phi = wrap_angle(phi)
    scalar = phi.ndim == 0
    n = model.n_elements
    element_angles = TWO_PI * np.arange(n) / n
    args = np.atleast_1d(phi)[None, :] - element_angles[:, None] - model.orientation_phi0
    phase = -np.pi * model.spacing_r * np.cos(args) / np.sin(np.pi / n)
    out = np.exp(1j * phase)
    return out[:, 0] if scalar else out


def tabulated_steering(model: SteeringModel, phi) -> np.ndarray:
    """Interpolated steering vector(s) from a sampled far-field response.

    Interpolates real and imaginary parts component-wise with periodic
    wrap across +/-pi; exact table values are returned at sample azimuths.
    """
    if model.kind != "tabulated":
        raise ValueError("model is not tabulated")
    az = model.table_azimuths
    resp = model.table_responses
    phi = wrap_angle(phi)
    scalar = phi.ndim == 0
    phis = np.atleast_1d(phi)
    # extend the grid by one periodic point each side so queries between the
    # last sample and -pi+2*pi wrap correctly
    az_ext = np.concatenate(([az[-1] - TWO_PI], az, [az[0] + TWO_PI]))
    resp_ext = np.vstack((resp[-1:], resp, resp[:1]))
    if model.interpolation == "nearest":
        idx = np.searchsorted(az_ext, phis)
        left, right = az_ext[idx - 1], az_ext[np.minimum(idx, len(az_ext) - 1)]
        pick = np.where(phis - left <= right - phis, idx - 1, idx)
        out = resp_ext[pick].T
    else:
        out = np.empty((model.n_elements, len(phis)), dtype=complex)
        for comp in range(model.n_elements):
            re = np.interp(phis, az_ext, resp_ext[:, comp].real)
            im = np.interp(phis, az_ext, resp_ext[:, comp].imag)
            out[comp] = re + 1j * im
    return out[:, 0] if scalar else out


_DISPATCH: dict[str, Callable] = {
    "ula": ula_steering,
    "uca": uca_steering,
    "tabulated": tabulated_steering,
}


def steering_vector(model: SteeringModel, phi) -> np.ndarray:
    """Evaluate any steering model at azimuth(s) phi."""
    return _DISPATCH[model.kind](model, phi)


@dataclass(frozen=True)
class SteeringMatrix:
    """N x M steering matrix whose columns are b(2*pi*m/M), m ascending."""

    entries: np.ndarray
    virtual_angles: np.ndarray
    source: SteeringModel

    @property
    def n_elements(self) -> int:
        return self.entries.shape[0]

    @property
    def n_virtual(self) -> int:
        return self.entries.shape[1]


def steering_matrix(model: SteeringModel, m: int) -> SteeringMatrix:
    """Steering matrix at the M fixed virtual angles (M odd)."""
    angles = virtual_angles(m)
    entries = steering_vector(model, angles)
    return SteeringMatrix(entries=entries, virtual_angles=angles, source=model)


def condition_number(b) -> float:
    """Spectral condition number: ratio of extreme nonzero singular values.

    Singular values below RANK_TOLERANCE times the largest are treated
    as zero, so rank-deficient matrices report the conditioning of their
    numerical range instead of infinity.
    """
    entries = b.entries if isinstance(b, SteeringMatrix) else np.asarray(b)
    sv = np.linalg.svd(entries, compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        raise ZeroMatrix("condition number of a zero matrix is undefined")
    nonzero = sv[sv > sv[0] * RANK_TOLERANCE]
    return float(nonzero[0] / nonzero[-1])


def condition_sweep(kind: str, n_elements: int, r_grid, m: int,
                    orientation_phi0: float = 0.0) -> list[tuple[float, float]]:
    """Condition number of the steering matrix versus antenna spacing.

    Returns (r, kappa) pairs in the order of ``r_grid``; plot-ready data
    for the spacing studies.
    """
    r_grid = np.asarray(r_grid, dtype=float)
    if r_grid.size == 0:
        raise ValueError("r_grid must be nonempty")
    if np.any(r_grid <= 0):
        raise ValueError("all spacings must be positive")
    out = []
    for r in r_grid:
        model = SteeringModel(kind=kind, n_elements=n_elements, spacing_r=float(r),
                              orientation_phi0=orientation_phi0)
        out.append((float(r), condition_number(steering_matrix(model, m))))
    return out
