"""File formats: matrices, ensembles, scenarios, model params, array tables.

All numeric text is written with shortest-round-trip precision so that
export -> import is lossless and repeated runs diff cleanly.  Matrix CSV
files start with ``# rows=<r> cols=<c> complex=<0|1>`` followed by
row-major lines of ``re[,im]`` pairs.  Ensembles are directories of
per-realization matrix files plus an ``index.json``.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import IoFormatError
from .models import Aism1Params, Aism2Params
from .scattering import ChannelEnsemble, Cluster

MATRIX_HEADER = "# rows={rows} cols={cols} complex={flag}"


def _fmt(x: float) -> str:
    return repr(float(x))


def write_matrix_csv(path, matrix: np.ndarray) -> None:
    """Write a real or complex 2-D matrix."""
    matrix = np.asarray(matrix)
    if matrix.ndim != 2:
        raise ValueError("matrix must be 2-D")
    is_complex = np.iscomplexobj(matrix)
    lines = [MATRIX_HEADER.format(rows=matrix.shape[0], cols=matrix.shape[1],
                                  flag=int(is_complex))]
    for row in matrix:
        if is_complex:
            cells = [f"{_fmt(v.real)},{_fmt(v.imag)}" for v in row]
        else:
            cells = [_fmt(v) for v in row]
        lines.append(",".join(cells))
    Path(path).write_text("\n".join(lines) + "\n")


def read_matrix_csv(path) -> np.ndarray:
    """Read a matrix written by :func:`write_matrix_csv`."""
    path = Path(path)
    lines = [ln for ln in path.read_text().splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("#"):
        raise IoFormatError(f"{path}: missing matrix header line")
    try:
        fields = dict(kv.split("=") for kv in lines[0].lstrip("# ").split())
        rows, cols = int(fields["rows"]), int(fields["cols"])
        is_complex = bool(int(fields["complex"]))
    except (KeyError, ValueError) as exc:
        raise IoFormatError(f"{path}: malformed header {lines[0]!r}") from exc
    if len(lines) - 1 != rows:
        raise IoFormatError(f"{path}: expected {rows} data rows, found {len(lines) - 1}")
    out = np.empty((rows, cols), dtype=complex if is_complex else float)
    per_row = cols * 2 if is_complex else cols
    for i, line in enumerate(lines[1:]):
        cells = line.split(",")
        if len(cells) != per_row:
            raise IoFormatError(f"{path}: row {i + 2} has {len(cells)} values, "
                                f"expected {per_row}")
        try:
            nums = [float(c) for c in cells]
        except ValueError as exc:
            raise IoFormatError(f"{path}: row {i + 2}: non-numeric value") from exc
        if is_complex:
            out[i] = np.asarray(nums[0::2]) + 1j * np.asarray(nums[1::2])
        else:
            out[i] = nums
    return out


def write_ensemble(directory, e: ChannelEnsemble) -> None:
    """Write an ensemble as per-realization matrix files plus an index."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    files = []
    for i, h in enumerate(e.realizations):
        name = f"realization_{i:05d}.csv"
        write_matrix_csv(directory / name, h)
        files.append(name)
    index = {
        "format": "ensemble/1",
        "kind": e.kind,
        "seed": e.seed,
        "normalization": e.normalization,
        "count": len(e),
        "files": files,
    }
    (directory / "index.json").write_text(json.dumps(index, indent=2) + "\n")


def read_ensemble(directory) -> ChannelEnsemble:
    """Load an ensemble directory, verifying every referenced file exists."""
    directory = Path(directory)
    index_path = directory / "index.json"
    if not index_path.exists():
        raise IoFormatError(f"{directory}: missing index.json")
    index = json.loads(index_path.read_text())
    if index.get("format") != "ensemble/1":
        raise IoFormatError(f"{index_path}: unsupported format {index.get('format')!r}")
    mats = []
    for name in index["files"]:
        fpath = directory / name
        if not fpath.exists():
            raise IoFormatError(f"{index_path}: referenced file {name!r} is missing")
        mats.append(read_matrix_csv(fpath))
    return ChannelEnsemble(realizations=np.stack(mats), kind=index["kind"],
                           seed=index.get("seed"),
                           normalization=index.get("normalization", "none"))


def write_scenario(path, clusters: list[Cluster], seed=None) -> None:
    doc = {
        "format": "scenario/1",
        "seed": seed,
        "clusters": [
            {"center_t": c.center_t, "center_r": c.center_r,
             "spread_t": c.spread_t, "spread_r": c.spread_r,
             "n_paths": c.n_paths, "power": c.power}
            for c in clusters
        ],
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def read_scenario(path) -> tuple[list[Cluster], int | None]:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise IoFormatError(f"{path}: line {exc.lineno} col {exc.colno}: {exc.msg}") from exc
    if doc.get("format") != "scenario/1":
        raise IoFormatError(f"{path}: unsupported format {doc.get('format')!r}")
    try:
        clusters = [Cluster(**c) for c in doc["clusters"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise IoFormatError(f"{path}: bad cluster record: {exc}") from exc
    return clusters, doc.get("seed")


def _grid_to_lists(matrix: np.ndarray):
    return [[float(v) for v in row] for row in np.asarray(matrix, dtype=float)]


def _complex_to_interleaved(matrix: np.ndarray):
    out = []
    for row in np.asarray(matrix, dtype=complex):
        flat = []
        for v in row:
            flat.extend((float(v.real), float(v.imag)))
        out.append(flat)
    return out


def _interleaved_to_complex(rows):
    arr = np.asarray(rows, dtype=float)
    return arr[:, 0::2] + 1j * arr[:, 1::2]


def write_params(path, params) -> None:
    """Serialize fitted model parameters (versioned ``aism/1`` document)."""
    if isinstance(params, Aism1Params):
        doc = {"format": "aism/1", "model": "aism1",
               "m_t": params.m_t, "m_r": params.m_r,
               "coupling": _grid_to_lists(params.omega_angle)}
    elif isinstance(params, Aism2Params):
        doc = {"format": "aism/1", "model": "aism2",
               "m_t": params.m_t, "m_r": params.m_r,
               "coupling": _grid_to_lists(params.omega_eigen),
               "eigenbasis_t": _complex_to_interleaved(params.u_t),
               "eigenbasis_r": _complex_to_interleaved(params.u_r),
               "eigenvalues_t": [float(v) for v in params.lambda_t],
               "eigenvalues_r": [float(v) for v in params.lambda_r]}
    else:
        raise TypeError(f"cannot serialize {type(params).__name__}")
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def read_params(path):
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise IoFormatError(f"{path}: line {exc.lineno} col {exc.colno}: {exc.msg}") from exc
    if doc.get("format") != "aism/1":
        raise IoFormatError(f"{path}: unsupported format {doc.get('format')!r}")
    if doc["model"] == "aism1":
        return Aism1Params(omega_angle=np.asarray(doc["coupling"], dtype=float),
                           m_t=doc["m_t"], m_r=doc["m_r"])
    if doc["model"] == "aism2":
        return Aism2Params(omega_eigen=np.asarray(doc["coupling"], dtype=float),
                           u_t=_interleaved_to_complex(doc["eigenbasis_t"]),
                           u_r=_interleaved_to_complex(doc["eigenbasis_r"]),
                           lambda_t=np.asarray(doc["eigenvalues_t"], dtype=float),
                           lambda_r=np.asarray(doc["eigenvalues_r"], dtype=float),
                           m_t=doc["m_t"], m_r=doc["m_r"])
    raise IoFormatError(f"{path}: unknown model {doc['model']!r}")


def write_array_table(path, azimuths: np.ndarray, responses: np.ndarray) -> None:
    """Tabulated array file: ``# N=<n>`` then ``phi_rad, re_1, im_1, ...`` rows."""
    responses = np.asarray(responses, dtype=complex)
    n = responses.shape[1]
    lines = [f"# N={n}"]
    for phi, row in zip(azimuths, responses):
        cells = [_fmt(phi)]
        for v in row:
            cells.extend((_fmt(v.real), _fmt(v.imag)))
        lines.append(",".join(cells))
    Path(path).write_text("\n".join(lines) + "\n")


def read_array_table(path) -> tuple[np.ndarray, np.ndarray]:
    """Read a tabulated array file; returns (azimuths, responses)."""
    path = Path(path)
    lines = [ln for ln in path.read_text().splitlines() if ln.strip()]
    if not lines or not lines[0].lstrip("# ").startswith("N="):
        raise IoFormatError(f"{path}: missing '# N=<n>' header")
    try:
        n = int(lines[0].lstrip("# ").split("=")[1])
    except (IndexError, ValueError) as exc:
        raise IoFormatError(f"{path}: malformed header {lines[0]!r}") from exc
    azimuths, responses = [], []
    for i, line in enumerate(lines[1:]):
        cells = line.split(",")
        if len(cells) != 1 + 2 * n:
            raise IoFormatError(f"{path}: row {i + 2} has {len(cells)} values, "
                                f"expected {1 + 2 * n}")
        try:
            nums = [float(c) for c in cells]
        except ValueError as exc:
            raise IoFormatError(f"{path}: row {i + 2}: non-numeric value") from exc
        azimuths.append(nums[0])
        responses.append(np.asarray(nums[1::2]) + 1j * np.asarray(nums[2::2]))
    return np.asarray(azimuths), np.stack(responses)


def write_capacity_csv(path, stats) -> None:
    lines = ["realization_index,capacity_bits"]
    lines += [f"{i},{_fmt(c)}" for i, c in enumerate(stats.per_realization)]
    Path(path).write_text("\n".join(lines) + "\n")


def write_cdf_csv(path, stats) -> None:
    n = len(stats.cdf)
    lines = ["capacity_bits,empirical_cdf"]
    lines += [f"{_fmt(c)},{_fmt((i + 1) / n)}" for i, c in enumerate(stats.cdf)]
    Path(path).write_text("\n".join(lines) + "\n")


def write_grid_csv(path, values: np.ndarray, col_axis: np.ndarray,
                   row_axis: np.ndarray) -> None:
    """Grid with a header row/column of axis values (radians)."""
    values = np.asarray(values)
    lines = ["," + ",".join(_fmt(v) for v in col_axis)]
    for r, row in zip(row_axis, values):
        lines.append(",".join([_fmt(r)] + [_fmt(v) for v in row]))
    Path(path).write_text("\n".join(lines) + "\n")


def read_grid_csv(path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Read a grid CSV; returns (values, col_axis, row_axis)."""
    lines = [ln for ln in Path(path).read_text().splitlines() if ln.strip()]
    col_axis = np.asarray([float(v) for v in lines[0].split(",")[1:]])
    row_axis, rows = [], []
    for line in lines[1:]:
        cells = line.split(",")
        row_axis.append(float(cells[0]))
        rows.append([float(v) for v in cells[1:]])
    return np.asarray(rows), col_axis, np.asarray(row_axis)


def write_report_csv(path, rows: list[dict]) -> None:
    """Conditioning/capacity report, one configuration per row."""
    lines = ["label,kappa_B_T,kappa_B_R,mean_kappa_H,ergodic_capacity"]
    for row in rows:
        lines.append(",".join([str(row["label"]), _fmt(row["kappa_b_t"]),
                               _fmt(row["kappa_b_r"]), _fmt(row["mean_kappa_h"]),
                               _fmt(row["ergodic_capacity"])]))
    Path(path).write_text("\n".join(lines) + "\n")
