"""Render the delimited outputs of a run into matplotlib figures.

Every figure is derived purely from the CSV files already written, so
plots can also be regenerated later from the data alone.  PNGs are
written without software/date metadata to keep runs byte-reproducible.
"""

from __future__ import annotations

import re
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .io import read_grid_csv  # noqa: E402

_SAVE_KW = dict(dpi=150, metadata={"Software": None})


def _save(fig, path: Path):
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def _plot_condition_sweep(csv_path: Path, png_path: Path):
    rows = np.genfromtxt(csv_path, delimiter=",", names=True)
    keys = [k for k in rows.dtype.names if k not in ("r", "kappa")]
    fig, ax = plt.subplots(figsize=(6, 4.5))
    combos = sorted({tuple(int(row[k]) for k in keys) for row in rows})
    for combo in combos:
        mask = np.all([rows[k] == v for k, v in zip(keys, combo)], axis=0)
        label = ", ".join(f"{k.upper()}={v}" for k, v in zip(keys, combo))
        ax.semilogy(rows["r"][mask], rows["kappa"][mask], label=label)
    ax.set_xlabel("normalized antenna spacing r")
    ax.set_ylabel("condition number")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize="small")
    _save(fig, png_path)


def _plot_scatter(csv_path: Path, png_path: Path):
    data = np.genfromtxt(csv_path, delimiter=",", names=True, dtype=None,
                         encoding="utf-8")
    fig, ax = plt.subplots(figsize=(6, 6))
    models = sorted(set(data["model"]))
    markers = {"sayeed": "s", "weichselberger": "d", "aism1": "o", "aism2": "^"}
    for model in models:
        mask = data["model"] == model
        ax.scatter(data["c_true"][mask], data["c_model"][mask], s=12,
                   marker=markers.get(model, "x"), alpha=0.7, label=model)
    lim = [min(data["c_true"].min(), data["c_model"].min()) - 1,
           max(data["c_true"].max(), data["c_model"].max()) + 1]
    ax.plot(lim, lim, "k--", lw=1)
    ax.set_xlim(lim), ax.set_ylim(lim)
    ax.set_xlabel("true ergodic capacity (bits/s/Hz)")
    ax.set_ylabel("modeled ergodic capacity (bits/s/Hz)")
    ax.legend(fontsize="small")
    ax.grid(alpha=0.3)
    _save(fig, png_path)


def _plot_cdf_family(csv_paths: list[Path], png_path: Path):
    fig, ax = plt.subplots(figsize=(6, 4.5))
    for path in sorted(csv_paths):
        data = np.genfromtxt(path, delimiter=",", names=True)
        label = path.stem.split("_")[-1]
        ax.plot(data["capacity_bits"], data["empirical_cdf"], label=label)
    ax.set_xlabel("capacity (bits/s/Hz)")
    ax.set_ylabel("empirical CDF")
    ax.grid(alpha=0.3)
    ax.legend(fontsize="small")
    _save(fig, png_path)


def _plot_grid(csv_path: Path, png_path: Path, normalize: bool = False):
    values, col_axis, row_axis = read_grid_csv(csv_path)
    if normalize and values.max() > 0:
        values = values / values.max()
    fig, ax = plt.subplots(figsize=(5.5, 5))
    mesh = ax.pcolormesh(col_axis, row_axis, values, shading="nearest",
                         cmap="viridis")
    fig.colorbar(mesh, ax=ax, shrink=0.85)
    ax.set_xlabel("transmit azimuth (rad)")
    ax.set_ylabel("receive azimuth (rad)")
    _save(fig, png_path)


def render_outputs(out) -> list[str]:
    """Render figures for the files collected by an OutputWriter.

    Appends the PNG names to the writer's file list so the manifest
    covers them; returns the rendered names.
    """
    rendered: list[str] = []
    names = list(out.files)

    def target(name: str) -> Path:
        png = str(Path(name).with_suffix(".png"))
        rendered.append(png)
        return out.path(png)

    cdf_groups: dict[str, list[Path]] = {}
    for name in names:
        path = out.out_dir / name
        if name == "condition_vs_spacing.csv":
            _plot_condition_sweep(path, target(name))
        elif name == "capacity_scatter.csv":
            _plot_scatter(path, target(name))
        elif name.startswith("aps_") and name.endswith(".csv"):
            _plot_grid(path, target(name), normalize=True)
        elif name == "virtual_power_image.csv":
            _plot_grid(path, target(name))
        elif re.match(r"cdf_.*\.csv$", name):
            family = "_".join(Path(name).stem.split("_")[:-1])
            cdf_groups.setdefault(family, []).append(path)
    for family, paths in sorted(cdf_groups.items()):
        png = f"{family}.png"
        rendered.append(png)
        _plot_cdf_family(paths, out.path(png))
    return rendered
