"""Experiment orchestration: configs, pipelines, presets, manifests.

A run is described by a JSON config (arrays, basis sizes, scenario,
models, extraction method, metrics, realization counts, SNR, seed) and
produces CSV data files plus a ``manifest.json`` echoing the config and
hashing every output.  Presets are self-contained configurations with
documented seeds that reproduce the standard condition-number, imaging,
capacity-scatter, APS and capacity-CDF experiments at desk scale.

One root seed drives everything; stage seeds are derived by labeled
hashing so results are independent of execution order and worker count.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import io as mio
from .arrays import SteeringModel, condition_sweep, steering_matrix
from .errors import ConfigError
from .manifold import factorize_channel
from .metrics import capon_aps, condition_report, ergodic_capacity
from .models import (aism1_sample, aism2_sample, fit_aism1_from_ensemble,
                     fit_aism1_method1, fit_aism2, fit_sayeed,
                     fit_weichselberger, sayeed_sample, weichselberger_sample)
from .rng import derive_seed
from .scattering import (ARRAY_INDEPENDENT, ChannelEnsemble, Cluster,
                         expand_paths, generate_scenario, normalize_ensemble,
                         realize_h, realize_h0, three_cluster_demo)
from .vcr import virtual_power_image

__version__ = "0.1.0"

MODEL_NAMES = ("true", "aism1", "aism2", "weichselberger", "sayeed")
METRIC_NAMES = ("capacity", "cdf", "aps", "cond", "vcr_image")

ENV_THREADS = "MIMO_MANIFOLD_THREADS"


def thread_map(fn, items):
    """Ordered map honoring the MIMO_MANIFOLD_THREADS cap.

    Results do not depend on the worker count: each item's work is a pure
    function of its own derived seed and outputs are collected in input
    order.
    """
    items = list(items)
    default = min(4, os.cpu_count() or 1)
    workers = max(1, int(os.environ.get(ENV_THREADS, default)))
    if workers == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# --------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class ArraySpec:
    kind: str
    n: int = 0
    spacing: float = 0.5
    orientation: float = 0.0
    file: Optional[str] = None
    interpolation: str = "linear"

    def build(self, base_dir: Path) -> SteeringModel:
        if self.kind == "tabulated":
            az, resp = mio.read_array_table(base_dir / self.file)
            return SteeringModel.tabulated(az, resp, interpolation=self.interpolation)
        return SteeringModel(kind=self.kind, n_elements=self.n,
                             spacing_r=self.spacing, orientation_phi0=self.orientation)


@dataclass(frozen=True)
class ExperimentConfig:
    tx: ArraySpec
    rx: ArraySpec
    m_t: int
    m_r: int
    scenario: dict
    models: tuple[str, ...]
    extraction: dict
    metrics: tuple[str, ...]
    fit_n: int
    eval_n: int
    snr_db: float
    seed: int
    output_dir: str
    export_ensembles: bool = False
    aps_grid_points: int = 181
    aps_loading: float = 1e-6


def _expect(cond: bool, path: str, message: str):
    if not cond:
        raise ConfigError(f"{path}: {message}")


def _array_spec(doc: dict, path: str, base_dir: Path | None = None) -> ArraySpec:
    _expect(isinstance(doc, dict), path, "must be an object")
    kind = doc.get("kind")
    _expect(kind in ("ula", "uca", "tabulated"), f"{path}.kind",
            "must be one of 'ula', 'uca', 'tabulated'")
    if kind == "tabulated":
        _expect(isinstance(doc.get("file"), str), f"{path}.file",
                "tabulated arrays need a table file path")
        if base_dir is not None:
            _expect((base_dir / doc["file"]).exists(), f"{path}.file",
                    f"file {doc['file']!r} does not exist")
        return ArraySpec(kind=kind, file=doc["file"],
                         interpolation=doc.get("interpolation", "linear"))
    n = doc.get("n")
    _expect(isinstance(n, int) and n >= 1, f"{path}.n", "must be a positive integer")
    spacing = doc.get("spacing", 0.5)
    _expect(isinstance(spacing, (int, float)) and spacing > 0, f"{path}.spacing",
            "must be > 0")
    return ArraySpec(kind=kind, n=n, spacing=float(spacing),
                     orientation=float(doc.get("orientation", 0.0)))


def parse_config(doc: dict, base_dir: Path) -> ExperimentConfig:
    """Validate a config document; error messages name the offending key."""
    _expect(isinstance(doc, dict), "$", "config must be a JSON object")
    arrays = doc.get("arrays")
    _expect(isinstance(arrays, dict) and "tx" in arrays and "rx" in arrays,
            "arrays", "must contain 'tx' and 'rx' array specs")
    tx = _array_spec(arrays["tx"], "arrays.tx", base_dir)
    rx = _array_spec(arrays["rx"], "arrays.rx", base_dir)

    basis = doc.get("basis", {})
    m_t, m_r = basis.get("m_t"), basis.get("m_r")
    for name, m in (("basis.m_t", m_t), ("basis.m_r", m_r)):
        _expect(isinstance(m, int) and m >= 1 and m % 2 == 1, name,
                "must be an odd positive integer")

    scenario = doc.get("scenario")
    _expect(isinstance(scenario, dict), "scenario", "must be an object")
    keys = [k for k in ("clusters", "file", "generate") if k in scenario]
    _expect(len(keys) == 1, "scenario",
            "must contain exactly one of 'clusters', 'file', 'generate'")
    if "file" in scenario:
        _expect((base_dir / scenario["file"]).exists(), "scenario.file",
                f"file {scenario['file']!r} does not exist")

    models = tuple(doc.get("models", ["true"]))
    for i, m in enumerate(models):
        _expect(m in MODEL_NAMES, f"models[{i}]",
                f"unknown model {m!r}; choose from {MODEL_NAMES}")
    if "sayeed" in models:
        _expect(tx.kind == "ula" and rx.kind == "ula", "models",
                "the sayeed baseline requires ULA arrays at both ends")

    extraction = doc.get("extraction", {"method": "method1"})
    method = extraction.get("method")
    _expect(method in ("method1", "method2"), "extraction.method",
            "must be 'method1' or 'method2'")
    if method == "method2":
        _expect("sounding" in extraction, "extraction.sounding",
                "method2 requires a sounding array spec")
        _array_spec(extraction["sounding"], "extraction.sounding", base_dir)

    metrics = tuple(doc.get("metrics", ["capacity"]))
    for i, m in enumerate(metrics):
        _expect(m in METRIC_NAMES, f"metrics[{i}]",
                f"unknown metric {m!r}; choose from {METRIC_NAMES}")

    realizations = doc.get("realizations", {})
    fit_n = realizations.get("fit_n", 200)
    eval_n = realizations.get("eval_n", 200)
    _expect(isinstance(fit_n, int) and fit_n >= 1, "realizations.fit_n",
            "must be a positive integer")
    _expect(isinstance(eval_n, int) and eval_n >= 1, "realizations.eval_n",
            "must be a positive integer")

    seed = doc.get("seed", 0)
    _expect(isinstance(seed, int), "seed", "must be an integer")
    output_dir = doc.get("output_dir", "out")

    return ExperimentConfig(
        tx=tx, rx=rx, m_t=m_t, m_r=m_r, scenario=scenario, models=models,
        extraction=extraction, metrics=metrics, fit_n=fit_n, eval_n=eval_n,
        snr_db=float(doc.get("snr_db", 20.0)), seed=seed, output_dir=output_dir,
        export_ensembles=bool(doc.get("export_ensembles", False)),
        aps_grid_points=int(doc.get("aps_grid_points", 181)),
        aps_loading=float(doc.get("aps_loading", 1e-6)),
    )


def load_config(path) -> tuple[ExperimentConfig, dict, Path]:
    """Parse and validate a config file; returns (config, raw doc, base dir)."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno} col {exc.colno}: {exc.msg}") from exc
    return parse_config(doc, path.parent), doc, path.parent


def config_to_doc(cfg: ExperimentConfig) -> dict:
    """Serialize a config back to its JSON document form (parse fixed point)."""

    def array_doc(spec: ArraySpec) -> dict:
        if spec.kind == "tabulated":
            return {"kind": spec.kind, "file": spec.file,
                    "interpolation": spec.interpolation}
        return {"kind": spec.kind, "n": spec.n, "spacing": spec.spacing,
                "orientation": spec.orientation}

    return {
        "arrays": {"tx": array_doc(cfg.tx), "rx": array_doc(cfg.rx)},
        "basis": {"m_t": cfg.m_t, "m_r": cfg.m_r},
        "scenario": cfg.scenario,
        "models": list(cfg.models),
        "extraction": cfg.extraction,
        "metrics": list(cfg.metrics),
        "realizations": {"fit_n": cfg.fit_n, "eval_n": cfg.eval_n},
        "snr_db": cfg.snr_db,
        "seed": cfg.seed,
        "output_dir": cfg.output_dir,
        "export_ensembles": cfg.export_ensembles,
        "aps_grid_points": cfg.aps_grid_points,
        "aps_loading": cfg.aps_loading,
    }


# --------------------------------------------------------------------------
# pipeline building blocks


def resolve_clusters(scenario: dict, seed: int, base_dir: Path) -> list[Cluster]:
    if "clusters" in scenario:
        return [Cluster(**c) for c in scenario["clusters"]]
    if "file" in scenario:
        clusters, _ = mio.read_scenario(base_dir / scenario["file"])
        return clusters
    gen = scenario["generate"]
    rng_seed = derive_seed(seed, "scenario", gen.get("index", 0))
    return generate_scenario(rng_seed,
                             tuple(gen.get("n_cluster_range", (1, 5))),
                             gen.get("paths_per_cluster", 50))


def fit_models(cfg: ExperimentConfig, paths, models_requested, b_t, b_r,
               model_t, model_r, base_dir: Path):
    """Fit every requested stochastic model for one environment.

    Returns a dict of samplers keyed by model name; each sampler maps
    (n, seed) to a physical ensemble for the target arrays.
    """
    samplers = {}
    need_h0 = any(m in models_requested for m in ("aism1", "aism2"))
    h0_ensemble = None
    if need_h0:
        fit_seed = derive_seed(cfg.seed, "fit")
        if cfg.extraction["method"] == "method2":
            sounding = _array_spec(cfg.extraction["sounding"], "extraction.sounding")
            s_model = sounding.build(base_dir)
            b_sound_t = steering_matrix(s_model, cfg.m_t)
            b_sound_r = steering_matrix(s_model, cfg.m_r)
            sounded = realize_h(paths, s_model, s_model, cfg.fit_n, fit_seed)
            h0_est = factorize_channel(sounded.realizations,
                                       b_t=b_sound_t, b_r=b_sound_r)
            h0_ensemble = ChannelEnsemble(realizations=h0_est,
                                          kind=ARRAY_INDEPENDENT, seed=fit_seed)
        else:
            h0_ensemble = realize_h0(paths, cfg.m_t, cfg.m_r, cfg.fit_n, fit_seed)

    if "aism1" in models_requested:
        if cfg.extraction["method"] == "method1":
            params1 = fit_aism1_method1(paths, cfg.m_t, cfg.m_r)
        else:
            params1 = fit_aism1_from_ensemble(h0_ensemble)
        params1 = params1.with_steering(b_t, b_r)
        samplers["aism1"] = lambda n, s, p=params1: aism1_sample(p, n, s)
    if "aism2" in models_requested:
        params2 = fit_aism2(h0_ensemble).with_steering(b_t, b_r)
        samplers["aism2"] = lambda n, s, p=params2: aism2_sample(p, n, s)
    if "weichselberger" in models_requested or "sayeed" in models_requested:
        fit_phys = realize_h(paths, model_t, model_r, cfg.fit_n,
                             derive_seed(cfg.seed, "fit"))
        if "weichselberger" in models_requested:
            pw = fit_weichselberger(fit_phys)
            samplers["weichselberger"] = lambda n, s, p=pw: weichselberger_sample(p, n, s)
        if "sayeed" in models_requested:
            ps = fit_sayeed(fit_phys, model_t, model_r)
            samplers["sayeed"] = lambda n, s, p=ps: sayeed_sample(p, n, s)
    return samplers, h0_ensemble


def evaluate_models(cfg: ExperimentConfig, paths, model_t, model_r, b_t, b_r,
                    base_dir: Path):
    """True + model ensembles (normalized) for one environment."""
    samplers, h0_ensemble = fit_models(cfg, paths, cfg.models, b_t, b_r,
                                       model_t, model_r, base_dir)
    ensembles = {}
    if "true" in cfg.models:
        eval_seed = derive_seed(cfg.seed, "eval")
        ensembles["true"] = normalize_ensemble(
            realize_h(paths, model_t, model_r, cfg.eval_n, eval_seed))
    for name, sampler in samplers.items():
        ensembles[name] = normalize_ensemble(
            sampler(cfg.eval_n, derive_seed(cfg.seed, "sample", name)))
    return ensembles, h0_ensemble


# --------------------------------------------------------------------------
# output collection and manifest


class OutputWriter:
    """Collects output files and writes the closing manifest."""

    def __init__(self, out_dir: Path):
        self.out_dir = Path(out_dir)
        self.out_dir.mkdir(parents=True, exist_ok=True)
        self.files: list[str] = []
        self.timings: dict[str, float] = {}
        self._t0 = time.perf_counter()

    def path(self, name: str) -> Path:
        if name not in self.files:
            self.files.append(name)
        return self.out_dir / name

    def mark(self, stage: str):
        now = time.perf_counter()
        self.timings[stage] = round(now - self._t0, 6)
        self._t0 = now

    def write_manifest(self, config_doc: dict, seed: int):
        entries = []
        for name in self.files:
            digest = hashlib.sha256((self.out_dir / name).read_bytes()).hexdigest()
            entries.append({"path": name, "sha256": digest,
                            "bytes": (self.out_dir / name).stat().st_size})
        combined = hashlib.sha256(
            "\n".join(f"{e['path']}:{e['sha256']}" for e in entries).encode()
        ).hexdigest()
        manifest = {
            "format": "manifest/1",
            "version": __version__,
            "numpy": np.__version__,
            "seed": seed,
            "config": config_doc,
            "wall_times_s": self.timings,
            "outputs": entries,
            "outputs_hash": combined,
        }
        (self.out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")


# --------------------------------------------------------------------------
# the generic experiment runner


def run_experiment(cfg: ExperimentConfig, base_dir: Path | None = None,
                   config_doc: dict | None = None, render: bool = True) -> Path:
    """Execute generate -> realize -> fit -> sample -> metrics, write outputs."""
    base_dir = Path(base_dir) if base_dir is not None else Path.cwd()
    out = OutputWriter(base_dir / cfg.output_dir)

    clusters = resolve_clusters(cfg.scenario, cfg.seed, base_dir)
    paths = expand_paths(clusters, derive_seed(cfg.seed, "geometry"))
    model_t = cfg.tx.build(base_dir)
    model_r = cfg.rx.build(base_dir)
    b_t = steering_matrix(model_t, cfg.m_t)
    b_r = steering_matrix(model_r, cfg.m_r)
    out.mark("setup")

    ensembles, h0_ensemble = evaluate_models(cfg, paths, model_t, model_r,
                                             b_t, b_r, base_dir)
    out.mark("ensembles")

    if "capacity" in cfg.metrics or "cdf" in cfg.metrics or "cond" in cfg.metrics:
        report_rows = []
        for name, ens in ensembles.items():
            stats = ergodic_capacity(ens, cfg.snr_db)
            if "capacity" in cfg.metrics:
                mio.write_capacity_csv(out.path(f"capacity_{name}.csv"), stats)
            if "cdf" in cfg.metrics:
                mio.write_cdf_csv(out.path(f"cdf_{name}.csv"), stats)
            if "cond" in cfg.metrics:
                rep = condition_report(ens, b_t, b_r, cfg.snr_db)
                report_rows.append({"label": name, "kappa_b_t": rep.kappa_b_t,
                                    "kappa_b_r": rep.kappa_b_r,
                                    "mean_kappa_h": rep.mean_kappa_h,
                                    "ergodic_capacity": rep.ergodic_capacity})
        if report_rows:
            mio.write_report_csv(out.path("condition_report.csv"), report_rows)
        out.mark("capacity")

    if "aps" in cfg.metrics:
        grid = np.linspace(-np.pi, np.pi, cfg.aps_grid_points, endpoint=False)
        for name, ens in ensembles.items():
            aps = capon_aps(ens, model_t, model_r, grid, grid,
                            loading=cfg.aps_loading)
            mio.write_grid_csv(out.path(f"aps_{name}.csv"), aps.values,
                               aps.grid_t, aps.grid_r)
        out.mark("aps")

    if "vcr_image" in cfg.metrics:
        if h0_ensemble is None:
            h0_ensemble = realize_h0(paths, cfg.m_t, cfg.m_r, cfg.eval_n,
                                     derive_seed(cfg.seed, "eval"))
        img = virtual_power_image(h0_ensemble)
        from .arrays import virtual_angles
        mio.write_grid_csv(out.path("virtual_power_image.csv"), img,
                           virtual_angles(cfg.m_t), virtual_angles(cfg.m_r))
        out.mark("vcr_image")

    if cfg.export_ensembles:
        for name, ens in ensembles.items():
            mio.write_ensemble(out.out_dir / f"ensemble_{name}", ens)
            for f in sorted((out.out_dir / f"ensemble_{name}").iterdir()):
                out.files.append(str(f.relative_to(out.out_dir)))
        out.mark("export")

    if render:
        from .figures import render_outputs
        render_outputs(out)
        out.mark("figures")

    out.write_manifest(config_doc or config_to_doc(cfg), cfg.seed)
    return out.out_dir


# --------------------------------------------------------------------------
# presets


@dataclass(frozen=True)
class Preset:
    name: str
    seed: int
    description: str
    runner: object = field(repr=False, compare=False, default=None)


def _scaled(n: int, scale: float) -> int:
    return max(1, int(round(n * scale)))


def _demo_scenario_doc() -> dict:
    return {"clusters": [
        {"center_t": c.center_t, "center_r": c.center_r, "spread_t": c.spread_t,
         "spread_r": c.spread_r, "n_paths": c.n_paths, "power": c.power}
        for c in three_cluster_demo()]}


def _target_arrays(r: float = 0.5, kind: str = "ula", n: int = 5) -> dict:
    orientation = np.pi / 2 if kind == "ula" else 0.0
    spec = {"kind": kind, "n": n, "spacing": r, "orientation": orientation}
    return {"tx": dict(spec), "rx": dict(spec)}


def preset_fig3(out_dir: Path, seed: int, scale: float, render: bool) -> Path:
    """Virtual power image of the three-cluster environment at M=101."""
    doc = {
        "arrays": _target_arrays(),
        "basis": {"m_t": 101, "m_r": 101},
        "scenario": _demo_scenario_doc(),
        "models": ["true"],
        "extraction": {"method": "method1"},
        "metrics": ["vcr_image"],
        "realizations": {"fit_n": _scaled(200, scale), "eval_n": _scaled(200, scale)},
        "snr_db": 20.0,
        "seed": seed,
        "output_dir": str(out_dir),
    }
    cfg = parse_config(doc, Path.cwd())
    return run_experiment(cfg, Path.cwd(), doc, render)


def _sweep_preset(out_dir: Path, seed: int, render: bool, rows: list[tuple],
                  header: str, fname: str, config_doc: dict) -> Path:
    out = OutputWriter(out_dir)
    lines = [header]
    lines += [",".join(repr(v) if isinstance(v, float) else str(v) for v in row)
              for row in rows]
    out.path(fname).write_text("\n".join(lines) + "\n")
    out.mark("sweep")
    if render:
        from .figures import render_outputs
        render_outputs(out)
        out.mark("figures")
    out.write_manifest(config_doc, seed)
    return out.out_dir


def preset_fig5(out_dir: Path, seed: int, scale: float, render: bool) -> Path:
    """ULA condition number versus spacing for M in {5, 11, 501}."""
    r_grid = np.round(np.arange(0.10, 1.0001, 0.02), 4)
    rows = []
    for m in (5, 11, 501):
        for r, kappa in condition_sweep("ula", 5, r_grid, m, np.pi / 2):
            rows.append((m, float(r), float(kappa)))
    return _sweep_preset(out_dir, seed, render, rows, "m,r,kappa",
                         "condition_vs_spacing.csv",
                         {"preset": "fig5", "n": 5, "m": [5, 11, 501],
                          "orientation": np.pi / 2, "seed": seed})


def preset_fig6(out_dir: Path, seed: int, scale: float, render: bool) -> Path:
    """UCA condition number versus spacing for several element counts."""
    r_grid = np.round(np.arange(0.10, 1.0001, 0.02), 4)
    rows = []
    for n in (5, 9, 19):
        for m in (n, 501):
            for r, kappa in condition_sweep("uca", n, r_grid, m, 0.0):
                rows.append((n, m, float(r), float(kappa)))
    return _sweep_preset(out_dir, seed, render, rows, "n,m,r,kappa",
                         "condition_vs_spacing.csv",
                         {"preset": "fig6", "n": [5, 9, 19], "seed": seed})


def preset_fig7(out_dir: Path, seed: int, scale: float, render: bool,
                n_scenarios: int = 100) -> Path:
    """Modeled versus true ergodic capacity over random scenarios."""
    out = OutputWriter(out_dir)
    m = 19
    fit_n = _scaled(200, scale)
    eval_n = _scaled(200, scale)
    model = SteeringModel.ula(5, 0.5, np.pi / 2)
    b = steering_matrix(model, m)
    model_names = ("sayeed", "weichselberger", "aism1", "aism2")

    def one_scenario(idx: int):
        clusters = generate_scenario(derive_seed(seed, "scenario", idx))
        paths = expand_paths(clusters, derive_seed(seed, "geometry", idx))
        true_ens = normalize_ensemble(
            realize_h(paths, model, model, eval_n, derive_seed(seed, "eval", idx)))
        c_true = ergodic_capacity(true_ens, 20.0).ergodic
        cfg = ExperimentConfig(
            tx=ArraySpec("ula", 5, 0.5, np.pi / 2), rx=ArraySpec("ula", 5, 0.5, np.pi / 2),
            m_t=m, m_r=m, scenario={}, models=model_names,
            extraction={"method": "method1"}, metrics=(), fit_n=fit_n, eval_n=eval_n,
            snr_db=20.0, seed=derive_seed(seed, "models", idx), output_dir=".")
        samplers, _ = fit_models(cfg, paths, model_names, b, b, model, model,
                                 Path.cwd())
        row = {}
        for name in model_names:
            ens = normalize_ensemble(
                samplers[name](eval_n, derive_seed(seed, "sample", name, idx)))
            row[name] = ergodic_capacity(ens, 20.0).ergodic
        return c_true, row

    results = thread_map(one_scenario, range(n_scenarios))
    out.mark("scenarios")
    lines = ["scenario,model,c_true,c_model"]
    for idx, (c_true, row) in enumerate(results):
        for name in model_names:
            lines.append(f"{idx},{name},{c_true!r},{row[name]!r}")
    out.path("capacity_scatter.csv").write_text("\n".join(lines) + "\n")
    out.mark("write")
    if render:
        from .figures import render_outputs
        render_outputs(out)
        out.mark("figures")
    out.write_manifest({"preset": "fig7", "seed": seed, "scale": scale,
                        "n_scenarios": n_scenarios, "m": m,
                        "realizations": {"fit_n": fit_n, "eval_n": eval_n}}, seed)
    return out.out_dir


def preset_fig8(out_dir: Path, seed: int, scale: float, render: bool) -> Path:
    """2-D angular power spectra of the three-cluster environment."""
    doc = {
        "arrays": _target_arrays(),
        "basis": {"m_t": 19, "m_r": 19},
        "scenario": _demo_scenario_doc(),
        "models": ["true", "sayeed", "aism1", "weichselberger", "aism2"],
        "extraction": {"method": "method1"},
        "metrics": ["aps"],
        "realizations": {"fit_n": _scaled(200, scale), "eval_n": _scaled(200, scale)},
        "snr_db": 20.0,
        "seed": seed,
        "output_dir": str(out_dir),
    }
    cfg = parse_config(doc, Path.cwd())
    return run_experiment(cfg, Path.cwd(), doc, render)


def _cdf_family(out: OutputWriter, label: str, arrays: dict, seed: int,
                scale: float, models: tuple[str, ...]):
    doc = {
        "arrays": arrays,
        "basis": {"m_t": 19, "m_r": 19},
        "scenario": _demo_scenario_doc(),
        "models": list(models),
        "extraction": {"method": "method1"},
        "metrics": [],
        "realizations": {"fit_n": _scaled(200, scale), "eval_n": _scaled(1000, scale)},
        "snr_db": 20.0,
        "seed": seed,
        "output_dir": ".",
    }
    cfg = parse_config(doc, Path.cwd())
    clusters = resolve_clusters(cfg.scenario, cfg.seed, Path.cwd())
    paths = expand_paths(clusters, derive_seed(cfg.seed, "geometry"))
    model_t = cfg.tx.build(Path.cwd())
    model_r = cfg.rx.build(Path.cwd())
    b_t = steering_matrix(model_t, cfg.m_t)
    b_r = steering_matrix(model_r, cfg.m_r)
    ensembles, _ = evaluate_models(cfg, paths, model_t, model_r, b_t, b_r, Path.cwd())
    rows = []
    for name, ens in ensembles.items():
        stats = ergodic_capacity(ens, cfg.snr_db)
        mio.write_cdf_csv(out.path(f"cdf_{label}_{name}.csv"), stats)
        rep = condition_report(ens, b_t, b_r, cfg.snr_db)
        rows.append({"label": f"{label}_{name}", "kappa_b_t": rep.kappa_b_t,
                     "kappa_b_r": rep.kappa_b_r, "mean_kappa_h": rep.mean_kappa_h,
                     "ergodic_capacity": rep.ergodic_capacity})
    return rows


def preset_fig9(out_dir: Path, seed: int, scale: float, render: bool) -> Path:
    """Capacity CDFs for 5-element ULAs at spacings 0.2, 0.5, 0.7."""
    out = OutputWriter(out_dir)
    models = ("true", "sayeed", "weichselberger", "aism1", "aism2")
    report_rows = []
    for r in (0.2, 0.5, 0.7):
        report_rows += _cdf_family(out, f"ula_r{r}", _target_arrays(r), seed, scale,
                                   models)
        out.mark(f"family_r{r}")
    mio.write_report_csv(out.path("condition_report.csv"), report_rows)
    if render:
        from .figures import render_outputs
        render_outputs(out)
        out.mark("figures")
    out.write_manifest({"preset": "fig9", "seed": seed, "scale": scale}, seed)
    return out.out_dir


def preset_fig10(out_dir: Path, seed: int, scale: float, render: bool) -> Path:
    """Capacity CDFs for ULA versus UCA link ends at spacing 0.5."""
    out = OutputWriter(out_dir)
    report_rows = _cdf_family(out, "ula", _target_arrays(0.5, "ula"), seed, scale,
                              ("true", "sayeed", "weichselberger", "aism1", "aism2"))
    out.mark("ula")
    report_rows += _cdf_family(out, "uca", _target_arrays(0.5, "uca"), seed, scale,
                               ("true", "weichselberger", "aism1", "aism2"))
    out.mark("uca")
    mio.write_report_csv(out.path("condition_report.csv"), report_rows)
    if render:
        from .figures import render_outputs
        render_outputs(out)
        out.mark("figures")
    out.write_manifest({"preset": "fig10", "seed": seed, "scale": scale}, seed)
    return out.out_dir


def preset_table4(out_dir: Path, seed: int, scale: float, render: bool) -> Path:
    """Steering/channel conditioning and ergodic capacity per array config."""
    out = OutputWriter(out_dir)
    m = 19
    eval_n = _scaled(1000, scale)
    clusters = three_cluster_demo()
    paths = expand_paths(clusters, derive_seed(seed, "geometry"))
    rows = []
    configs = [
        ("ula_r0.2", SteeringModel.ula(5, 0.2, np.pi / 2)),
        ("ula_r0.7", SteeringModel.ula(5, 0.7, np.pi / 2)),
        ("ula_r0.5", SteeringModel.ula(5, 0.5, np.pi / 2)),
        ("uca_r0.5", SteeringModel.uca(5, 0.5, 0.0)),
    ]
    for label, model in configs:
        b = steering_matrix(model, m)
        ens = normalize_ensemble(
            realize_h(paths, model, model, eval_n, derive_seed(seed, "eval")))
        rep = condition_report(ens, b, b, 20.0)
        rows.append({"label": label, "kappa_b_t": rep.kappa_b_t,
                     "kappa_b_r": rep.kappa_b_r, "mean_kappa_h": rep.mean_kappa_h,
                     "ergodic_capacity": rep.ergodic_capacity})
    mio.write_report_csv(out.path("condition_report.csv"), rows)
    out.mark("report")
    out.write_manifest({"preset": "table4", "seed": seed, "scale": scale,
                        "m": m, "eval_n": eval_n}, seed)
    return out.out_dir


PRESETS = {
    "fig3": Preset("fig3", 20260301, "virtual power image, three clusters, M=101",
                   preset_fig3),
    "fig5": Preset("fig5", 0, "ULA condition number vs spacing", preset_fig5),
    "fig6": Preset("fig6", 0, "UCA condition number vs spacing", preset_fig6),
    "fig7": Preset("fig7", 20260707, "model vs true ergodic capacity, 100 scenarios",
                   preset_fig7),
    "fig8": Preset("fig8", 20260808, "Capon 2-D angular power spectra", preset_fig8),
    "fig9": Preset("fig9", 20260909, "capacity CDFs vs ULA spacing", preset_fig9),
    "fig10": Preset("fig10", 20261010, "capacity CDFs, ULA vs UCA", preset_fig10),
    "table4": Preset("table4", 20260404, "conditioning and capacity report",
                     preset_table4),
}


def run_preset(name: str, out_dir, seed: int | None = None, scale: float = 1.0,
               render: bool = True) -> Path:
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    preset = PRESETS[name]
    effective_seed = preset.seed if seed is None else seed
    return preset.runner(Path(out_dir), effective_seed, scale, render)
