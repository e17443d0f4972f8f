"""End-to-end experiment runner: synthesize, mix, add noise, embed, estimate, compare.

Configs are flat JSON objects (see ``configs/`` and the README for the keys).
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from . import baselines
from .embedding import PointCloud, decimate, embed
from .errors import ConfigError, ToposourcesError, UnknownAxis
from .estimation import (
    EstimateDiagnostics,
    SourceCountEstimate,
    Status,
    TdaConfig,
    estimate_sources,
    estimate_to_dict,
)
from .mixing import (
    MixingSystem,
    ObservationSet,
    independence_report,
    mix,
    random_mixing,
)
from .persistence.barcode_io import barcode_svg, barcode_to_csv
from .signals import (
    PhaseProfile,
    add_awgn,
    analytic_pair,
    hilbert_transform,
    synthesize,
)

SCHEMA_VERSION = 1
OUTPUT_DIR_ENV = "TOPOSOURCES_OUTPUT_DIR"
NORMALIZATIONS = ("rms", "pair", "none")

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SourceSpec:
    profile: PhaseProfile
    amplitude: float = 1.0

    def to_dict(self) -> dict:
        return {**self.profile.to_dict(), "amplitude": self.amplitude}

    @classmethod
    def from_dict(cls, d: dict) -> "SourceSpec":
        d = dict(d)
        amp = float(d.pop("amplitude", 1.0))
        return cls(PhaseProfile.from_dict(d), amp)


@dataclass(frozen=True)
class ExperimentConfig:
    sources: tuple[SourceSpec, ...]
    m_observations: int = 8
    r_range: tuple[float, float] = (0.75, 1.25)
    # None disables noise
    snr_db_range: tuple[float, float] | None = (15.0, 25.0)
    sample_rate_hz: float = 1e6
    n_samples: int = 30000
    trim_fraction: float = 0.1
    decimation_stride: int = 1
    normalization: str = "rms"
    landmarks: int = 150
    nu: int = 1
    max_filtration: float = 0.24
    filtration_divisions: int | None = 100
    # None: one per channel, as many as the array could resolve
    max_dimension: int | None = None
    persistence_fraction: float = 0.5
    snapshot_mode: str = "analytic"
    seed: int = 0
    output_dir: str = "runs"
    mixing: dict | None = None
    name: str = "experiment"

    def __post_init__(self):
        problems = []
        if not self.sources:
            problems.append("at least one source is required")
        if self.m_observations < 1:
            problems.append("m_observations must be positive")
        if self.normalization not in NORMALIZATIONS:
            problems.append(f"normalization must be one of {NORMALIZATIONS}")
        if self.snapshot_mode not in ("analytic", "real"):
            problems.append("snapshot_mode must be 'analytic' or 'real'")
        if self.snr_db_range is not None and self.snr_db_range[0] > self.snr_db_range[1]:
            problems.append("snr_db_range must be [lo, hi] with lo <= hi")
        if not 0 <= self.trim_fraction < 0.5:
            problems.append("trim_fraction must lie in [0, 0.5)")
        if self.decimation_stride < 1:
            problems.append("decimation_stride must be >= 1")
        if self.landmarks < 1:
            problems.append("landmarks must be >= 1")
        if self.nu < 0:
            problems.append("nu must be >= 0")
        if not self.max_filtration > 0:
            problems.append("max_filtration must be positive")
        if self.max_dimension is not None and self.max_dimension < 0:
            problems.append("max_dimension must be >= 0")
        if not 0 < self.persistence_fraction <= 1:
            problems.append("persistence_fraction must lie in (0, 1]")
        if self.n_samples < 8 or self.sample_rate_hz <= 0:
            problems.append("need n_samples >= 8 and a positive sample rate")
        if problems:
            raise ConfigError("; ".join(problems))

    @property
    def n_sources(self) -> int:
        return len(self.sources)

    def resolved_max_dimension(self) -> int:
        if self.max_dimension is not None:
            return self.max_dimension
        if self.m_observations > 4:
            log.warning("max_dimension defaults to m=%d; clique expansion that deep can be very slow",
                        self.m_observations)
        return self.m_observations

    def tda_config(self) -> TdaConfig:
        return TdaConfig(self.landmarks, self.nu, self.max_filtration, self.filtration_divisions,
                         self.resolved_max_dimension(), self.persistence_fraction)

    def to_dict(self) -> dict:
        d = {f.name: getattr(self, f.name) for f in fields(self)}
        d["sources"] = [s.to_dict() for s in self.sources]
        d["r_range"] = list(self.r_range)
        d["snr_db_range"] = None if self.snr_db_range is None else list(self.snr_db_range)
        return {"schema_version": SCHEMA_VERSION, **d}

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        d = dict(d)
        version = d.pop("schema_version", SCHEMA_VERSION)
        if version != SCHEMA_VERSION:
            raise ConfigError(f"unsupported schema_version {version}")
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        try:
            d["sources"] = tuple(SourceSpec.from_dict(s) for s in d.get("sources", ()))
            if "r_range" in d:
                d["r_range"] = tuple(float(v) for v in d["r_range"])
            if d.get("snr_db_range") is not None:
                d["snr_db_range"] = tuple(float(v) for v in d["snr_db_range"])
            return cls(**d)
        except ConfigError:
            raise
        except (TypeError, ValueError, KeyError) as exc:
            raise ConfigError(str(exc)) from None


def load_config(path: str | os.PathLike) -> ExperimentConfig:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: config must be a JSON object")
    return ExperimentConfig.from_dict(data)


class StageError(ToposourcesError):
    """A pipeline error tagged with the stage that raised it."""

    def __init__(self, stage: str, cause: Exception):
        self.stage = stage
        self.cause = cause
        super().__init__(f"stage '{stage}' failed: {type(cause).__name__}: {cause}")


@dataclass
class RunReport:
    config: ExperimentConfig
    estimate: SourceCountEstimate
    mdl: int
    aic: int
    independence: dict
    snr_db: list[float | None]
    mixing: MixingSystem
    diagnostics: EstimateDiagnostics
    timings: dict[str, float] = field(default_factory=dict)
    paths: dict[str, str] = field(default_factory=dict)

    @property
    def topological_success(self) -> bool:
        return self.estimate.status is Status.MATCH and self.estimate.n == self.config.n_sources

    def to_dict(self) -> dict:
        """Deterministic content; wall-clock timings are kept out on purpose."""
        return {
            "schema_version": SCHEMA_VERSION,
            "config": self.config.to_dict(),
            "n_sources_true": self.config.n_sources,
            "topological": estimate_to_dict(self.estimate, self.config.tda_config(), self.config.seed),
            "mdl": self.mdl,
            "aic": self.aic,
            "independence_report": self.independence,
            "snr_db": self.snr_db,
            "mixing": self.mixing.to_dict(),
            "landmark_cover_radius": self.diagnostics.cover_radius,
            "n_simplices": {str(k): v for k, v in sorted(self.diagnostics.n_simplices.items())},
            "artifacts": dict(sorted(self.paths.items())),
        }


def _seeds(seed: int, count: int) -> list[int]:
    children = np.random.SeedSequence(seed).spawn(count)
    return [int(c.generate_state(1)[0]) for c in children]


def _stage(name: str):
    class _Ctx:
        def __enter__(self):
            return self

        def __exit__(self, exc_type, exc, tb):
            if exc is not None and isinstance(exc, ToposourcesError) and not isinstance(exc, StageError):
                raise StageError(name, exc) from exc
            return False

    return _Ctx()


def normalize_cloud(cloud: PointCloud, mode: str) -> PointCloud:
    """``rms``: scale to unit RMS point norm; ``pair``: unit RMS radius per channel pair."""
    p = cloud.points
    if mode == "rms":
        scale = math.sqrt(float(np.mean(np.sum(p**2, axis=1))))
        p = p / scale if scale > 0 else p
    elif mode == "pair":
        radius = np.sqrt(np.mean(p[:, 0::2] ** 2 + p[:, 1::2] ** 2, axis=0))
        radius[radius == 0] = 1.0
        p = p / np.repeat(radius, 2)
    return PointCloud(p, {**cloud.provenance, "normalization": mode})


def simulate(config: ExperimentConfig) -> tuple[MixingSystem, ObservationSet, list[float | None]]:
    """Sources, mixing and per-channel noise, all derived from ``config.seed``."""
    m = config.m_observations
    mix_seed, snr_seed, *noise_seeds = _seeds(config.seed, 2 + m)
    with _stage("synthesize"):
        pairs = [analytic_pair(synthesize(s.profile, s.amplitude, config.sample_rate_hz, config.n_samples))
                 for s in config.sources]
    with _stage("mix"):
        if config.mixing is not None:
            system = MixingSystem(config.mixing["magnitudes"], config.mixing["phases"])
            if system.m_observations != m or system.n_sources != config.n_sources:
                raise ConfigError(f"explicit mixing is {system.magnitudes.shape}, expected {(m, config.n_sources)}")
        else:
            system = random_mixing(config.n_sources, m, config.r_range, mix_seed)
        clean = mix(system, pairs)
    with _stage("noise"):
        if config.snr_db_range is None:
            snrs: list[float | None] = [None] * m
            noisy = clean
        else:
            lo, hi = config.snr_db_range
            snrs = np.random.default_rng(snr_seed).uniform(lo, hi, size=m).tolist()
            noisy = ObservationSet(tuple(add_awgn(ch, snr, ns)
                                         for ch, snr, ns in zip(clean.channels, snrs, noise_seeds)))
    return system, noisy, snrs


def run_experiment(config: ExperimentConfig, output_dir: str | os.PathLike | None = None,
                   write: bool = True) -> RunReport:
    """Run the whole pipeline; artifacts go to ``output_dir`` (env override, then config)."""
    timings: dict[str, float] = {}
    t = time.perf_counter()
    system, obs, snrs = simulate(config)
    timings["simulate"] = time.perf_counter() - t

    t = time.perf_counter()
    with _stage("embed"):
        cloud = embed(obs, config.trim_fraction)
        cloud = normalize_cloud(decimate(cloud, config.decimation_stride), config.normalization)
    timings["embed"] = time.perf_counter() - t

    t = time.perf_counter()
    with _stage("estimate"):
        est, diag = estimate_sources(cloud, config.tda_config())
    timings["estimate"] = time.perf_counter() - t
    timings.update({f"estimate.{k}": v for k, v in diag.timings.items()})

    t = time.perf_counter()
    with _stage("baselines"):
        # same trimmed snapshots the embedding used, before decimation
        n = obs.n_samples
        cut = math.floor(config.trim_fraction * n)
        y = obs.as_array()
        if config.snapshot_mode == "analytic":
            y = y + 1j * np.stack([hilbert_transform(row) for row in y])
        y = y[:, cut : n - cut]
        if len(obs) >= 2:
            _, spectrum = baselines.sample_autocorrelation(y, use_analytic=False)
            mdl, aic = baselines.mdl_estimate(spectrum), baselines.aic_estimate(spectrum)
        else:
            mdl = aic = -1
    timings["baselines"] = time.perf_counter() - t

    report = RunReport(config, est, mdl, aic, independence_report(system), snrs, system, diag, timings)
    if write:
        write_artifacts(report, resolve_output_dir(config, output_dir))
    return report


def resolve_output_dir(config: ExperimentConfig, override: str | os.PathLike | None = None) -> Path:
    base = override or os.environ.get(OUTPUT_DIR_ENV) or config.output_dir
    return Path(base) / f"{config.name}-seed{config.seed}"


def write_artifacts(report: RunReport, out: Path) -> None:
    out.mkdir(parents=True, exist_ok=True)
    tda = report.config.tda_config()
    report.paths = {"barcode_csv": "barcode.csv", "barcode_svg": "barcode.svg",
                    "timings": "timings.json", "report": "report.json"}
    (out / "barcode.csv").write_text(barcode_to_csv(report.diagnostics.barcode))
    (out / "barcode.svg").write_text(barcode_svg(report.diagnostics.barcode,
                                                 persistence_fraction=tda.persistence_fraction,
                                                 min_length=0.02 * tda.max_filtration))
    (out / "timings.json").write_text(json.dumps(report.timings, indent=2, sort_keys=True) + "\n")
    (out / "report.json").write_text(report_json(report))


def report_json(report: RunReport) -> str:
    return json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"


# -- sweeps -----------------------------------------------------------------

SWEEP_ALIASES = {"snr_db": "snr_db_range"}


def _numeric_fields() -> set[str]:
    out = set()
    for f in fields(ExperimentConfig):
        if f.name in ("seed",):
            continue
        if f.type in ("int", "float", "int | None") or f.name in ("snr_db_range", "r_range"):
            out.add(f.name)
    return out


SWEEPABLE = _numeric_fields() | set(SWEEP_ALIASES)


def with_axis_value(config: ExperimentConfig, axis: str, value: float) -> ExperimentConfig:
    if axis not in SWEEPABLE:
        raise UnknownAxis(f"unknown sweep axis {axis!r}; choose from {sorted(SWEEPABLE)}")
    name = SWEEP_ALIASES.get(axis, axis)
    if name in ("snr_db_range", "r_range"):
        return replace(config, **{name: (float(value), float(value))})
    current = getattr(config, name)
    if isinstance(current, int) and not isinstance(current, bool) and float(value).is_integer():
        value = int(value)
    return replace(config, **{name: value})


def _run_cell(args: tuple[ExperimentConfig, str, float, int]) -> dict:
    config, axis, value, rep = args
    cfg = replace(with_axis_value(config, axis, value), seed=config.seed + rep)
    report = run_experiment(cfg, write=False)
    n = cfg.n_sources
    return {"value": value, "rep": rep, "topo": report.topological_success,
            "mdl": report.mdl == n, "aic": report.aic == n}


SWEEP_HEADER = ["axis", "value", "repetitions", "topological_success_rate",
                "mdl_success_rate", "aic_success_rate"]


def sweep(config: ExperimentConfig, axis: str, values: Sequence[float], repetitions: int,
          workers: int = 1) -> str:
    """Success rates per axis value as CSV; row order is fixed by (value, repetition)."""
    if axis not in SWEEPABLE:
        raise UnknownAxis(f"unknown sweep axis {axis!r}; choose from {sorted(SWEEPABLE)}")
    if repetitions < 1:
        raise ConfigError("repetitions must be positive")
    values = list(dict.fromkeys(values))
    jobs = [(config, axis, v, r) for v in values for r in range(repetitions)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_cell, jobs))
    else:
        results = [_run_cell(j) for j in jobs]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_HEADER)
    for v in values:
        cell = [r for r in results if r["value"] == v]
        k = len(cell)
        w.writerow([axis, repr(v), k] + [repr(sum(r[key] for r in cell) / k) for key in ("topo", "mdl", "aic")])
    return buf.getvalue()
