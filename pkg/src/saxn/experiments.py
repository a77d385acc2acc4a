"""Study pipelines: sigma shrinkage tables, symbol-distribution chi-squared
grids, ACF-sum vs sigma regression and normality screening.

A study run is driven by a JSON config and writes its outputs plus a
``manifest.json`` (file checksums, config echo, skipped inputs) into a run
directory. Nothing time-dependent is written, so identical configs give
byte-identical run directories.
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
import os
import zlib
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from saxn import __version__
from saxn.dataio import DatasetSpec, emit_plot_data, read_series, to_json, write_report
from saxn.errors import DatasetNotFound, SaxError
from saxn.sax import ALWAYS, NEVER, RenormPolicy, sax_from_paa
from saxn.series import TimeSeries, paa, z_normalize
from saxn.stats import (
    GofReport,
    NormalityReport,
    RegressionFit,
    acf_sum,
    chi_squared_gof,
    jarque_bera,
    ols_fit,
    pearson_corr,
)
from saxn.synth import (
    DEFAULT_LENGTH,
    DEFAULT_NOISE_SIGMA,
    NoiseParams,
    SinusoidParams,
    simulated_trio,
    sinusoid_with_noise,
    white_noise,
)

log = logging.getLogger(__name__)

SIMULATED_WIDTHS = (1, 2, 5, 10, 20)
REAL_WORLD_WIDTHS = (2, 5, 10, 20)
CHISQ_CARDINALITIES = (5, 10)
REGRESSION_WIDTH = 20
DEFAULT_SEED = 2012
DEFAULT_VARIANTS = {"SAX": NEVER, "SAXn": ALWAYS}


def derive_seed(root_seed: int, label: str) -> int:
    """Per-cell seed: a pure function of the root seed and a text label."""
    ss = np.random.SeedSequence(root_seed, spawn_key=(zlib.crc32(label.encode()),))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _named(series_set) -> dict[str, TimeSeries]:
    if isinstance(series_set, TimeSeries):
        return {series_set.name: series_set}
    if isinstance(series_set, Mapping):
        return dict(series_set)
    out = {}
    for s in series_set:
        if s.name in out:
            raise ValueError(f"duplicate series name {s.name!r}")
        out[s.name] = s
    return out


def _prepare(series: TimeSeries, width: int, truncate: bool):
    """Truncate to a multiple of ``width``, z-normalize and PAA."""
    dropped = len(series) % width
    if dropped and truncate:
        series = series.truncate(width)
    normed, _ = z_normalize(series)
    return paa(normed, len(series) // width), dropped


# ---------------------------------------------------------------------------
# sigma study


@dataclass
class SigmaTable:
    """Post-PAA population sigma per (series, segment width)."""

    widths: tuple
    rows: dict = field(default_factory=dict)
    errors: dict = field(default_factory=dict)
    truncated: dict = field(default_factory=dict)

    def sigma(self, name: str, width: int) -> float | None:
        return self.rows[name][width]

    def order_at(self, width: int) -> list[str]:
        """Series names sorted by ascending sigma at ``width``."""
        ok = [(v[width], k) for k, v in self.rows.items() if v.get(width) is not None]
        return [k for _, k in sorted(ok)]

    def to_rows(self):
        return [
            {"series": name, **{str(w): cells.get(w) for w in self.widths}}
            for name, cells in self.rows.items()
        ]

    def to_dict(self):
        return {
            "widths": list(self.widths),
            "sigma": {n: {str(w): s for w, s in c.items()} for n, c in self.rows.items()},
            "errors": {f"{n}@{w}": e for (n, w), e in sorted(self.errors.items())},
            "truncated": {f"{n}@{w}": d for (n, w), d in sorted(self.truncated.items())},
        }


def run_sigma_study(series_set, widths=SIMULATED_WIDTHS, truncate: bool = True) -> SigmaTable:
    table = SigmaTable(tuple(widths))
    for name, series in _named(series_set).items():
        cells = {}
        for w in widths:
            try:
                vec, dropped = _prepare(series, w, truncate)
            except SaxError as exc:
                cells[w] = None
                table.errors[(name, w)] = f"{type(exc).__name__}: {exc}"
                continue
            if dropped:
                table.truncated[(name, w)] = dropped
                log.info("%s: dropped %d trailing samples for width %d", name, dropped, w)
            cells[w] = vec.post_stats.sigma
        table.rows[name] = cells
    return table


# ---------------------------------------------------------------------------
# symbol distribution study


@dataclass
class ChiSqGrid:
    """Goodness-of-fit reports keyed by (series, width, cardinality, variant)."""

    rows: dict = field(default_factory=dict)
    errors: dict = field(default_factory=dict)

    def get(self, series: str, w: int, k: int, variant: str) -> GofReport:
        return self.rows[(series, w, k, variant)]

    def to_rows(self):
        out = []
        for key in sorted(self.rows):
            series, w, k, variant = key
            out.append({"series": series, "w": w, "k": k, "variant": variant, **self.rows[key].to_dict()})
        return out

    def wide_rows(self, k: int, variants=("SAX", "SAXn")) -> list[dict]:
        """Absolute deviation table for one cardinality: a row per series,
        a column per (width, variant); non-rejections marked with ``*``."""
        names = list(dict.fromkeys(s for s, _, kk, _ in self.rows if kk == k))
        widths = sorted({w for _, w, kk, _ in self.rows if kk == k})
        out = []
        for name in names:
            row = {"series": name}
            for w in widths:
                for v in variants:
                    rep = self.rows.get((name, w, k, v))
                    col = f"{w}:{v}"
                    if rep is None:
                        row[col] = None
                    else:
                        row[col] = f"{rep.abs_dev_pct:.2f}" + ("" if rep.reject_at_5pct else "*")
            out.append(row)
        return out

    def to_dict(self):
        return {
            "cells": self.to_rows(),
            "errors": {"|".join(map(str, k)): e for k, e in sorted(self.errors.items())},
        }


def run_symbol_distribution_study(
    series,
    widths=REAL_WORLD_WIDTHS,
    k=CHISQ_CARDINALITIES,
    policies: Mapping[str, RenormPolicy] | None = None,
    truncate: bool = True,
) -> ChiSqGrid:
    """Chi-squared uniformity of SAX symbol counts for every (width, k, variant).

    All variants for one (series, width) start from the same PAA vector.
    """
    policies = dict(DEFAULT_VARIANTS if policies is None else policies)
    ks = (k,) if isinstance(k, int) else tuple(k)
    grid = ChiSqGrid()
    for name, s in _named(series).items():
        for w in widths:
            try:
                vec, _ = _prepare(s, w, truncate)
            except SaxError as exc:
                for kk in ks:
                    for v in policies:
                        grid.errors[(name, w, kk, v)] = f"{type(exc).__name__}: {exc}"
                continue
            for kk in ks:
                for variant, policy in policies.items():
                    try:
                        word, _ = sax_from_paa(vec, kk, policy)
                        grid.rows[(name, w, kk, variant)] = chi_squared_gof(word.counts(), kk)
                    except SaxError as exc:
                        grid.errors[(name, w, kk, variant)] = f"{type(exc).__name__}: {exc}"
    return grid


# ---------------------------------------------------------------------------
# ACF regression


@dataclass
class AcfRegression:
    fit: RegressionFit
    correlation: float
    points: list
    width: int

    def to_dict(self):
        return {
            "width": self.width,
            "correlation": self.correlation,
            "fit": self.fit.to_dict(),
            "points": self.points,
        }


def run_acf_regression_study(series_set, width: int = REGRESSION_WIDTH, truncate: bool = True) -> AcfRegression:
    """Regress post-PAA sigma at ``width`` on the ACF sum over lags 1..30."""
    points = []
    for name, s in _named(series_set).items():
        vec, _ = _prepare(s, width, truncate)
        points.append(
            {"series_name": name, "acf_sum": acf_sum(s), "post_paa_sigma": vec.post_stats.sigma}
        )
    x = [p["acf_sum"] for p in points]
    y = [p["post_paa_sigma"] for p in points]
    fit = ols_fit(x, y)
    return AcfRegression(fit, pearson_corr(x, y), points, width)


def run_normality_study(series_set) -> dict:
    """Jarque-Bera report per series; failures recorded as error strings."""
    out = {}
    for name, s in _named(series_set).items():
        try:
            out[name] = jarque_bera(s)
        except SaxError as exc:
            out[name] = f"{type(exc).__name__}: {exc}"
    return out


# ---------------------------------------------------------------------------
# synthetic inputs


def synthetic_panel(root_seed: int, size: int = 12, length: int = DEFAULT_LENGTH) -> list[TimeSeries]:
    """Sinusoid/noise mixtures from pure noise to a pure sinusoid.

    Member ``i`` carries a fraction ``i / (size - 1)`` of its variance in the
    sinusoid (amplitude 2, frequency 0.002) and the rest in white noise.
    """
    if size < 3:
        raise ValueError("panel needs at least 3 members")
    sp = SinusoidParams(length=length)
    signal_var = sp.amplitude**2 / 2.0
    panel = []
    for i in range(size):
        frac = i / (size - 1)
        name = f"mix_{frac:.3f}"
        seed = derive_seed(root_seed, name)
        if frac == 0.0:
            panel.append(white_noise(NoiseParams(1.0, seed, length), name=name))
            continue
        noise_sigma = math.sqrt(signal_var * (1.0 - frac) / frac)
        panel.append(sinusoid_with_noise(sp, NoiseParams(noise_sigma, seed, length), name=name))
    return panel


def gaussian_series(root_seed: int, length: int = DEFAULT_LENGTH, name: str = "gaussian") -> TimeSeries:
    return white_noise(NoiseParams(1.0, derive_seed(root_seed, name), length), name=name)


# ---------------------------------------------------------------------------
# config-driven runs

PRESETS = {
    "synthetic": {
        "source": "trio",
        "studies": ["sigma", "normality", "acf_regression"],
        "widths": list(SIMULATED_WIDTHS),
    },
    "panel": {
        "source": "panel",
        "studies": ["sigma", "acf_regression"],
        "widths": list(SIMULATED_WIDTHS),
    },
    "chisq": {
        "source": "gaussian",
        "studies": ["sigma", "chisq"],
        "widths": [5, 10, 20],
        "cardinalities": list(CHISQ_CARDINALITIES),
    },
    "realworld": {
        "source": "datasets",
        "studies": ["sigma", "normality", "chisq", "acf_regression"],
        "widths": list(REAL_WORLD_WIDTHS),
        "cardinalities": list(CHISQ_CARDINALITIES),
    },
}

_KNOWN_KEYS = {
    "name", "preset", "source", "studies", "widths", "cardinalities", "variants",
    "root_seed", "length", "noise_sigma", "panel_size", "regression_width",
    "datasets", "datasets_manifest", "data_dir", "truncate",
}
_STUDIES = {"sigma", "chisq", "acf_regression", "normality"}


class ConfigError(ValueError):
    pass


@dataclass
class StudyConfig:
    name: str
    source: str
    studies: list
    widths: list
    cardinalities: list = field(default_factory=lambda: list(CHISQ_CARDINALITIES))
    variants: dict = field(default_factory=lambda: dict(DEFAULT_VARIANTS))
    root_seed: int = DEFAULT_SEED
    length: int = DEFAULT_LENGTH
    noise_sigma: float = DEFAULT_NOISE_SIGMA
    panel_size: int = 12
    regression_width: int = REGRESSION_WIDTH
    datasets: list = field(default_factory=list)
    data_dir: str | None = None
    truncate: bool = True

    @classmethod
    def from_dict(cls, raw: Mapping, base_dir=None, data_dir=None) -> "StudyConfig":
        unknown = set(raw) - _KNOWN_KEYS
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        merged = {}
        if "preset" in raw:
            if raw["preset"] not in PRESETS:
                raise ConfigError(f"unknown preset {raw['preset']!r}; choose from {sorted(PRESETS)}")
            merged.update(PRESETS[raw["preset"]])
        merged.update({k: v for k, v in raw.items() if k != "preset"})
        merged.setdefault("name", raw.get("preset", "study"))
        if "source" not in merged:
            raise ConfigError("config needs a 'preset' or a 'source'")
        if merged["source"] not in {"trio", "panel", "gaussian", "datasets"}:
            raise ConfigError(f"unknown source {merged['source']!r}")
        bad = set(merged.get("studies", [])) - _STUDIES
        if bad:
            raise ConfigError(f"unknown studies: {sorted(bad)}")
        if "variants" in merged:
            try:
                merged["variants"] = {k: RenormPolicy(**v) for k, v in merged["variants"].items()}
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"bad variants: {exc}") from None
        base = Path(base_dir) if base_dir is not None else Path.cwd()
        root = data_dir or os.environ.get("SAXN_DATA_DIR") or merged.pop("data_dir", None)
        merged.pop("data_dir", None)
        root_path = base / root if root is not None else base
        specs = []
        manifest = merged.pop("datasets_manifest", None)
        if manifest is not None:
            mpath = base / manifest
            entries = json.loads(mpath.read_text())["datasets"]
            if root is None:
                root_path = mpath.parent
            specs.extend(entries)
        specs.extend(merged.pop("datasets", []))
        merged["datasets"] = [dict(DatasetSpec.from_dict(d, root_path).__dict__, **_extra(d)) for d in specs]
        merged["data_dir"] = str(root_path)
        for key in ("widths", "cardinalities"):
            if key in merged and not all(isinstance(v, int) and v >= 1 for v in merged[key]):
                raise ConfigError(f"{key} must be positive integers")
        return cls(**merged)

    @classmethod
    def load(cls, path, data_dir=None) -> "StudyConfig":
        path = Path(path)
        try:
            raw = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON: {exc}") from None
        return cls.from_dict(raw, base_dir=path.parent, data_dir=data_dir)

    def to_dict(self):
        d = {
            "name": self.name,
            "source": self.source,
            "studies": list(self.studies),
            "widths": list(self.widths),
            "cardinalities": list(self.cardinalities),
            "variants": {k: {"mode": p.mode, "tau": p.tau} for k, p in self.variants.items()},
            "root_seed": self.root_seed,
            "regression_width": self.regression_width,
            "truncate": self.truncate,
        }
        if self.source == "datasets":
            d["datasets"] = [
                {k: v for k, v in ds.items() if k != "path"} | {"file": Path(ds["path"]).name}
                for ds in self.datasets
            ]
        else:
            d["length"] = self.length
            if self.source == "trio":
                d["noise_sigma"] = self.noise_sigma
            if self.source == "panel":
                d["panel_size"] = self.panel_size
        return d


def _extra(d: Mapping) -> dict:
    return {k: d[k] for k in ("sha256",) if d.get(k)}


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def load_series(config: StudyConfig) -> tuple[list[TimeSeries], list[dict]]:
    """Build or read the config's series. Returns (series, skipped)."""
    if config.source == "trio":
        return simulated_trio(config.root_seed, config.length, config.noise_sigma), []
    if config.source == "panel":
        return synthetic_panel(config.root_seed, config.panel_size, config.length), []
    if config.source == "gaussian":
        return [gaussian_series(config.root_seed, config.length)], []
    series, skipped = [], []
    for ds in config.datasets:
        spec = DatasetSpec(ds["path"], ds.get("column", 0), ds.get("name"), ds.get("skip_rows", 0))
        try:
            if ds.get("sha256") and Path(spec.path).is_file() and _sha256(Path(spec.path)) != ds["sha256"]:
                raise SaxError(f"checksum mismatch for {spec.path}")
            series.append(read_series(spec))
        except DatasetNotFound:
            skipped.append({"name": spec.label, "file": Path(spec.path).name, "reason": "missing"})
        except SaxError as exc:
            skipped.append({"name": spec.label, "file": Path(spec.path).name, "reason": str(exc)})
    return series, skipped


def run_study(config: StudyConfig, out_dir) -> dict:
    """Execute every study in ``config`` and write the run directory.

    Returns the manifest that was written to ``out_dir/manifest.json``.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    series, skipped = load_series(config)
    written = []
    errors = []

    def emit(name, report, fmt=None):
        written.append(write_report(report, out / name, fmt))

    emit("series.json", [{"name": s.name, "length": len(s), "source": _portable(s.source)} for s in series])

    if series:
        if "sigma" in config.studies:
            table = run_sigma_study(series, config.widths, config.truncate)
            emit("sigma_table.csv", table)
            emit("sigma_table.json", table)
            errors.extend(f"sigma {k}: {v}" for k, v in table.errors.items())
        if "normality" in config.studies:
            emit("normality.json", run_normality_study(series))
        if "chisq" in config.studies:
            grid = run_symbol_distribution_study(
                series, config.widths, config.cardinalities, config.variants, config.truncate
            )
            emit("chisq_grid.csv", grid)
            emit("chisq_grid.json", grid)
            for k in config.cardinalities:
                emit(f"chisq_abs_dev_k{k}.csv", grid.wide_rows(k, tuple(config.variants)), "csv")
            errors.extend(f"chisq {k}: {v}" for k, v in grid.errors.items())
        if "acf_regression" in config.studies:
            try:
                reg = run_acf_regression_study(series, config.regression_width, config.truncate)
            except SaxError as exc:
                errors.append(f"acf_regression: {type(exc).__name__}: {exc}")
            else:
                emit("acf_regression.json", reg)
                written.append(emit_plot_data(reg.points, out / "acf_sigma_plot.csv"))

    manifest = {
        "package_version": __version__,
        "config": config.to_dict(),
        "files": {p.name: _sha256(p) for p in sorted(written)},
        "skipped": skipped,
        "errors": sorted(errors),
    }
    (out / "manifest.json").write_text(to_json(manifest))
    return manifest


def _portable(source: str) -> str:
    # file paths differ between machines; keep only the file name and column
    if source.startswith("[") or "#" not in source:
        return source
    path, _, col = source.rpartition("#")
    return f"{Path(path).name}#{col}"


__all__ = [
    "AcfRegression",
    "ChiSqGrid",
    "ConfigError",
    "NormalityReport",
    "PRESETS",
    "SigmaTable",
    "StudyConfig",
    "derive_seed",
    "gaussian_series",
    "load_series",
    "run_acf_regression_study",
    "run_normality_study",
    "run_sigma_study",
    "run_study",
    "run_symbol_distribution_study",
    "synthetic_panel",
]
