import json
import math

import numpy as np
import pytest

from saxn.errors import DegeneratePredictor
from saxn.experiments import (
    ConfigError,
    StudyConfig,
    derive_seed,
    gaussian_series,
    run_acf_regression_study,
    run_normality_study,
    run_sigma_study,
    run_study,
    run_symbol_distribution_study,
    synthetic_panel,
)
from saxn.sax import NEVER, RenormPolicy, sax_transform
from saxn.series import TimeSeries
from saxn.synth import NoiseParams, SinusoidParams, simulated_trio, sinusoid, white_noise

from reference_values import SIMULATED_SIGMA


def test_derive_seed_stable():
    assert derive_seed(1, "a") == derive_seed(1, "a")
    assert derive_seed(1, "a") != derive_seed(1, "b")
    assert derive_seed(1, "a") != derive_seed(2, "a")


def test_sigma_study_synthetic_trio():
    table = run_sigma_study(simulated_trio(2012))
    for name in ("random", "sin wave with noise"):
        for w, ref in SIMULATED_SIGMA[name].items():
            assert table.sigma(name, w) == pytest.approx(ref, abs=0.03)
    assert all(table.sigma("sin wave", w) >= 0.995 for w in table.widths)
    for cells in table.rows.values():
        assert all(0 < s <= 1 + 1e-6 for s in cells.values())
    assert table.order_at(20) == ["random", "sin wave with noise", "sin wave"]


def test_sigma_study_truncates_and_isolates_errors():
    good = white_noise(NoiseParams(1.0, 1, 1024), name="noise")
    flat = TimeSeries(np.ones(100), name="flat")
    table = run_sigma_study([good, flat], widths=(5, 10))
    assert table.truncated[("noise", 5)] == 4
    assert table.sigma("flat", 5) is None
    assert "DegenerateSeries" in table.errors[("flat", 5)]
    assert table.to_rows()[1] == {"series": "flat", "5": None, "10": None}


def test_sigma_matches_transform_report():
    s = white_noise(NoiseParams(1.0, 3, 2000), name="n")
    table = run_sigma_study([s], widths=(2, 5, 10))
    for w in (2, 5, 10):
        _, rep = sax_transform(s, 2000 // w, 5, NEVER)
        assert table.sigma("n", w) == rep.pre_sigma


def test_symbol_study_renorm_beats_canonical():
    grid = run_symbol_distribution_study(gaussian_series(2012), widths=(5, 10, 20), k=5)
    for w in (5, 10, 20):
        sax = grid.get("gaussian", w, 5, "SAX")
        saxn = grid.get("gaussian", w, 5, "SAXn")
        assert saxn.abs_dev_pct < sax.abs_dev_pct
    wide = grid.wide_rows(5)
    assert list(wide[0]) == ["series", "5:SAX", "5:SAXn", "10:SAX", "10:SAXn", "20:SAX", "20:SAXn"]


def test_symbol_study_records_floor_errors():
    short = white_noise(NoiseParams(1.0, 3, 40), name="short")
    grid = run_symbol_distribution_study(short, widths=(2,), k=10)
    assert "TooFewSamples" in grid.errors[("short", 2, 10, "SAX")]


def test_symbol_study_threshold_variant():
    fx_like = sinusoid(SinusoidParams())
    grid = run_symbol_distribution_study(
        fx_like, widths=(2,), k=5,
        policies={"SAX": NEVER, "SAXt": RenormPolicy("threshold", 0.95)},
    )
    # sigma stays near 1, so the threshold rule leaves the word unchanged
    assert grid.get("sin wave", 2, 5, "SAX") == grid.get("sin wave", 2, 5, "SAXt")


def test_acf_regression_panel():
    res = run_acf_regression_study(synthetic_panel(2012))
    assert len(res.points) == 12
    assert res.correlation > 0.9 and res.fit.adj_r_squared > 0.8
    assert res.fit.slope > 0


def test_acf_regression_two_series_degenerate():
    pair = synthetic_panel(5, size=3)[:2]
    with pytest.raises(DegeneratePredictor):
        run_acf_regression_study(pair)


def test_normality_study():
    out = run_normality_study([gaussian_series(2012), TimeSeries(np.ones(20), name="flat")])
    assert out["gaussian"].p_value > 0.05
    assert out["flat"].startswith("DegenerateSeries")


def test_config_validation(tmp_path):
    with pytest.raises(ConfigError):
        StudyConfig.from_dict({"preset": "nope"})
    with pytest.raises(ConfigError):
        StudyConfig.from_dict({"preset": "synthetic", "colour": 1})
    with pytest.raises(ConfigError):
        StudyConfig.from_dict({"source": "trio", "studies": ["sigma", "bogus"], "widths": [1]})
    with pytest.raises(ConfigError):
        StudyConfig.from_dict({"preset": "synthetic", "widths": [0, 2]})
    cfg = StudyConfig.from_dict({"preset": "chisq", "variants": {"A": {"mode": "threshold", "tau": 0.8}}})
    assert cfg.variants["A"] == RenormPolicy("threshold", 0.8)


def test_run_study_deterministic(tmp_path):
    cfg = StudyConfig.from_dict({"preset": "chisq", "length": 4000})
    run_study(cfg, tmp_path / "a")
    run_study(cfg, tmp_path / "b")
    files = sorted(p.name for p in (tmp_path / "a").iterdir())
    assert "manifest.json" in files and "chisq_abs_dev_k10.csv" in files
    for name in files:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_run_study_missing_datasets(tmp_path):
    (tmp_path / "present.dat").write_text("\n".join(str(math.sin(i / 7)) for i in range(400)))
    cfg = StudyConfig.from_dict(
        {"preset": "realworld", "widths": [2, 5],
         "datasets": [{"name": "gone", "path": "gone.dat"}, {"name": "here", "path": "present.dat"}]},
        base_dir=tmp_path,
    )
    manifest = run_study(cfg, tmp_path / "run")
    assert manifest["skipped"] == [{"file": "gone.dat", "name": "gone", "reason": "missing"}]
    names = [s["name"] for s in json.loads((tmp_path / "run" / "series.json").read_text())]
    assert names == ["here"]
    # one series cannot support the regression; recorded, not raised
    assert any(e.startswith("acf_regression") for e in manifest["errors"])


def test_run_study_checksum_mismatch(tmp_path):
    (tmp_path / "d.dat").write_text("1\n2\n3\n4\n")
    cfg = StudyConfig.from_dict(
        {"preset": "realworld", "datasets": [{"name": "d", "path": "d.dat", "sha256": "00"}]},
        base_dir=tmp_path,
    )
    manifest = run_study(cfg, tmp_path / "run")
    assert "checksum" in manifest["skipped"][0]["reason"]


def test_realworld_manifest_resolution(tmp_path):
    from pathlib import Path

    root = Path(__file__).resolve().parents[1]
    entries = json.loads((root / "datasets" / "manifest.json").read_text())["datasets"]
    rng = np.random.default_rng(0)
    files = {}
    for e in entries:
        files.setdefault(e["path"], []).append(e)
    for fname, cols in files.items():
        n = cols[0]["length"]
        header = [c["column"] for c in cols]
        data = rng.standard_normal((n, len(cols))).cumsum(axis=0)
        names = [h if isinstance(h, str) else f"col{h}" for h in header]
        lines = [] if all(isinstance(h, int) for h in header) else [" ".join(names)]
        lines += [" ".join(f"{v:.6f}" for v in row) for row in data]
        (tmp_path / fname).write_text("\n".join(lines) + "\n")
    cfg = StudyConfig.from_dict(
        {"preset": "realworld", "datasets_manifest": str(root / "datasets" / "manifest.json")},
        data_dir=str(tmp_path),
    )
    manifest = run_study(cfg, tmp_path / "run")
    assert manifest["skipped"] == []
    series = json.loads((tmp_path / "run" / "series.json").read_text())
    assert {s["name"]: s["length"] for s in series} == {e["name"]: e["length"] for e in entries}
    table = json.loads((tmp_path / "run" / "sigma_table.json").read_text())
    assert table["truncated"]["sunspot@2"] == 1 and "flutter_1@5" in table["truncated"]
    assert (tmp_path / "run" / "chisq_abs_dev_k10.csv").exists()
