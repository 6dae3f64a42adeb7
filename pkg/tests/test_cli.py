"""CLI: subcommands, config resolution, CSV/manifest contracts, exit codes."""

import json

import numpy as np
import pytest

from kgkv import cli


def _read_csv(path):
    lines = path.read_text().splitlines()
    header = lines[0].split(",")
    rows = [ln.split(",") for ln in lines[1:]]
    return header, rows


def test_profile_resolvent_csv(tmp_path):
    out = tmp_path / "prof.csv"
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"s_min": -3.0, "s_max": 3.0, "s_samples": 61, "exclusion": 0.05}))
    rc = cli.main(["profile-resolvent", "--config", str(cfg), "--out", str(out)])
    assert rc == 0
    header, rows = _read_csv(out)
    assert header == ["s", "norm", "bound_ratio"]
    s = np.array([float(r[0]) for r in rows])
    norm = np.array([float(r[1]) for r in rows])
    ratio = np.array([float(r[2]) for r in rows])
    # spectral neighbourhoods are excluded, rows are skipped with warnings
    assert np.all(np.minimum(np.abs(s - 1.0), np.abs(s + 1.0)) >= 0.05)
    assert np.all(ratio <= 10.0)
    # conjugation symmetry of the norm column
    for si, ni in zip(s, norm):
        j = np.argmin(np.abs(s + si))
        assert ni == pytest.approx(norm[j], rel=1e-9)
    manifest = json.loads((tmp_path / "prof.csv.manifest.json").read_text())
    assert manifest["command"] == "profile-resolvent"
    assert manifest["warnings"]


def test_profile_resolvent_empty_range_errors(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"s_min": 2.0, "s_max": 1.0}))
    rc = cli.main(["profile-resolvent", "--config", str(cfg),
                   "--out", str(tmp_path / "x.csv")])
    assert rc == 2


def test_profile_resolvent_full_precision_format(tmp_path):
    out = tmp_path / "p.csv"
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"s_min": 0.2, "s_max": 0.4, "s_samples": 3}))
    assert cli.main(["profile-resolvent", "--config", str(cfg), "--out", str(out)]) == 0
    _, rows = _read_csv(out)
    # 17 significant digits round-trip float64 exactly
    val = rows[0][1]
    assert len(val.split("e")[0].replace(".", "").replace("-", "")) == 17
    assert float(val) == float(f"{float(val):.16e}")


def test_manifest_rerun_reproduces_bitwise(tmp_path):
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"s_min": -2.0, "s_max": 2.0, "s_samples": 11}))
    assert cli.main(["profile-resolvent", "--config", str(cfg), "--out", str(out1),
                     "--serial"]) == 0
    manifest = out1.with_suffix(out1.suffix + ".manifest.json")
    assert cli.main(["profile-resolvent", "--config", str(manifest),
                     "--out", str(out2), "--serial"]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_decay_summary(tmp_path):
    out = tmp_path / "decay.csv"
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "data_class": "generic", "grid_n": 4096, "grid_L": 400.0,
        "t_min": 1.0, "t_max": 3e3, "t_samples": 60,
        "fit_t_min": 1e2, "fit_t_max": 3e3,
    }))
    assert cli.main(["decay", "--config", str(cfg), "--out", str(out), "--seed", "1"]) == 0
    header, rows = _read_csv(out)
    assert header == ["t", "E", "D"]
    E = np.array([float(r[1]) for r in rows])
    assert np.all(np.diff(E) <= 1e-10 * E[0])
    summary = json.loads((tmp_path / "decay.csv.summary.json").read_text())
    assert summary["status"] == "ok"
    lo, hi = summary["expected_slope_band"]
    assert lo <= summary["slope"] <= hi


def test_decay_halfline(tmp_path):
    out = tmp_path / "decay_h.csv"
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "data_class": "prepared", "grid_n": 4096, "grid_L": 400.0,
        "t_min": 1.0, "t_max": 3e3, "t_samples": 50,
        "fit_t_min": 1e2, "fit_t_max": 3e3,
    }))
    assert cli.main(["decay", "--config", str(cfg), "--boundary", "halfline",
                     "--out", str(out)]) == 0
    summary = json.loads((tmp_path / "decay_h.csv.summary.json").read_text())
    assert summary["status"] == "ok"
    lo, hi = summary["expected_slope_band"]
    assert lo <= summary["slope"] <= hi


def test_decay_rejects_bad_class(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"data_class": "bogus"}))
    assert cli.main(["decay", "--config", str(cfg), "--out", str(tmp_path / "d.csv")]) == 2


def test_check_greens_rows(tmp_path):
    out = tmp_path / "greens.csv"
    assert cli.main(["check-greens", "--out", str(out), "--grid-n", "16384",
                     "--grid-L", "160"]) == 0
    header, rows = _read_csv(out)
    assert header[:3] == ["s", "residual_symbol", "residual_kernel"]
    for r in rows:
        assert r[-1] == "ok"
        assert float(r[1]) <= 1e-8 and float(r[2]) <= 1e-8 and float(r[3]) <= 1e-9


def test_weyl_rows(tmp_path):
    out = tmp_path / "weyl.csv"
    assert cli.main(["weyl", "--out", str(out)]) == 0
    header, rows = _read_csv(out)
    assert header == ["k", "residual_ratio", "opnorm_sq", "bound", "within_bound"]
    assert [int(r[0]) for r in rows] == [1, 2, 4, 8, 16]
    assert all(r[4] == "true" for r in rows)
    # measured ratio stays below the stated bound column
    for r in rows:
        assert float(r[1]) <= float(r[3])


def test_spectrum_rows(tmp_path):
    out = tmp_path / "spec.csv"
    assert cli.main(["spectrum", "--out", str(out)]) == 0
    header, rows = _read_csv(out)
    assert header[0] == "xi" and header[-1] == "regime"
    first = rows[0]
    assert float(first[0]) == 0.0
    assert float(first[1]) == pytest.approx(0.0, abs=1e-14)   # Re lam+ at xi=0
    assert float(first[2]) == pytest.approx(1.0, rel=1e-12)   # Im lam+ = sqrt(m)
    assert float(first[4]) == pytest.approx(-1.0, rel=1e-12)
    # strictly damped away from xi = 0
    re_plus = np.array([float(r[1]) for r in rows[1:]])
    assert np.all(re_plus < 0.0)


def test_check_range_prepared_vs_generic(tmp_path):
    out = tmp_path / "range.csv"
    assert cli.main(["check-range", "--out", str(out)]) == 0
    _, rows = _read_csv(out)
    assert [r[0] for r in rows] == ["a", "b", "c", "d"]
    assert all(r[2] == "true" for r in rows)
    out2 = tmp_path / "range2.csv"
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"data_class": "generic"}))
    assert cli.main(["check-range", "--config", str(cfg), "--out", str(out2)]) == 0
    _, rows2 = _read_csv(out2)
    assert any(r[2] == "false" for r in rows2)


def test_validation_failures(tmp_path):
    out = str(tmp_path / "x.csv")
    assert cli.main(["spectrum", "--m", "-1", "--out", out]) == 2
    assert cli.main(["decay", "--grid-n", "1000", "--out", out]) == 2
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"exclusion": 1e-12}))
    assert cli.main(["profile-resolvent", "--config", str(cfg), "--out", out]) == 2
