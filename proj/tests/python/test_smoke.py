import json
import math

import pytest

import mtsched


def test_default_config_roundtrip():
    cfg = json.loads(mtsched.default_config())
    assert cfg["num_users"] == 60
    assert cfg["num_sbs"] == 4
    assert mtsched.config(num_users=10)["num_users"] == 10


def test_bad_config_raises():
    with pytest.raises(ValueError, match="sts_length_s"):
        mtsched.config(sts_length_s=0.3)


def test_run_small():
    r = mtsched.run(num_users=12, num_lts=2, seed=3)
    assert len(r["lts"]) == 2
    assert len(r["sts"]) == 20
    for rec in r["lts"]:
        assert rec["theorem1_holds"]
        assert rec["utility"] == rec["revenue"] - rec["eta"] * rec["cost"]
    assert r["violation_rate"] == 0.0


def test_run_is_deterministic():
    a = mtsched.run({"num_users": 8, "num_lts": 2})
    b = mtsched.run(json.dumps({"num_users": 8, "num_lts": 2}))
    assert a == b


def test_emit(tmp_path):
    mtsched.emit("", {"num_lts": 1, "num_users": 5}, "csv", str(tmp_path))
    assert (tmp_path / "lts.csv").read_text().count("\n") == 2
    assert "config_hash=" in (tmp_path / "manifest.txt").read_text()


def test_kernels():
    assert mtsched.channel_gain(100.0, 3.5) == pytest.approx(1.2281428131607296e-11, rel=1e-12)
    assert mtsched.los_probability(36.0) == pytest.approx(0.68394, abs=1e-5)
    assert mtsched.complexity(192.0, 3.0) == pytest.approx(576.0)
    f, mu, ok = mtsched.solve_compute([1.0, 1.0], 1.0, [0.0, 0.0], 1.0)
    assert ok and mu > 0
    assert f == pytest.approx([0.5, 0.5], abs=1e-9)
    assert math.isfinite(mu)


def test_selftest_detects_fault():
    assert all(s["passed"] for s in mtsched.selftest())
    assert not all(s["passed"] for s in mtsched.selftest("bandwidth"))
