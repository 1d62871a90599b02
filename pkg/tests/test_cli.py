import json
import os
import subprocess
import sys

import pytest

from hae.cache import SeriesCache, cache_roundtrip
from hae.cli import main
from hae.config import ConfigError, config_hash, load_geometry, read_config
from hae.series import SeriesError, series


def run_cli(tmp_path, *argv, name="out.json"):
    out = tmp_path / name
    code = main([*argv, "--out", str(out)])
    return code, json.loads(out.read_text())


def strip_timings(report):
    report = json.loads(json.dumps(report))
    report.get("manifest", {}).pop("timings", None)
    return json.dumps(report, indent=2, sort_keys=True)


def test_bundled_configs_load():
    q, _ = load_geometry("quintic")
    p, _ = load_geometry("local-p2")
    assert q.operator.order == 4 and p.operator.order == 3
    assert q.compact and not p.compact
    assert p.q_sign == -1


def test_zero_kappa_rejected(tmp_path):
    raw = read_config("quintic")
    raw["kappa"] = "0"
    path = tmp_path / "bad.cfg"
    path.write_text(json.dumps(raw))
    with pytest.raises(ConfigError, match="yukawa normalization impossible") as err:
        load_geometry(str(path))
    assert err.value.key == "kappa"
    code, report = run_cli(tmp_path, "compute", "--geometry", str(path))
    assert code == 2 and report["status"] == "error" and report["key"] == "kappa"


def test_missing_c2h_rejected(tmp_path):
    raw = read_config("quintic")
    del raw["c2H"]
    path = tmp_path / "bad.cfg"
    path.write_text(json.dumps(raw))
    with pytest.raises(ConfigError) as err:
        load_geometry(str(path))
    assert err.value.key == "c2H"


def test_config_hash_ignores_key_order():
    raw = read_config("quintic")
    assert config_hash(raw) == config_hash(dict(reversed(list(raw.items()))))


def test_compute_genus0(tmp_path):
    code, rep = run_cli(tmp_path, "compute", "--geometry", "quintic", "--order", "6")
    assert code == 0 and rep["status"] == "pass"
    gv = rep["invariants"][0]["gv"]
    assert [gv[str(d)] for d in (1, 2, 3)] == ["2875", "609250", "317206375"]
    assert rep["manifest"]["truncation_order"] == 6
    assert rep["yukawa"]["K_ttt"][:2] == ["5", "2875"]


def test_compute_local_genus1(tmp_path):
    code, rep = run_cli(tmp_path, "compute", "--geometry", "local-p2", "--order", "8",
                        "--genus", "0,1")
    assert code == 0
    (amp,) = rep["amplitudes"]
    assert amp["b"] == "-7/6" and amp["phi0_exponent"] == "15/4"
    assert rep["invariants"][1]["gv"]["3"] == "-10"


def test_compute_genus2_report(tmp_path):
    code, rep = run_cli(tmp_path, "compute", "--geometry", "quintic", "--order", "8",
                        "--genus", "2")
    assert code == 0
    fit = rep["manifest"]["fitted_ambiguity"]
    assert fit["coefficients"] == ["337/750", "523/36000", "1/1200"]
    assert fit["surplus_residuals"] == {"n2(3)": "0"}
    assert rep["invariants"][-1]["gv"]["4"] == "534750"
    assert rep["checks"]["vanishing"]["2"]["pass"]


def test_bad_genus_is_an_error(tmp_path):
    code, rep = run_cli(tmp_path, "compute", "--geometry", "quintic", "--genus", "5")
    assert code == 2 and rep["status"] == "error"


def test_other_subcommands(tmp_path):
    code, rep = run_cli(tmp_path, "periods", "--geometry", "quintic", "--order", "4")
    assert code == 0
    code, rep = run_cli(tmp_path, "mirror-map", "--geometry", "quintic", "--order", "4")
    assert code == 0
    code, rep = run_cli(tmp_path, "yukawa", "--geometry", "local-p2", "--order", "4")
    assert code == 0 and rep["yukawa"]["K_ttt"][0] == "-1/3"


def test_quasimod(tmp_path):
    code, rep = run_cli(tmp_path, "quasimod", "--order", "10")
    assert code == 0
    assert rep["eisenstein"]["E2"][:3] == ["1", "-24", "-72"]
    assert rep["elliptic_genus_one"]["log_q_coefficient"] == "-1/24"


def test_warm_cache_identical(tmp_path):
    cache = tmp_path / "cache"
    args = ("compute", "--geometry", "quintic", "--order", "8", "--genus", "0,1,2",
            "--cache-dir", str(cache))
    _, cold = run_cli(tmp_path, *args, name="a.json")
    assert any(cache.rglob("*.rec"))
    _, warm = run_cli(tmp_path, *args, name="b.json")
    assert strip_timings(cold) == strip_timings(warm)


def test_corrupt_cache_recomputes(tmp_path, caplog):
    cache = tmp_path / "cache"
    args = ("compute", "--geometry", "local-p2", "--order", "6", "--genus", "0,1",
            "--cache-dir", str(cache))
    _, first = run_cli(tmp_path, *args, name="a.json")
    rec = next(cache.rglob("K_ttt.N*.rec"))
    rec.write_text(rec.read_text().replace("part 0 -1/3", "part 0 -2/3"))
    _, second = run_cli(tmp_path, *args, name="b.json")
    assert strip_timings(first) == strip_timings(second)
    assert "corrupt" in caplog.text


def test_threads_do_not_change_output(tmp_path):
    base = ("compute", "--geometry", "quintic", "--order", "8", "--genus", "0,1,2")
    _, one = run_cli(tmp_path, *base, "--threads", "1", name="a.json")
    _, four = run_cli(tmp_path, *base, "--threads", "4", name="b.json")
    assert strip_timings(one) == strip_timings(four)


def test_cache_roundtrip(tmp_path):
    s = series([1, 2, 3], prec=5)
    assert cache_roundtrip(s, tmp_path / "x" / "s.rec") == s


def test_cache_key_includes_truncation(tmp_path):
    c = SeriesCache(tmp_path)
    c.put("abc", "K_ttt", 10, series([1, 2], prec=10))
    assert c.get("abc", "K_ttt", 12) is None
    assert c.get("abc", "K_ttt", 10) == series([1, 2], prec=10)


def test_flipped_byte_detected(tmp_path):
    path = tmp_path / "s.rec"
    cache_roundtrip(series([1, 2, 3], prec=5), path)
    data = bytearray(path.read_bytes())
    i = data.index(b"part 0 ") + 7
    data[i] ^= 0x01
    path.write_bytes(bytes(data))
    from hae.series import from_record
    with pytest.raises(SeriesError):
        from_record(path.read_text())


def test_module_entry_point(tmp_path):
    out = tmp_path / "r.json"
    env = dict(os.environ)
    proc = subprocess.run([sys.executable, "-m", "hae", "yukawa", "--geometry", "quintic",
                           "--order", "3", "--out", str(out)], env=env)
    assert proc.returncode == 0
    assert json.loads(out.read_text())["status"] == "pass"
