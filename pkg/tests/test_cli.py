import json
import subprocess
import sys

import pytest

from modp.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out


def test_degrees_text(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("MODP_CACHE_DIR", str(tmp_path))
    code, out = run_cli(capsys, "degrees", "--family", "B", "--rank", "3")
    assert code == 0
    assert out.strip() == "2 4 6"


def test_primes_json_schema(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("MODP_CACHE_DIR", str(tmp_path))
    code, out = run_cli(capsys, "primes", "--family", "E8", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == "modp/1"
    assert doc["result"]["bad_primes"] == [2, 3, 5]
    assert doc["result"]["degrees"] == [2, 8, 12, 14, 18, 20, 24, 30]


def test_invariants_pass_and_exit_code(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("MODP_CACHE_DIR", str(tmp_path))
    code, out = run_cli(capsys, "invariants", "--group", "spin", "--n", "7",
                        "--p", "2", "--max-degree", "6")
    assert code == 0
    assert "PASS" in out


def test_usage_errors_exit_2(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("MODP_CACHE_DIR", str(tmp_path))
    with pytest.raises(SystemExit) as err:
        main(["no-such-command"])
    assert err.value.code == 2
    capsys.readouterr()
    with pytest.raises(SystemExit) as err:
        main(["invariants", "--group", "spin", "--max-degree", "4"])
    assert err.value.code == 2
    capsys.readouterr()


def test_json_determinism(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("MODP_CACHE_DIR", str(tmp_path))
    outputs = set()
    for _ in range(2):
        code, out = run_cli(capsys, "quillen", "--n", "11", "--dims", "0..12", "--json")
        assert code == 0
        outputs.add(out)
    assert len(outputs) == 1


def test_cache_roundtrip_and_transparency(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("MODP_CACHE_DIR", str(tmp_path))
    code, cold = run_cli(capsys, "spin-compare", "--json")
    assert code == 0
    entries = list(tmp_path.glob("*.json"))
    assert len(entries) == 1
    code, warm = run_cli(capsys, "spin-compare", "--json")
    assert warm == cold
    code, uncached = run_cli(capsys, "spin-compare", "--json", "--no-cache")
    assert uncached == cold
    # corrupted entry: recompute and still answer identically
    entries[0].write_text("{ not json")
    code, healed = run_cli(capsys, "spin-compare", "--json")
    assert healed == cold
    # stale version: must be a miss
    entry = {"schema": "modp/1", "version": "0.0.0",
             "payload": {"D_top": -1, "D_low": -1, "D_dR_lower": -1,
                         "D_explicit_degree32": -1, "verdict": "stale"}}
    entries = list(tmp_path.glob("*.json"))
    entries[0].write_text(json.dumps(entry))
    code, fresh = run_cli(capsys, "spin-compare", "--json")
    assert fresh == cold


def test_whitney_roundtrip(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("MODP_CACHE_DIR", str(tmp_path))
    e = json.dumps({"ring": {"vars": ["a1", "a2"], "weights": [1, 2]},
                    "components": ["1", "a1", "a2"]})
    unit = json.dumps({"components": ["1", "0", "0"]})
    code, out = run_cli(capsys, "whitney", "--e", e, "--f", unit, "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["result"]["components"] == ["1", "a1", "a2"]


def test_restrict_and_ring(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("MODP_CACHE_DIR", str(tmp_path))
    code, out = run_cli(capsys, "restrict", "--n", "7", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["result"]["images"]["u2"] == "t1 + t2 + t3"
    code, out = run_cli(capsys, "ring", "--name", "bso", "--n", "11",
                        "--series-to", "6", "--json")
    gens = json.loads(out)["result"]["generators"]
    assert len(gens) == 10
    code, out = run_cli(capsys, "restrict", "--n", "11", "--target", "K", "--json")
    assert json.loads(out)["result"]["images"]["u2"] == "0"


def test_jacobian_csv_and_flag(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("MODP_CACHE_DIR", str(tmp_path))
    code, out = run_cli(capsys, "flag-poincare", "--family", "B", "--rank", "2", "--csv")
    assert code == 0
    assert out.splitlines()[0] == "degree,coefficient"
    assert out.splitlines()[1:] == ["0,1", "1,2", "2,2", "3,2", "4,1"]
    code, _ = run_cli(capsys, "jacobian", "--r", "4", "--variant", "SO")
    assert code == 0


def test_console_script_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "modp.cli", "degrees", "--family", "G2"],
        capture_output=True, text=True,
        env={"PATH": "/usr/bin:/bin", "MODP_CACHE_DIR": str(tmp_path),
             "PYTHONPATH": ":".join(sys.path)})
    assert proc.returncode == 0
    assert proc.stdout.strip() == "2 6"
