import json
import shutil
import subprocess
import sys

import pytest

from freymod import cli
from freymod.curves import sample_curves_path
from freymod.symplectic import DensityReport, density_set


@pytest.fixture
def sample_json(tmp_path):
    dst = tmp_path / "sample.json"
    shutil.copy(sample_curves_path(), dst)
    return str(dst)


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_eliminate_example(sample_json, capsys):
    code, out, _ = run(["eliminate", "--r", "5", "--d", "3", "--scenario", "even-sum",
                        "--curves", sample_json, "--format", "json"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["status"] == "ok"
    assert rep["result"]["modulus"] % 8 == 0
    assert all(u % 8 == 7 for u in rep["result"]["residues"])
    assert rep["assumptions"]["case2_variant"] == "lemma"
    assert "trusted_minimal_valuations" in rep["assumptions"]


def test_search_example(capsys):
    code, out, _ = run(["search", "--r", "5", "--d", "2", "--p", "7", "--height", "3",
                        "--format", "json"], capsys)
    assert code == 0
    sols = json.loads(out)["result"]["nontrivial_primitive"]
    assert {"a": 1, "b": 1, "c": 1, "primitive": True, "trivial": False} in sols


def test_padic_rejects_13(sample_json, capsys):
    code, _, err = run(["padic", "--r", "5", "--p", "13", "--curves", sample_json], capsys)
    assert code == 2
    assert "p ≢ ±1 (mod r)" in err


def test_padic_unsafe_floor(capsys):
    code, _, err = run(["padic", "--r", "5", "--p", "11", "--p-min", "11"], capsys)
    assert code == 2 and "--unsafe" in err
    code, out, _ = run(["padic", "--r", "5", "--p", "11", "--p-min", "11", "--unsafe",
                        "--format", "json"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["assumptions"]["unsafe_p_min"] is True
    assert "eliminated" in {c["verdict"] for c in rep["result"]["per_curve"]}


def test_unknown_command_and_missing_args(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["bogus"])
    assert exc.value.code == 2
    code, _, err = run(["search", "--r", "5"], capsys)
    assert code == 2 and "--d" in err


def test_invariant_violation_exit(capsys):
    code, _, err = run(["density", "--n=-3,2"], capsys)
    assert code == 3
    assert "invariant-violation" in err


def test_internal_error_exit(monkeypatch, capsys):
    def boom(cfg):
        raise RuntimeError("boom")
    monkeypatch.setitem(cli._DISPATCH, "factor", boom)
    code, _, err = run(["factor", "--r", "5", "--q", "11"], capsys)
    assert code == 1 and "RuntimeError" in err


def test_report_round_trip(tmp_path, capsys):
    out = tmp_path / "density.json"
    code, _, _ = run(["density", "--n=-4,-10", "--verified-bound", "20000", "--output", str(out)], capsys)
    assert code == 0
    rep = json.loads(out.read_text())
    assert DensityReport.from_dict(rep["result"]) == density_set([-4, -10], verified_bound=20000)


def test_deterministic_across_worker_counts(tmp_path, sample_json, monkeypatch, capsys):
    outputs = []
    for threads in ("1", "4", "0"):
        monkeypatch.setenv("FREY_THREADS", threads)
        path = tmp_path / f"r{threads}.json"
        code, _, _ = run(["eliminate", "--r", "5", "--d", "3", "--scenario", "r-sum",
                          "--curves", sample_json, "--verified-bound", "5000",
                          "--output", str(path)], capsys)
        assert code == 0
        outputs.append(path.read_bytes())
    assert outputs[0] == outputs[1] == outputs[2]


@pytest.mark.parametrize("argv", [
    ["factor", "--r", "7", "--q", "13"],
    ["frey", "--r", "5", "--a", "2", "--b", "1"],
    ["classify", "--r", "5", "--a", "7", "--b", "1", "--p", "13"],
    ["classify", "--r", "5", "--a", "2", "--b", "1", "--prime", "(3, [2, 1, 1])"],
    ["conductor", "--r", "5", "--a", "7", "--b", "1"],
    ["level", "--r", "5", "--d", "33"],
    ["verify", "--r", "5", "--a", "4", "--b", "1"],
])
def test_commands_succeed(argv, capsys):
    code, out, _ = run(argv, capsys)
    assert code == 0
    assert out.startswith(argv[0] + ": ok")


def test_human_and_json_agree(capsys):
    argv = ["factor", "--r", "5", "--q", "11"]
    _, human, _ = run(argv, capsys)
    _, js, _ = run(argv + ["--format", "json"], capsys)
    rep = json.loads(js)
    assert "split" in human and rep["result"]["splitting"]["kind"] == "split"


def test_module_entry_point_properties():
    proc = subprocess.run([sys.executable, "-m", "freymod", "verify", "--properties", "--format", "json"],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0, proc.stderr
    rep = json.loads(proc.stdout)
    assert rep["result"]["all_passed"]
