import json
import subprocess
import sys

import pytest

from digitwaring.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_moment_prints_exact_ratio(capsys):
    code, out, _ = run(capsys, "moment", "--n", "1", "--t", "1")
    assert code == 0
    doc = json.loads(out)
    assert doc["command"] == "moment"
    assert "1/2" in out


@pytest.mark.parametrize("argv", [[], ["nosuch"], ["moment", "--bogus"], ["expsum"],
                                  ["dioph", "--theta", "x"], ["verify-lemma"],
                                  ["verify-lemma", "nosuch"]])
def test_usage_errors_exit_1(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1 and err


def test_budget_exit_3(capsys):
    code, out, _ = run(capsys, "expsum", "--n", "40", "--theta", "1/3")
    assert code == 3
    assert json.loads(out)["error"] == "budget-exceeded"


def test_hypothesis_exit_2(capsys):
    code, out, _ = run(capsys, "dioph", "--theta", "3/7", "--n", "7")
    assert code == 2
    doc = json.loads(out)
    assert doc["clause"] == "delta2>=32*delta1" and doc["trace"]


def test_dioph_override_succeeds(capsys):
    code, out, _ = run(capsys, "dioph", "--theta", "3/7", "--n", "8", "--delta2", "auto")
    assert code == 0
    assert json.loads(out)["result"]["q"] == 7


def test_basis_order(capsys):
    code, out, _ = run(capsys, "basis-order", "--lo", "50", "--hi", "2000")
    assert code == 0
    res = json.loads(out)["result"]
    assert res["s"] == 7 and res["verified"]


def test_scan_csv_deterministic(capsys, tmp_path):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    outs = []
    for p in paths:
        code, out, _ = run(capsys, "scan", "--n", "4", "--grid", "4096", "--seed", "5", "--csv", str(p))
        assert code == 0
        outs.append(out)
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert outs[0] == outs[1]


def test_config_file_and_override(capsys, tmp_path):
    conf = tmp_path / "c.json"
    conf.write_text(json.dumps({"n": 2, "t": 1}))
    code, out, _ = run(capsys, "moment", "--config", str(conf))
    assert code == 0 and json.loads(out)["config"]["n"] == 2
    code, out, _ = run(capsys, "moment", "--config", str(conf), "--n", "1")
    assert json.loads(out)["config"]["n"] == 1
    conf.write_text(json.dumps({"nonsense": 1}))
    code, _, _ = run(capsys, "moment", "--config", str(conf))
    assert code == 1


def test_manifest_written(capsys, tmp_path):
    man = tmp_path / "m.json"
    code, out, _ = run(capsys, "ball", "--r", "1", "--m", "2", "--manifest", str(man))
    assert code == 0
    assert json.loads(man.read_text()) == json.loads(out)


def test_verify_lemma_list_and_run(capsys):
    code, out, _ = run(capsys, "verify-lemma", "--list")
    names = [x["name"] for x in json.loads(out)["result"]["lemmas"]]
    assert "ww-tilde" in names and len(names) >= 20
    code, out, _ = run(capsys, "verify-lemma", "ww-tilde", "--trials", "200", "--seed", "7")
    assert code == 0 and json.loads(out)["result"]["ok"]


@pytest.mark.parametrize("argv", [
    ["enumerate", "--n", "3"],
    ["expsum", "--theta", "1/5", "--n", "1"],
    ["energy", "--set", "0,1,2"],
    ["boxnorm", "--shape", "2", "3", "--seed", "3"],
    ["density", "--n", "2", "--sets", "1,2", "3"],
    ["realvar", "--r", "2", "--step", "0.05"],
    ["expand", "--d", "3", "--r", "1", "--m", "2", "--density", "1"],
])
def test_subcommands_run(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert json.loads(out)["command"] == argv[0]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "digitwaring.cli", "energy", "--set", "0,1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["energy"] == 6
