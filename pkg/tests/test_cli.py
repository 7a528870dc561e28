import json
import subprocess
import sys
from pathlib import Path

import pytest

from flagres import cli

ROOT = Path(__file__).resolve().parents[1]
CORPUS = sorted(p.stem for p in cli.corpus_dir().glob("*.json"))
CONTROLS = {"degenerate_n2", "normal_form_control"}


def run(*argv):
    return cli.main([str(a) for a in argv])


def report(tmp_path, *argv, name="r.json"):
    out = tmp_path / name
    code = run(*argv, "--out", out, "--quiet")
    return code, json.loads(out.read_text())


# -- exit codes -------------------------------------------------------------

def test_chern_pn_table(tmp_path):
    code, rep = report(tmp_path, "chern-pn", "pn_example")
    assert code == 0
    values = {e["result"]["n"]: e["result"]["values"] for e in rep["tasks"]}
    assert sorted(values) == list(range(3, 9))
    assert values[3] == {"0": 2, "1": 4, "2": 8}
    for n, row in values.items():
        for j, v in row.items():
            assert v == (n - 2) ** (n - 1 - int(j)) * 2 ** (1 + int(j))


def test_milnor_subcommand(tmp_path):
    code, rep = report(tmp_path, "milnor", "milnor_ideals")
    assert code == 0
    mus = [e["result"]["mu"] for e in rep["tasks"]]
    assert 6 in mus and len(mus) >= 20


def test_check_flag_logarithmic(capsys):
    assert run("check-flag", "log_flag") == 0
    assert "[PASS] check_flag" in capsys.readouterr().out


def test_residue_subcommand(tmp_path):
    code, rep = report(tmp_path, "residue", "constructed_n2")
    assert code == 0
    assert rep["tasks"]


@pytest.mark.parametrize("name", sorted(CONTROLS))
def test_control_files_fail(name, capsys):
    assert run("verify", name) == 1
    assert "[FAIL]" in capsys.readouterr().out


def test_schema_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"chart": {"vars": ["x"]}, "foliation1": {"vector_field": "x"}}))
    assert run("verify", bad) == 2
    assert "schema error" in capsys.readouterr().err


def test_invalid_json_exit_code(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run("verify", bad) == 2


def test_expression_error_exit_code(tmp_path):
    data = json.loads((cli.corpus_dir() / "constructed_n2.json").read_text())
    data["foliation1"]["vector_field"][0] = "x^2 + "
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    assert run("verify", bad) == 2


def test_missing_file_exit_code():
    assert run("verify", "no_such_problem") == 2


def test_unknown_task_is_schema_error(tmp_path):
    data = json.loads((cli.corpus_dir() / "constructed_n2.json").read_text())
    data["tasks"] = ["frobnicate"]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    assert run("run", bad) == 2


# -- reports ----------------------------------------------------------------

def test_reports_are_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run("verify", "constructed_n2", "--out", a, "--quiet") == 0
    assert run("verify", "constructed_n2", "--out", b, "--quiet") == 0
    assert a.read_bytes() == b.read_bytes()


def test_report_records_input_digest(tmp_path):
    import hashlib

    _, rep = report(tmp_path, "verify", "log_flag")
    raw = (cli.corpus_dir() / "log_flag.json").read_bytes()
    assert rep["input"]["sha256"] == hashlib.sha256(raw).hexdigest()
    assert rep["summary"]["all_passed"]


def test_settings_overrides(tmp_path):
    _, rep = report(tmp_path, "residue", "constructed_n2", "--nodes", "64", "--rel-tol", "1e-8", "--radii", "0.3")
    assert rep["settings"]["max_nodes"] == 64
    assert rep["settings"]["rel_tol"] == 1e-8
    assert rep["settings"]["radii"] == [0.3, 0.3]


def test_bad_radii_argument():
    with pytest.raises(SystemExit):
        run("verify", "constructed_n2", "--radii", "0,-1")


def test_semistability_discrepancy_flagged(tmp_path):
    code, rep = report(tmp_path, "verify", "semistability")
    assert code == 0
    (pos,) = [e for e in rep["tasks"] if e["task"] == "positivity"]
    assert pos["result"]["j_value"] == 8
    assert pos["result"]["positivity"]["value"] == "1"
    assert pos["result"]["discrepancy"] is True


def test_reference_values_recorded_not_asserted(tmp_path):
    code, rep = report(tmp_path, "verify", "izawa_like_l3")
    assert code == 0
    refs = {r["quantity"]: r for r in rep["reference_comparisons"]}
    assert refs["mu"]["computed"] == 16 and refs["mu"]["reference_value"] == 4
    assert not refs["mu"]["agrees"] and refs["mu"]["asserted"] is False


# -- corpus ---------------------------------------------------------------------

def test_corpus_list(capsys):
    assert run("corpus-list") == 0
    listed = [line.split()[0] for line in capsys.readouterr().out.splitlines()]
    assert listed == CORPUS


def test_corpus_directory_from_environment(tmp_path, monkeypatch, capsys):
    (tmp_path / "only.json").write_text((cli.corpus_dir() / "log_flag.json").read_text())
    monkeypatch.setenv(cli.CORPUS_ENV, str(tmp_path))
    assert run("corpus-list") == 0
    assert capsys.readouterr().out.split()[0] == "only"
    assert run("check-flag", "only") == 0


def test_corpus_is_up_to_date():
    proc = subprocess.run([sys.executable, str(ROOT / "scripts" / "make_corpus.py"), "--check"],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stdout + proc.stderr


@pytest.mark.slow
@pytest.mark.parametrize("name", CORPUS)
def test_every_corpus_file_verifies(name):
    assert run("verify", name, "--quiet") == (1 if name in CONTROLS else 0)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "flagres.cli", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and "flagres" in proc.stdout
