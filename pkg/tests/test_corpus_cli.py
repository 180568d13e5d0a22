import json
import shutil
import subprocess
import sys

import pytest

from locfrac.cli import main
from locfrac.corpus import run_corpus, verdicts
from locfrac.fixtures import bundled_path


def _run(capsys, *argv):
    code = main(list(argv))
    return code, json.loads(capsys.readouterr().out)


def test_check_system_passes(capsys):
    code, rep = _run(capsys, "check-system", "chain3", "u_class")
    assert code == 0 and rep["ok"]
    assert rep["exit_code"] == 0 and rep["command"]["command"] == "check-system"


def test_fixture_check_failure_exits_1(capsys):
    code, rep = _run(capsys, "check-adjunction", "fork_transport", "--adjunction", "self", "--system", "s_both",
                     "--system-target", "ids", "--no-enforce")
    assert code == 1 and rep["witnesses"]


def test_unsupported_formula_exits_2(capsys):
    code, rep = _run(capsys, "check-system", "pair_cat", "f_class", "--side", "right")
    assert code == 2 and "right_S3" in rep["failed"]


def test_budget_exhaustion_exits_3(capsys):
    code, rep = _run(capsys, "probe-universal", "chain3", "--system", "u_class", "--budget", "1")
    assert code == 3 and "budget" in rep["error"]


def test_malformed_fixture_exits_4(tmp_path, capsys):
    bad = json.loads((bundled_path("walking_arrow.json")).read_text())
    bad["compose"] = [{"g": "u", "f": "id_a"}]
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(bad))
    code, rep = _run(capsys, "check-system", str(p), "u_class")
    assert code == 4 and rep["key_path"] == "compose[0].gf"


def test_bad_arguments_exit_4(capsys):
    with pytest.raises(SystemExit) as e:
        main(["ext", "--ring", "z4"])
    assert e.value.code == 4


def test_ext_verb(capsys):
    code, rep = _run(capsys, "ext", "--ring", "z4", "--src", "k", "--tgt", "k", "--n=0..3")
    assert code == 0
    assert [row["size"] for row in rep["result"]["ext"]] == [2, 2, 2, 2]


def test_output_file_matches_stdout(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, rep = _run(capsys, "hom", "walking_arrow", "u_class", "b", "a", "--output", str(out))
    assert code == 0
    assert json.loads(out.read_text()) == rep


def test_corpus_exit_and_determinism():
    a, code = run_corpus()
    b, _ = run_corpus()
    assert code == 0
    assert a["summary"]["exactly_controls_fail"]
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    c, code2 = run_corpus(tiebreak="reversed")
    assert code2 == 0 and verdicts(c) == verdicts(a)


def test_corpus_control_that_passes_is_an_error(tmp_path):
    shutil.copy(bundled_path("walking_arrow.json"), tmp_path / "ok.json")
    d = json.loads(bundled_path("walking_arrow.json").read_text())
    d["negative_control"] = True
    (tmp_path / "ctl.json").write_text(json.dumps(d))
    rep, code = run_corpus(tmp_path)
    assert code == 1
    assert not rep["summary"]["exactly_controls_fail"]


def test_empty_corpus_warns(tmp_path):
    rep, code = run_corpus(tmp_path)
    assert code == 0
    assert rep["warnings"] == ["zero fixtures found"]


def test_console_script_runs():
    r = subprocess.run([sys.executable, "-m", "locfrac.cli", "localize", "walking_arrow", "u_class"],
                       capture_output=True, text=True)
    assert r.returncode == 0
    assert json.loads(r.stdout)["ok"]
