import json
import subprocess
import sys
from fractions import Fraction

import pytest

from krawlp.cli import _integer_root, main
from krawlp.lp import parse_text


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_oracle(capsys):
    code, out, _ = run(capsys, "oracle", "--q", "2", "--n", "3", "--d", "2", "--output", "json")
    assert code == 0
    data = json.loads(out)
    assert data["A"] == "4" and data["k0"] == 2 and data["witness"] == ["101", "011"]


def test_oracle_text(capsys):
    code, out, _ = run(capsys, "oracle", "--q", "2", "--n", "4", "--d", "1")
    assert code == 0 and "A: 16" in out


def test_oracle_resource_cap(capsys):
    code, _, err = run(capsys, "oracle", "--q", "7", "--n", "30", "--d", "3")
    assert code == 3 and "cap" in err


def test_cap_flag(capsys):
    code, _, _ = run(capsys, "enumerate", "--q", "2", "--n", "3", "--max-subspaces", "10")
    assert code == 3


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "--q", "2", "--n", "2")
    assert code == 0
    assert out.splitlines() == ["0 0 -", "1 1 01", "2 1 10", "3 1 11", "4 2 10,01"]


def test_bound_kraw(capsys):
    code, out, _ = run(capsys, "bound", "--program", "kraw-pseudo", "--q", "2", "--n", "3", "--d", "2",
                       "--level", "3")
    assert code == 0
    assert "value: 64" in out and "root: 4" in out and "certified: true" in out


def test_bound_json(capsys):
    code, out, _ = run(capsys, "bound", "--program", "partial-pseudo", "--q", "2", "--n", "2", "--d", "2",
                       "--level", "2", "--output", "json")
    data = json.loads(out)
    assert code == 0 and data["value"] == "2/1" and data["status"] == "Optimal" and data["certified"]


def test_bound_weak_programs(capsys):
    for program, value in [("kraw-pseudo-weak", "64/1"), ("full-pseudo-weak", "4/1")]:
        code, out, _ = run(capsys, "bound", "--program", program, "--q", "2", "--n", "3", "--d", "2",
                           "--output", "json")
        assert code == 0 and json.loads(out)["value"] == value


def test_bound_low_level_unsym(capsys):
    code, out, _ = run(capsys, "bound", "--program", "kraw-unsym", "--q", "2", "--n", "3", "--d", "2",
                       "--level", "1", "--output", "json")
    data = json.loads(out)
    assert code == 0 and data["value"] == "4/1" and data["root"] == "4"


def test_integer_root():
    assert _integer_root(Fraction(64), 2, 3) == 4
    assert _integer_root(Fraction(9), 3, 2) == 3
    assert _integer_root(Fraction(8), 2, 2) is None
    assert _integer_root(Fraction(12), 2, 1) is None
    assert _integer_root(Fraction(9, 2), 3, 2) is None


def test_bound_unsym_needs_q2(capsys):
    code, _, err = run(capsys, "bound", "--program", "kraw-unsym", "--q", "3", "--n", "2", "--d", "2")
    assert code == 2 and "q=2 only" in err


def test_bound_level_below_n(capsys):
    code, _, err = run(capsys, "bound", "--program", "kraw-pseudo", "--q", "2", "--n", "3", "--d", "2",
                       "--level", "2")
    assert code == 2 and "level" in err


@pytest.mark.parametrize("argv", [
    ["bound", "--program", "kraw-pseudo", "--q", "6", "--n", "2", "--d", "2"],
    ["bound", "--program", "kraw-pseudo", "--q", "2", "--n", "2"],
    ["bound", "--program", "kraw-pseudo", "--q", "2", "--n", "2", "--d", "0"],
    ["oracle", "--q", "2", "--n", "2"],
])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["bound", "--program", "nope", "--q", "2", "--n", "2", "--d", "2"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["verify", "nonintegral", "--q", "2", "--n", "3", "--d", "2", "--epsilon", "x"])
    assert exc.value.code == 2


def test_export(capsys, tmp_path):
    path = tmp_path / "model.lp"
    code, _, _ = run(capsys, "bound", "--program", "kraw-pseudo", "--q", "2", "--n", "2", "--d", "2",
                     "--export", str(path))
    assert code == 0
    prog = parse_text(path.read_text())
    assert len(prog.variables) == 5 and prog.sense == "max"


@pytest.mark.parametrize("argv", [
    ["completeness", "--q", "2", "--n", "3", "--d", "2"],
    ["nonintegral", "--q", "2", "--n", "3", "--d", "2", "--level", "3", "--epsilon", "1/2"],
    ["escalation", "--q", "2", "--n", "3", "--d", "2", "--level", "3"],
    ["masstransfer", "--q", "2", "--n", "3", "--d", "2"],
    ["mobius", "--q", "3", "--n", "3", "--samples", "10"],
    ["charsum", "--q", "2", "--n", "2"],
    ["partial-integrality", "--q", "2", "--n", "2", "--d", "2"],
])
def test_verify_suites_pass(capsys, argv):
    code, out, _ = run(capsys, "verify", *argv)
    assert code == 0
    assert "FAIL" not in out and out.rstrip().endswith("PASS")


def test_verify_nonintegral_reports_value(capsys):
    code, out, _ = run(capsys, "verify", "nonintegral", "--q", "2", "--n", "3", "--d", "2", "--level", "3",
                       "--epsilon", "1/2")
    assert code == 0 and "-1/16 == -1/16" in out


def test_verify_failure_exit_code(capsys):
    # with a cap of 3 the escalation search cannot reach the violating level
    code, out, _ = run(capsys, "verify", "escalation", "--q", "2", "--n", "3", "--d", "2", "--level", "3",
                       "--max-level", "3")
    assert code == 1
    assert "FAIL escalation level within the cap: None <= 3" in out


def test_verify_precondition_is_usage_error(capsys):
    code, _, err = run(capsys, "verify", "nonintegral", "--q", "2", "--n", "4", "--d", "3")
    assert code == 2 and "k0" in err
    assert run(capsys, "verify", "completeness", "--q", "2", "--n", "3")[0] == 2
    assert run(capsys, "verify", "charsum", "--q", "3", "--n", "2")[0] == 2


def test_verify_json(capsys):
    code, out, _ = run(capsys, "verify", "completeness", "--q", "2", "--n", "2", "--d", "2", "--output", "json")
    data = json.loads(out)
    assert code == 0 and data["passed"]
    assert [r["lp_value"] for r in data["reports"]] == ["4/1", "2/1"]


def test_json_never_contains_floats(capsys):
    _, out, _ = run(capsys, "verify", "nonintegral", "--q", "2", "--n", "3", "--d", "2", "--output", "json")

    def walk(x):
        assert not isinstance(x, float)
        if isinstance(x, dict):
            for v in x.values():
                walk(v)
        elif isinstance(x, list):
            for v in x:
                walk(v)

    walk(json.loads(out))


def test_deterministic_output():
    argv = [sys.executable, "-m", "krawlp.cli", "verify", "completeness", "--q", "2", "--n", "3", "--d", "2",
            "--output", "json"]
    first = subprocess.run(argv, capture_output=True, check=True).stdout
    second = subprocess.run(argv, capture_output=True, check=True).stdout
    assert first == second and first
