import json
import subprocess
import sys

import pytest

from gradedjordan import cli


def call(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("argv,code", [
    (["verify-jordan", "--registry", "mat2_f7", "--trials", "50"], 0),
    (["triangle-check", "--registry", "ac_rank2_f7_aniso"], 0),
    (["peirce", "--registry", "mat2_f7", "--tripotent", "u"], 0),
    (["lie-verify", "--registry", "ac_rank1_q"], 0),
    (["simple-check", "--registry", "h2_nilpotent_f7"], 1),
    (["radical", "--registry", "ac_degenerate_f7"], 1),
    (["classify", "--registry", "ac_degenerate_f7"], 1),
    (["simple-check", "--registry", "h2_quantum_minus1", "--window", "1"], 0),
])
def test_exit_codes(argv, code, capsys):
    got, out, _ = call(argv, capsys)
    assert got == code
    report = json.loads(out)
    assert report["command"] == argv[0]


def test_strict_unknown(capsys):
    argv = ["simple-check", "--registry", "h2_quantum_minus1", "--window", "1"]
    code, out, _ = call(argv + ["--strict"], capsys)
    assert code == 3 and json.loads(out)["status"] == "unknown"


@pytest.mark.parametrize("argv", [
    ["no-such-command"],
    ["verify-jordan"],
    ["verify-jordan", "--registry", "nope"],
    ["coordinatize", "--registry", "ac_z_torus", "--mode", "sideways"],
])
def test_usage_errors(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        code = cli.main(argv)
        raise SystemExit(code)
    assert exc.value.code == 2


def test_malformed_input(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = call(["verify-jordan", "--in", str(bad)], capsys)
    assert code == 2 and err


def test_determinism(capsys):
    argv = ["battery", "--registry", "ac_rank3_f7", "--trials", "20", "--seed", "11"]
    _, a, _ = call(argv, capsys)
    _, b, _ = call(argv, capsys)
    assert a == b
    _, c, _ = call(argv[:-1] + ["12"], capsys)
    assert json.loads(c)["seed"] == 12


def test_build_round_trip(tmp_path, capsys):
    path = tmp_path / "sys.json"
    code, _, _ = call(["build", "--registry", "mat2_f7", "--out", str(path)], capsys)
    assert code == 0
    built = json.loads(path.read_text())
    assert built["status"] == "pass"
    code, out, _ = call(["classify", "--in", str(path)], capsys)
    r = json.loads(out)
    assert code == 0 and r["case"] == "hermitian"
    inner = tmp_path / "inner.json"
    inner.write_text(json.dumps(built["structure_triple"]))
    code, out, _ = call(["triangle-check", "--in", str(inner)], capsys)
    assert code == 0


def test_coordinatize_refusal(capsys):
    code, out, _ = call(["coordinatize", "--registry", "h2_quantum_minus1", "--window", "1"], capsys)
    r = json.loads(out)
    assert code == 1 and r["status"] == "fail" and "refused" in r


def test_pretty_output(capsys):
    code, out, _ = call(["supports", "--registry", "ac_z_torus", "--window", "2", "--pretty"], capsys)
    assert code == 0 and out.startswith("{\n")


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "gradedjordan", "triangle-check", "--registry", "h2_rational"],
                       capture_output=True, text=True)
    assert p.returncode == 0
    assert json.loads(p.stdout)["status"] == "pass"
