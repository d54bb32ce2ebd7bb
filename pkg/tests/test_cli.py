import json
import subprocess
import sys

import pytest

from posmaps.cli import dispatch


def run(argv, capsys):
    code = dispatch(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_success_and_json(capsys):
    code, out, _ = run(["verify", "eq10", "6", "3", "--format", "json"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["schema"] == 1 and data["command"] == "verify"
    code, _, _ = run(["--format", "json", "verify", "eq7"], capsys)
    assert code == 0


@pytest.mark.parametrize("argv", [
    ["certify", "non-extremal", "5", "2"],
    ["verify", "eq10", "6", "4"],
    ["map", "build", "2", "1"],
    ["verify", "unknown"],
    ["scan", "spanning", "3", "1", "--restarts", "0"],
    ["nonsense"],
    [],
])
def test_usage_errors_exit_two(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2
    assert "error" in err


def test_gcd_message(capsys):
    _, _, err = run(["certify", "non-extremal", "5", "2"], capsys)
    assert "gcd" in err


def test_map_classify(capsys):
    code, out, _ = run(["map", "classify", "4", "1"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["completely_positive"]["verdict"] is False
    assert data["completely_copositive"]["verdict"] is False
    code, out, _ = run(["map", "classify", "4", "1", "--format", "text"], capsys)
    assert code == 0 and "False" in out


def test_form_build(capsys):
    code, out, _ = run(["form", "build", "3", "1", "--format", "json"], capsys)
    assert code == 0 and "x1^2*y1^2" in json.loads(out)["form"].replace(" ", "")


def test_replay_json_is_deterministic(capsys):
    _, a, _ = run(["replay", "q41", "--format", "json"], capsys)
    _, b, _ = run(["replay", "q41", "--format", "json"], capsys)
    assert a == b and json.loads(a)["schema"] == 1


def test_scan_output_is_bit_identical(tmp_path, capsys):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        assert dispatch(["scan", "spanning", "3", "1", "--restarts", "200", "--seed", "5",
                         "--format", "json", "-o", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_validate_in_a_fresh_process(tmp_path):
    cert = tmp_path / "cert.json"
    assert dispatch(["certify", "non-extremal", "6", "2", "--restarts", "50",
                     "--format", "json", "-o", str(cert)]) == 0
    proc = subprocess.run([sys.executable, "-m", "posmaps.cli", "validate", str(cert)],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr

    data = json.loads(cert.read_text())
    data["summands"][0]["form"]["text"] = "x1^2*y1^2"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    proc = subprocess.run([sys.executable, "-m", "posmaps.cli", "validate", str(bad)],
                          capture_output=True, text=True)
    assert proc.returncode == 1


def test_validate_missing_file_and_garbage(tmp_path, capsys):
    assert run(["validate", str(tmp_path / "missing.json")], capsys)[0] == 2
    junk = tmp_path / "junk.json"
    junk.write_text("{not json")
    assert run(["validate", str(junk)], capsys)[0] == 1


def test_decomposable_certificate_validates(tmp_path):
    out = tmp_path / "d.json"
    assert dispatch(["certify", "decomposable", "4", "--format", "json", "-o", str(out)]) == 0
    assert dispatch(["validate", str(out)]) == 0
