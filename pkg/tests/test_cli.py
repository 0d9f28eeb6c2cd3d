import io
import json
import subprocess
import sys

import pytest

from buildings.atlas import save, star
from buildings.cli import run

FAST = ["--window", "3", "--den", "2", "--samples", "40", "--fc-configs", "10"]


def call(argv):
    out = io.StringIO()
    code = run(argv, out)
    return code, out.getvalue()


@pytest.fixture(scope="module")
def star_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("inst") / "star.json"
    code, _ = call(["generate", "star", "--type", "A1", "--lambda", "Z", "--branches", "3", "-o", str(path)])
    assert code == 0
    return str(path)


@pytest.fixture(scope="module")
def broken_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("inst") / "broken.json"
    save(star("A1", "Z", 3).without_charts([2]), path)
    return str(path)


def test_generate_to_stdout():
    code, text = call(["generate", "thin", "--type", "B2", "--lambda", "QxQ_lex"])
    assert code == 0
    assert json.loads(text)["root_system"] == "B2"


def test_validate_and_check(star_file):
    assert call(["validate", "--instance", star_file])[0] == 0
    code, text = call(["check", "--instance", star_file, "--axioms", "A3,A6", *FAST])
    assert code == 0
    assert "A6" in text


def test_matrix_fails_on_broken(broken_file, star_file):
    code, text = call(["matrix", "--instance", broken_file, *FAST])
    assert code == 1
    assert "FAIL" in text
    code, text = call(["matrix", "--instance", star_file, "--format", "json", *FAST])
    assert code == 0
    obj = json.loads(text)
    assert set(obj["matrix"]) == {"d1", "dinf"}


def test_json_is_byte_identical(star_file):
    a = call(["matrix", "--instance", star_file, "--format", "json", *FAST])[1]
    b = call(["matrix", "--instance", star_file, "--format", "json", *FAST])[1]
    assert a == b


def test_geometry_commands(star_file):
    code, text = call(["residue", "--instance", star_file, "--at", "0:(0)"])
    assert code == 0 and "3 chamber germs" in text
    code, text = call(["infinity", "--instance", star_file])
    assert code == 0 and "3 chambers" in text
    code, text = call(["sundial", "--instance", star_file, "--apartment", "2", "--chamber", "0:e", "--format", "json"])
    assert code == 0 and json.loads(text)["apartments"] == [0, 1]
    code, text = call(["retract", "--instance", star_file, "--apartment", "0", "--germ", "0:(0):e",
                       "--point", "2:(2)", "--format", "json"])
    assert code == 0 and json.loads(text)["image"] == "0:(-2)"


def test_usage_errors(tmp_path, star_file):
    assert call(["validate", "--instance", str(tmp_path / "missing.json")])[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"root_system": "A9", "lambda": "Z", "apartments": 1}')
    assert call(["validate", "--instance", str(bad)])[0] == 2
    assert call(["sundial", "--instance", star_file, "--apartment", "0", "--chamber", "0:e"])[0] == 2
    with pytest.raises(SystemExit) as exc:
        call(["check"])
    assert exc.value.code == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "buildings", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "matrix" in proc.stdout
