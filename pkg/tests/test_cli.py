import json
import os
import subprocess
import sys

import pytest

from effdio.cli import main


def run(*args, env=None):
    e = dict(os.environ)
    if env:
        e.update(env)
    return subprocess.run([sys.executable, "-m", "effdio", *args], capture_output=True, text=True, env=e)


def leaves(doc):
    if isinstance(doc, dict):
        for v in doc.values():
            yield from leaves(v)
    elif isinstance(doc, list):
        for v in doc:
            yield from leaves(v)
    else:
        yield doc


def test_sunit_command():
    r = run("sunit", "2")
    assert r.returncode == 0
    doc = json.loads(r.stdout)
    assert doc["mode"] == "certified_complete"
    assert sorted(doc["solutions"]) == [["-1", "2"], ["1/2", "1/2"], ["2", "-1"]]


def test_bounds_command(capsys):
    assert main(["bounds", "nu_S", ""]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["value"] == "1728"
    assert main(["bounds", "gl2", "1", "", "--N-A", "11"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert "gl2_height" in [b["name"] for b in doc["bounds"]]
    assert main(["bounds", "conductor-exponent", "1", "2", "1"]) == 0
    assert json.loads(capsys.readouterr().out)["value"] == "8"


def test_curve_command(capsys):
    assert main(["curve", "0,0,1,-1,0", "--conductor"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["conductor"] == "37"
    assert "heights" not in doc
    assert main(["curve", "0,0,1,-1,0"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert {"invariants", "heights", "conductor"} <= set(doc)


def test_frey_and_mordell_curve(capsys):
    assert main(["frey", "2", "--S", "2"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["invariants"]["j"] == "1728" and doc["frey_check"]["ok"] is True
    assert main(["mordell-curve", "2", "3", "1"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["invariants"]["j"] == "-13824" and doc["mordell_check"]["ok"] is True


def test_exit_codes(capsys):
    assert main(["frey", "1"]) == 2
    assert json.loads(capsys.readouterr().out)["error"]["type"] == "DegenerateLambda"
    assert main(["mordell", "1"]) == 3
    doc = json.loads(capsys.readouterr().out)
    assert doc["error"]["type"] == "SearchBudgetExceeded"
    assert doc["partial"]["mode"] == "bounded"
    assert main(["thue", "1,0,0,-2", "0"]) == 2
    assert main(["bounds", "nonsense"]) == 2
    assert main(["curve", "0,0,0,0,0"]) == 2


def test_usage_errors_are_deterministic():
    a = run("sunit", "--bogus")
    b = run("sunit", "--bogus")
    assert a.returncode == 2 and a.stdout == ""
    assert a.stderr == b.stderr and a.stderr.startswith("usage:")
    assert run().returncode == 2


def test_paper_check_flag():
    r = run("mordell", "-2", "--ceiling", "log(100)", "--paper-check")
    assert r.returncode == 0
    assert json.loads(r.stdout)["paper_check"]["passed"] is True


def test_precision_env():
    r = run("curve", "11,-14", "--heights", env={"EFFDIO_PRECISION": "200"})
    assert json.loads(r.stdout)["heights"]["precision_bits"] == "200"
    r = run("curve", "11,-14", "--heights", "--precision", "96", env={"EFFDIO_PRECISION": "200"})
    assert json.loads(r.stdout)["heights"]["precision_bits"] == "96"
    assert run("curve", "11,-14", env={"EFFDIO_PRECISION": "x"}).returncode == 2


@pytest.mark.parametrize(
    "args",
    [
        ["sunit", "2,3", "--ceiling", "log(1000)"],
        ["mordell", "1", "--ceiling", "log(100)"],
        ["thue", "1,0,0,-2", "1", "--ceiling", "log(30)"],
        ["curve", "0,-1,1,-10,-20"],
        ["bounds", "gl2", "2", "2,3"],
    ],
)
def test_numbers_are_strings_and_output_is_stable(args):
    a, b = run(*args), run(*args)
    assert a.returncode == 0
    assert a.stdout == b.stdout
    doc = json.loads(a.stdout)
    for v in leaves(doc):
        assert v is None or isinstance(v, (str, bool)), v


def test_table_format(capsys):
    assert main(["bounds", "nu_S", "", "--format", "table"]) == 0
    out = capsys.readouterr().out
    assert "value" in out and "1728" in out
