import json
from pathlib import Path

import pytest

from descoord import checks, cli
from descoord.verdict import Verdict

EX1 = "example1/problem.txt"


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_pass_and_fail(capsys, fixtures):
    code, out, _ = run(capsys, "check", fixtures / EX1, "conditional-controllable")
    assert code == cli.EXIT_OK and json.loads(out)["holds"]
    code, out, _ = run(capsys, "check", fixtures / EX1, "conditional-c-observable")
    data = json.loads(out)
    assert code == cli.EXIT_FAIL and not data["holds"]
    assert data["witness"]["s_prime"] == ["tau"] and data["witness"]["sigma"] == "a"


@pytest.mark.parametrize("prop", sorted(cli.PROPERTIES))
def test_every_property_runs(capsys, fixtures, prop):
    code, out, _ = run(capsys, "check", fixtures / EX1, prop)
    assert code in (cli.EXIT_OK, cli.EXIT_FAIL)
    assert json.loads(out)["property"] == prop


def test_check_writes_out(capsys, fixtures, tmp_path):
    target = tmp_path / "v" / "verdict.json"
    code, out, _ = run(capsys, "check", fixtures / EX1, "decomposable", "--out", target)
    assert code == 0 and target.read_text() == out


def test_input_errors(capsys, fixtures, tmp_path):
    bad = tmp_path / "problem.txt"
    bad.write_text("g1: g1.fsm\nwhat\n")
    code, _, err = run(capsys, "check", bad, "normal")
    assert code == cli.EXIT_INPUT and f"{bad}:2:1" in err
    assert run(capsys, "check", tmp_path / "missing.txt", "normal")[0] == cli.EXIT_INPUT
    assert run(capsys, "check", fixtures / EX1, "no-such-property")[0] == cli.EXIT_INPUT
    assert run(capsys, "oracle")[0] == cli.EXIT_INPUT
    assert run(capsys, "synth", fixtures / EX1)[0] == cli.EXIT_INPUT


def test_help_exits_zero(capsys):
    assert run(capsys, "--help")[0] == cli.EXIT_OK


def test_synth_certified_and_uncertified(capsys, fixtures, tmp_path):
    code, out, _ = run(capsys, "synth", fixtures / EX1, "--pipeline", "cro", "--out", tmp_path / "a")
    assert code == cli.EXIT_OK and json.loads(out)["certified"]
    assert sorted(json.loads(out)["languages"].values()) == sorted(q.name for q in (tmp_path / "a").glob("*.fsm"))
    code, out, _ = run(capsys, "synth", fixtures / "uncertified_cro/problem.txt", "--pipeline", "cro",
                       "--out", tmp_path / "b")
    data = json.loads(out)
    assert code == cli.EXIT_UNCERTIFIED and not data["certified"]
    failed = [h["name"] for h in data["hypotheses"] if not h["verdict"]]
    assert failed == ["nonconflicting"]
    code, _, _ = run(capsys, "synth", fixtures / EX1, "--pipeline", "cc", "--out", tmp_path / "c")
    assert code == cli.EXIT_OK


def test_synth_with_theorem_c(capsys, fixtures, tmp_path):
    code, out, _ = run(capsys, "synth", fixtures / EX1, "--pipeline", "cro", "--out", tmp_path,
                       "--theorem-c", fixtures / "example1" / "c.fsm")
    assert code == cli.EXIT_OK


def test_synth_is_deterministic(capsys, fixtures, tmp_path):
    for name in ("x", "y"):
        for pipeline in ("cc", "cro"):
            run(capsys, "synth", fixtures / "uncertified_cro/problem.txt", "--pipeline", pipeline,
                "--out", tmp_path / name / pipeline)
    first = sorted(p.relative_to(tmp_path / "x") for p in (tmp_path / "x").rglob("*") if p.is_file())
    second = sorted(p.relative_to(tmp_path / "y") for p in (tmp_path / "y").rglob("*") if p.is_file())
    assert first == second and first
    for rel in first:
        assert (tmp_path / "x" / rel).read_bytes() == (tmp_path / "y" / rel).read_bytes()


def test_oracle_agrees(capsys, fixtures, tmp_path):
    code, out, _ = run(capsys, "oracle", fixtures / EX1)
    assert code == cli.EXIT_OK and json.loads(out)["agree"]
    code, out, _ = run(capsys, "oracle", "--seed", 3, "--count", 8, "--out", tmp_path)
    assert code == cli.EXIT_OK and json.loads(out)["instances"] == 8
    assert (tmp_path / "oracle.json").read_text() == out


def test_mutant_is_caught(capsys, tmp_path, monkeypatch):
    monkeypatch.setattr(checks, "is_controllable", lambda k, l, sigma_u: Verdict(True, None, "controllable"))
    code, out, _ = run(capsys, "oracle", "--seed", 1, "--count", 20, "--out", tmp_path)
    data = json.loads(out)
    assert code == cli.EXIT_DISAGREE and not data["agree"]
    assert any("controllable" in d for e in data["disagreements"] for d in e["disagreements"])
    saved = [e["bundle"] for e in data["disagreements"]]
    assert saved and all(Path(s).exists() for s in saved)


@pytest.mark.parametrize("pipeline", ["cc", "cro"])
def test_synth_matches_golden_files(capsys, fixtures, tmp_path, pipeline):
    golden = fixtures.parent / "golden" / f"example1_{pipeline}"
    run(capsys, "synth", fixtures / EX1, "--pipeline", pipeline, "--out", tmp_path)
    expected = sorted(p.name for p in golden.iterdir())
    assert sorted(p.name for p in tmp_path.iterdir()) == expected
    for name in expected:
        assert (tmp_path / name).read_text() == (golden / name).read_text(), name
