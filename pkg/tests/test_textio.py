import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from descoord.automata import equivalent
from descoord.coordination import synthesize_cro
from descoord.instances import EVENT_POOL, random_generator, random_problem
from descoord.textio import (
    FormatError,
    format_generator,
    load_bundle,
    parse_generator,
    parse_manifest,
    write_bundle,
    write_report,
)

GOOD = """\
# two ways to reach a
alphabet: a tau
controllable: a tau
observable: a
states: 3
marked: 0 1 2
trans: 0 a 1
trans: 0 tau 2
trans: 2 a 1
"""


def test_parse_sample():
    f = parse_generator(GOOD)
    g = f.generator
    assert g.n_states == 3 and g.generates(("tau", "a"))
    assert f.sections["observable"] == ("a",)
    assert format_generator(g, None).startswith("alphabet: a tau\nstates: 3")


def test_sections_in_any_order():
    lines = GOOD.splitlines()
    shuffled = "\n".join(reversed(lines))
    assert format_generator(parse_generator(shuffled).generator) == format_generator(parse_generator(GOOD).generator)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6))
def test_round_trip(seed):
    rng = random.Random(seed)
    g = random_generator(rng, EVENT_POOL[: rng.randint(1, 3)], 4, nonempty=False)
    text = format_generator(g)
    back = parse_generator(text).generator
    assert format_generator(back) == text
    assert equivalent(back, g, "marked") and equivalent(back, g, "generated")


@pytest.mark.parametrize(
    "text, line, column, fragment",
    [
        ("alphabet: a\nstates: 1\nbogus: x\n", 3, 1, "unknown section"),
        ("alphabet: a\nstates: 2\ntrans: 0 b 1\n", 3, 10, "not in alphabet"),
        ("alphabet: a\nstates: 2\ntrans: 0 a 5\n", 3, 12, "bad state"),
        ("alphabet: a\nstates: 2\ntrans: 0 a 1\ntrans: 0 a 0\n", 4, 10, "nondeterministic"),
        ("alphabet: a\nstates: 2\n  marked: 0 x\n", 3, 13, "bad state"),
        ("alphabet: a\nstates: zero\n", 2, 9, "positive integer"),
        ("alphabet: a\n states\n", 2, 2, "key: value"),
        ("alphabet: a\nalphabet: a\nstates: 1\n", 2, 1, "duplicate"),
    ],
)
def test_format_errors_locate_the_problem(text, line, column, fragment):
    with pytest.raises(FormatError) as info:
        parse_generator(text, "g.fsm")
    err = info.value
    assert (err.line, err.column) == (line, column)
    assert fragment in str(err)
    assert str(err).startswith(f"g.fsm:{line}:{column}:")


def test_missing_sections():
    with pytest.raises(FormatError, match="alphabet"):
        parse_generator("states: 1\n")
    with pytest.raises(FormatError, match="states"):
        parse_generator("alphabet: a\n")
    with pytest.raises(FormatError, match="outside the alphabet"):
        parse_generator("alphabet: a\nobservable: b\nstates: 1\n")


def test_manifest_errors(tmp_path):
    with pytest.raises(FormatError, match="missing 'spec'"):
        parse_manifest("g1: a.fsm\ng2: b.fsm\n")
    with pytest.raises(FormatError, match="exactly one"):
        parse_manifest("g1: a.fsm b.fsm\n")
    with pytest.raises(FormatError, match="duplicate"):
        parse_manifest("g1: a.fsm\ng1: a.fsm\n")
    with pytest.raises(FormatError, match="cannot read manifest"):
        load_bundle(tmp_path / "nope.txt")
    (tmp_path / "problem.txt").write_text("g1: g1.fsm\ng2: g2.fsm\nspec: s.fsm\nalphabet: a\n")
    with pytest.raises(FormatError, match="missing event sections"):
        load_bundle(tmp_path / "problem.txt")


def test_bundle_round_trip(tmp_path, fixtures):
    b = load_bundle(fixtures / "example1" / "problem.txt")
    assert b.ambient is not None
    manifest = write_bundle(tmp_path / "copy", b.problem, b.ambient)
    again = load_bundle(manifest)
    for a, z in ((b.problem.g1, again.problem.g1), (b.problem.gk, again.problem.gk), (b.ambient, again.ambient)):
        assert format_generator(a) == format_generator(z)
    assert again.problem.table == b.problem.table
    assert manifest.read_text() == (fixtures / "example1" / "problem.txt").read_text()


def test_bundle_without_coordinator_builds_one(fixtures):
    b = load_bundle(fixtures / "full_observation" / "problem.txt")
    assert b.problem.gk.alphabet == b.problem.table.alphabet_k


def test_random_bundles_round_trip(tmp_path):
    rng = random.Random(5)
    for i in range(20):
        inst = random_problem(rng)
        back = load_bundle(write_bundle(tmp_path / str(i), inst.problem, inst.ambient))
        assert equivalent(back.problem.spec, inst.problem.spec)
        assert equivalent(back.ambient, inst.ambient)


def test_report_files(tmp_path, ex1):
    p = ex1[0]
    path = write_report(tmp_path, synthesize_cro(p), p.table)
    data = json.loads(path.read_text())
    assert data["format_version"] == 1 and data["pipeline"] == "cro" and data["certified"]
    assert data["languages"]["supCRO_1+k"] == "supCRO_1pk.fsm"
    for name in data["languages"].values():
        parse_generator((tmp_path / name).read_text())
    assert {h["name"] for h in data["hypotheses"]} >= {"nonconflicting"}
