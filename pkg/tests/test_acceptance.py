"""Acceptance gate: eight criteria, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -s`` or ``python tests/test_acceptance.py``.
"""

import contextlib
import io
import random
import sys
import tempfile
from pathlib import Path

import pytest

from descoord import cli
from descoord.automata import equivalent, from_words, language_union, sync_product
from descoord.coordination import (
    is_conditionally_c_observable,
    is_conditionally_normal,
    is_conditionally_observable,
    is_conditionally_strong_c_observable,
)
from descoord.crosscheck import compare_pipelines, compare_supremal, language_words
from descoord.instances import example_one, random_monolithic, random_problem, random_sublanguage
from descoord.lemmas import lemma_suite
from descoord.textio import load_bundle, write_bundle

FIXTURES = Path(__file__).parent / "fixtures"
SEED = 2024


def _by_length(ws):
    return sorted(ws, key=lambda w: (len(w), w))


def example_one_exact():
    p, k1, k2, c = example_one()
    v = is_conditionally_c_observable(p, c)
    w = v.witness
    results = {
        "K1 c-observable": bool(is_conditionally_c_observable(p.with_spec(k1), c)),
        "K2 c-observable": bool(is_conditionally_c_observable(p.with_spec(k2), c)),
        "K1+K2 not c-observable": not v,
        "witness pair (eps, tau) on a": w is not None and (w.s, w.s_prime, w.sigma) == ((), ("tau",), "a"),
        "K1 not strongly c-observable": not is_conditionally_strong_c_observable(p.with_spec(k1), c),
        "K2 conditionally normal": bool(is_conditionally_normal(p.with_spec(k2))),
    }
    bad = [k for k, ok in results.items() if not ok]
    return not bad, f"{len(results) - len(bad)}/{len(results)} verdicts match" + (f"; wrong: {bad}" if bad else "")


def implication_chain(n=500):
    rng = random.Random(f"chain:{SEED}")
    violations = 0
    normal = strong = 0
    for _ in range(n):
        p = random_problem(rng).problem
        k = p.spec
        vn = bool(is_conditionally_normal(p))
        vs = bool(is_conditionally_strong_c_observable(p, k))
        vr = bool(is_conditionally_c_observable(p, k))
        vo = bool(is_conditionally_observable(p))
        violations += (vn and not vs) + (vs and not vr) + (vr and not vo)
        normal += vn
        strong += vs
    return violations == 0, f"{n} problems, {violations} violations ({normal} normal, {strong} strongly c-observable)"


def union_closure(n=200):
    rng = random.Random(f"union:{SEED}")
    found = violations = attempts = 0
    while found < n and attempts < 50 * n:
        attempts += 1
        inst = random_problem(rng)
        p, c = inst.problem, inst.ambient
        cw = _by_length(language_words(c))
        ev = p.table.events
        w1, w2 = set(random_sublanguage(rng, cw, 6, 0.5)), set(random_sublanguage(rng, cw, 6, 0.5))
        if w1 <= w2 or w2 <= w1:
            continue
        k1, k2 = from_words(w1, ev), from_words(w2, ev)
        if not (is_conditionally_strong_c_observable(p.with_spec(k1), c)
                and is_conditionally_strong_c_observable(p.with_spec(k2), c)):
            continue
        found += 1
        violations += not is_conditionally_strong_c_observable(p.with_spec(language_union(k1, k2)), c)
    p, k1, k2, c = example_one()
    weak_pinned = (is_conditionally_c_observable(p.with_spec(k1), c).holds
                   and is_conditionally_c_observable(p.with_spec(k2), c).holds
                   and not is_conditionally_c_observable(p.with_spec(language_union(k1, k2)), c).holds)
    ok = found >= n and violations == 0 and weak_pinned
    return ok, (f"{found} incomparable triples, {violations} violations; "
                f"weak non-closure pinned: {weak_pinned}")


def supremality(n=150):
    rng = random.Random(f"sup:{SEED}")
    bad = []
    for i in range(n):
        bad += compare_supremal(random_monolithic(rng, max_words=6, inside_plant=i % 2 == 0))
    return not bad, f"{n} instances x 3 operators, {len(bad)} mismatches" + (f"; first: {bad[0]}" if bad else "")


def pipeline_soundness(n=400):
    rng = random.Random(f"pipe:{SEED}")
    bad = []
    certified = {"cc": 0, "cro": 0}
    fixed = [load_bundle(d / "problem.txt").problem for d in sorted(FIXTURES.iterdir())]
    problems = fixed + [random_problem(rng).problem for _ in range(n)]
    for p in problems:
        found, flags = compare_pipelines(p)
        bad += found
        for k, v in flags.items():
            certified[k] += v
    ok = not bad and certified["cc"] > 0 and certified["cro"] > 0
    return ok, (f"{len(problems)} problems, certified cc={certified['cc']} cro={certified['cro']}, {len(bad)} violations"
                + (f"; first: {bad[0]}" if bad else ""))


def lemmas_hold(n=200):
    results = lemma_suite(SEED, n)
    short = [r.name for r in results if r.instances < n]
    broken = [r.name for r in results if not r.holds]
    ok = not short and not broken
    counts = ", ".join(f"{r.name}={r.instances}" for r in results)
    return ok, f"{counts}; counterexamples in: {broken or 'none'}" + (f"; too few draws: {short}" if short else "")


def coordinator_neutrality(n=500):
    rng = random.Random(f"neutral:{SEED}")
    problems = [example_one()[0]] + [load_bundle(d / "problem.txt").problem for d in sorted(FIXTURES.iterdir())]
    problems += [random_problem(rng).problem for _ in range(n)]
    bad = 0
    for p in problems:
        with_gk = sync_product(sync_product(p.g1, p.g2), p.gk)
        base = sync_product(p.g1, p.g2)
        bad += not (equivalent(with_gk, base, "generated") and equivalent(with_gk, base, "marked"))
    return bad == 0, f"{len(problems)} problems, {bad} changed by the coordinator"


def _run_once(root: Path) -> None:
    inst = random_problem(random.Random(f"det:{SEED}"))
    bundles = [write_bundle(root / "random", inst.problem, inst.ambient)]
    bundles += [FIXTURES / name / "problem.txt" for name in ("example1", "full_observation", "uncertified_cro")]
    for i, b in enumerate(bundles):
        for pipeline in ("cc", "cro"):
            cli.main(["synth", str(b), "--pipeline", pipeline, "--out", str(root / f"synth{i}" / pipeline)])
        cli.main(["check", str(b), "conditional-c-observable", "--out", str(root / f"check{i}.json")])
    cli.main(["oracle", "--seed", str(SEED), "--count", "5", "--out", str(root / "campaign")])


def determinism():
    with tempfile.TemporaryDirectory() as tmp:
        runs = [Path(tmp) / "first", Path(tmp) / "second"]
        with contextlib.redirect_stdout(io.StringIO()):
            for r in runs:
                _run_once(r)
        files = [sorted(q.relative_to(r) for q in r.rglob("*") if q.is_file()) for r in runs]
        same_names = files[0] == files[1]
        differ = [str(f) for f in files[0] if (runs[0] / f).read_bytes() != (runs[1] / f).read_bytes()] if same_names else []
        ok = same_names and not differ and len(files[0]) > 0
        return ok, f"{len(files[0])} files compared, {len(differ)} differ" + ("" if same_names else "; file sets differ")


CRITERIA = [
    ("1 example reproduction", example_one_exact),
    ("2 implication chain", implication_chain),
    ("3 union closure", union_closure),
    ("4 supremality vs oracle", supremality),
    ("5 pipeline soundness", pipeline_soundness),
    ("6 lemma suite", lemmas_hold),
    ("7 coordinator neutrality", coordinator_neutrality),
    ("8 determinism", determinism),
]


def _line(name, ok, detail):
    return f"{'PASS' if ok else 'FAIL'} criterion {name}: {detail}"


@pytest.mark.parametrize("name, fn", CRITERIA, ids=[n for n, _ in CRITERIA])
def test_criterion(name, fn, capsys):
    ok, detail = fn()
    with capsys.disabled():
        print("\n" + _line(name, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for name, fn in CRITERIA:
        ok, detail = fn()
        failed += not ok
        print(_line(name, ok, detail), flush=True)
    sys.exit(1 if failed else 0)
