"""Command line: ``descoord check | synth | oracle``.

Exit codes: 0 pass / certified / agreement, 1 property fails (with witness),
2 input error, 3 synthesized but a theorem hypothesis failed, 4 production
and oracle disagree.
"""

from __future__ import annotations

import argparse
import random
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from descoord import checks, coordination
from descoord.automata import AlphabetMismatch, Generator
from descoord.checks import EmptySpecification, InclusionError
from descoord.coordination import CoordinationProblem, NotDecomposable
from descoord.crosscheck import (
    Disagreement,
    compare_conditional,
    compare_monolithic,
    compare_pipelines,
    compare_supremal,
)
from descoord.instances import MonolithicInstance, random_monolithic, random_problem
from descoord.oracle import OracleRefusal
from descoord.textio import FORMAT_VERSION, Bundle, FormatError, dumps, load_bundle, read_generator, write_bundle, write_report

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_UNCERTIFIED, EXIT_DISAGREE = 0, 1, 2, 3, 4

INPUT_ERRORS = (FormatError, NotDecomposable, InclusionError, AlphabetMismatch, EmptySpecification, ValueError)


@dataclass(frozen=True)
class RunConfig:
    command: str
    bundle: Path | None = None
    prop: str | None = None
    pipeline: str | None = None
    ambient: Path | None = None
    out: Path | None = None
    horizon: int | None = None
    strict_closure: bool = True
    seed: int | None = None
    count: int = 50
    format_version: int = FORMAT_VERSION


def _sets(p: CoordinationProblem):
    t = p.table
    return t.uncontrollable, t.observable, t.controllable


def _ambient(bundle: Bundle, cfg: RunConfig) -> Generator:
    if cfg.ambient is not None:
        return read_generator(cfg.ambient).generator
    return bundle.ambient if bundle.ambient is not None else bundle.problem.spec


def _component_nonconflicting(p: CoordinationProblem):
    return checks.is_nonconflicting(p.pik("1"), p.pik("2"))


PropertyFn = Callable[[CoordinationProblem, Generator], object]

PROPERTIES: dict[str, PropertyFn] = {
    "controllable": lambda p, c: checks.is_controllable(p.spec, p.plant, p.table.uncontrollable),
    "observable": lambda p, c: checks.is_observable(p.spec, p.plant, p.table.observable, p.table.controllable),
    "normal": lambda p, c: checks.is_normal(p.spec, p.plant, p.table.observable),
    "c-observable": lambda p, c: checks.is_relatively_observable(p.spec, c, p.plant, p.table.observable),
    "nonconflicting": lambda p, c: _component_nonconflicting(p),
    "lm-closed": lambda p, c: checks.is_lm_closed(p.spec, p.plant),
    "supervisor-exists": lambda p, c: checks.supervisor_exists(
        p.spec, p.plant, p.table.uncontrollable, p.table.observable, p.table.controllable
    ),
    "decomposable": lambda p, c: coordination.is_conditionally_decomposable(p.spec, p.table),
    "conditional-controllable": lambda p, c: coordination.is_conditionally_controllable(p),
    "conditional-observable": lambda p, c: coordination.is_conditionally_observable(p),
    "conditional-closed": lambda p, c: coordination.is_conditionally_closed(p),
    "conditional-normal": lambda p, c: coordination.is_conditionally_normal(p),
    "conditional-c-observable": lambda p, c: coordination.is_conditionally_c_observable(p, c),
    "conditional-strong-c-observable": lambda p, c: coordination.is_conditionally_strong_c_observable(p, c),
}


def _emit(obj: dict, out: Path | None) -> None:
    text = dumps(obj)
    if out is not None:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text, encoding="utf-8")
    sys.stdout.write(text)


def cmd_check(cfg: RunConfig) -> int:
    bundle = load_bundle(cfg.bundle, strict_closure=cfg.strict_closure)
    verdict = PROPERTIES[cfg.prop](bundle.problem, _ambient(bundle, cfg))
    body = verdict.to_dict()
    w = verdict.witness
    report = {
        "format_version": cfg.format_version,
        "command": "check",
        "property": cfg.prop,
        "holds": verdict.holds,
        "result": body,
    }
    if w is not None:
        report["witness"] = w.to_dict()
    _emit(report, cfg.out)
    return EXIT_OK if verdict.holds else EXIT_FAIL


def cmd_synth(cfg: RunConfig) -> int:
    bundle = load_bundle(cfg.bundle, strict_closure=cfg.strict_closure)
    p = bundle.problem
    if cfg.pipeline == "cc":
        report = coordination.synthesize_cc(p)
    else:
        ambient = read_generator(cfg.ambient).generator if cfg.ambient is not None else None
        report = coordination.synthesize_cro(p, ambient)
    path = write_report(cfg.out, report, p.table)
    sys.stdout.write(path.read_text(encoding="utf-8"))
    return EXIT_OK if report.certified else EXIT_UNCERTIFIED


def _monolithic_view(p: CoordinationProblem, c: Generator) -> MonolithicInstance:
    u, o, ctrl = _sets(p)
    return MonolithicInstance(checks.generated_as_marked(p.plant), p.spec, c, u, o, ctrl)


def compare_bundle(p: CoordinationProblem, c: Generator | None, horizon: int | None = None):
    """All comparisons for one problem; returns (disagreements, skipped reasons)."""
    found: list[Disagreement] = []
    skipped: list[str] = []
    amb = p.spec if c is None else c
    found += compare_monolithic(_monolithic_view(p, amb), horizon)
    for label, fn in (
        ("supremal", lambda: compare_supremal(_monolithic_view(p, amb))),
        ("conditional", lambda: compare_conditional(p, c, horizon)),
        ("pipelines", lambda: compare_pipelines(p)[0]),
    ):
        try:
            found += fn()
        except OracleRefusal as exc:
            skipped.append(f"{label}: {exc}")
    return found, skipped


def cmd_oracle(cfg: RunConfig) -> int:
    entries = []
    if cfg.bundle is not None:
        bundle = load_bundle(cfg.bundle, strict_closure=cfg.strict_closure)
        found, skipped = compare_bundle(bundle.problem, _ambient(bundle, cfg), cfg.horizon)
        entries.append({"instance": str(cfg.bundle), "disagreements": [str(d) for d in found], "skipped": skipped})
    else:
        rng = random.Random(cfg.seed)
        for i in range(cfg.count):
            inst = random_problem(rng)
            mono = random_monolithic(rng)
            found, skipped = compare_bundle(inst.problem, inst.ambient)
            found += compare_monolithic(mono) + compare_supremal(mono)
            entry = {"instance": f"seed {cfg.seed} #{i}", "disagreements": [str(d) for d in found], "skipped": skipped}
            if found and cfg.out is not None:
                entry["bundle"] = str(write_bundle(cfg.out / f"instance_{i:04d}", inst.problem, inst.ambient))
            entries.append(entry)
    bad = [e for e in entries if e["disagreements"]]
    report = {
        "format_version": cfg.format_version,
        "command": "oracle",
        "seed": cfg.seed,
        "instances": len(entries),
        "agree": not bad,
        "disagreements": bad,
        "skipped": sum(len(e["skipped"]) for e in entries),
    }
    _emit(report, cfg.out / "oracle.json" if cfg.out is not None and cfg.bundle is None else cfg.out)
    return EXIT_OK if not bad else EXIT_DISAGREE


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="descoord", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--closure-warn", action="store_true",
                       help="only warn when the prefix closure of K is not conditionally decomposable")

    c = sub.add_parser("check", help="decide one property of a problem bundle")
    c.add_argument("bundle", type=Path)
    c.add_argument("property", choices=sorted(PROPERTIES))
    c.add_argument("--ambient", type=Path, help="generator file for C (default: the bundle's c, else K)")
    c.add_argument("--out", type=Path, help="also write the JSON verdict here")
    common(c)

    s = sub.add_parser("synth", help="run a distributed synthesis pipeline")
    s.add_argument("bundle", type=Path)
    s.add_argument("--pipeline", choices=("cc", "cro"), required=True)
    s.add_argument("--out", type=Path, required=True, help="directory for report.json and language files")
    s.add_argument("--theorem-c", dest="ambient", type=Path,
                   help="ambient C for the coordinator observability hypothesis (cro; default C = M)")
    common(s)

    o = sub.add_parser("oracle", help="compare production results with the brute-force oracle")
    o.add_argument("bundle", type=Path, nargs="?")
    o.add_argument("--seed", type=int, help="random campaign seed (required without a bundle)")
    o.add_argument("--count", type=int, default=50, help="random instances in a campaign")
    o.add_argument("--horizon", type=int, help="snapshot horizon for infinite specifications")
    o.add_argument("--ambient", type=Path)
    o.add_argument("--out", type=Path, help="report file (bundle) or directory (campaign)")
    common(o)
    return ap


def parse_config(argv: list[str] | None = None) -> RunConfig:
    ap = build_parser()
    ns = ap.parse_args(argv)
    if ns.command == "oracle" and ns.bundle is None and ns.seed is None:
        ap.error("oracle needs a bundle or --seed")
    return RunConfig(
        command=ns.command,
        bundle=ns.bundle,
        prop=getattr(ns, "property", None),
        pipeline=getattr(ns, "pipeline", None),
        ambient=getattr(ns, "ambient", None),
        out=getattr(ns, "out", None),
        horizon=getattr(ns, "horizon", None),
        strict_closure=not ns.closure_warn,
        seed=getattr(ns, "seed", None),
        count=getattr(ns, "count", 50),
    )


COMMANDS = {"check": cmd_check, "synth": cmd_synth, "oracle": cmd_oracle}


def main(argv: list[str] | None = None) -> int:
    try:
        cfg = parse_config(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return COMMANDS[cfg.command](cfg)
    except INPUT_ERRORS as exc:
        sys.stderr.write(f"descoord: error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
