"""Text formats: generator files, problem-bundle manifests and JSON reports.

A generator file::

    alphabet: a tau
    controllable: a tau
    observable: a
    states: 3
    marked: 0 1 2
    trans: 0 a 1
    trans: 0 tau 2

Sections may come in any order, ``#`` starts a comment, states are
``0..n-1`` with ``0`` initial.  Optional ``sigma1:``, ``sigma2:`` and
``sigmak:`` lines carry the coordination alphabets.  A manifest uses the
same ``key: value`` syntax with the keys ``g1``, ``g2``, ``gk``, ``spec``
and ``c`` naming generator files relative to the manifest, plus the event
table sections.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from descoord.automata import Generator
from descoord.coordination import CoordinationProblem, SynthesisReport
from descoord.events import EventTable

FORMAT_VERSION = 1

EVENT_SECTIONS = ("alphabet", "controllable", "observable", "sigma1", "sigma2", "sigmak")
GENERATOR_SECTIONS = EVENT_SECTIONS + ("states", "marked", "trans")
MANIFEST_FILES = ("g1", "g2", "gk", "spec", "c")
MANIFEST_SECTIONS = MANIFEST_FILES + EVENT_SECTIONS


class FormatError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0, path: str | None = None):
        where = f"{path or '<text>'}:{line}:{column}"
        super().__init__(f"{where}: {message}")
        self.line = line
        self.column = column
        self.path = path


def _lines(text: str, allowed: tuple[str, ...], path: str | None):
    """Yield ``(key, tokens, line, value_column, token_columns)`` for each non-blank line."""
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        if ":" not in body:
            col = len(body) - len(body.lstrip()) + 1
            raise FormatError("expected 'key: value'", lineno, col, path)
        key, _, rest = body.partition(":")
        k = key.strip()
        if k not in allowed:
            raise FormatError(f"unknown section {k!r}", lineno, len(key) - len(key.lstrip()) + 1, path)
        tokens, cols = [], []
        pos = len(key) + 1
        for tok in rest.split():
            idx = body.index(tok, pos)
            tokens.append(tok)
            cols.append(idx + 1)
            pos = idx + len(tok)
        yield k, tokens, lineno, cols


@dataclass
class GeneratorFile:
    generator: Generator
    sections: dict[str, tuple[str, ...]] = field(default_factory=dict)


def parse_generator(text: str, path: str | None = None) -> GeneratorFile:
    sections: dict[str, tuple[str, ...]] = {}
    n_states = None
    marked: list[tuple[str, int, int]] = []
    trans: list[tuple[list[str], int, list[int]]] = []
    seen: set[str] = set()
    for key, tokens, line, cols in _lines(text, GENERATOR_SECTIONS, path):
        if key == "trans":
            if len(tokens) != 3:
                raise FormatError("trans needs 'src event dst'", line, cols[0] if cols else 1, path)
            trans.append((tokens, line, cols))
            continue
        if key in seen:
            raise FormatError(f"duplicate section {key!r}", line, 1, path)
        seen.add(key)
        if key == "states":
            if len(tokens) != 1 or not tokens[0].isdigit() or int(tokens[0]) < 1:
                raise FormatError("states needs one positive integer", line, cols[0] if cols else 1, path)
            n_states = int(tokens[0])
        elif key == "marked":
            marked = [(t, line, c) for t, c in zip(tokens, cols)]
        else:
            sections[key] = tuple(tokens)
    if "alphabet" not in sections:
        raise FormatError("missing 'alphabet' section", 0, 0, path)
    if n_states is None:
        raise FormatError("missing 'states' section", 0, 0, path)
    alphabet = sections["alphabet"]
    if len(set(alphabet)) != len(alphabet):
        raise FormatError("repeated event in alphabet", 0, 0, path)

    def state(tok: str, line: int, col: int) -> int:
        if not tok.isdigit() or int(tok) >= n_states:
            raise FormatError(f"bad state {tok!r} (states are 0..{n_states - 1})", line, col, path)
        return int(tok)

    rows: list[dict[str, int]] = [{} for _ in range(n_states)]
    for (src, ev, dst), line, cols in trans:
        q = state(src, line, cols[0])
        if ev not in alphabet:
            raise FormatError(f"event {ev!r} not in alphabet", line, cols[1], path)
        r = state(dst, line, cols[2])
        if ev in rows[q] and rows[q][ev] != r:
            raise FormatError(f"nondeterministic transition on {ev!r} from {q}", line, cols[1], path)
        rows[q][ev] = r
    for key in ("controllable", "observable", "sigma1", "sigma2", "sigmak"):
        for ev in sections.get(key, ()):
            if ev not in alphabet:
                raise FormatError(f"{key} lists {ev!r} outside the alphabet", 0, 0, path)
    g = Generator(frozenset(alphabet), n_states, tuple(rows), frozenset(state(*m) for m in marked))
    return GeneratorFile(g, sections)


def read_generator(path: str | Path) -> GeneratorFile:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"cannot read generator file: {exc.strerror}", 0, 0, str(p)) from exc
    return parse_generator(text, str(p))


def format_generator(g: Generator, table: EventTable | None = None) -> str:
    """Canonical text; event attributes come from ``table`` restricted to the alphabet."""
    alpha = g.events
    lines = [f"alphabet: {' '.join(alpha)}".rstrip()]
    if table is not None:
        lines.append(f"controllable: {' '.join(e for e in alpha if e in table.controllable)}".rstrip())
        lines.append(f"observable: {' '.join(e for e in alpha if e in table.observable)}".rstrip())
    lines.append(f"states: {g.n_states}")
    lines.append(f"marked: {' '.join(str(q) for q in sorted(g.marked))}".rstrip())
    lines.extend(f"trans: {q} {e} {r}" for q, e, r in g.transitions())
    return "\n".join(lines) + "\n"


def write_generator(path: str | Path, g: Generator, table: EventTable | None = None) -> None:
    Path(path).write_text(format_generator(g, table), encoding="utf-8")


# --- bundles ----------------------------------------------------------------------


@dataclass
class Bundle:
    problem: CoordinationProblem
    ambient: Generator | None
    path: Path


def table_from_sections(sections: dict[str, tuple[str, ...]], path: str | None = None) -> EventTable:
    missing = [k for k in EVENT_SECTIONS if k not in sections]
    if missing:
        raise FormatError(f"missing event sections: {', '.join(missing)}", 0, 0, path)
    try:
        return EventTable.build(
            sections["alphabet"],
            controllable=sections["controllable"],
            observable=sections["observable"],
            alphabet1=sections["sigma1"],
            alphabet2=sections["sigma2"],
            alphabet_k=sections["sigmak"],
        )
    except ValueError as exc:
        raise FormatError(str(exc), 0, 0, path) from exc


def parse_manifest(text: str, path: str | None = None) -> tuple[dict[str, str], dict[str, tuple[str, ...]]]:
    files: dict[str, str] = {}
    sections: dict[str, tuple[str, ...]] = {}
    for key, tokens, line, cols in _lines(text, MANIFEST_SECTIONS, path):
        if key in files or key in sections:
            raise FormatError(f"duplicate key {key!r}", line, 1, path)
        if key in MANIFEST_FILES:
            if len(tokens) != 1:
                raise FormatError(f"{key} needs exactly one file name", line, cols[0] if cols else 1, path)
            files[key] = tokens[0]
        else:
            sections[key] = tuple(tokens)
    for key in ("g1", "g2", "spec"):
        if key not in files:
            raise FormatError(f"missing '{key}' entry", 0, 0, path)
    return files, sections


def load_bundle(path: str | Path, *, strict_closure: bool = True) -> Bundle:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"cannot read manifest: {exc.strerror}", 0, 0, str(p)) from exc
    files, sections = parse_manifest(text, str(p))
    table = table_from_sections(sections, str(p))
    gens = {k: read_generator(p.parent / v).generator for k, v in files.items()}
    problem = CoordinationProblem(
        gens["g1"], gens["g2"], gens["spec"], table, gk=gens.get("gk"), strict_closure=strict_closure
    )
    return Bundle(problem, gens.get("c"), p)


def format_manifest(files: dict[str, str], table: EventTable) -> str:
    lines = [f"{k}: {files[k]}" for k in MANIFEST_FILES if k in files]
    ev = table.events
    for key, members in (
        ("alphabet", ev),
        ("controllable", [e for e in ev if e in table.controllable]),
        ("observable", [e for e in ev if e in table.observable]),
        ("sigma1", [e for e in ev if e in table.alphabet1]),
        ("sigma2", [e for e in ev if e in table.alphabet2]),
        ("sigmak", [e for e in ev if e in table.alphabet_k]),
    ):
        lines.append(f"{key}: {' '.join(members)}".rstrip())
    return "\n".join(lines) + "\n"


def write_bundle(directory: str | Path, problem: CoordinationProblem, ambient: Generator | None = None,
                 *, include_gk: bool = True) -> Path:
    """Write generator files and ``problem.txt``; returns the manifest path."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    t = problem.table
    gens = {"g1": problem.g1, "g2": problem.g2, "spec": problem.spec}
    if include_gk:
        gens["gk"] = problem.gk
    if ambient is not None:
        gens["c"] = ambient
    files = {}
    for key, g in gens.items():
        files[key] = f"{key}.fsm"
        write_generator(d / files[key], g, t)
    manifest = d / "problem.txt"
    manifest.write_text(format_manifest(files, t), encoding="utf-8")
    return manifest


# --- reports ----------------------------------------------------------------------


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _versions() -> dict[str, str]:
    from descoord import __version__

    return {"descoord": __version__, "format": str(FORMAT_VERSION)}


def report_dict(report: SynthesisReport, files: dict[str, str]) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "pipeline": report.pipeline,
        "languages": files,
        "hypotheses": [
            {"name": name, **{k: v for k, v in verdict.to_dict().items() if k != "name"}}
            for name, verdict in report.hypotheses.items()
        ],
        "checks": [
            {"name": name, **{k: v for k, v in verdict.to_dict().items() if k != "name"}}
            for name, verdict in report.checks.items()
        ],
        "certified": report.certified,
        "notes": list(report.notes),
        "versions": _versions(),
    }


def language_file_name(name: str) -> str:
    return name.replace("+", "p") + ".fsm"


def write_report(directory: str | Path, report: SynthesisReport, table: EventTable | None = None) -> Path:
    """Language files plus ``report.json``; output is byte-stable for equal inputs."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    files = {}
    for name, g in report.languages.items():
        files[name] = language_file_name(name)
        write_generator(d / files[name], g, table)
    out = d / "report.json"
    out.write_text(dumps(report_dict(report, files)), encoding="utf-8")
    return out
