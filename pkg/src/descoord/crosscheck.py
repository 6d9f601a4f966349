"""Production versus oracle comparison and witness replay.

Used by the test suite, the acceptance gate and the ``oracle`` CLI command.
A :class:`Disagreement` is always a bug in one of the two sides.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from descoord import checks, coordination, oracle, synthesis
from descoord.automata import Generator, trim
from descoord.coordination import CoordinationProblem
from descoord.instances import MonolithicInstance
from descoord.oracle import BoundedLanguage, CoordinationSetting, OracleRefusal, Plant, proj
from descoord.verdict import Verdict, Witness, Word


@dataclass(frozen=True)
class Disagreement:
    subject: str
    production: object
    oracle: object
    note: str = ""

    def __str__(self) -> str:
        return f"{self.subject}: production={self.production} oracle={self.oracle} {self.note}".rstrip()


def snapshot(g: Generator, horizon: int | None = None) -> BoundedLanguage:
    """Marked-language snapshot; complete whenever ``Lm(g)`` is finite and ``horizon`` is left alone.

    A trim generator of a finite language has no word longer than its state
    count, so that is the default horizon.
    """
    return oracle.enumerate_language(g, max(1, g.n_states) if horizon is None else horizon)


def language_words(g: Generator) -> frozenset[Word]:
    s = snapshot(g)
    if not s.complete:
        raise OracleRefusal("language is infinite")
    return s.words


def _cmp(subject: str, prod: Verdict, orc: oracle.OracleVerdict) -> list[Disagreement]:
    if prod.holds == orc.holds:
        return []
    if not orc.exact and orc.holds:
        # a bounded pass is inconclusive
        return []
    return [Disagreement(subject, prod.holds, orc.holds, "" if orc.exact else "(bounded)")]


# --- witness replay -------------------------------------------------------------


def _closure_member(k: Generator, w: Word) -> bool:
    t = trim(k)
    return bool(t.marked) and t.generates(w)


def replay(prop: str, witness: Witness, k: Generator, l: Generator, *, sigma_o: Iterable[str] = (),
           c: Generator | None = None) -> bool:
    """Reconfirm a violation directly from the definition of ``prop``."""
    sigma_o = frozenset(sigma_o)
    if prop == "controllable":
        s, u = witness.word, witness.sigma
        return _closure_member(k, s) and l.generates(s + (u,)) and not _closure_member(k, s + (u,))
    if prop in ("observable", "relatively_observable"):
        amb = k if c is None else c
        s, s2, e = witness.s, witness.s_prime, witness.sigma
        return (
            proj(s, sigma_o) == proj(s2, sigma_o)
            and _closure_member(k, s + (e,))
            and _closure_member(amb, s2)
            and l.generates(s2 + (e,))
            and not _closure_member(k, s2 + (e,))
        )
    if prop == "normal":
        w = witness.word
        kbar = oracle.prefixes(language_words(k))
        observed = {proj(v, sigma_o) for v in kbar}
        return l.generates(w) and proj(w, sigma_o) in observed and w not in kbar
    if prop == "lm_closed":
        w = witness.word
        return _closure_member(k, w) and l.accepts(w) and not k.accepts(w)
    raise ValueError(f"no replay rule for {prop!r}")


# --- monolithic checks ------------------------------------------------------------


def compare_monolithic(inst: MonolithicInstance, horizon: int | None = None) -> list[Disagreement]:
    """Every monolithic check on ``inst`` against the oracle, plus witness replay."""
    k, l, c = inst.spec, inst.plant, inst.ambient
    ks, cs = snapshot(k, horizon), snapshot(c, horizon)
    lp = Plant.generated(l)
    out: list[Disagreement] = []
    if not all(l.generates(w) for w in ks.words):
        return out
    runs = [
        ("controllable", checks.is_controllable(k, l, inst.sigma_u),
         oracle.oracle_check("controllable", ks, lp, inst.sigma_u), {}),
        ("observable", checks.is_observable(k, l, inst.sigma_o, inst.sigma_c),
         oracle.oracle_check("observable", ks, lp, inst.sigma_o, inst.sigma_c), {"sigma_o": inst.sigma_o}),
        ("normal", checks.is_normal(k, l, inst.sigma_o),
         oracle.oracle_check("normal", ks, lp, inst.sigma_o), {"sigma_o": inst.sigma_o}),
        ("relatively_observable", checks.is_relatively_observable(k, c, l, inst.sigma_o),
         oracle.oracle_check("relatively_observable", ks, cs, lp, inst.sigma_o), {"sigma_o": inst.sigma_o, "c": c}),
    ]
    for name, prod, orc, extra in runs:
        out += _cmp(name, prod, orc)
        if not prod.holds and ks.complete and not replay(name, prod.witness, k, l, **extra):
            out.append(Disagreement(f"{name} witness", str(prod.witness), "does not replay"))
    lm = checks.generated_as_marked(l)
    prod = checks.is_lm_closed(k, lm)
    out += _cmp("lm_closed", prod, oracle.oracle_check("lm_closed", ks, Plant.marked(lm)))
    if not (ks.complete and cs.complete):
        # truncated product closures can look blocking
        return out
    prod = checks.is_nonconflicting(k, c)
    out += _cmp("nonconflicting", prod, oracle.oracle_check("nonconflicting", ks, k.alphabet, cs, c.alphabet))
    return out


def compare_supremal(inst: MonolithicInstance) -> list[Disagreement]:
    """The three supremal operators against union-of-passers."""
    k, l, c = inst.spec, inst.plant, inst.ambient
    ks = snapshot(k)
    lp = Plant.generated(l)
    out = []
    pairs = [
        ("sup_controllable", synthesis.sup_controllable(k, l, inst.sigma_u).language,
         oracle.oracle_supremal("controllable", ks, l=lp, sigma_u=inst.sigma_u)),
        ("sup_relatively_observable", synthesis.sup_relatively_observable(k, c, l, inst.sigma_o).language,
         oracle.oracle_supremal("c_observable", ks, l=lp, c=snapshot(c), sigma_o=inst.sigma_o)),
        ("sup_c_and_ro", synthesis.sup_c_and_ro(k, l, inst.sigma_u, inst.sigma_o).language,
         oracle.oracle_supremal("c_and_ro", ks, l=lp, sigma_u=inst.sigma_u, sigma_o=inst.sigma_o)),
    ]
    for name, prod, orc in pairs:
        pw = language_words(prod)
        if pw != orc.words:
            out.append(Disagreement(name, sorted(pw), sorted(orc.words)))
    return out


# --- coordination -----------------------------------------------------------------


def setting_of(p: CoordinationProblem) -> CoordinationSetting:
    return CoordinationSetting(p.g1, p.g2, p.gk, p.table)


def compare_conditional(p: CoordinationProblem, c: Generator | None = None,
                        horizon: int | None = None) -> list[Disagreement]:
    """Decomposability and the six conditional properties against the oracle."""
    st = setting_of(p)
    ks = snapshot(p.spec, horizon)
    cs = snapshot(c, horizon) if c is not None else ks
    if not (ks.complete and cs.complete):
        raise OracleRefusal("conditional comparisons need finite specification and ambient languages")
    c = p.spec if c is None else c
    runs = [
        ("conditionally_decomposable", coordination.is_conditionally_decomposable(p.spec, p.table),
         oracle.oracle_check("conditionally_decomposable", ks, p.table)),
        ("conditionally_controllable", coordination.is_conditionally_controllable(p),
         oracle.oracle_check("conditionally_controllable", st, ks)),
        ("conditionally_observable", coordination.is_conditionally_observable(p),
         oracle.oracle_check("conditionally_observable", st, ks)),
        ("conditionally_closed", coordination.is_conditionally_closed(p),
         oracle.oracle_check("conditionally_closed", st, ks)),
        ("conditionally_normal", coordination.is_conditionally_normal(p),
         oracle.oracle_check("conditionally_normal", st, ks)),
        ("conditionally_c_observable", coordination.is_conditionally_c_observable(p, c),
         oracle.oracle_check("conditionally_c_observable", st, ks, cs)),
        ("conditionally_strong_c_observable", coordination.is_conditionally_strong_c_observable(p, c),
         oracle.oracle_check("conditionally_strong_c_observable", st, ks, cs)),
    ]
    out = []
    for name, prod, orc in runs:
        out += _cmp(name, Verdict(prod.holds, prod.witness, name), orc)
    return out


def compare_pipelines(p: CoordinationProblem) -> tuple[list[Disagreement], dict[str, bool]]:
    """Certified pipeline outputs against the oracle supremal sublanguages.

    Returns the disagreements and the certification flags of both pipelines.
    """
    st = setting_of(p)
    ks = snapshot(p.spec)
    out: list[Disagreement] = []
    cc = coordination.synthesize_cc(p)
    if cc.certified:
        want = oracle.oracle_supremal("conditionally_controllable", ks, setting=st).words
        got = language_words(cc.result)
        if got != want:
            out.append(Disagreement("supCC", sorted(got), sorted(want)))
    cro = coordination.synthesize_cro(p)
    if cro.certified:
        m = cro.result
        pm = p.with_spec(m)
        for name, fn in (("conditionally_controllable", coordination.is_conditionally_controllable),
                         ("conditionally_observable", coordination.is_conditionally_observable)):
            if not fn(pm):
                out.append(Disagreement(f"M {name}", False, True, "certified M fails the re-check"))
        sub = oracle.oracle_supremal("cc_and_strong_k_observable", ks, setting=st).words
        got = language_words(m)
        if not sub <= got:
            out.append(Disagreement("supcCSRO ⊆ M", sorted(got), sorted(sub)))
    for rep in (cc, cro):
        for name, v in rep.checks.items():
            if not v:
                out.append(Disagreement(f"{rep.pipeline} {name}", False, True))
    return out, {"cc": cc.certified, "cro": cro.certified}
