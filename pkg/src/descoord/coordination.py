"""Coordination control of two subsystems and a coordinator.

A :class:`CoordinationProblem` bundles ``G1`` over Σ1, ``G2`` over Σ2, a
coordinator ``Gk`` over Σk and a specification ``K`` over Σ1 ∪ Σ2.  The
conditional properties impose the corresponding monolithic property on
``Pk(K)`` against ``L(Gk)`` and on ``Pi+k(K)`` against ``L(Gi) ∥ closure(Pk(K))``
(or ``L(Gi) ∥ L(Gk)`` for the strong variant of relative observability).
The two synthesis pipelines compute the component supervisors and certify
their combination whenever the theorem hypotheses hold.
"""

from __future__ import annotations

import warnings
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Iterable

from descoord.automata import (
    Generator,
    empty_generator,
    is_sublanguage,
    language_intersection,
    minimize,
    prefix_closure,
    project,
    sync_product,
    trim,
)
from descoord.checks import (
    InclusionError,
    generated_as_marked,
    is_controllable,
    is_lm_closed,
    is_nonconflicting,
    is_normal,
    is_observable,
    is_relatively_observable,
    require_marked_in_marked,
)
from descoord.events import EventTable
from descoord.synthesis import CancelToken, sup_c_and_ro, sup_controllable
from descoord.verdict import CompositeVerdict, Verdict

LOCAL = ("1", "2")


class NotDecomposable(ValueError):
    def __init__(self, message: str, verdict: Verdict):
        super().__init__(f"{message} (witness: {verdict.witness})")
        self.verdict = verdict


def _proj(g: Generator, events: Iterable[str]) -> Generator:
    return project(g, frozenset(events) & g.alphabet)


# --- decomposability and the coordinator ------------------------------------


def is_conditionally_decomposable(k: Generator, table: EventTable) -> Verdict:
    """``Lm(k) = P1+k(K) ∥ P2+k(K)``; the witness is a product word outside ``K``."""
    shared = table.alphabet1 & table.alphabet2
    if not shared <= table.alphabet_k:
        raise ValueError(f"shared events {sorted(shared - table.alphabet_k)} are not in the coordinator alphabet")
    sigma = table.alphabet1 | table.alphabet2
    if k.alphabet != sigma:
        raise ValueError(f"specification alphabet {sorted(k.alphabet)} differs from Σ1 ∪ Σ2 = {sorted(sigma)}")
    prod = sync_product(_proj(k, table.component("1+k")), _proj(k, table.component("2+k")))
    v = is_sublanguage(prod, k, "marked")
    return Verdict(v.holds, v.witness, "conditionally_decomposable")


def extend_coordinator_alphabet(k: Generator, table: EventTable) -> frozenset[str]:
    """Greedily grow Σk until both ``K`` and ``closure(K)`` are conditionally decomposable.

    Each step promotes one event of the current witness word, shared events
    first and then in sorted order.  Σ1 ∪ Σ2 always suffices, so this ends;
    the result is not minimal in general.
    """
    sigma = table.alphabet1 | table.alphabet2
    shared = table.alphabet1 & table.alphabet2
    current = table.alphabet_k | shared
    closure = prefix_closure(k)
    while True:
        t = table.with_alphabet_k(current)
        witness = None
        for lang in (k, closure):
            v = is_conditionally_decomposable(lang, t)
            if not v:
                witness = v.witness
                break
        if witness is None:
            return frozenset(current)
        free = sigma - current
        used = [e for e in witness.word if e in free]
        if used:
            pick = min(used, key=lambda e: (e not in shared, e))
        else:
            pick = min(free)
        current = current | {pick}


def make_coordinator(g1: Generator, g2: Generator, table: EventTable) -> Generator:
    """``Gk = Pk(G1) ∥ Pk(G2)``, which leaves ``G1 ∥ G2`` unchanged when composed with it."""
    sigma_k = table.alphabet_k
    shared = table.alphabet1 & table.alphabet2
    if not shared <= sigma_k:
        raise ValueError(f"shared events {sorted(shared - sigma_k)} are not in the coordinator alphabet")
    return sync_product(_proj(g1, sigma_k), _proj(g2, sigma_k))


# --- the problem -------------------------------------------------------------


@dataclass(frozen=True)
class CoordinationProblem:
    """Subsystems, coordinator, specification and event table of a coordination problem.

    ``gk`` defaults to :func:`make_coordinator`.  Construction checks the
    alphabet inclusions and ``K ⊆ Lm(G1 ∥ G2 ∥ Gk)``; with ``check_decomposable``
    it also requires ``K`` and ``closure(K)`` to be conditionally decomposable,
    where ``strict_closure=False`` turns the closure failure into a warning.
    """

    g1: Generator
    g2: Generator
    spec: Generator
    table: EventTable
    gk: Generator | None = None
    check_decomposable: bool = field(default=True, compare=False)
    strict_closure: bool = field(default=True, compare=False)

    def __post_init__(self) -> None:
        t = self.table
        t.check_coordination()
        if self.g1.alphabet != t.alphabet1:
            raise ValueError(f"G1 alphabet {sorted(self.g1.alphabet)} differs from Σ1 {sorted(t.alphabet1)}")
        if self.g2.alphabet != t.alphabet2:
            raise ValueError(f"G2 alphabet {sorted(self.g2.alphabet)} differs from Σ2 {sorted(t.alphabet2)}")
        if self.spec.alphabet != t.universe:
            raise ValueError(f"specification alphabet {sorted(self.spec.alphabet)} differs from Σ {list(t.events)}")
        if self.gk is None:
            object.__setattr__(self, "gk", make_coordinator(self.g1, self.g2, t))
        elif self.gk.alphabet != t.alphabet_k:
            raise ValueError(f"coordinator alphabet {sorted(self.gk.alphabet)} differs from Σk {sorted(t.alphabet_k)}")
        require_marked_in_marked(self.spec, self.plant, "coordination problem")
        if self.check_decomposable:
            v = is_conditionally_decomposable(self.spec, t)
            if not v:
                raise NotDecomposable("specification is not conditionally decomposable", v)
            v = is_conditionally_decomposable(prefix_closure(self.spec), t)
            if not v:
                if self.strict_closure:
                    raise NotDecomposable("prefix closure of the specification is not conditionally decomposable", v)
                warnings.warn(f"prefix closure of the specification is not conditionally decomposable: {v.witness}")

    @property
    def plant(self) -> Generator:
        return sync_product(sync_product(self.g1, self.g2), self.gk)

    def local(self, i: str) -> Generator:
        return self.g1 if i == "1" else self.g2

    def with_spec(self, spec: Generator) -> CoordinationProblem:
        """Same plant with another specification; decomposability is not re-checked."""
        return replace(self, spec=spec, check_decomposable=False)

    def pk(self, lang: Generator | None = None) -> Generator:
        return _proj(self.spec if lang is None else lang, self.table.alphabet_k)

    def pik(self, i: str, lang: Generator | None = None) -> Generator:
        return _proj(self.spec if lang is None else lang, self.table.component(f"{i}+k"))

    def coordinated_plant(self, i: str, coordinator_language: Generator) -> Generator:
        """``L(Gi) ∥ closure(coordinator_language)``."""
        return sync_product(self.local(i), prefix_closure(coordinator_language))


def _verdicts(name: str, parts: dict[str, Verdict]) -> CompositeVerdict:
    return CompositeVerdict(parts, name)


def _trivial(name: str) -> CompositeVerdict:
    return _verdicts(name, {part: Verdict(True, None, name) for part in ("k", "1+k", "2+k")})


def is_conditionally_controllable(p: CoordinationProblem) -> CompositeVerdict:
    name = "conditionally_controllable"
    if p.spec.is_empty():
        return _trivial(name)
    t = p.table
    pk = p.pk()
    parts = {"k": is_controllable(pk, p.gk, t.uncontrollable_in("k"))}
    for i in LOCAL:
        parts[f"{i}+k"] = is_controllable(p.pik(i), p.coordinated_plant(i, pk), t.uncontrollable_in(f"{i}+k"))
    return _verdicts(name, parts)


def is_conditionally_observable(p: CoordinationProblem) -> CompositeVerdict:
    name = "conditionally_observable"
    if p.spec.is_empty():
        return _trivial(name)
    t = p.table
    pk = p.pk()
    parts = {"k": is_observable(pk, p.gk, t.observable_in("k"), t.controllable_in("k"))}
    for i in LOCAL:
        c = f"{i}+k"
        parts[c] = is_observable(p.pik(i), p.coordinated_plant(i, pk), t.observable_in(c), t.controllable_in(c))
    return _verdicts(name, parts)


def is_conditionally_closed(p: CoordinationProblem) -> CompositeVerdict:
    name = "conditionally_closed"
    if p.spec.is_empty():
        return _trivial(name)
    pk = p.pk()
    parts = {"k": is_lm_closed(pk, p.gk)}
    for i in LOCAL:
        parts[f"{i}+k"] = is_lm_closed(p.pik(i), sync_product(p.local(i), pk))
    return _verdicts(name, parts)


def is_conditionally_normal(p: CoordinationProblem) -> CompositeVerdict:
    name = "conditionally_normal"
    if p.spec.is_empty():
        return _trivial(name)
    t = p.table
    pk = p.pk()
    parts = {"k": is_normal(pk, p.gk, t.observable_in("k"))}
    for i in LOCAL:
        c = f"{i}+k"
        parts[c] = is_normal(p.pik(i), p.coordinated_plant(i, pk), t.observable_in(c))
    return _verdicts(name, parts)


def _conditional_ro(p: CoordinationProblem, c: Generator, strong: bool) -> CompositeVerdict:
    name = "conditionally_strong_c_observable" if strong else "conditionally_c_observable"
    require_marked_in_marked(p.spec, c, name)
    require_marked_in_marked(c, p.plant, name)
    if p.spec.is_empty():
        return _trivial(name)
    t = p.table
    pk = p.pk()
    parts = {"k": is_relatively_observable(pk, p.pk(c), p.gk, t.observable_in("k"))}
    for i in LOCAL:
        comp = f"{i}+k"
        plant = sync_product(p.local(i), p.gk) if strong else p.coordinated_plant(i, pk)
        parts[comp] = is_relatively_observable(p.pik(i), p.pik(i, c), plant, t.observable_in(comp))
    return _verdicts(name, parts)


def is_conditionally_c_observable(p: CoordinationProblem, c: Generator) -> CompositeVerdict:
    """Conditional ``C``-observability; not closed under union."""
    return _conditional_ro(p, c, strong=False)


def is_conditionally_strong_c_observable(p: CoordinationProblem, c: Generator) -> CompositeVerdict:
    """Conditional strong ``C``-observability: the local ambient plant is ``L(Gi) ∥ L(Gk)``."""
    return _conditional_ro(p, c, strong=True)


# --- synthesis pipelines -----------------------------------------------------


@dataclass
class SynthesisReport:
    pipeline: str
    languages: dict[str, Generator]
    hypotheses: dict[str, Verdict]
    certified: bool
    checks: dict[str, Verdict] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def result(self) -> Generator:
        return self.languages["supCC" if self.pipeline == "cc" else "M"]

    @property
    def failed_hypotheses(self) -> list[str]:
        return [k for k, v in self.hypotheses.items() if not v.holds]


def _local_stage(p: CoordinationProblem, i: str, coordinator_language: Generator, solve) -> Generator:
    comp = f"{i}+k"
    if coordinator_language.is_empty():
        return empty_generator(p.table.component(comp))
    return solve(p.pik(i), p.coordinated_plant(i, coordinator_language), comp)


def synthesize_cc(p: CoordinationProblem, *, cancel: CancelToken | None = None) -> SynthesisReport:
    """Distributed supremal conditionally controllable sublanguage.

    ``supC_k = supC(Pk(K), L(Gk), Σk,u)`` and
    ``supC_i+k = supC(Pi+k(K), L(Gi) ∥ closure(supC_k), Σi+k,u)``; the product
    ``supC_1+k ∥ supC_2+k`` is certified to be the supremal conditionally
    controllable sublanguage when the two parts are nonconflicting and
    ``Pk(supC_1+k) ∩ Pk(supC_2+k)`` is controllable w.r.t. ``L(Gk)``.
    """
    t = p.table

    def solve(k, plant, comp):
        return sup_controllable(k, plant, t.uncontrollable_in(comp), cancel=cancel).language

    sup_k = solve(p.pk(), p.gk, "k")
    local = {i: _local_stage(p, i, sup_k, solve) for i in LOCAL}
    result = minimize(sync_product(local["1"], local["2"]))
    meet = language_intersection(p.pk(local["1"]), p.pk(local["2"]))
    hypotheses = {
        "nonconflicting": is_nonconflicting(local["1"], local["2"]),
        "coordinator_part_controllable": is_controllable(meet, p.gk, t.uncontrollable_in("k")),
    }
    checks = {f"projection_inside_supC_k[{i}]": is_sublanguage(p.pk(local[i]), sup_k, "marked") for i in LOCAL}
    certified = all(v.holds for v in hypotheses.values())
    notes = [] if certified else [f"hypothesis failed: {k}" for k, v in hypotheses.items() if not v.holds]
    return SynthesisReport(
        "cc",
        {"supC_k": sup_k, "supC_1+k": local["1"], "supC_2+k": local["2"], "supCC": result},
        hypotheses,
        certified,
        checks,
        notes,
    )


def synthesize_cro(
    p: CoordinationProblem,
    ambient: Generator | None = None,
    *,
    cancel: CancelToken | None = None,
) -> SynthesisReport:
    """Distributed controllable and relatively observable synthesis.

    ``supCRO_k = supCRO(Pk(K), L(Gk))`` and
    ``supCRO_i+k = supCRO(Pi+k(K), L(Gi) ∥ closure(supCRO_k))`` with
    ``M = supCRO_1+k ∥ supCRO_2+k``.  When the parts are nonconflicting and
    ``Pk(M)`` is controllable and ``Pk(C)``-observable w.r.t. ``L(Gk)``,
    ``M`` is conditionally controllable, conditionally observable and contains
    the supremal conditionally controllable, conditionally strong
    ``K``-observable sublanguage.  ``C`` defaults to ``M``; a supplied
    ``ambient`` must satisfy ``M ⊆ C ⊆ L(G1 ∥ G2 ∥ Gk)``.
    """
    t = p.table

    def solve(k, plant, comp):
        return sup_c_and_ro(k, plant, t.uncontrollable_in(comp), t.observable_in(comp), cancel=cancel).language

    sup_k = solve(p.pk(), p.gk, "k")
    local = {i: _local_stage(p, i, sup_k, solve) for i in LOCAL}
    m = minimize(sync_product(local["1"], local["2"]))
    pk_m = p.pk(m)
    notes: list[str] = []
    if ambient is None:
        c = m
    else:
        c = ambient
        require_marked_in_marked(m, c, "theorem ambient")
        v = is_sublanguage(c, generated_as_marked(p.plant), "marked")
        if not v:
            raise InclusionError("theorem ambient is not contained in the plant language", v.witness)
        notes.append("coordinator observability checked against the supplied ambient language")
    hypotheses = {
        "nonconflicting": is_nonconflicting(local["1"], local["2"]),
        "coordinator_part_controllable": is_controllable(pk_m, p.gk, t.uncontrollable_in("k")),
        "coordinator_part_relatively_observable": is_relatively_observable(
            pk_m, p.pk(c), p.gk, t.observable_in("k")
        ),
    }
    checks = {f"projection_inside_supCRO_k[{i}]": is_sublanguage(p.pk(local[i]), sup_k, "marked") for i in LOCAL}
    certified = all(v.holds for v in hypotheses.values())
    if not certified:
        notes.extend(f"hypothesis failed: {k}" for k, v in hypotheses.items() if not v.holds)
    return SynthesisReport(
        "cro",
        {"supCRO_k": sup_k, "supCRO_1+k": local["1"], "supCRO_2+k": local["2"], "M": m},
        hypotheses,
        certified,
        checks,
        notes,
    )


# --- supervisor realization --------------------------------------------------


@dataclass(frozen=True)
class SupervisorRealization:
    """Control-pattern reading of a closed-loop target language.

    After observing ``obs``, the supervisor enables every uncontrollable event
    and each controllable event that some observation-consistent word of
    ``closure(K)`` can extend by.
    """

    language: Generator
    controllable: frozenset[str]
    observable: frozenset[str]

    def estimate(self, observation) -> frozenset[int]:
        t = trim(self.language)
        if not t.marked:
            return frozenset()
        unobs = [e for e in t.events if e not in self.observable]

        def close(states):
            seen = set(states)
            queue = deque(seen)
            while queue:
                q = queue.popleft()
                for e in unobs:
                    r = t.trans[q].get(e)
                    if r is not None and r not in seen:
                        seen.add(r)
                        queue.append(r)
            return seen

        current = close({t.initial})
        for e in observation:
            current = close({t.trans[q][e] for q in current if e in t.trans[q]})
        return frozenset(current)

    def enabled(self, observation) -> frozenset[str]:
        t = trim(self.language)
        states = self.estimate(observation)
        uncontrollable = self.language.alphabet - self.controllable
        return frozenset(uncontrollable) | frozenset(
            e for e in self.controllable & t.alphabet if any(e in t.trans[q] for q in states)
        )


def realize_supervisors(p: CoordinationProblem, report: SynthesisReport) -> dict[str, SupervisorRealization]:
    """Control-pattern realizations for the coordinator and both local supervisors of a report."""
    t = p.table
    prefix = "supC" if report.pipeline == "cc" else "supCRO"
    out = {}
    for comp in ("k", "1+k", "2+k"):
        out[comp] = SupervisorRealization(
            report.languages[f"{prefix}_{comp}"], t.controllable_in(comp), t.observable_in(comp)
        )
    return out
