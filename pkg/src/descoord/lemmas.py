"""Randomized harness for the auxiliary lemmas behind the coordination theorems.

Each lemma draws random languages, keeps only draws that satisfy its
hypotheses, and checks the conclusion with the production decision
procedures.  A failing draw is returned as a counterexample with its
languages serialized in the generator text format.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable

from descoord.automata import (
    Generator,
    is_sublanguage,
    language_intersection,
    language_union,
    prefix_closure,
    project,
    sync_product,
    trim,
)
from descoord.checks import is_controllable, is_nonconflicting, is_normal
from descoord.coordination import synthesize_cro
from descoord.instances import EVENT_POOL, random_generator, random_problem, random_subset
from descoord.textio import format_generator

# a draw returns None when the hypotheses fail, else (conclusion holds, named languages)
Draw = Callable[[random.Random], "tuple[bool, dict[str, Generator]] | None"]


@dataclass
class LemmaResult:
    name: str
    instances: int = 0
    attempts: int = 0
    counterexamples: list[dict[str, str]] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return not self.counterexamples


def _alphabet(rng: random.Random) -> tuple[str, ...]:
    return EVENT_POOL[: rng.randint(1, len(EVENT_POOL))]


def _closed(rng: random.Random, alphabet, max_states: int = 3) -> Generator:
    return prefix_closure(random_generator(rng, alphabet, max_states, p_trans=0.7, p_mark=1.0))


def _inside(rng: random.Random, outer: Generator, closed: bool = False) -> Generator:
    """Random sublanguage of ``Lm(outer)``, prefix-closed on request."""
    g = random_generator(rng, outer.alphabet, 3, p_trans=0.8, p_mark=1.0 if closed else 0.5, nonempty=False)
    return trim(language_intersection(g, outer))


def _local_pair(rng: random.Random):
    while True:
        s1 = random_subset(rng, EVENT_POOL, 0.6)
        s2 = random_subset(rng, EVENT_POOL, 0.6)
        if s1 and s2:
            return s1, s2


def normality_transitivity(rng: random.Random):
    alpha = _alphabet(rng)
    sigma_o = random_subset(rng, alpha, 0.6)
    m = _closed(rng, alpha)
    l = _inside(rng, m, closed=True)
    k = _inside(rng, l)
    if k.is_empty() or not is_normal(k, l, sigma_o) or not is_normal(l, m, sigma_o):
        return None
    return is_normal(k, m, sigma_o).holds, {"K": k, "L": l, "M": m}


def normality_of_composition(rng: random.Random):
    s1, s2 = _local_pair(rng)
    sigma_o = random_subset(rng, s1 | s2, 0.6)
    l1, l2 = _closed(rng, s1), _closed(rng, s2)
    k1, k2 = _inside(rng, l1), _inside(rng, l2)
    if k1.is_empty() or k2.is_empty():
        return None
    if not (is_normal(k1, l1, sigma_o & s1) and is_normal(k2, l2, sigma_o & s2) and is_nonconflicting(k1, k2)):
        return None
    holds = is_normal(sync_product(k1, k2), sync_product(l1, l2), sigma_o).holds
    return holds, {"K1": k1, "K2": k2, "L1": l1, "L2": l2}


def controllability_of_composition(rng: random.Random):
    s1, s2 = _local_pair(rng)
    sigma_u = random_subset(rng, s1 | s2, 0.5)
    l1, l2 = _closed(rng, s1), _closed(rng, s2)
    k1, k2 = _inside(rng, l1), _inside(rng, l2)
    if k1.is_empty() or k2.is_empty():
        return None
    if not (is_controllable(k1, l1, sigma_u & s1) and is_controllable(k2, l2, sigma_u & s2)
            and is_nonconflicting(k1, k2)):
        return None
    holds = is_controllable(sync_product(k1, k2), sync_product(l1, l2), sigma_u).holds
    return holds, {"K1": k1, "K2": k2, "L1": l1, "L2": l2}


def controllability_transitivity(rng: random.Random):
    alpha = _alphabet(rng)
    sigma_u = random_subset(rng, alpha, 0.5)
    m = random_generator(rng, alpha, 3, p_trans=0.7)
    l = _inside(rng, trim(m))
    k = _inside(rng, l)
    if k.is_empty():
        return None
    lbar, mbar = prefix_closure(l), prefix_closure(m)
    if not is_controllable(k, lbar, sigma_u) or not is_controllable(l, mbar, sigma_u):
        return None
    return is_controllable(k, mbar, sigma_u).holds, {"K": k, "L": l, "M": m}


def product_inclusion(rng: random.Random):
    s1, s2 = _local_pair(rng)
    a = random_generator(rng, s1 | s2, 3, p_trans=0.6)
    l1 = language_union(project(a, s1), random_generator(rng, s1, 2, nonempty=False))
    l2 = language_union(project(a, s2), random_generator(rng, s2, 2, nonempty=False))
    return is_sublanguage(a, sync_product(l1, l2), "marked").holds, {"A": a, "L1": l1, "L2": l2}


def coordinator_part_inclusion(rng: random.Random):
    p = random_problem(rng).problem
    report = synthesize_cro(p)
    sup_k = report.languages["supCRO_k"]
    holds = all(is_sublanguage(p.pk(report.languages[f"supCRO_{i}+k"]), sup_k, "marked").holds for i in "12")
    return holds, {"G1": p.g1, "G2": p.g2, "Gk": p.gk, "K": p.spec}


LEMMAS: dict[str, Draw] = {
    "normality_transitivity": normality_transitivity,
    "normality_of_composition": normality_of_composition,
    "controllability_of_composition": controllability_of_composition,
    "controllability_transitivity": controllability_transitivity,
    "product_inclusion": product_inclusion,
    "coordinator_part_inclusion": coordinator_part_inclusion,
}


def run_lemma(name: str, seed: int, n: int = 200, max_attempts: int | None = None) -> LemmaResult:
    """Check ``name`` on ``n`` hypothesis-satisfying draws from ``seed``."""
    rng = random.Random(f"{name}:{seed}")
    draw = LEMMAS[name]
    res = LemmaResult(name)
    limit = max_attempts if max_attempts is not None else 200 * n
    while res.instances < n and res.attempts < limit:
        res.attempts += 1
        out = draw(rng)
        if out is None:
            continue
        res.instances += 1
        holds, langs = out
        if not holds:
            res.counterexamples.append({k: format_generator(g) for k, g in langs.items()})
    return res


def lemma_suite(seed: int = 0, n: int = 200) -> list[LemmaResult]:
    return [run_lemma(name, seed, n) for name in LEMMAS]
