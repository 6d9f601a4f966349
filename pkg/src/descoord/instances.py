"""Seeded random instances: generators, finite languages and coordination problems.

Every function takes a ``random.Random`` so campaigns replay exactly from a seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable

from descoord.automata import Generator, from_words, minimize, prefix_closure, sync_product, trim
from descoord.coordination import CoordinationProblem, NotDecomposable, make_coordinator
from descoord.events import EventTable
from descoord.oracle import words_upto
from descoord.verdict import Word

EVENT_POOL = ("a", "b", "c")


def random_subset(rng: random.Random, items: Iterable[str], p: float = 0.5) -> frozenset[str]:
    return frozenset(x for x in sorted(items) if rng.random() < p)


def random_generator(
    rng: random.Random,
    alphabet: Iterable[str],
    max_states: int = 3,
    p_trans: float = 0.6,
    p_mark: float = 0.5,
    nonempty: bool = True,
) -> Generator:
    """Random deterministic generator; with ``nonempty`` its marked language is nonempty."""
    alphabet = sorted(alphabet)
    while True:
        n = rng.randint(1, max_states)
        triples = [
            (q, e, rng.randrange(n))
            for q in range(n)
            for e in alphabet
            if rng.random() < p_trans
        ]
        marked = [q for q in range(n) if rng.random() < p_mark]
        g = Generator.from_transitions(alphabet, n, triples, marked)
        if not nonempty or not trim(g).is_empty():
            return g


def words_of(g: Generator, horizon: int, which: str = "marked") -> list[Word]:
    return sorted(words_upto(g, horizon, which == "marked"), key=lambda w: (len(w), w))


def random_sublanguage(rng: random.Random, words: list[Word], max_words: int, p: float = 0.5) -> list[Word]:
    picked = [w for w in words if rng.random() < p]
    rng.shuffle(picked)
    return sorted(picked[:max_words], key=lambda w: (len(w), w))


def random_finite_language(
    rng: random.Random,
    alphabet: Iterable[str],
    max_len: int = 3,
    max_words: int = 4,
) -> Generator:
    alphabet = sorted(alphabet)
    words = set()
    for _ in range(rng.randint(0, max_words)):
        words.add(tuple(rng.choice(alphabet) for _ in range(rng.randint(0, max_len))) if alphabet else ())
    return from_words(sorted(words), alphabet)


def random_table(rng: random.Random, pool: tuple[str, ...] = EVENT_POOL) -> EventTable:
    """Two nonempty local alphabets covering 2 or 3 events, with Σk ⊇ Σ1 ∩ Σ2."""
    while True:
        events = pool[: rng.randint(2, len(pool))]
        owner = {e: rng.choice(("1", "2", "12")) for e in events}
        s1 = frozenset(e for e in events if "1" in owner[e])
        s2 = frozenset(e for e in events if "2" in owner[e])
        if s1 and s2:
            break
    shared = s1 & s2
    sk = shared | random_subset(rng, set(events) - shared, 0.3)
    return EventTable.build(
        events,
        controllable=random_subset(rng, events, 0.6),
        observable=random_subset(rng, events, 0.6),
        alphabet1=s1,
        alphabet2=s2,
        alphabet_k=sk,
    )


@dataclass(frozen=True)
class MonolithicInstance:
    """A plant, a finite specification inside it, an ambient ``K ⊆ C ⊆ L`` and event sets."""

    plant: Generator
    spec: Generator
    ambient: Generator
    sigma_u: frozenset[str]
    sigma_o: frozenset[str]
    sigma_c: frozenset[str]


def random_monolithic(
    rng: random.Random,
    max_states: int = 4,
    n_events: int = 3,
    horizon: int = 3,
    max_words: int = 6,
    inside_plant: bool = True,
) -> MonolithicInstance:
    """Finite ``K`` drawn from ``L(plant)`` (plus stray words unless ``inside_plant``)."""
    alphabet = EVENT_POOL[: rng.randint(1, n_events)]
    plant = random_generator(rng, alphabet, max_states, p_mark=1.0)
    lwords = words_of(plant, horizon, "generated")
    kw = random_sublanguage(rng, lwords, max_words)
    if not inside_plant and rng.random() < 0.5:
        stray = tuple(rng.choice(alphabet) for _ in range(rng.randint(1, horizon)))
        kw = sorted(set(kw) | {stray}, key=lambda w: (len(w), w))
    extra = random_sublanguage(rng, lwords, max_words, 0.3)
    inside = [w for w in kw if plant.generates(w)]
    cw = sorted(set(inside) | set(extra), key=lambda w: (len(w), w))
    sigma_c = random_subset(rng, alphabet, 0.6)
    return MonolithicInstance(
        plant,
        from_words(kw, alphabet),
        from_words(cw, alphabet),
        frozenset(alphabet) - sigma_c,
        random_subset(rng, alphabet, 0.5),
        sigma_c,
    )


@dataclass(frozen=True)
class ProblemInstance:
    problem: CoordinationProblem
    ambient: Generator  # K ⊆ C ⊆ Lm(G1 ∥ G2 ∥ Gk)


def random_problem(
    rng: random.Random,
    max_states: int = 3,
    horizon: int = 3,
    max_words: int = 8,
    max_tries: int = 200,
) -> ProblemInstance:
    """Random coordination problem with a finite, conditionally decomposable specification.

    ``K = A1 ∥ A2`` with ``Ai ⊆ Lm(Gi ∥ Gk)`` finite, which makes ``K``
    decomposable and contained in the plant; instances whose closure is not
    decomposable, or whose ``K`` exceeds ``max_words``, are redrawn.
    """
    for _ in range(max_tries):
        t = random_table(rng)
        g1 = random_generator(rng, t.alphabet1, max_states)
        g2 = random_generator(rng, t.alphabet2, max_states)
        gk = make_coordinator(g1, g2, t)
        parts = []
        for g, comp in ((g1, t.component("1+k")), (g2, t.component("2+k"))):
            ws = words_of(sync_product(g, gk), horizon)
            parts.append(from_words(random_sublanguage(rng, ws, 4, 0.6), comp))
        spec = trim(sync_product(parts[0], parts[1]))
        kw = words_of(spec, 2 * horizon)
        if not kw or len(kw) > max_words:
            continue
        try:
            p = CoordinationProblem(g1, g2, spec, t, gk=gk)
        except NotDecomposable:
            continue
        extra = random_sublanguage(rng, words_of(p.plant, horizon), 4, 0.3)
        ambient = from_words(sorted(set(kw) | set(extra), key=lambda w: (len(w), w)), t.events)
        return ProblemInstance(p, ambient)
    raise RuntimeError(f"no admissible coordination problem in {max_tries} draws")


def example_one(controllable: Iterable[str] = ("a", "tau")) -> tuple[CoordinationProblem, Generator, Generator, Generator]:
    """The two-subsystem example with events ``a`` and ``tau``.

    Returns the problem for ``K1 ∪ K2`` and the languages ``K1 = {a}``,
    ``K2 = {tau}``, ``C = K1 ∪ K2``.  Only ``a`` is observable; the
    controllability status is a fixture choice (all controllable by default).
    """
    events = ("a", "tau")
    t = EventTable.build(
        events,
        controllable=controllable,
        observable=["a"],
        alphabet1=events,
        alphabet2=["tau"],
        alphabet_k=["tau"],
    )
    g1 = minimize(prefix_closure(from_words(["a", "tau a"], events)))
    g2 = minimize(prefix_closure(from_words(["tau"], ["tau"])))
    k1 = from_words(["a"], events)
    k2 = from_words(["tau"], events)
    c = from_words(["a", "tau"], events)
    return CoordinationProblem(g1, g2, c, t), k1, k2, c
