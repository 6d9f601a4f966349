"""Deterministic generators and the language operations built on them.

A generator is a deterministic automaton with a partial transition function.
``L(g)`` is the set of words along which the transition function is defined,
``Lm(g)`` the subset of those ending in a marked state.  Every operation here
is a pure function returning a new generator; states are always the integers
``0..n-1`` and, for constructed automata, numbered in breadth-first order from
the initial state with events visited in sorted order, so results are
reproducible byte for byte.
"""

from __future__ import annotations

import warnings
from collections import deque
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Sequence

from descoord.verdict import Verdict, Witness, Word

__all__ = [
    "AlphabetMismatch",
    "Generator",
    "ProjectionClipWarning",
    "accessible",
    "canonical",
    "empty_generator",
    "equivalent",
    "from_words",
    "intersect_generated",
    "is_sublanguage",
    "language_intersection",
    "language_union",
    "minimize",
    "neutral_generator",
    "prefix_closure",
    "project",
    "sync_product",
    "trim",
    "word",
]


class AlphabetMismatch(ValueError):
    def __init__(self, left: Iterable[str], right: Iterable[str], what: str = "operation"):
        left, right = frozenset(left), frozenset(right)
        self.only_left = sorted(left - right)
        self.only_right = sorted(right - left)
        super().__init__(
            f"{what} needs identical alphabets; only in first: {self.only_left}, "
            f"only in second: {self.only_right}"
        )


class ProjectionClipWarning(UserWarning):
    pass


def word(w: str | Sequence[str]) -> Word:
    """Normalise a word: a string is split on whitespace, so ``"tau a"`` is ``("tau", "a")``."""
    if isinstance(w, str):
        return tuple(w.split())
    return tuple(w)


@dataclass(frozen=True, eq=False)
class Generator:
    """Deterministic finite generator over ``alphabet`` with states ``0..n_states-1``."""

    alphabet: frozenset[str]
    n_states: int
    trans: tuple[Mapping[str, int], ...]
    marked: frozenset[int]
    initial: int = 0
    _events: tuple[str, ...] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "alphabet", frozenset(self.alphabet))
        object.__setattr__(self, "marked", frozenset(self.marked))
        object.__setattr__(self, "trans", tuple(MappingProxyType(dict(t)) for t in self.trans))
        object.__setattr__(self, "_events", tuple(sorted(self.alphabet)))
        if self.n_states < 1:
            raise ValueError("a generator needs at least one state")
        if len(self.trans) != self.n_states:
            raise ValueError("one transition map per state is required")
        if not 0 <= self.initial < self.n_states:
            raise ValueError(f"initial state {self.initial} out of range")
        bad = [q for q in self.marked if not 0 <= q < self.n_states]
        if bad:
            raise ValueError(f"marked states out of range: {sorted(bad)}")
        for q, out in enumerate(self.trans):
            for e, r in out.items():
                if e not in self.alphabet:
                    raise ValueError(f"transition ({q}, {e}) uses an event outside the alphabet")
                if not 0 <= r < self.n_states:
                    raise ValueError(f"transition ({q}, {e}) -> {r} leaves the state set")

    @classmethod
    def from_transitions(
        cls,
        alphabet: Iterable[str],
        n_states: int,
        transitions: Iterable[tuple[int, str, int]],
        marked: Iterable[int],
        initial: int = 0,
    ) -> Generator:
        trans: list[dict[str, int]] = [{} for _ in range(n_states)]
        for src, e, dst in transitions:
            if e in trans[src] and trans[src][e] != dst:
                raise ValueError(f"nondeterministic transition ({src}, {e})")
            trans[src][e] = dst
        return cls(frozenset(alphabet), n_states, tuple(trans), frozenset(marked), initial)

    @property
    def events(self) -> tuple[str, ...]:
        """Alphabet in sorted order."""
        return self._events

    def step(self, q: int, e: str) -> int | None:
        return self.trans[q].get(e)

    def run(self, w: Iterable[str]) -> int | None:
        q: int | None = self.initial
        for e in w:
            q = self.trans[q].get(e)
            if q is None:
                return None
        return q

    def generates(self, w) -> bool:
        return self.run(word(w)) is not None

    def accepts(self, w) -> bool:
        q = self.run(word(w))
        return q is not None and q in self.marked

    def transitions(self) -> Iterator[tuple[int, str, int]]:
        for q, out in enumerate(self.trans):
            for e in sorted(out):
                yield q, e, out[e]

    @property
    def n_transitions(self) -> int:
        return sum(len(t) for t in self.trans)

    def is_empty(self) -> bool:
        """True iff the marked language is empty."""
        return not (reachable_states(self) & self.marked)

    def __repr__(self) -> str:
        return (
            f"Generator(alphabet={sorted(self.alphabet)}, states={self.n_states}, "
            f"transitions={self.n_transitions}, marked={sorted(self.marked)})"
        )


def empty_generator(alphabet: Iterable[str]) -> Generator:
    """Canonical generator of the empty marked language: one unmarked state, no transitions."""
    return Generator(frozenset(alphabet), 1, ({},), frozenset())


def neutral_generator(alphabet: Iterable[str] = ()) -> Generator:
    """One marked state with a self-loop on every event: the language ``alphabet*``."""
    alphabet = frozenset(alphabet)
    return Generator(alphabet, 1, ({e: 0 for e in alphabet},), frozenset({0}))


def from_words(words: Iterable[str | Sequence[str]], alphabet: Iterable[str] | None = None) -> Generator:
    """Trie generator marking exactly ``words``; the alphabet defaults to the events used."""
    ws = sorted({word(w) for w in words})
    used = {e for w in ws for e in w}
    alphabet = frozenset(alphabet) if alphabet is not None else frozenset(used)
    if not used <= alphabet:
        raise ValueError(f"words use events outside the alphabet: {sorted(used - alphabet)}")
    if not ws:
        return empty_generator(alphabet)
    trans: list[dict[str, int]] = [{}]
    marked = set()
    for w in ws:
        q = 0
        for e in w:
            if e not in trans[q]:
                trans.append({})
                trans[q][e] = len(trans) - 1
            q = trans[q][e]
        marked.add(q)
    return canonical(Generator(alphabet, len(trans), tuple(trans), frozenset(marked)))


# --- reachability -----------------------------------------------------------


def reachable_states(g: Generator) -> set[int]:
    seen = {g.initial}
    stack = [g.initial]
    while stack:
        q = stack.pop()
        for r in g.trans[q].values():
            if r not in seen:
                seen.add(r)
                stack.append(r)
    return seen


def coreachable_states(g: Generator) -> set[int]:
    back: list[list[int]] = [[] for _ in range(g.n_states)]
    for q, out in enumerate(g.trans):
        for r in out.values():
            back[r].append(q)
    seen = set(g.marked)
    stack = list(seen)
    while stack:
        q = stack.pop()
        for p in back[q]:
            if p not in seen:
                seen.add(p)
                stack.append(p)
    return seen


def _restrict(g: Generator, keep: set[int]) -> Generator:
    """Sub-generator on ``keep`` (which must contain the initial state), canonically renumbered."""
    order: dict[int, int] = {g.initial: 0}
    queue = deque([g.initial])
    rows: list[dict[str, int]] = []
    while queue:
        q = queue.popleft()
        row: dict[str, int] = {}
        out = g.trans[q]
        for e in g.events:
            r = out.get(e)
            if r is None or r not in keep:
                continue
            if r not in order:
                order[r] = len(order)
                queue.append(r)
            row[e] = order[r]
        rows.append(row)
    marked = frozenset(order[q] for q in g.marked if q in order)
    return Generator(g.alphabet, len(rows), tuple(rows), marked)


def canonical(g: Generator) -> Generator:
    """Accessible part renumbered in BFS order; language-preserving."""
    return _restrict(g, set(range(g.n_states)))


def accessible(g: Generator) -> Generator:
    """Drop unreachable states; preserves both L and Lm."""
    return canonical(g)


def trim(g: Generator) -> Generator:
    """Keep states both reachable and co-reachable; preserves Lm and makes L = closure(Lm).

    An empty marked language yields the canonical empty generator.
    """
    keep = reachable_states(g) & coreachable_states(g)
    if g.initial not in keep:
        return empty_generator(g.alphabet)
    return _restrict(g, keep)


def prefix_closure(g: Generator) -> Generator:
    """Generator with ``Lm = L = closure(Lm(g))``.

    The closure of the empty language is empty, so an empty input stays the
    canonical empty generator (whose marked language is empty).
    """
    t = trim(g)
    if not t.marked:
        return t
    return Generator(t.alphabet, t.n_states, t.trans, frozenset(range(t.n_states)))


# --- products and projections -----------------------------------------------


def _product(g1: Generator, g2: Generator, mark) -> Generator:
    alphabet = g1.alphabet | g2.alphabet
    events = sorted(alphabet)
    a1, a2 = g1.alphabet, g2.alphabet
    start = (g1.initial, g2.initial)
    index = {start: 0}
    queue = deque([start])
    rows: list[dict[str, int]] = []
    marked = set()
    while queue:
        pair = queue.popleft()
        q1, q2 = pair
        if mark(q1 in g1.marked, q2 in g2.marked):
            marked.add(index[pair])
        row: dict[str, int] = {}
        for e in events:
            if e in a1:
                r1 = g1.trans[q1].get(e)
                if r1 is None:
                    continue
            else:
                r1 = q1
            if e in a2:
                r2 = g2.trans[q2].get(e)
                if r2 is None:
                    continue
            else:
                r2 = q2
            nxt = (r1, r2)
            if nxt not in index:
                index[nxt] = len(index)
                queue.append(nxt)
            row[e] = index[nxt]
        rows.append(row)
    return Generator(alphabet, len(rows), tuple(rows), frozenset(marked))


def sync_product(g1: Generator, g2: Generator) -> Generator:
    """Synchronous product: shared events move jointly, private events interleave."""
    return _product(g1, g2, lambda m1, m2: m1 and m2)


def project(g: Generator, target: Iterable[str]) -> Generator:
    """Natural projection onto ``target`` as a deterministic generator (subset construction).

    A subset state is marked iff it contains a marked state, which gives
    ``Lm(result) = P(Lm(g))`` next to ``L(result) = P(L(g))``.  Target events
    outside ``g.alphabet`` are dropped with a :class:`ProjectionClipWarning`.
    """
    target = frozenset(target)
    if not target <= g.alphabet:
        warnings.warn(
            f"projection target clipped to the generator alphabet; dropped {sorted(target - g.alphabet)}",
            ProjectionClipWarning,
            stacklevel=2,
        )
        target &= g.alphabet
    kept = sorted(target)
    erased = [e for e in g.events if e not in target]

    def closure(states: Iterable[int]) -> frozenset[int]:
        seen = set(states)
        stack = list(seen)
        while stack:
            q = stack.pop()
            for e in erased:
                r = g.trans[q].get(e)
                if r is not None and r not in seen:
                    seen.add(r)
                    stack.append(r)
        return frozenset(seen)

    start = closure([g.initial])
    index = {start: 0}
    queue = deque([start])
    rows: list[dict[str, int]] = []
    marked = set()
    while queue:
        subset = queue.popleft()
        if subset & g.marked:
            marked.add(index[subset])
        row: dict[str, int] = {}
        for e in kept:
            nxt = {g.trans[q][e] for q in subset if e in g.trans[q]}
            if not nxt:
                continue
            nxt = closure(nxt)
            if nxt not in index:
                index[nxt] = len(index)
                queue.append(nxt)
            row[e] = index[nxt]
        rows.append(row)
    return Generator(target, len(rows), tuple(rows), frozenset(marked))


def intersect_generated(k: Generator, l: Generator) -> Generator:
    """Trim generator of ``Lm(k) ∩ L(l)``; alphabets must be identical."""
    if k.alphabet != l.alphabet:
        raise AlphabetMismatch(k.alphabet, l.alphabet, "restriction to the plant")
    return trim(_product(k, l, lambda m1, m2: m1))


def _complete(g: Generator) -> tuple[Generator, int]:
    """Add a non-marked sink so every event is defined everywhere."""
    sink = g.n_states
    rows = [dict(t) for t in g.trans] + [{}]
    for row in rows:
        for e in g.events:
            row.setdefault(e, sink)
    return Generator(g.alphabet, sink + 1, tuple(rows), g.marked, g.initial), sink


def language_intersection(g1: Generator, g2: Generator) -> Generator:
    """Trim generator of ``Lm(g1) ∩ Lm(g2)``; alphabets must be identical."""
    if g1.alphabet != g2.alphabet:
        raise AlphabetMismatch(g1.alphabet, g2.alphabet, "intersection")
    return trim(sync_product(g1, g2))


def language_union(g1: Generator, g2: Generator) -> Generator:
    """Trim generator of ``Lm(g1) ∪ Lm(g2)``; alphabets must be identical."""
    if g1.alphabet != g2.alphabet:
        raise AlphabetMismatch(g1.alphabet, g2.alphabet, "union")
    c1, _ = _complete(trim(g1))
    c2, _ = _complete(trim(g2))
    return trim(_product(c1, c2, lambda m1, m2: m1 or m2))


# --- comparisons ------------------------------------------------------------


def _bfs_word(parents: dict, node) -> Word:
    out: list[str] = []
    while parents[node] is not None:
        node, e = parents[node]
        out.append(e)
    return tuple(reversed(out))


def is_sublanguage(g1: Generator, g2: Generator, which: str = "marked") -> Verdict:
    """Decide ``L(g1) ⊆ L(g2)`` (``which="generated"``) or ``Lm(g1) ⊆ Lm(g2)``.

    On failure the witness is a shortest word in the difference.
    """
    if which not in ("generated", "marked"):
        raise ValueError(f"which must be 'generated' or 'marked', not {which!r}")
    if g1.alphabet != g2.alphabet:
        raise AlphabetMismatch(g1.alphabet, g2.alphabet, "inclusion test")
    start = (g1.initial, g2.initial)
    parents: dict = {start: None}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        q1, q2 = node
        if q2 is None:
            if which == "generated" or q1 in g1.marked:
                return Verdict(False, Witness.of_word(_bfs_word(parents, node)), "sublanguage")
        elif which == "marked" and q1 in g1.marked and q2 not in g2.marked:
            return Verdict(False, Witness.of_word(_bfs_word(parents, node)), "sublanguage")
        for e in g1.events:
            r1 = g1.trans[q1].get(e)
            if r1 is None:
                continue
            r2 = None if q2 is None else g2.trans[q2].get(e)
            nxt = (r1, r2)
            if nxt not in parents:
                parents[nxt] = (node, e)
                queue.append(nxt)
    return Verdict(True, None, "sublanguage")


def equivalent(g1: Generator, g2: Generator, which: str = "marked") -> Verdict:
    """Language equality; the witness comes from whichever inclusion fails."""
    left = is_sublanguage(g1, g2, which)
    if not left:
        return Verdict(False, left.witness, "equivalent")
    right = is_sublanguage(g2, g1, which)
    return Verdict(right.holds, right.witness, "equivalent")


def minimize(g: Generator) -> Generator:
    """Minimal trim generator of ``Lm(g)`` (Moore partition refinement), canonically numbered."""
    t = trim(g)
    if not t.marked:
        return t
    events = t.events
    n = t.n_states
    ids: dict[bool, int] = {}
    block = [ids.setdefault(q in t.marked, len(ids)) for q in range(n)]
    n_blocks = len(ids)
    while True:
        sigs: dict[tuple, int] = {}
        new = []
        for q in range(n):
            sig = (block[q],) + tuple(
                block[t.trans[q][e]] if e in t.trans[q] else -1 for e in events
            )
            new.append(sigs.setdefault(sig, len(sigs)))
        if len(sigs) == n_blocks:
            break
        block, n_blocks = new, len(sigs)
    rows: list[dict[str, int]] = [{} for _ in range(n_blocks)]
    marked = set()
    for q in range(n):
        b = block[q]
        if q in t.marked:
            marked.add(b)
        for e, r in t.trans[q].items():
            rows[b][e] = block[r]
    return canonical(Generator(t.alphabet, n_blocks, tuple(rows), frozenset(marked), block[t.initial]))
