"""Brute-force reference implementations over finite word sets.

Nothing here reuses the automata algorithms under test.  Specifications and
ambient languages are finite snapshots (:class:`BoundedLanguage`), plants are
membership predicates (:class:`Plant`) that run a generator word by word or
combine other predicates through the projection definition of the
synchronous product.  Each property is evaluated by direct quantification.

For a finite specification every violation has a witness built from words
of the closure plus one event, so the verdicts are exact whenever the
snapshots are complete; otherwise they are tagged ``exact=False`` and only a
``False`` verdict is conclusive.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterable

from descoord.automata import Generator
from descoord.events import EventTable
from descoord.verdict import Verdict, Witness, Word

MAX_SUBSET_WORDS = 14

PROPERTIES = (
    "controllable",
    "observable",
    "normal",
    "relatively_observable",
    "nonconflicting",
    "lm_closed",
    "conditionally_decomposable",
    "conditionally_controllable",
    "conditionally_observable",
    "conditionally_closed",
    "conditionally_normal",
    "conditionally_c_observable",
    "conditionally_strong_c_observable",
)

FAMILIES = (
    "controllable",
    "c_observable",
    "c_and_ro",
    "conditionally_controllable",
    "conditionally_strong_c_observable",
    "conditionally_c_observable",
    "cc_and_strong_k_observable",
)

UNION_CLOSED = frozenset(FAMILIES) - {"conditionally_c_observable"}


class OracleRefusal(ValueError):
    pass


def proj(w: Word, events: frozenset[str]) -> Word:
    return tuple(e for e in w if e in events)


def prefixes(words: Iterable[Word]) -> frozenset[Word]:
    return frozenset(w[:i] for w in words for i in range(len(w) + 1))


@dataclass(frozen=True)
class BoundedLanguage:
    """Words of one language up to ``horizon``.

    ``closure_words`` holds the words of the prefix closure up to the same
    horizon.  ``complete`` means no longer word exists, so the snapshot is
    the whole language.
    """

    words: frozenset[Word]
    horizon: int
    which: str = "marked"
    source: str = ""
    complete: bool = True
    closure_words: frozenset[Word] = field(default=frozenset())

    @classmethod
    def finite(cls, words: Iterable, source: str = "") -> BoundedLanguage:
        ws = frozenset(tuple(w.split()) if isinstance(w, str) else tuple(w) for w in words)
        h = max((len(w) for w in ws), default=0)
        return cls(ws, h, "marked", source, True, prefixes(ws))

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, w) -> bool:
        return tuple(w) in self.words


def words_upto(g: Generator, horizon: int, marked_only: bool) -> set[Word]:
    """Words of ``Lm(g)`` (or ``L(g)``) of length at most ``horizon``."""
    out: set[Word] = set()
    queue = deque([((), g.initial)])
    while queue:
        w, q = queue.popleft()
        if not marked_only or q in g.marked:
            out.add(w)
        if len(w) == horizon:
            continue
        for e, r in g.trans[q].items():
            queue.append((w + (e,), r))
    return out


def enumerate_language(g: Generator, horizon: int, which: str = "marked", source: str = "") -> BoundedLanguage:
    """Exact snapshot of ``L(g)`` or ``Lm(g)`` up to ``horizon`` by breadth-first word expansion."""
    if horizon < 0:
        raise ValueError("horizon must be nonnegative")
    if which == "generated":
        words = words_upto(g, horizon, False)
        longer = words_upto(g, horizon + 1, False)
        complete = len(longer) == len(words)
        return BoundedLanguage(frozenset(words), horizon, which, source, complete, frozenset(words))
    if which != "marked":
        raise ValueError(f"which must be 'generated' or 'marked', not {which!r}")
    # a marked word longer than the horizon exists iff one exists within n more steps
    ext = words_upto(g, horizon + g.n_states, True)
    words = frozenset(w for w in ext if len(w) <= horizon)
    closure = frozenset(p for p in prefixes(ext) if len(p) <= horizon)
    return BoundedLanguage(words, horizon, which, source, len(ext) == len(words), closure)




class Plant:
    """Membership predicate for a prefix-closed plant language over ``alphabet``."""

    def __init__(self, contains: Callable[[Word], bool], alphabet: Iterable[str], name: str = ""):
        self.contains = contains
        self.alphabet = frozenset(alphabet)
        self.name = name

    def __call__(self, w: Word) -> bool:
        return self.contains(tuple(w))

    @classmethod
    def generated(cls, g: Generator) -> Plant:
        def contains(w: Word) -> bool:
            q = g.initial
            for e in w:
                q = g.trans[q].get(e)
                if q is None:
                    return False
            return True

        return cls(contains, g.alphabet, "L(g)")

    @classmethod
    def marked(cls, g: Generator) -> Plant:
        def contains(w: Word) -> bool:
            q = g.initial
            for e in w:
                q = g.trans[q].get(e)
                if q is None:
                    return False
            return q in g.marked

        return cls(contains, g.alphabet, "Lm(g)")

    @classmethod
    def words(cls, words: Iterable[Word], alphabet: Iterable[str]) -> Plant:
        ws = frozenset(words)
        return cls(lambda w: w in ws, alphabet, "words")

    @classmethod
    def product(cls, a: Plant, b: Plant) -> Plant:
        """``P_a⁻¹(a) ∩ P_b⁻¹(b)`` over the union alphabet."""
        sa, sb = a.alphabet, b.alphabet
        return cls(lambda w: a(proj(w, sa)) and b(proj(w, sb)), sa | sb, f"{a.name}∥{b.name}")


def _product_words(parts: list[tuple[frozenset[Word], frozenset[str]]]) -> set[Word]:
    """All words whose projection to each alphabet lies in the (prefix-closed, finite) set."""
    if not all(() in ws for ws, _ in parts):
        return set()
    alphabet = sorted(frozenset().union(*(a for _, a in parts)))
    out = {()}
    queue = deque([()])
    while queue:
        w = queue.popleft()
        for e in alphabet:
            w2 = w + (e,)
            if all(proj(w2, a) in ws for ws, a in parts) and w2 not in out:
                out.add(w2)
                queue.append(w2)
    return out


def _by_observation(words: Iterable[Word], sigma_o: frozenset[str]) -> dict[Word, list[Word]]:
    groups: dict[Word, list[Word]] = defaultdict(list)
    for w in sorted(words, key=lambda x: (len(x), x)):
        groups[proj(w, sigma_o)].append(w)
    return groups


def _sorted(words: Iterable[Word]) -> list[Word]:
    return sorted(words, key=lambda x: (len(x), x))


# --- monolithic properties ----------------------------------------------------


def controllable(k: BoundedLanguage, l: Plant, sigma_u: Iterable[str]) -> Verdict:
    kbar = k.closure_words
    for s in _sorted(kbar):
        if len(s) >= k.horizon and not k.complete:
            continue
        for u in sorted(frozenset(sigma_u) & l.alphabet):
            if s + (u,) not in kbar and l(s + (u,)):
                return Verdict(False, Witness.of_word(s, sigma=u), "controllable")
    return Verdict(True, None, "controllable")


def relatively_observable(
    k: BoundedLanguage,
    c: BoundedLanguage,
    l: Plant,
    sigma_o: Iterable[str],
    sigmas: Iterable[str] | None = None,
) -> Verdict:
    """Quantify ``s ∈ closure(K)``, ``s' ∈ closure(C)``, ``Q(s) = Q(s')`` and σ directly."""
    sigma_o = frozenset(sigma_o)
    sigmas = sorted(l.alphabet if sigmas is None else frozenset(sigmas))
    kbar = k.closure_words
    cgroups = _by_observation(c.closure_words, sigma_o)
    limit = None if (k.complete and c.complete) else min(k.horizon, c.horizon)
    for s in _sorted(kbar):
        for sigma in sigmas:
            if s + (sigma,) not in kbar:
                continue
            for s2 in cgroups.get(proj(s, sigma_o), ()):
                t = s2 + (sigma,)
                if limit is not None and len(t) > limit:
                    continue
                if l(t) and t not in kbar:
                    return Verdict(False, Witness.of_pair(s, s2, sigma), "relatively_observable")
    return Verdict(True, None, "relatively_observable")


def observable(
    k: BoundedLanguage,
    l: Plant,
    sigma_o: Iterable[str],
    sigma_c: Iterable[str],
    *,
    all_events: bool = False,
) -> Verdict:
    sigmas = l.alphabet if all_events else frozenset(sigma_c) & l.alphabet
    v = relatively_observable(k, k, l, sigma_o, sigmas)
    return Verdict(v.holds, v.witness, "observable")


def normal(k: BoundedLanguage, l: Plant, sigma_o: Iterable[str]) -> Verdict:
    sigma_o = frozenset(sigma_o)
    kbar = k.closure_words
    observed = {proj(w, sigma_o) for w in kbar}
    for v in _sorted(kbar):
        for e in sorted(l.alphabet):
            w = v + (e,)
            if not k.complete and len(w) > k.horizon:
                continue
            if w not in kbar and l(w) and proj(w, sigma_o) in observed:
                return Verdict(False, Witness.of_word(w), "normal")
    return Verdict(True, None, "normal")


def nonconflicting(l1: BoundedLanguage, a1: Iterable[str], l2: BoundedLanguage, a2: Iterable[str]) -> Verdict:
    a1, a2 = frozenset(a1), frozenset(a2)
    both = _product_words([(l1.closure_words, a1), (l2.closure_words, a2)])
    marked = {w for w in both if proj(w, a1) in l1.words and proj(w, a2) in l2.words}
    good = prefixes(marked)
    for w in _sorted(both):
        if w not in good:
            return Verdict(False, Witness.of_word(w), "nonconflicting")
    return Verdict(True, None, "nonconflicting")


def lm_closed(k: BoundedLanguage, lm: Plant) -> Verdict:
    for s in _sorted(k.closure_words):
        if s not in k.words and lm(s):
            return Verdict(False, Witness.of_word(s), "lm_closed")
    return Verdict(True, None, "lm_closed")


def conditionally_decomposable(k: BoundedLanguage, table: EventTable) -> Verdict:
    s1k, s2k = table.component("1+k"), table.component("2+k")
    p1 = frozenset(proj(w, s1k) for w in k.words)
    p2 = frozenset(proj(w, s2k) for w in k.words)
    both = _product_words([(prefixes(p1), s1k), (prefixes(p2), s2k)])
    for w in _sorted(both):
        if proj(w, s1k) in p1 and proj(w, s2k) in p2 and w not in k.words:
            return Verdict(False, Witness.of_word(w), "conditionally_decomposable")
    return Verdict(True, None, "conditionally_decomposable")


# --- conditional properties ------------------------------------------------------


@dataclass(frozen=True)
class CoordinationSetting:
    """The plant side of a coordination problem, as seen by the oracle."""

    g1: Generator
    g2: Generator
    gk: Generator
    table: EventTable

    def local(self, i: str) -> Generator:
        return self.g1 if i == "1" else self.g2


def _image(k: BoundedLanguage, events: frozenset[str]) -> BoundedLanguage:
    ws = frozenset(proj(w, events) for w in k.words)
    cl = frozenset(proj(w, events) for w in k.closure_words)
    return BoundedLanguage(ws, k.horizon, "marked", k.source, k.complete, cl)


def _coordinated(st: CoordinationSetting, i: str, pk: BoundedLanguage) -> Plant:
    return Plant.product(Plant.generated(st.local(i)), Plant.words(pk.closure_words, st.table.alphabet_k))


def _conditional(st: CoordinationSetting, k: BoundedLanguage, name: str, check) -> Verdict:
    t = st.table
    pk = _image(k, t.alphabet_k)
    for part in ("k", "1+k", "2+k"):
        v = check(part, pk, _image(k, t.component(part)) if part != "k" else pk)
        if not v:
            w = v.witness
            note = f"component {part}"
            w = Witness(w.kind, w.word, w.s, w.s_prime, w.sigma, note) if w else None
            return Verdict(False, w, name)
    return Verdict(True, None, name)


def conditionally_controllable(st: CoordinationSetting, k: BoundedLanguage) -> Verdict:
    t = st.table

    def check(part, pk, comp):
        if part == "k":
            return controllable(pk, Plant.generated(st.gk), t.uncontrollable_in("k"))
        return controllable(comp, _coordinated(st, part[0], pk), t.uncontrollable_in(part))

    return _conditional(st, k, "conditionally_controllable", check)


def conditionally_observable(st: CoordinationSetting, k: BoundedLanguage) -> Verdict:
    t = st.table

    def check(part, pk, comp):
        plant = Plant.generated(st.gk) if part == "k" else _coordinated(st, part[0], pk)
        return observable(comp, plant, t.observable_in(part), t.controllable_in(part))

    return _conditional(st, k, "conditionally_observable", check)


def conditionally_normal(st: CoordinationSetting, k: BoundedLanguage) -> Verdict:
    t = st.table

    def check(part, pk, comp):
        plant = Plant.generated(st.gk) if part == "k" else _coordinated(st, part[0], pk)
        return normal(comp, plant, t.observable_in(part))

    return _conditional(st, k, "conditionally_normal", check)


def conditionally_closed(st: CoordinationSetting, k: BoundedLanguage) -> Verdict:
    t = st.table

    def check(part, pk, comp):
        if part == "k":
            return lm_closed(pk, Plant.marked(st.gk))
        lm = Plant.product(Plant.marked(st.local(part[0])), Plant.words(pk.words, t.alphabet_k))
        return lm_closed(comp, lm)

    return _conditional(st, k, "conditionally_closed", check)


def _conditional_ro(st: CoordinationSetting, k: BoundedLanguage, c: BoundedLanguage, strong: bool) -> Verdict:
    t = st.table
    name = "conditionally_strong_c_observable" if strong else "conditionally_c_observable"

    def check(part, pk, comp):
        if part == "k":
            return relatively_observable(pk, _image(c, t.alphabet_k), Plant.generated(st.gk), t.observable_in("k"))
        i = part[0]
        if strong:
            plant = Plant.product(Plant.generated(st.local(i)), Plant.generated(st.gk))
        else:
            plant = _coordinated(st, i, pk)
        return relatively_observable(comp, _image(c, t.component(part)), plant, t.observable_in(part))

    return _conditional(st, k, name, check)


def conditionally_c_observable(st: CoordinationSetting, k: BoundedLanguage, c: BoundedLanguage) -> Verdict:
    return _conditional_ro(st, k, c, strong=False)


def conditionally_strong_c_observable(st: CoordinationSetting, k: BoundedLanguage, c: BoundedLanguage) -> Verdict:
    return _conditional_ro(st, k, c, strong=True)


# --- dispatch ------------------------------------------------------------------


@dataclass(frozen=True)
class OracleVerdict:
    holds: bool
    witness: Witness | None
    exact: bool
    prop: str

    def __bool__(self) -> bool:
        return self.holds


_DISPATCH = {
    "controllable": controllable,
    "observable": observable,
    "normal": normal,
    "relatively_observable": relatively_observable,
    "nonconflicting": nonconflicting,
    "lm_closed": lm_closed,
    "conditionally_decomposable": conditionally_decomposable,
    "conditionally_controllable": conditionally_controllable,
    "conditionally_observable": conditionally_observable,
    "conditionally_closed": conditionally_closed,
    "conditionally_normal": conditionally_normal,
    "conditionally_c_observable": conditionally_c_observable,
    "conditionally_strong_c_observable": conditionally_strong_c_observable,
}


def oracle_check(prop: str, *args, **kwargs) -> OracleVerdict:
    """Evaluate ``prop`` by direct quantification; ``exact`` iff every snapshot is complete."""
    if prop not in _DISPATCH:
        raise ValueError(f"unknown property {prop!r}; expected one of {PROPERTIES}")
    v = _DISPATCH[prop](*args, **kwargs)
    snapshots = [a for a in list(args) + list(kwargs.values()) if isinstance(a, BoundedLanguage)]
    exact = all(s.complete for s in snapshots)
    return OracleVerdict(v.holds, v.witness, exact, prop)


# --- supremal sublanguages ---------------------------------------------------------


def _passes(family: str, cand: BoundedLanguage, inputs: dict) -> bool:
    if family == "controllable":
        return controllable(cand, inputs["l"], inputs["sigma_u"]).holds
    if family == "c_observable":
        return relatively_observable(cand, inputs["c"], inputs["l"], inputs["sigma_o"]).holds
    if family == "c_and_ro":
        return (
            controllable(cand, inputs["l"], inputs["sigma_u"]).holds
            and relatively_observable(cand, inputs["c"], inputs["l"], inputs["sigma_o"]).holds
        )
    st = inputs["setting"]
    if family == "conditionally_controllable":
        return conditionally_controllable(st, cand).holds
    if family == "conditionally_strong_c_observable":
        return conditionally_strong_c_observable(st, cand, inputs["c"]).holds
    if family == "conditionally_c_observable":
        return conditionally_c_observable(st, cand, inputs["c"]).holds
    if family == "cc_and_strong_k_observable":
        return conditionally_controllable(st, cand).holds and conditionally_strong_c_observable(
            st, cand, inputs["c"]
        ).holds
    raise ValueError(f"unknown family {family!r}")


def passers(family: str, k: BoundedLanguage, **inputs) -> list[frozenset[Word]]:
    """Every subset of ``k`` belonging to ``family`` (exhaustive, size-capped)."""
    words = _sorted(k.words)
    if len(words) > MAX_SUBSET_WORDS:
        raise OracleRefusal(f"{len(words)} words exceed the subset-enumeration cap of {MAX_SUBSET_WORDS}")
    out = []
    for size in range(len(words), -1, -1):
        for combo in combinations(words, size):
            cand = BoundedLanguage.finite(combo)
            if _passes(family, cand, inputs):
                out.append(frozenset(combo))
    return out


def oracle_supremal(family: str, k: BoundedLanguage, *, allow_non_union_closed: bool = False, **inputs) -> BoundedLanguage:
    """Union of all sublanguages of the finite language ``k`` in ``family``.

    Inputs by family: ``l`` (a :class:`Plant`), ``sigma_u``, ``sigma_o``, ``c``
    (a :class:`BoundedLanguage`), ``setting`` (a :class:`CoordinationSetting`).
    For ``controllable`` and ``c_and_ro`` the candidates are restricted to
    words of ``l``; ``c_and_ro`` and ``cc_and_strong_k_observable`` fix the
    ambient to that restricted ``k`` unless ``c`` is given.
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
    if family not in UNION_CLOSED and not allow_non_union_closed:
        raise OracleRefusal(f"family {family!r} is not closed under union")
    if not k.complete:
        raise OracleRefusal("supremal oracle needs a complete (finite) specification snapshot")
    words = k.words
    if "l" in inputs:
        words = frozenset(w for w in words if inputs["l"](w))
    base = BoundedLanguage.finite(words, k.source)
    if len(base.words) > MAX_SUBSET_WORDS:
        raise OracleRefusal(f"{len(base.words)} words exceed the subset-enumeration cap of {MAX_SUBSET_WORDS}")
    if family in ("c_and_ro", "cc_and_strong_k_observable") and "c" not in inputs:
        inputs["c"] = base
    union: set[Word] = set()
    ordered = _sorted(base.words)
    for size in range(len(ordered), -1, -1):
        for combo in combinations(ordered, size):
            if union.issuperset(combo):
                continue
            if _passes(family, BoundedLanguage.finite(combo), inputs):
                union.update(combo)
    return BoundedLanguage.finite(union, f"sup[{family}]({k.source})")
