"""Decision procedures, with witnesses, for the monolithic supervisory-control properties.

Languages are passed as generators: the specification (and ambient ``C``) by
its marked language, the plant by its generated language ``L(l)``.  Every
``False`` verdict carries a shortest witness found by breadth-first search.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable

from descoord.automata import (
    AlphabetMismatch,
    Generator,
    coreachable_states,
    is_sublanguage,
    prefix_closure,
    project,
    sync_product,
    trim,
)
from descoord.verdict import CompositeVerdict, Verdict, Witness

DEFAULT_STATE_CAP = 250_000


class InclusionError(ValueError):
    """A language inclusion required as a precondition does not hold."""

    def __init__(self, message: str, witness: Witness | None = None):
        super().__init__(f"{message} (counterexample: {witness})" if witness else message)
        self.witness = witness


class StateSpaceTooLarge(RuntimeError):
    pass


class EmptySpecification(ValueError):
    pass


def _same_alphabet(*gens: Generator, what: str) -> None:
    first = gens[0]
    for g in gens[1:]:
        if g.alphabet != first.alphabet:
            raise AlphabetMismatch(first.alphabet, g.alphabet, what)


def generated_as_marked(g: Generator) -> Generator:
    """Same automaton with every state marked, so its marked language is ``L(g)``."""
    return Generator(g.alphabet, g.n_states, g.trans, frozenset(range(g.n_states)), g.initial)


def require_marked_in_generated(k: Generator, l: Generator, what: str) -> None:
    v = is_sublanguage(k, generated_as_marked(l), "marked")
    if not v:
        raise InclusionError(f"{what}: specification is not contained in the plant language", v.witness)


def require_marked_in_marked(k: Generator, c: Generator, what: str) -> None:
    v = is_sublanguage(k, c, "marked")
    if not v:
        raise InclusionError(f"{what}: inclusion of marked languages fails", v.witness)


def _path(parents: dict, node) -> list:
    moves = []
    while parents[node] is not None:
        node, move = parents[node]
        moves.append(move)
    moves.reverse()
    return moves


def is_controllable(k: Generator, l: Generator, sigma_u: Iterable[str]) -> Verdict:
    """``closure(K)·Σu ∩ L ⊆ closure(K)``; the witness is ``s`` with the escaping event ``u``."""
    _same_alphabet(k, l, what="controllability")
    require_marked_in_generated(k, l, "controllability")
    sigma_u = frozenset(sigma_u) & k.alphabet
    t = trim(k)
    if not t.marked or not sigma_u:
        return Verdict(True, None, "controllable")
    start = (t.initial, l.initial)
    parents: dict = {start: None}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        p, q = node
        for e in t.events:
            r = l.trans[q].get(e)
            p2 = t.trans[p].get(e)
            if p2 is None:
                if e in sigma_u and r is not None:
                    s = tuple(_path(parents, node))
                    return Verdict(False, Witness.of_word(s, "uncontrollable exit from closure(K)", e), "controllable")
                continue
            nxt = (p2, r)
            if nxt not in parents:
                parents[nxt] = (node, e)
                queue.append(nxt)
    return Verdict(True, None, "controllable")


def _twin_search(
    kt: Generator,
    ct: Generator,
    l: Generator,
    sigma_o: frozenset[str],
    sigmas: Iterable[str],
    cap: int,
) -> Witness | None:
    """Search pairs ``s ∈ closure(K)``, ``s' ∈ closure(C) ∩ L`` with equal observations.

    A twin state is ``(K-state of s, C-state of s', K-state of s' or -1,
    L-state of s')``; observable events move both words, unobservable ones
    move either.  Returns the first violation: ``sσ ∈ closure(K)``,
    ``s'σ ∈ L`` and ``s'σ ∉ closure(K)``.
    """
    sigmas = sorted(set(sigmas))
    events = kt.events
    start = (kt.initial, ct.initial, kt.initial, l.initial)
    parents: dict = {start: None}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        p, c, pk, q = node
        for sigma in sigmas:
            if (
                sigma in kt.trans[p]
                and sigma in l.trans[q]
                and (pk < 0 or sigma not in kt.trans[pk])
            ):
                s, s2 = [], []
                for who, e in _path(parents, node):
                    if who in ("s", "both"):
                        s.append(e)
                    if who in ("t", "both"):
                        s2.append(e)
                return Witness.of_pair(s, s2, sigma, "observation-equal words disagree on the continuation")
        for e in events:
            p2 = kt.trans[p].get(e)
            c2 = ct.trans[c].get(e)
            q2 = l.trans[q].get(e)
            pk2 = -1 if pk < 0 else kt.trans[pk].get(e, -1)
            if e in sigma_o:
                moves = [(("both", e), (p2, c2, pk2, q2))] if p2 is not None and c2 is not None and q2 is not None else []
            else:
                moves = []
                if p2 is not None:
                    moves.append((("s", e), (p2, c, pk, q)))
                if c2 is not None and q2 is not None:
                    moves.append((("t", e), (p, c2, pk2, q2)))
            for move, nxt in moves:
                if nxt not in parents:
                    if len(parents) >= cap:
                        raise StateSpaceTooLarge(f"twin construction exceeded {cap} states")
                    parents[nxt] = (node, move)
                    queue.append(nxt)
    return None


def is_observable(
    k: Generator,
    l: Generator,
    sigma_o: Iterable[str],
    sigma_c: Iterable[str],
    *,
    all_events: bool = False,
    cap: int = DEFAULT_STATE_CAP,
) -> Verdict:
    """Observability of ``Lm(k)`` w.r.t. ``L(l)``, quantifying σ over Σc (or Σ with ``all_events``)."""
    _same_alphabet(k, l, what="observability")
    require_marked_in_generated(k, l, "observability")
    t = trim(k)
    if not t.marked:
        return Verdict(True, None, "observable")
    sigmas = k.alphabet if all_events else frozenset(sigma_c) & k.alphabet
    w = _twin_search(t, t, l, frozenset(sigma_o) & k.alphabet, sigmas, cap)
    return Verdict(w is None, w, "observable")


def is_relatively_observable(
    k: Generator,
    c: Generator,
    l: Generator,
    sigma_o: Iterable[str],
    *,
    cap: int = DEFAULT_STATE_CAP,
) -> Verdict:
    """``C``-observability of ``Lm(k)`` w.r.t. ``L(l)``, σ ranging over the whole alphabet.

    ``C`` need not lie inside ``L``: words of ``closure(C)`` outside ``L`` can
    never extend into ``L`` and so never witness a violation.
    """
    _same_alphabet(k, c, l, what="relative observability")
    require_marked_in_marked(k, c, "relative observability")
    require_marked_in_generated(k, l, "relative observability")
    t = trim(k)
    if not t.marked:
        return Verdict(True, None, "relatively_observable")
    w = _twin_search(t, trim(c), l, frozenset(sigma_o) & k.alphabet, k.alphabet, cap)
    return Verdict(w is None, w, "relatively_observable")


def is_normal(k: Generator, l: Generator, sigma_o: Iterable[str]) -> Verdict:
    """``closure(K) = Q⁻¹Q(closure(K)) ∩ L``; the witness lies in the right side only."""
    _same_alphabet(k, l, what="normality")
    require_marked_in_generated(k, l, "normality")
    sigma_o = frozenset(sigma_o) & k.alphabet
    t = trim(k)
    if not t.marked:
        return Verdict(True, None, "normal")
    d = project(prefix_closure(t), sigma_o)
    start = (d.initial, l.initial, t.initial)
    parents: dict = {start: None}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        dq, q, p = node
        for e in t.events:
            q2 = l.trans[q].get(e)
            if q2 is None:
                continue
            if e in sigma_o:
                d2 = d.trans[dq].get(e)
                if d2 is None:
                    continue
            else:
                d2 = dq
            p2 = t.trans[p].get(e)
            if p2 is None:
                w = tuple(_path(parents, node)) + (e,)
                return Verdict(False, Witness.of_word(w, "in Q⁻¹Q(closure(K)) ∩ L but not in closure(K)"), "normal")
            nxt = (d2, q2, p2)
            if nxt not in parents:
                parents[nxt] = (node, e)
                queue.append(nxt)
    return Verdict(True, None, "normal")


def is_nonconflicting(g1: Generator, g2: Generator) -> Verdict:
    """``closure(L1 ∥ L2) = closure(L1) ∥ closure(L2)`` for the marked languages."""
    t1, t2 = trim(g1), trim(g2)
    if not t1.marked or not t2.marked:
        return Verdict(True, None, "nonconflicting")
    prod = sync_product(t1, t2)
    good = coreachable_states(prod)
    parents: dict = {prod.initial: None}
    queue = deque([prod.initial])
    while queue:
        q = queue.popleft()
        if q not in good:
            w = tuple(_path(parents, q))
            return Verdict(False, Witness.of_word(w, "blocking word of the product of closures"), "nonconflicting")
        for e in prod.events:
            r = prod.trans[q].get(e)
            if r is not None and r not in parents:
                parents[r] = (q, e)
                queue.append(r)
    return Verdict(True, None, "nonconflicting")


def is_lm_closed(k: Generator, g: Generator) -> Verdict:
    """``K = closure(K) ∩ Lm(G)``; the witness is in ``closure(K) ∩ Lm(G)`` but not in ``K``."""
    _same_alphabet(k, g, what="Lm-closedness")
    require_marked_in_marked(k, g, "Lm-closedness")
    t = trim(k)
    if not t.marked:
        return Verdict(True, None, "lm_closed")
    start = (t.initial, g.initial)
    parents: dict = {start: None}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        p, q = node
        if q in g.marked and p not in t.marked:
            w = tuple(_path(parents, node))
            return Verdict(False, Witness.of_word(w, "prefix of K marked by the plant"), "lm_closed")
        for e in t.events:
            p2 = t.trans[p].get(e)
            q2 = g.trans[q].get(e)
            if p2 is None or q2 is None:
                continue
            if (p2, q2) not in parents:
                parents[(p2, q2)] = (node, e)
                queue.append((p2, q2))
    return Verdict(True, None, "lm_closed")


def supervisor_exists(
    k: Generator,
    g: Generator,
    sigma_u: Iterable[str],
    sigma_o: Iterable[str],
    sigma_c: Iterable[str] | None = None,
) -> CompositeVerdict:
    """Controllability, ``Lm(G)``-closedness and observability (σ ∈ Σc) of a nonempty ``K``."""
    if trim(k).is_empty():
        raise EmptySpecification("supervisor existence is undefined for the empty specification")
    require_marked_in_marked(k, g, "supervisor existence")
    if sigma_c is None:
        sigma_c = k.alphabet - frozenset(sigma_u)
    return CompositeVerdict(
        {
            "controllable": is_controllable(k, g, sigma_u),
            "lm_closed": is_lm_closed(k, g),
            "observable": is_observable(k, g, sigma_o, sigma_c),
        },
        "supervisor_exists",
    )
