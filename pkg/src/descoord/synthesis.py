"""Supremal sublanguage fixpoints: controllable, relatively observable, and both.

All three operators work on ``Lm(k) ∩ L(l)``: words of the specification that
the plant cannot generate never belong to a closed loop, and the distributed
pipelines routinely pass specifications that overshoot the local plant.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Protocol

from descoord.automata import (
    AlphabetMismatch,
    Generator,
    equivalent,
    intersect_generated,
    is_sublanguage,
    minimize,
    trim,
)
from descoord.checks import InclusionError, is_relatively_observable


class CancelToken(Protocol):
    def is_set(self) -> bool: ...


class SynthesisCancelled(RuntimeError):
    pass


class FixpointNotReached(RuntimeError):
    pass


@dataclass(frozen=True)
class SupremalResult:
    language: Generator
    iterations: int
    fixpoint_reached: bool = True
    ambient: Generator | None = None


def _check_cancel(cancel: CancelToken | None) -> None:
    if cancel is not None and cancel.is_set():
        raise SynthesisCancelled("synthesis cancelled")


def _prune(nodes: list, edges: list[dict[str, int]], initial: int, marked: set[int], alive: set[int]) -> set[int]:
    """Restrict ``alive`` to nodes reachable from ``initial`` and co-reachable to ``marked``."""
    if initial not in alive:
        return set()
    reach = {initial}
    stack = [initial]
    while stack:
        x = stack.pop()
        for y in edges[x].values():
            if y in alive and y not in reach:
                reach.add(y)
                stack.append(y)
    back: dict[int, list[int]] = {x: [] for x in reach}
    for x in reach:
        for y in edges[x].values():
            if y in reach:
                back[y].append(x)
    co = {x for x in reach if x in marked}
    stack = list(co)
    while stack:
        y = stack.pop()
        for x in back[y]:
            if x not in co:
                co.add(x)
                stack.append(x)
    return co


def _build(alphabet: frozenset[str], edges: list[dict[str, int]], initial: int, marked: set[int], alive: set[int]) -> Generator:
    if initial not in alive:
        return minimize(Generator(alphabet, 1, ({},), frozenset()))
    ids = {x: i for i, x in enumerate(sorted(alive))}
    rows = [
        {e: ids[y] for e, y in edges[x].items() if y in alive}
        for x in sorted(alive)
    ]
    gen = Generator(alphabet, len(rows), tuple(rows), frozenset(ids[x] for x in alive if x in marked), ids[initial])
    return minimize(gen)


def sup_controllable(
    k: Generator,
    l: Generator,
    sigma_u: Iterable[str],
    *,
    cancel: CancelToken | None = None,
) -> SupremalResult:
    """Supremal controllable sublanguage of ``Lm(k) ∩ L(l)`` w.r.t. ``L(l)`` and ``sigma_u``.

    Works on the product of the specification with the plant: a product state
    is deleted when an uncontrollable plant event leaves it without a matching
    specification move, then the product is trimmed, until nothing changes.
    """
    if k.alphabet != l.alphabet:
        raise AlphabetMismatch(k.alphabet, l.alphabet, "supremal controllable sublanguage")
    sigma_u = frozenset(sigma_u) & k.alphabet
    kt = intersect_generated(k, l)
    events = kt.events

    index = {(kt.initial, l.initial): 0}
    nodes = [(kt.initial, l.initial)]
    edges: list[dict[str, int]] = []
    queue = deque([0])
    while queue:
        x = queue.popleft()
        p, q = nodes[x]
        row = {}
        for e in events:
            p2 = kt.trans[p].get(e)
            if p2 is None:
                continue
            nxt = (p2, l.trans[q][e])
            if nxt not in index:
                index[nxt] = len(nodes)
                nodes.append(nxt)
                queue.append(index[nxt])
            row[e] = index[nxt]
        edges.append(row)
    while len(edges) < len(nodes):
        edges.append({})
    marked = {x for x, (p, _) in enumerate(nodes) if p in kt.marked}
    alive = _prune(nodes, edges, 0, marked, set(range(len(nodes))))
    cap = max(1, len(nodes) * max(1, len(events)))
    rounds = 0
    while True:
        _check_cancel(cancel)
        bad = {
            x
            for x in alive
            if any(
                u in l.trans[nodes[x][1]] and edges[x].get(u) not in alive
                for u in sigma_u
            )
        }
        if not bad:
            break
        rounds += 1
        if rounds > cap:
            raise FixpointNotReached(f"supremal controllable iteration exceeded {cap} rounds")
        alive = _prune(nodes, edges, 0, marked, alive - bad)
    return SupremalResult(_build(kt.alphabet, edges, 0, marked, alive), rounds, True)


def _observer_closure(h: Generator, c: Generator, l: Generator, unobs: list[str], triples) -> frozenset:
    seen = set(triples)
    stack = list(seen)
    while stack:
        hq, cq, lq = stack.pop()
        for e in unobs:
            c2 = c.trans[cq].get(e)
            l2 = l.trans[lq].get(e)
            if c2 is None or l2 is None:
                continue
            h2 = h.trans[hq].get(e, -1) if hq >= 0 else -1
            t = (h2, c2, l2)
            if t not in seen:
                seen.add(t)
                stack.append(t)
    return frozenset(seen)


def _ro_round(h: Generator, c: Generator, l: Generator, sigma_o: frozenset[str]):
    """One pruning round of supremal relative observability.

    Refines ``h`` by the observation estimate of the words ``s'``: a set of
    triples ``(h-state or -1, C-state, L-state)`` reached by words of
    ``closure(C) ∩ L`` with the same observation.  A transition ``sσ`` is
    bad when some ``s'`` in its estimate has ``s'σ ∈ L`` but
    ``s'σ ∉ closure(K)``; every C-observable sublanguage avoids all bad
    transitions, so they are removed together.
    """
    events = h.events
    unobs = [e for e in events if e not in sigma_o]
    start = (h.initial, _observer_closure(h, c, l, unobs, [(h.initial, c.initial, l.initial)]))
    index = {start: 0}
    nodes = [start]
    edges: list[dict[str, int]] = []
    n_bad = 0
    queue = deque([0])
    while queue:
        x = queue.popleft()
        hq, est = nodes[x]
        row = {}
        for e in events:
            h2 = h.trans[hq].get(e)
            if h2 is None:
                continue
            if any(
                e in l.trans[lq] and (hp < 0 or e not in h.trans[hp])
                for hp, _, lq in est
            ):
                n_bad += 1
                continue
            if e in sigma_o:
                step = []
                for hp, cq, lq in est:
                    c2 = c.trans[cq].get(e)
                    l2 = l.trans[lq].get(e)
                    if c2 is None or l2 is None:
                        continue
                    step.append((h.trans[hp].get(e, -1) if hp >= 0 else -1, c2, l2))
                est2 = _observer_closure(h, c, l, unobs, step)
            else:
                est2 = est
            nxt = (h2, est2)
            if nxt not in index:
                index[nxt] = len(nodes)
                nodes.append(nxt)
                queue.append(index[nxt])
            row[e] = index[nxt]
        edges.append(row)
    marked = {x for x, (hq, _) in enumerate(nodes) if hq in h.marked}
    return n_bad, nodes, edges, marked


def sup_relatively_observable(
    k: Generator,
    c: Generator,
    l: Generator,
    sigma_o: Iterable[str],
    *,
    cancel: CancelToken | None = None,
    max_rounds: int = 1000,
) -> SupremalResult:
    """Supremal ``C``-observable sublanguage of ``Lm(k) ∩ L(l)`` for a fixed ambient ``C``."""
    if not (k.alphabet == c.alphabet == l.alphabet):
        raise AlphabetMismatch(k.alphabet, c.alphabet if k.alphabet != c.alphabet else l.alphabet,
                               "supremal relatively observable sublanguage")
    kt = intersect_generated(k, l)
    v = is_sublanguage(kt, c, "marked")
    if not v:
        raise InclusionError("specification is not contained in the ambient language", v.witness)
    sigma_o = frozenset(sigma_o) & k.alphabet
    ct = trim(c)
    h = minimize(kt)
    rounds = 0
    while h.marked:
        _check_cancel(cancel)
        n_bad, nodes, edges, marked = _ro_round(h, ct, l, sigma_o)
        if not n_bad:
            break
        rounds += 1
        if rounds > max_rounds:
            raise FixpointNotReached(f"relative observability pruning exceeded {max_rounds} rounds")
        alive = _prune(nodes, edges, 0, marked, set(range(len(nodes))))
        h = _build(kt.alphabet, edges, 0, marked, alive)
    if not is_relatively_observable(h, c, l, sigma_o):
        raise FixpointNotReached("pruning fixpoint is not C-observable")
    return SupremalResult(h, rounds, True, c)


def sup_c_and_ro(
    k: Generator,
    l: Generator,
    sigma_u: Iterable[str],
    sigma_o: Iterable[str],
    *,
    cancel: CancelToken | None = None,
    max_rounds: int = 1000,
) -> SupremalResult:
    """Supremal sublanguage that is controllable and ``(K ∩ L)``-observable.

    The ambient ``C = Lm(k) ∩ L(l)`` is computed once and held fixed while the
    two single-property operators alternate.
    """
    ambient = intersect_generated(k, l)
    cur = minimize(ambient)
    rounds = 0
    while True:
        _check_cancel(cancel)
        rounds += 1
        if rounds > max_rounds:
            raise FixpointNotReached(f"controllable/observable alternation exceeded {max_rounds} rounds")
        a = sup_controllable(cur, l, sigma_u, cancel=cancel).language
        b = sup_relatively_observable(a, ambient, l, sigma_o, cancel=cancel).language
        if equivalent(b, cur):
            break
        cur = b
    return SupremalResult(cur, rounds, True, ambient)
