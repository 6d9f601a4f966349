import warnings

import pytest
from hypothesis import given, settings, strategies as st

from descoord.automata import (
    AlphabetMismatch,
    Generator,
    ProjectionClipWarning,
    accessible,
    empty_generator,
    equivalent,
    from_words,
    is_sublanguage,
    language_intersection,
    language_union,
    minimize,
    neutral_generator,
    prefix_closure,
    project,
    sync_product,
    trim,
)
from descoord.oracle import Plant, enumerate_language, proj, words_upto

from conftest import AT, lang, words

PLANT1 = prefix_closure(from_words(["a", "tau a"], AT))


def gen_upto(g, n):
    return {" ".join(w) for w in words_upto(g, n, False)}


@st.composite
def generators(draw, alphabet=("a", "b", "c"), max_states=5, all_marked=False):
    events = draw(st.lists(st.sampled_from(alphabet), min_size=1, max_size=len(alphabet), unique=True))
    n = draw(st.integers(1, max_states))
    triples = []
    for q in range(n):
        for e in sorted(events):
            r = draw(st.one_of(st.none(), st.integers(0, n - 1)))
            if r is not None:
                triples.append((q, e, r))
    marked = list(range(n)) if all_marked else draw(st.lists(st.integers(0, n - 1), unique=True))
    return Generator.from_transitions(events, n, triples, marked)


def test_trim_removes_dead_state():
    g = Generator.from_transitions(AT, 4, [(0, "a", 1), (0, "tau", 2), (2, "a", 1), (0, "a", 1), (1, "tau", 3)], [1])
    t = trim(g)
    assert t.n_states == 3
    assert words(t) == {"a", "tau a"}


def test_trim_of_empty_is_canonical_empty():
    g = Generator.from_transitions(AT, 2, [(0, "a", 1)], [])
    t = trim(g)
    assert t.n_states == 1 and not t.marked and t.n_transitions == 0


def test_trim_keeps_example_plant():
    g = minimize(PLANT1)
    before = gen_upto(g, 2)
    t = trim(g)
    assert t.n_states == 3
    assert gen_upto(t, 2) == before == {"", "a", "tau", "tau a"}


def test_accessible_keeps_blocking_states():
    g = Generator.from_transitions(AT, 3, [(0, "a", 1), (0, "tau", 2)], [1])
    assert accessible(g).n_states == 3
    assert trim(g).n_states == 2


def test_sync_product_example():
    l2 = prefix_closure(from_words(["tau"], ["tau"]))
    prod = sync_product(PLANT1, l2)
    # direct definition: P1^-1(L1) ∩ P2^-1(L2) over words of length ≤ 2
    p = Plant.product(Plant.generated(PLANT1), Plant.generated(l2))
    brute = {" ".join(w) for w in words_upto(Generator(frozenset(AT), 1, ({"a": 0, "tau": 0},), frozenset({0})), 2, False) if p(w)}
    assert gen_upto(prod, 2) == brute == {"", "a", "tau", "tau a"}


def test_sync_product_neutral_element():
    g = PLANT1
    assert equivalent(sync_product(g, neutral_generator()), g, "generated")
    assert equivalent(sync_product(g, neutral_generator()), g, "marked")


def test_sync_product_same_alphabet_is_intersection():
    g1 = lang("a", "tau", "tau a")
    g2 = lang("a", "tau a", "a tau")
    assert words(sync_product(g1, g2)) == {"a", "tau a"}


def test_project_to_coordinator():
    assert words(project(PLANT1, ["tau"])) == {"", "tau"}


def test_project_identity():
    assert equivalent(project(PLANT1, AT), PLANT1)


def test_project_union_example():
    k = lang("a", "tau")
    assert words(project(k, AT)) == {"a", "tau"}
    assert equivalent(project(k, AT), lang("a", "tau"))


def test_project_clips_with_warning():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        g = project(lang("a"), ["a", "zzz"])
    assert any(issubclass(w.category, ProjectionClipWarning) for w in caught)
    assert g.alphabet == frozenset({"a"})


def test_projection_marking_rule():
    # the subset state {after tau} is marked because it contains a marked state
    g = lang("tau a", "tau")
    assert words(project(g, ["tau"])) == {"tau"}


def test_prefix_closure_examples():
    assert words(prefix_closure(lang("a"))) == {"", "a"}
    assert words(prefix_closure(lang("tau a"))) == {"", "tau", "tau a"}
    c = prefix_closure(lang("a", "tau a"))
    assert equivalent(prefix_closure(c), c)
    assert prefix_closure(empty_generator(AT)).is_empty()


def test_union_and_intersection():
    assert words(language_union(lang("a"), lang("tau"))) == {"a", "tau"}
    k = lang("a", "tau")
    assert equivalent(language_intersection(k, k), k)
    assert words(language_intersection(lang("", "a", "tau"), lang("a", "tau a"))) == {"a"}


def test_boolean_ops_reject_alphabet_mismatch():
    with pytest.raises(AlphabetMismatch) as exc:
        language_union(lang("a"), from_words(["b"], ["a", "b"]))
    assert "b" in str(exc.value)


def test_sublanguage_examples():
    assert is_sublanguage(lang("a"), lang("a", "tau"))
    v = is_sublanguage(lang("a", "tau"), lang("a"))
    assert not v and v.witness.word == ("tau",)
    assert is_sublanguage(prefix_closure(lang("tau")), PLANT1)


def test_equivalent_examples():
    g = Generator.from_transitions(AT, 3, [(0, "a", 1)], [1])
    assert equivalent(g, trim(g))
    v = equivalent(lang("a"), lang("tau"))
    assert not v and v.witness.word == ("a",)


def test_minimize_is_canonical():
    a = minimize(lang("a", "tau a"))
    b = minimize(language_union(lang("tau a"), lang("a")))
    assert list(a.transitions()) == list(b.transitions()) and a.marked == b.marked


def test_minimize_all_marked():
    g = Generator.from_transitions(AT, 2, [(0, "a", 1), (1, "a", 0)], [0, 1])
    m = minimize(g)
    assert m.n_states == 1 and m.marked == frozenset({0})


@settings(max_examples=150, deadline=None)
@given(generators(max_states=5), generators(max_states=5))
def test_sync_product_matches_definition(g1, g2):
    n = g1.n_states * g2.n_states + 1
    n = min(n, 6)
    prod = sync_product(g1, g2)
    sigma = sorted(g1.alphabet | g2.alphabet)
    full = Generator(frozenset(sigma), 1, ({e: 0 for e in sigma},), frozenset({0}))
    p = Plant.product(Plant.generated(g1), Plant.generated(g2))
    brute = {w for w in words_upto(full, n, False) if p(w)}
    assert words_upto(prod, n, False) == brute
    pm = Plant.product(Plant.marked(g1), Plant.marked(g2))
    assert words_upto(prod, n, True) == {w for w in brute if pm(w)}


@settings(max_examples=80, deadline=None)
@given(generators(max_states=4), st.sets(st.sampled_from(("a", "b", "c"))))
def test_project_matches_erasure(g, target):
    target = frozenset(target) & g.alphabet
    pg = project(g, target)
    n = 3
    # every word of P(L(g)) up to n has a preimage within n + n·|Q| steps
    deep = words_upto(g, n + n * g.n_states + g.n_states, False)
    image = {proj(w, target) for w in deep}
    assert words_upto(pg, n, False) == {w for w in image if len(w) <= n}
    deepm = words_upto(g, n + n * g.n_states + g.n_states, True)
    assert words_upto(pg, n, True) == {proj(w, target) for w in deepm if len(proj(w, target)) <= n}


@settings(max_examples=100, deadline=None)
@given(generators(), generators(), generators())
def test_sync_product_associative_commutative(a, b, c):
    assert equivalent(sync_product(a, b), sync_product(b, a))
    assert equivalent(sync_product(sync_product(a, b), c), sync_product(a, sync_product(b, c)))
    assert equivalent(sync_product(a, b), sync_product(b, a), "generated")


@settings(max_examples=100, deadline=None)
@given(generators(alphabet=("a", "b")), generators(alphabet=("a", "b")))
def test_inclusion_both_ways_iff_equivalent(g1, g2):
    if g1.alphabet != g2.alphabet:
        return
    both = bool(is_sublanguage(g1, g2)) and bool(is_sublanguage(g2, g1))
    assert both == bool(equivalent(g1, g2))


@settings(max_examples=100, deadline=None)
@given(generators())
def test_closure_idempotent_and_minimize_preserves(g):
    c = prefix_closure(g)
    assert equivalent(prefix_closure(c), c)
    assert equivalent(minimize(g), g)
    assert enumerate_language(minimize(g), 4).words == enumerate_language(g, 4).words


@settings(max_examples=100, deadline=None)
@given(generators(alphabet=("a", "b")), generators(alphabet=("a", "b")))
def test_sublanguage_witness_is_shortest_difference(g1, g2):
    if g1.alphabet != g2.alphabet:
        return
    v = is_sublanguage(g1, g2)
    if v:
        return
    w = v.witness.word
    assert g1.accepts(w) and not g2.accepts(w)
    shorter = {x for x in words_upto(g1, len(w) - 1, True)} if w else set()
    assert all(g2.accepts(x) for x in shorter)
