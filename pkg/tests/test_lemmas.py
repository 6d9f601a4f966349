import random

import pytest

from descoord import lemmas
from descoord.checks import is_normal
from descoord.textio import parse_generator


@pytest.mark.parametrize("name", sorted(lemmas.LEMMAS))
def test_lemma_holds_on_random_draws(name):
    res = lemmas.run_lemma(name, seed=7, n=60)
    assert res.instances == 60
    assert res.holds, res.counterexamples[:1]


def test_runs_are_reproducible():
    a = lemmas.run_lemma("normality_transitivity", seed=2, n=30)
    b = lemmas.run_lemma("normality_transitivity", seed=2, n=30)
    assert (a.instances, a.attempts) == (b.instances, b.attempts)


def test_false_claim_yields_parsable_counterexamples(monkeypatch):
    # drop the hypothesis that L is normal in M; the conclusion then fails
    def careless(rng):
        alpha = ("a", "b")
        m = lemmas._closed(rng, alpha)
        l = lemmas._inside(rng, m, closed=True)
        k = lemmas._inside(rng, l)
        if k.is_empty() or not is_normal(k, l, {"a"}):
            return None
        return is_normal(k, m, {"a"}).holds, {"K": k, "L": l, "M": m}

    monkeypatch.setitem(lemmas.LEMMAS, "careless", careless)
    res = lemmas.run_lemma("careless", seed=0, n=100)
    assert not res.holds
    ce = res.counterexamples[0]
    assert set(ce) == {"K", "L", "M"}
    for text in ce.values():
        parse_generator(text)


def test_attempt_limit(monkeypatch):
    monkeypatch.setitem(lemmas.LEMMAS, "never", lambda rng: None)
    res = lemmas.run_lemma("never", seed=0, n=5, max_attempts=17)
    assert res.instances == 0 and res.attempts == 17 and res.holds


def test_product_inclusion_draw_is_sound():
    rng = random.Random(0)
    for _ in range(20):
        holds, langs = lemmas.product_inclusion(rng)
        assert holds and set(langs) == {"A", "L1", "L2"}
