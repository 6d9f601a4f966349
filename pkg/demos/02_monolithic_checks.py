"""Monolithic properties and their witnesses on a small plant.

The plant completes a task with ``a``, ``u a`` or ``u b``; ``u`` is
uncontrollable and unobservable.
"""

from descoord import (
    from_words,
    is_controllable,
    is_normal,
    is_observable,
    is_relatively_observable,
    sup_c_and_ro,
    sup_controllable,
    sup_relatively_observable,
    supervisor_exists,
)
from descoord.crosscheck import language_words

EV = ("a", "b", "u")
plant = from_words(["a", "u b", "u a"], EV)
sigma_u, sigma_o = {"u"}, {"a", "b"}
sigma_c = {"a", "b"}


def verdict(v):
    return "yes" if v else f"no, witness {v.witness}"


def show(g):
    ws = sorted(language_words(g), key=lambda w: (len(w), w))
    return "{" + ", ".join(" ".join(w) or "ε" for w in ws) + "}"


for spec in (["a"], ["a", "u a"], ["u b"]):
    k = from_words(spec, EV)
    print(f"K = {show(k)}")
    print("  controllable  ", verdict(is_controllable(k, plant, sigma_u)))
    print("  observable    ", verdict(is_observable(k, plant, sigma_o, sigma_c)))
    print("  normal        ", verdict(is_normal(k, plant, sigma_o)))
    v = supervisor_exists(k, plant, sigma_u, sigma_o, sigma_c)
    print("  supervisor    ", "yes" if v else f"no, fails {v.failed}")

k = from_words(["a", "u b"], EV)
c = from_words(["a", "u a", "u b"], EV)
print(f"\nK = {show(k)}, C = {show(c)}")
print("  C-observable  ", verdict(is_relatively_observable(k, c, plant, sigma_o)))
print("  supC          ", show(sup_controllable(k, plant, sigma_u).language))
r = sup_relatively_observable(k, c, plant, sigma_o)
print("  supRO         ", show(r.language), f"(iterations: {r.iterations})")
print("  supCRO        ", show(sup_c_and_ro(k, plant, sigma_u, sigma_o).language))
