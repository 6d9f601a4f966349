"""Two subsystems sharing one unobservable event.

G1 can do ``a`` directly or after ``tau``; G2 can only do ``tau``.  Only
``a`` is observable.  We look at three specifications: only ``a``, only
``tau``, and their union, and ask which conditional properties survive.
"""

from descoord import (
    is_conditionally_c_observable,
    is_conditionally_normal,
    is_conditionally_strong_c_observable,
    realize_supervisors,
    synthesize_cc,
    synthesize_cro,
)
from descoord.automata import language_union
from descoord.crosscheck import language_words
from descoord.instances import example_one


def show(g):
    ws = sorted(language_words(g), key=lambda w: (len(w), w))
    return "{" + ", ".join(" ".join(w) or "ε" for w in ws) + "}"


p, k1, k2, c = example_one()
print("coordinator language:", show(p.gk), "over", sorted(p.gk.alphabet))

print("\nweak conditional C-observability (C = K1 ∪ K2)")
for label, k in (("K1", k1), ("K2", k2), ("K1 ∪ K2", language_union(k1, k2))):
    v = is_conditionally_c_observable(p.with_spec(k), c)
    print(f"  {label:8} {v.holds!s:5}", f"fails at {v.failed}: {v.witness}" if not v else "")

# Both pieces pass yet the union fails: the weak family has no supremal element.
print("\nstrong variant")
for label, k in (("K1", k1), ("K2", k2)):
    print(f"  {label:8} {is_conditionally_strong_c_observable(p.with_spec(k), c).holds}")
print("  K2 conditionally normal:", is_conditionally_normal(p.with_spec(k2)).holds)

print("\nsynthesis for K = K1 ∪ K2")
cc = synthesize_cc(p)
print("  supCC =", show(cc.result), "certified:", cc.certified)
cro = synthesize_cro(p)
for name in ("supCRO_k", "supCRO_1+k", "supCRO_2+k", "M"):
    print(f"  {name:11} {show(cro.languages[name])}")
print("  certified:", cro.certified)

sup = realize_supervisors(p, cro)
print("\nlocal supervisor 1+k, events enabled after each observation")
for obs in ((), ("a",)):
    print(f"  seen {' '.join(obs) or 'nothing':8} -> {sorted(sup['1+k'].enabled(obs))}")
