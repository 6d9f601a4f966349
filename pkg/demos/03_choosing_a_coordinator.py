"""Picking the coordinator alphabet.

The specification forces ``a`` before ``b`` although the two events live in
different subsystems.  With no shared events the specification does not
split, so the coordinator has to observe more.
"""

from descoord import (
    CoordinationProblem,
    EventTable,
    equivalent,
    extend_coordinator_alphabet,
    from_words,
    is_conditionally_decomposable,
    prefix_closure,
    sync_product,
)

EV = ("a", "b")
table = EventTable.build(EV, controllable=EV, observable=EV, alphabet1=["a"], alphabet2=["b"], alphabet_k=[])
k = from_words(["a b"], EV)

v = is_conditionally_decomposable(k, table)
print("decomposable with Σk = ∅:", v.holds, f"(extra word {v.witness})" if not v else "")

sk = extend_coordinator_alphabet(k, table)
table = table.with_alphabet_k(sk)
print("greedy extension gives Σk =", sorted(sk))
print("decomposable now:", is_conditionally_decomposable(k, table).holds)

g1 = prefix_closure(from_words(["a"], ["a"]))
g2 = prefix_closure(from_words(["b"], ["b"]))
p = CoordinationProblem(g1, g2, k, table)
print("coordinator states:", p.gk.n_states, "events:", sorted(p.gk.alphabet))

with_gk = sync_product(p.plant, p.gk)
print("coordinator leaves the plant unchanged:", bool(equivalent(with_gk, sync_product(g1, g2))))
