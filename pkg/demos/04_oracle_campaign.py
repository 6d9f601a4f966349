"""Production algorithms against the brute-force oracle on random problems.

Every disagreement is a bug on one side or the other, so this campaign
should print zeros.  It then runs the lemma harness.
"""

import random
import sys
import time
from collections import Counter

from descoord.crosscheck import compare_conditional, compare_monolithic, compare_pipelines, compare_supremal
from descoord.instances import random_monolithic, random_problem
from descoord.lemmas import lemma_suite

n = int(sys.argv[1]) if len(sys.argv) > 1 else 200
rng = random.Random(0)
bad: Counter = Counter()
certified: Counter = Counter()
t0 = time.perf_counter()
for _ in range(n):
    mono = random_monolithic(rng)
    for d in compare_monolithic(mono) + compare_supremal(mono):
        bad[d.subject] += 1
    inst = random_problem(rng)
    for d in compare_conditional(inst.problem, inst.ambient):
        bad[d.subject] += 1
    found, flags = compare_pipelines(inst.problem)
    for d in found:
        bad[d.subject] += 1
    certified.update(k for k, v in flags.items() if v)
print(f"{n} monolithic + {n} coordination instances in {time.perf_counter() - t0:.1f}s")
print("disagreements:", dict(bad) or "none")
print("certified pipelines:", dict(certified))

print("\nlemma harness")
for r in lemma_suite(seed=0, n=100):
    print(f"  {r.name:32} {r.instances:4} draws / {r.attempts:5} attempts  {'ok' if r.holds else 'COUNTEREXAMPLE'}")
