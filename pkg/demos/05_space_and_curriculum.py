"""Estimate the problem-space size and drive the curriculum scheduler.

The collision estimator is first validated on a synthetic space of known
size, then pointed at a real configuration.  The scheduler demo masters
tasks one by one and prints how the sampling distribution shifts.
"""

import numpy as np

from polyproof import estimate_size
from polyproof.config import preset_config
from polyproof.curriculum import CURRICULA, distribution, new_scheduler, update_mastery
from polyproof.space import collision_estimate

# -- synthetic validation: the estimator should recover a known size
true_size = 10_000
gen = np.random.default_rng(5)
k1 = [str(int(x)) for x in gen.integers(0, true_size, size=2000)]
k2 = [str(int(x)) for x in gen.integers(0, true_size, size=2000)]
est = collision_estimate(k1, k2)
print(f"synthetic space of {true_size}: estimate {est.estimate:.0f} "
      f"from {est.collisions} collisions")

# -- a real configuration (small sample sizes keep this quick)
cfg = preset_config("small_coeff", 1)
est = estimate_size(cfg, 400, 400, keyer="endpoint", seed1=1, seed2=2)
print(f"small_coeff/1var endpoints: R={est.collisions}, estimate={est.estimate}")
print(f"  note: {est.note}")

# -- curriculum: master tasks and watch the distribution migrate
graph = CURRICULA["C2"]
state = new_scheduler(graph)
print(f"\ncurriculum C2 over tasks {graph.tasks}")
for phase, task in enumerate(["Add", "Mul2", "Mul3"]):
    dist = distribution(state, graph)
    pretty = ", ".join(f"{t}={p:.2f}" for t, p in dist.items() if p)
    print(f"  phase {phase}: sampling {pretty}")
    for _ in range(300):  # mastering-rate EMA needs sustained accuracy
        update_mastery(state, task, 1.0)
dist = distribution(state, graph)
pretty = ", ".join(f"{t}={p:.2f}" for t, p in dist.items() if p)
print(f"  final  : sampling {pretty}")
