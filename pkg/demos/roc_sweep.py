"""Exact ROC sweep for an n=16 rate-1/2 sketch over the BSC user model.

Both error rates are computed by full enumeration (no sampling): FAR over
all 2^16 probes, FRR over all noise patterns weighted by their Bernoulli
probabilities.
"""

import numpy as np

from secbio import metrics, sketch
from secbio.presets import bsc16_demo

model, system = bsc16_demo(seed=0)
n = system.code.n
a = np.zeros(n, dtype=np.uint8)  # rates are enrollment-invariant

template = sketch.enroll(system, a)
profile = sketch.distance_profile(system, template)

grid = [i / (2 * n) for i in range(n)]
points = metrics.roc_exact(profile, n, a, model.p, grid)

print(f"n = {n}, syndrome bits = {system.code.m}, intra-user p = {model.p}")
print(f"{'tau':>6}  {'FAR':>12}  {'FRR':>12}")
for pt in points:
    print(f"{pt.tau:6.3f}  {pt.far:12.6g}  {pt.frr:12.6g}")

value, flag = metrics.eer(points)
note = f" ({flag})" if flag else ""
print(f"\nEER = {value:.4g}{note}")
print(f"stored template: {metrics.storage_bits(template)} bits "
      f"(vs {n} for the raw feature vector)")
