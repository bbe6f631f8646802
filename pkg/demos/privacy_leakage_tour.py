"""Exact privacy leakage of each template-protection architecture.

All mutual-information values come from full joint enumeration on the
[4,2] example code, so every number below is exact.
"""

from secbio import metrics
from secbio.gf2 import LinearCode
from secbio.presets import H1

code = LinearCode.from_h(H1)
n, m = code.n, code.m

rows = [
    ("raw storage", {(a, a): 1.0 for a in range(1 << n)}),
    ("keyless sketch (syndrome)", metrics.sketch_joint(code)),
    ("fuzzy commitment", metrics.commit_joint(code)),
    ("two-factor sketch (uniform salt)",
     metrics.two_factor_sketch_joint(code)),
    ("bit negation", metrics.negation_joint(n)),
]

print(f"[{n},{n - m}] code, uniform enrollment ({n} bits of entropy)\n")
print(f"{'architecture':<34} {'I(A;view) bits':>14} {'distortion':>11}")
for label, joint in rows:
    leak = metrics.mutual_information_bits(joint)
    dist = metrics.reconstruction_distortion(joint, n)
    print(f"{label:<34} {leak:>14.3f} {dist:>11.3f}")

print("\nbit negation shows leakage alone misleads: it leaks n-1 bits "
      "yet\nthe adversary's best reconstruction is still wrong half the time.")
print("the commitment's bound secret stays perfectly hidden: "
      f"I(Z;S) = {metrics.mutual_information_bits(metrics.commit_secret_joint(code)):.3f} bits")
