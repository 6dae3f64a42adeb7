"""Resolvent norm along the imaginary axis: blow-up at +-sqrt(m), bounded tails.

The norm of (is - A)^(-1) on the energy space is a supremum over frequencies
of a weighted 2x2 matrix norm.  It blows up like 1/|s -+ sqrt(m)| at the two
spectral points and stays bounded at high frequency (in fact it decays like
1/|s| there -- strictly stronger than boundedness).  A single modest constant
C makes norm <= C (1 + s^2) / (|s - sqrt(m)| |s + sqrt(m)|) over the sweep.
"""

import numpy as np

import kgkv as K

p = K.Params(1.0)
rm = p.sqrt_m

print("approach to the spectral point s = sqrt(m):")
for k in range(1, 7):
    s = rm + 10.0 ** (-k)
    nrm = K.resolvent_norm(s, p)
    print(f"  s = sqrt(m) + 1e-{k}:  norm = {nrm:12.5e}   |s - sqrt(m)| * norm = "
          f"{abs(s - rm) * nrm:.4f}")

print("\nhigh-frequency behaviour:")
for s in [10.0, 20.0, 50.0, 100.0, 200.0]:
    nrm = K.resolvent_norm(s, p)
    print(f"  s = {s:6.1f}:  norm = {nrm:10.4e}   s * norm = {s * nrm:.4f}")
print("  the norm itself decays ~ 1/|s|; s * norm approaches a plateau")

sweep = np.linspace(-5.0, 5.0, 401)
ratios = []
for s in sweep:
    if min(abs(s - rm), abs(s + rm)) < 5e-2:
        continue
    nrm = K.resolvent_norm(float(s), p)
    ratios.append(nrm * abs(s - rm) * abs(s + rm) / (1.0 + s * s))
print(f"\nfitted constant over s in [-5, 5]: C = {max(ratios):.4f}")
print("symmetry check: norm(2.2) - norm(-2.2) =",
      K.resolvent_norm(2.2, p) - K.resolvent_norm(-2.2, p))
