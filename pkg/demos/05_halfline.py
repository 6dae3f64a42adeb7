"""The half-line problem: Dirichlet wall at x = 0, same spectrum, same rates.

The equation on (0, infinity) with u(0, t) = 0 is handled by a sine basis
(which enforces the boundary condition exactly) and a boundary-corrected
Green's function solve: the data is extended by zero, and a multiple of the
kernel centred at the origin removes the boundary trace.  Everything from
the line carries over -- the two spectral points, the resolvent bounds, and
the three decay classes with identical slopes.
"""

import numpy as np

import kgkv as K
from kgkv import experiments

p = K.Params(1.0)

grid = K.TorusGrid(160.0, 2 ** 14, K.Boundary.HALFLINE)
data = K.random_smooth_state(37, grid, p, "gaussian-packet")
print("boundary-corrected resolvent on (0, L):")
for s in [0.3, 1.7, 10.0]:
    z = K.resolvent_apply_halfline(s, data, p)
    print(f"  s={s:5.2f}: boundary trace |z(0)| = "
          f"{max(abs(z.u[0]), abs(z.v[0])):.2e}")

print("\nshifted bump states certify the same boundary spectrum:")
for k in [2, 4, 8]:
    rep = experiments.weyl_report(k, p, grid)
    print(f"  k={k:2d}: residual ratio {rep.ratio:.4e} <= bound {rep.bound:.4e}")

print("\nsine-basis decay slopes (L=800, n=2^14), window [1e2, 1e4]:")
dgrid = K.TorusGrid(800.0, 2 ** 14, K.Boundary.HALFLINE)
times = np.geomspace(1.0, 1e4, 120)
for cls in experiments.DATA_CLASSES:
    z0, prof = experiments.make_decay_data(cls, 42, dgrid, p)
    fit = experiments.fit_decay_exponent(
        experiments.decay_trace(z0, p, times), (1e2, 1e4))
    print(f"  {cls:<24} slope = {fit.slope:7.3f}   r^2 = {fit.r_squared:.6f}")
print("\nno xi = 0 mode exists in the sine basis: the lowest frequency is pi/L")
