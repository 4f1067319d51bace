"""Analytic evolution of psi_delta under the weakening-delta kernel vs sigma-extrapolated Crank-Nicolson.

    python scripts/oracle_equivalence.py [--half-width 20] [--n 4096] [--dt 1e-3] [--cap 5]
"""

import argparse
import math
import time

import numpy as np

from tdwell.numerics import Grid1D, WaveFunction, evolve_state
from tdwell.oracle import CapSpec, delta_sigma, evolve_sigma_extrapolated, td_delta_isho_potential
from tdwell.propagators import Family, PhysicalParams, PropagatorHandle, psi_delta

ap = argparse.ArgumentParser()
ap.add_argument("--half-width", type=float, default=20.0)
ap.add_argument("--n", type=int, default=4096)
ap.add_argument("--dt", type=float, default=1e-3)
ap.add_argument("--cap", type=float, default=5.0)
args = ap.parse_args()

p = PhysicalParams()
g = Grid1D.symmetric(args.half_width, args.n)
x = g.x
psi0 = WaveFunction(g, psi_delta(p, x), func=lambda xx: psi_delta(p, xx))
s0 = delta_sigma(p)
cap = CapSpec(strength=args.cap)
times = [0.5, 1.0, 2.0]
t0 = time.perf_counter()
snaps = evolve_sigma_extrapolated(td_delta_isho_potential, [s0, s0 / 2, s0 / 4], cap, psi0, 2.0, args.dt, p,
                                  snapshots=times)
print(f"CN (3 sigmas): {time.perf_counter() - t0:.1f} s")
sub = np.nonzero(cap.inner_mask(x))[0][::4]
out = Grid1D(x[sub[0]], x[sub[-1]] + 4 * g.dx, len(sub))
handle = PropagatorHandle(Family.TD_DELTA_INVERTED_OSC, p)
for snap in snaps[:3]:
    an = evolve_state(handle, psi0, snap.t, out, support=(-35, 35), even=True)
    d = math.sqrt(np.sum(np.abs(an.amps - snap.amps[sub]) ** 2) * out.dx)
    print(f"t={snap.t:g}  L2 = {d:.3e}")
