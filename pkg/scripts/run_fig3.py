"""Atom-laser snapshots: mapped cosh-well evolution, free reference and the CN cross-check.

    python scripts/run_fig3.py
"""

import math
import time

import numpy as np

from tdwell.scenarios import Fig3Config, Fig3LabParams, fig3_oracle, run_fig3, second_moment_width

lab = Fig3LabParams()
p, cp = lab.dimensionless()
us = lab.units
print(f"dimensionless omega = {p.omega:.6g}, alpha = {cp.alpha:.6g}")
print(f"units: length {us.si_factor('length') * 1e6:.4g} um, time {us.si_factor('time'):.5g} s, "
      f"energy {us.si_factor('energy') / 1.380649e-32:.5g} nK")
cfg = Fig3Config()
t0 = time.perf_counter()
snaps = run_fig3(p, cp, cfg)
t1 = time.perf_counter()
ref = fig3_oracle(p, cp, cfg)
t2 = time.perf_counter()
print(f"mapped kernel {t1 - t0:.1f} s, CN oracle {t2 - t1:.1f} s")
xo = ref[0].grid.x
for s, r in zip(snaps, ref):
    xs = s.psi.grid.x
    ri = np.interp(xs, xo, r.amps.real) + 1j * np.interp(xs, xo, r.amps.imag)
    d = math.sqrt(np.sum(np.abs(s.psi.amps - ri) ** 2) * s.psi.grid.dx)
    print(f"wt={s.omega_t:.2f}  norm={s.psi.norm():.6f}  width mapped={second_moment_width(s.psi):.4f} "
          f"free={second_moment_width(s.psi_free):.4f}  L2(mapped, CN)={d:.3e}")
