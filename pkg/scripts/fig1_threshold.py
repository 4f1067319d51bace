"""Optical-trap cut: metastability of the two depths and the critical depth by bisection.

    python scripts/fig1_threshold.py
"""

import math

from tdwell.scenarios import OpticalTrapParams, critical_depth, has_metastable_well, mg_nk_per_um, stationary_points

for v0 in (2400.0, 2286.0):
    otp = OpticalTrapParams(V0=v0)
    print(f"V0={v0:g} nK  well={has_metastable_well(otp)}  stationary points {stationary_points(otp)}")
otp = OpticalTrapParams()
vc = critical_depth(otp)
print(f"critical V0 = {vc:.6f} nK (closed form F w0 sqrt(e)/2 = {otp.F * otp.w0 * math.sqrt(math.e) / 2:.6f})")
print(f"m g for 87 u = {mg_nk_per_um():.5f} nK/um")
