"""Resonance pole of the delta well on the inverted oscillator across omega (V0 = 1).

Each Newton pole is cross-checked by the derivative-free contour scan where the
width is resolvable in double precision.

    python scripts/pole_table.py
"""

import math

from tdwell.propagators import PhysicalParams
from tdwell.spectral import contour_scan, find_delta_pole

print(f"{'omega':>8} {'Re E':>20} {'Im E':>22} {'lifetime':>12} {'ln E_i':>10} {'scan gap':>10}")
for w in (1e-3, 1e-2, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0):
    p = PhysicalParams(omega=w)
    r = find_delta_pole(p)
    gap = ""
    if w >= 0.5:  # narrower poles slip between the scan nodes
        # nearest scan minimum that is a genuine zero of f
        found = [(abs(e - r.E_pole), fv) for e, fv in contour_scan(p, im_range=(-3.0, 0.0), re_range=(-2.5, 0.5),
                                                                   n=300)]
        d, fv = min(found)
        gap = f"{d:.1e}" if fv < 1e-6 else "none"
    print(f"{w:8.3g} {r.E_r:20.15f} {r.E_pole.imag:22.15e} {r.lifetime:12.5g} {r.log_width:10.4g} {gap:>10}")
    # width ~ exp(-pi |E| / (hbar w)) at small omega
    if w <= 0.01:
        print(f"{'':8} pi|E|/w = {math.pi * abs(r.E_r) / w:.5g}")
