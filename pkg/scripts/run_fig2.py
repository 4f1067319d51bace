"""Survival curves (a)-(d) for omega = V0 = 1 with the ordering and late-time diagnostics.

    python scripts/run_fig2.py [--t-max 8] [--n-samples 200] [--out fig2.csv]
"""

import argparse
import math
import time

import numpy as np

from tdwell.cli import main as cli_main
from tdwell.propagators import PhysicalParams
from tdwell.scenarios import Fig2Config, asymptotic_decay_check, run_fig2

ap = argparse.ArgumentParser()
ap.add_argument("--t-max", type=float, default=8.0)
ap.add_argument("--n-samples", type=int, default=200)
ap.add_argument("--out", default=None, help="also write the CSV through the CLI writer")
args = ap.parse_args()

p = PhysicalParams()
t0 = time.perf_counter()
curves = run_fig2(p, Fig2Config(t_max=args.t_max, n_samples=args.n_samples))
print(f"run_fig2: {time.perf_counter() - t0:.1f} s")
t = curves[0].t
Pa, Pb, Pc, Pd = (c.P for c in curves)
win = (t > 0) & (t <= 6.0)
print("min(P_b - P_c) on (0, 6]:", np.min(Pb[win] - Pc[win]))
print("min(P_c - P_d) on (0, 6]:", np.min(Pc[win] - Pd[win]))
print("min(P_a - P_d) on (0, 6]:", np.min(Pa[win] - Pd[win]))
if p.omega * t[-1] >= 5:
    slope, (c1, c2) = asymptotic_decay_check(curves[2], p)
    print(f"curve (c) late slope {slope:.5f}  (expected {-p.omega})")
    i6 = np.argmin(np.abs(t - 6.0))
    print(f"asymptote exp(-6) c1 c2 = {math.exp(-6.0) * c1 * c2:.6g}   P_c(6) = {Pc[i6]:.6g}")
for tt in (1, 2, 4, 6, 8):
    i = np.argmin(np.abs(t - tt))
    print(f"t={t[i]:.2f}  " + "  ".join(f"{c.case_label.value}={c.P[i]:.6e}" for c in curves))
if args.out:
    cli_main(["fig2", "-o", args.out, "--t-max", str(args.t_max), "--n-samples", str(args.n_samples)])
