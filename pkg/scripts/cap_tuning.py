"""Reflection of a free Gaussian probe by the absorbing layer, by probe momentum and strength.

The inverted oscillator accelerates outgoing flux to k ~ omega x at the layer
(about 17 for a half width of 20), which is why the survival runs use a
strength of 200 rather than the generic default.

    python scripts/cap_tuning.py
"""

from tdwell.numerics import Grid1D
from tdwell.oracle import CapSpec, cap_reflection

grid = Grid1D.symmetric(20.0, 4096)
strengths = (1.0, 5.0, 20.0, 50.0, 200.0)
print("k0    " + "  ".join(f"s={s:<7g}" for s in strengths))
for k0 in (2.0, 6.0, 12.0, 17.0):
    row = [cap_reflection(CapSpec(strength=s), grid, k0) for s in strengths]
    print(f"{k0:<5g} " + "  ".join(f"{r:9.2e}" for r in row))
