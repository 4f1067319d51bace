"""Gap between the weakening-delta kernel and the static delta kernel as omega -> 0.

The strength V0 exp(-omega t) differs from V0 at first order in omega t, so
the relative gap falls linearly in omega; the table shows the constant
gap / omega for several sampling boxes.

    python scripts/limit_chain.py
"""

import numpy as np

from tdwell.propagators import PhysicalParams, k_delta_static, k_td_full

rng = np.random.default_rng(11)
for box, tmax in ((5.0, 5.0), (2.0, 2.0), (1.0, 1.0)):
    x, xp, t = rng.uniform(-box, box, 1000), rng.uniform(-box, box, 1000), rng.uniform(0.05, tmax, 1000)
    ref = k_delta_static(PhysicalParams(omega=0.0), x, t, xp)
    for w in (1e-3, 1e-4, 1e-5, 1e-6):
        rel = np.abs(k_td_full(PhysicalParams(omega=w), x, t, xp) - ref) / np.abs(ref)
        print(f"|x|,|x'|<={box:g} t<={tmax:g} omega={w:.0e}  max rel {rel.max():.3e}  "
              f"median {np.median(rel):.3e}  max/omega {rel.max() / w:.4g}")
