"""Fix the regression constants with oracles independent of the library code paths.

Gamma(1+i):   Euler integral, mpmath quadrature
erfc(1):      Maclaurin series, mpmath arithmetic
M(1,-0.5i,2): integral definition over (-inf, 0], mpmath quadrature
pole:         |1 + V0 G0(0,0;E)| contour scan with zoom refinement (no derivatives)
P_free(1):    momentum-space integral |int |phi(k)|^2 exp(-i k^2 t/2) dk|^2, mpmath
              (Crank-Nicolson value printed alongside; it is limited to ~3e-6 by
              the k^-4 momentum tail of the cusped initial state)

Prints a block to paste into src/tdwell/regression.py.
"""

import mpmath
from tdwell import oracle
from tdwell.numerics import Grid1D, WaveFunction, survival
from tdwell.propagators import PhysicalParams, psi_delta
from tdwell.spectral import contour_scan

mpmath.mp.dps = 30

g = mpmath.quad(lambda t: t ** mpmath.mpc(0, 1) * mpmath.exp(-t), [0, 1, 10, mpmath.inf])

x = mpmath.mpf(1)
series = mpmath.nsum(lambda n: (-1) ** int(n) * x ** (2 * n + 1) / (mpmath.factorial(n) * (2 * n + 1)), [0, mpmath.inf])
erfc1 = 1 - 2 / mpmath.sqrt(mpmath.pi) * series

xm, k, t = mpmath.mpf(1), mpmath.mpc(0, -0.5), mpmath.mpf(2)
integrand = lambda xp: (mpmath.exp(1j * k * xp + 1j * (xm - xp) ** 2 / (2 * t))
                        / mpmath.sqrt(2 * mpmath.pi * 1j * t))
mos = mpmath.quad(integrand, mpmath.linspace(-60, 0, 61))

p = PhysicalParams()
pole, resid = contour_scan(p, refine=24)[0]

phi2 = lambda k: 2 / mpmath.pi / (1 + k * k) ** 2      # |phi(k)|^2 of psi_delta, kappa = 1
amp = 2 * mpmath.quadosc(lambda k: phi2(k) * mpmath.exp(-0.5j * k * k), [0, mpmath.inf],
                         zeros=lambda n: mpmath.sqrt(2 * mpmath.pi * n))
p_free = float(abs(amp) ** 2)

grid = Grid1D.symmetric(40.0, 32768)
psi0 = WaveFunction(grid, psi_delta(p, grid.x))
cn = survival(psi0, oracle.cn_evolve(oracle.PotentialSpec(static=True), None, psi0, 1.0, 5e-5, p))

print(f"GAMMA_1_PLUS_I = complex({mpmath.nstr(g.real, 17)}, {mpmath.nstr(g.imag, 17)})")
print(f"ERFC_1 = {mpmath.nstr(erfc1, 17)}")
print(f"MOSHINSKY_1_M05I_2 = complex({mpmath.nstr(mos.real, 17)}, {mpmath.nstr(mos.imag, 17)})")
print(f"POLE_W1_V1 = complex({float(pole.real)!r}, {float(pole.imag)!r})  # |f| = {resid:.2e}")
print(f"P_FREE_T1 = {p_free!r}  # Crank-Nicolson: {cn!r}")
