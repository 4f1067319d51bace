"""Regression constants fixed by independent oracles (scripts/compute_regression_constants.py)."""

# Euler integral by mpmath quadrature
GAMMA_1_PLUS_I = complex(0.49801566811835604, -0.15494982830181069)
# Maclaurin series
ERFC_1 = 0.15729920705028513
# integral definition of M over (-inf, 0]
MOSHINSKY_1_M05I_2 = complex(0.25344645623797015, 0.064715505062465915)
# first resonance pole at omega = V0 = 1 (m = hbar = 1), derivative-free contour scan
POLE_W1_V1 = complex(-0.6612204894485957, -0.14344598369119171)
# free survival of psi_delta (V0 = 1) at t = 1, momentum-space integral
P_FREE_T1 = 0.791225335254723

ALL = {
    "GAMMA_1_PLUS_I": GAMMA_1_PLUS_I,
    "ERFC_1": ERFC_1,
    "MOSHINSKY_1_M05I_2": MOSHINSKY_1_M05I_2,
    "POLE_W1_V1": POLE_W1_V1,
    "P_FREE_T1": P_FREE_T1,
}
