"""Propagators, resonance poles and scaling maps for tunneling out of a time-dependent well."""

__version__ = "0.1.0"

from .propagators import (CoshParams, Family, PhysicalParams, PropagatorHandle, k_cosh, k_delta_static,
                          k_free, k_isho, k_td_correction, k_td_full, psi_cap, psi_ch, psi_delta)
from .specfun import erfc_c, gamma_c, moshinsky, pcf_d
