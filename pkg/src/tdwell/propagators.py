"""Closed-form propagators K(x, t | x', 0) and the analytically evolved states.

Families:
  Free                 p^2/2m
  InvertedOsc          p^2/2m - m w^2 x^2/2
  StaticDeltaFree      p^2/2m - V0 delta(x)
  TdDeltaInvertedOsc   p^2/2m - m w^2 x^2/2 - V0 exp(-w t) delta(x)
  CoshWell             p^2/2m - alpha mu^2 hbar^2 / (m ch^2(alpha, mu, x))

Every kernel is distributional at t = 0, so t must be strictly positive.
The square root of 1/i is always taken as exp(-i pi/4).
"""

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .specfun import moshinsky

EXP_MINUS_IPI4 = (1.0 - 1.0j) / math.sqrt(2.0)


@dataclass(frozen=True)
class PhysicalParams:
    """Hamiltonian parameters; atomic-unit defaults match the survival-curve set."""

    m: float = 1.0
    hbar: float = 1.0
    omega: float = 1.0
    v0: float = 1.0

    def __post_init__(self):
        if not (self.m > 0 and self.hbar > 0):
            raise ValueError("m and hbar must be positive")
        if self.omega < 0 or self.v0 < 0:
            raise ValueError("omega and v0 must be non-negative")

    @property
    def kappa(self):
        """Inverse bound-state length m V0 / hbar^2 of the delta well."""
        return self.m * self.v0 / self.hbar**2

    @property
    def bound_energy(self):
        return -self.m * self.v0**2 / (2.0 * self.hbar**2)


@dataclass(frozen=True)
class CoshParams:
    alpha: float = 1.0
    mu: float = 1.0

    def __post_init__(self):
        if not (self.alpha > 0 and self.mu > 0):
            raise ValueError("alpha and mu must be positive")


class Family(enum.Enum):
    FREE = "Free"
    INVERTED_OSC = "InvertedOsc"
    STATIC_DELTA_FREE = "StaticDeltaFree"
    TD_DELTA_INVERTED_OSC = "TdDeltaInvertedOsc"
    COSH_WELL = "CoshWell"


STATIC_FAMILIES = (Family.FREE, Family.STATIC_DELTA_FREE, Family.COSH_WELL)


def _check_t(t):
    if np.any(np.asarray(t) <= 0):
        raise ValueError("propagators require t > 0")


def k_free(p, x, t, xp):
    _check_t(t)
    x, xp, t = np.asarray(x, float), np.asarray(xp, float), np.asarray(t, float)
    pref = EXP_MINUS_IPI4 * np.sqrt(p.m / (2.0 * np.pi * p.hbar * t))
    return pref * np.exp(0.5j * p.m * (x - xp) ** 2 / (p.hbar * t))


def k_isho(p, x, t, xp):
    """Inverted-oscillator propagator.

    Written with coth and csch so that large omega*t does not form cosh/sinh
    products; the prefactor branch continues the free-particle phase.
    """
    _check_t(t)
    if p.omega <= 0:
        raise ValueError("k_isho requires omega > 0")
    x, xp, t = np.asarray(x, float), np.asarray(xp, float), np.asarray(t, float)
    wt = p.omega * t
    # 1/sinh and coth from exp(-wt): no overflow at late times
    em = -np.expm1(-2.0 * wt)
    csch = 2.0 * np.exp(-wt) / em
    coth = (2.0 - em) / em
    pref = EXP_MINUS_IPI4 * np.sqrt(p.m * p.omega * csch / (2.0 * np.pi * p.hbar))
    phase = (p.m * p.omega / p.hbar) * (0.5 * (x * x + xp * xp) * coth - x * xp * csch)
    return pref * np.exp(1j * phase)


def k_delta_static(p, x, t, xp):
    _check_t(t)
    x, xp = np.asarray(x, float), np.asarray(xp, float)
    kap = p.kappa
    return k_free(p, x, t, xp) + kap * moshinsky(np.abs(x) + np.abs(xp), 1j * kap, p.hbar * np.asarray(t, float) / p.m)


def k_td_correction(p, x, t, xp):
    """K_V: the part of the weakening-delta kernel beyond the inverted oscillator."""
    _check_t(t)
    if p.omega <= 0:
        raise ValueError("k_td_correction requires omega > 0")
    x, xp, t = np.asarray(x, float), np.asarray(xp, float), np.asarray(t, float)
    kap = p.kappa
    w = p.omega
    shrink = np.exp(-w * t)
    tau = p.hbar * (-np.expm1(-2.0 * w * t)) / (2.0 * w * p.m)
    return (kap * np.exp(0.5j * p.m * w * (x * x - xp * xp) / p.hbar - 0.5 * w * t)
            * moshinsky(shrink * np.abs(x) + np.abs(xp), 1j * kap, tau))


def k_td_full(p, x, t, xp):
    """Kernel for the exponentially weakening delta well on the inverted oscillator (direct formula)."""
    return k_isho(p, x, t, xp) + k_td_correction(p, x, t, xp)


def ch(cp, x):
    """ch(alpha, mu, x) = (alpha e^{mu x} + e^{-mu x}) / 2."""
    x = np.asarray(x, float)
    with np.errstate(over="ignore"):  # inf is the right limit; 1/ch then vanishes
        return 0.5 * (cp.alpha * np.exp(cp.mu * x) + np.exp(-cp.mu * x))


def v_cosh(p, cp, x):
    return -cp.alpha * cp.mu**2 * p.hbar**2 / (p.m * ch(cp, x) ** 2)


def k_cosh(p, cp, x, t, xp):
    _check_t(t)
    x, xp, t = np.asarray(x, float), np.asarray(xp, float), np.asarray(t, float)
    mu = cp.mu
    tau = p.hbar * t / p.m
    d = x - xp
    bracket = (np.exp(0.5j * mu * mu * tau)
               - (np.exp(-mu * d) * moshinsky(d, -1j * mu, tau)
                  + np.exp(mu * d) * moshinsky(-d, -1j * mu, tau)))
    return k_free(p, x, t, xp) + cp.alpha * mu / (2.0 * ch(cp, x) * ch(cp, xp)) * bracket


def psi_delta(p, x):
    """Bound state of -V0 delta(x): sqrt(m V0)/hbar exp(-m V0 |x| / hbar^2)."""
    x = np.asarray(x, float)
    return np.sqrt(p.m * p.v0) / p.hbar * np.exp(-p.kappa * np.abs(x)) + 0j


def psi_ch(cp, x):
    """Bound state sqrt(2 alpha mu) / (2 ch) of the cosh well."""
    return np.sqrt(2.0 * cp.alpha * cp.mu) / (2.0 * ch(cp, x)) + 0j


def cosh_bound_energy(p, cp):
    return -(p.hbar * cp.mu) ** 2 / (2.0 * p.m)


def psi_cap(p, x, t):
    """psi_delta evolved under the pure inverted oscillator, in closed form.

    Two Moshinsky terms with shifted wavenumbers -i kappa +/- x m w tanh(wt/2)/hbar
    and time hbar tanh(wt)/(m w).  The overall prefactor is
    sqrt(m V0)/(hbar sqrt(cosh wt)), which reduces to psi_delta(0) as t -> 0.
    """
    _check_t(t)
    if p.omega <= 0:
        raise ValueError("psi_cap requires omega > 0")
    x, t = np.asarray(x, float), np.asarray(t, float)
    wt = p.omega * t
    kap = p.kappa
    shift = x * p.m * p.omega / p.hbar * np.tanh(0.5 * wt)
    tau = p.hbar * np.tanh(wt) / (p.m * p.omega)
    pref = np.sqrt(p.m * p.v0) / (p.hbar * np.sqrt(np.cosh(wt)))
    return pref * (moshinsky(x, -1j * kap + shift, tau) + moshinsky(-x, -1j * kap - shift, tau))


def psi_free_delta(p, x, t):
    """psi_delta evolved freely (omega -> 0 limit of psi_cap)."""
    _check_t(t)
    x, t = np.asarray(x, float), np.asarray(t, float)
    kap = p.kappa
    tau = p.hbar * t / p.m
    return np.sqrt(p.m * p.v0) / p.hbar * (moshinsky(x, -1j * kap, tau) + moshinsky(-x, -1j * kap, tau))


@dataclass(frozen=True)
class PropagatorHandle:
    """A kernel K(x, t | x', 0) of one family, callable on broadcastable arrays."""

    family: Family
    params: PhysicalParams
    cosh_params: Optional[CoshParams] = None

    def __post_init__(self):
        if self.family is Family.COSH_WELL and self.cosh_params is None:
            raise ValueError("CoshWell kernel requires cosh_params")

    @property
    def is_static(self):
        return self.family in STATIC_FAMILIES

    def __call__(self, x, t, xp):
        p = self.params
        if self.family is Family.FREE:
            return k_free(p, x, t, xp)
        if self.family is Family.INVERTED_OSC:
            return k_isho(p, x, t, xp)
        if self.family is Family.STATIC_DELTA_FREE:
            return k_delta_static(p, x, t, xp)
        if self.family is Family.TD_DELTA_INVERTED_OSC:
            return k_td_full(p, x, t, xp)
        return k_cosh(p, self.cosh_params, x, t, xp)

    def potential(self, x, t):
        """The potential the kernel propagates under (delta terms omitted; see delta_strength)."""
        p = self.params
        x = np.asarray(x, float)
        if self.family in (Family.FREE, Family.STATIC_DELTA_FREE):
            return np.zeros_like(x)
        if self.family in (Family.INVERTED_OSC, Family.TD_DELTA_INVERTED_OSC):
            return -0.5 * p.m * p.omega**2 * x * x
        return v_cosh(p, self.cosh_params, x)

    def delta_strength(self, t):
        """Coefficient s(t) of the -s(t) delta(x) term at the origin."""
        p = self.params
        if self.family is Family.STATIC_DELTA_FREE:
            return p.v0
        if self.family is Family.TD_DELTA_INVERTED_OSC:
            return p.v0 * math.exp(-p.omega * t)
        return 0.0
