"""Scaling map from a static Hamiltonian to the family

    V(x, t) = V(x/C(t) + A(t)) / C(t)^2 + g1(t) x + g2(t) x^2 + g0(t).

A profile carries C, A and the g's with analytic derivatives.  The ODE
constraints are only checked here, never solved.  The mapped kernel is

    K(x, t | x', 0) = (C(t) C(0))^(-1/2) exp[(i m / 2 hbar)(x^2 C'(t)/C(t) - x'^2 C'(0)/C(0))]
                      * K_static(x/C(t), t~ | x'/C(0), 0),     t~ = int_0^t ds / C(s)^2.
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.integrate import quad


_zero = lambda t: 0.0 * np.asarray(t, float)


@dataclass(frozen=True)
class ScalingProfile:
    C: Callable
    Cdot: Callable
    Cddot: Callable
    A: Callable = _zero
    Adot: Callable = _zero
    Addot: Callable = _zero
    g0: Callable = _zero
    g1: Callable = _zero
    g2: Callable = _zero
    K_const: float = 0.0
    t_tilde_closed: Optional[Callable] = None
    has_shift: bool = False

    def check_positive(self, t_samples):
        c = np.asarray(self.C(np.asarray(t_samples, float)))
        if not np.all(np.isfinite(c)) or np.any(c <= 0):
            raise ValueError("C(t) must be positive and finite on the sampled horizon")


@dataclass(frozen=True)
class MappedCoords:
    x_tilde: np.ndarray
    xp_tilde: np.ndarray
    t_tilde: np.ndarray
    prefactor: np.ndarray


@dataclass(frozen=True)
class ResidualReport:
    """Raw constraint residuals per sample plus the term scales used to normalize them."""

    c_equation: np.ndarray
    a_equation: np.ndarray
    c_scale: np.ndarray
    a_scale: np.ndarray

    @property
    def normalized(self):
        return np.abs(self.c_equation) / self.c_scale, np.abs(self.a_equation) / self.a_scale

    @property
    def max_normalized(self):
        c, a = self.normalized
        return float(max(c.max(), a.max()))


def identity_profile():
    one = lambda t: 1.0 + 0.0 * np.asarray(t, float)
    return ScalingProfile(C=one, Cdot=_zero, Cddot=_zero, t_tilde_closed=lambda t: np.asarray(t, float))


def exponential_profile(p):
    """C = exp(w t), g2 = -m w^2/2: the weakening delta well on the inverted oscillator."""
    w = p.omega
    if w <= 0:
        raise ValueError("exponential profile requires omega > 0")
    return ScalingProfile(
        C=lambda t: np.exp(w * np.asarray(t, float)),
        Cdot=lambda t: w * np.exp(w * np.asarray(t, float)),
        Cddot=lambda t: w * w * np.exp(w * np.asarray(t, float)),
        g2=lambda t: -0.5 * p.m * w * w + 0.0 * np.asarray(t, float),
        t_tilde_closed=lambda t: -np.expm1(-2.0 * w * np.asarray(t, float)) / (2.0 * w),
    )


def ode_residuals(prof, p, t_samples):
    """Residuals of the two profile constraints at each sample.

        C'' + (2 g2/m) C - K/C^3 = 0
        A'' + 2 A' C'/C + K A/C^4 - g1/(m C) = 0

    Raw residuals are returned together with the largest term magnitude per
    sample (floored at 1); ``max_normalized`` is the worst ratio.
    """
    t = np.atleast_1d(np.asarray(t_samples, float))
    if t.size == 0:
        raise ValueError("need at least one sample time")
    prof.check_positive(t)
    c, cd, cdd = prof.C(t), prof.Cdot(t), prof.Cddot(t)
    a, ad, add = prof.A(t), prof.Adot(t), prof.Addot(t)
    g1, g2 = prof.g1(t), prof.g2(t)
    k = prof.K_const
    c_terms = np.array([cdd, 2.0 * g2 * c / p.m, -k / c**3])
    a_terms = np.array([add, 2.0 * ad * cd / c, k * a / c**4, -g1 / (p.m * c)])
    c_scale = np.maximum(1.0, np.max(np.abs(c_terms), axis=0))
    a_scale = np.maximum(1.0, np.max(np.abs(a_terms), axis=0))
    return ResidualReport(c_terms.sum(axis=0), a_terms.sum(axis=0), c_scale, a_scale)


def t_tilde(prof, t):
    """int_0^t ds / C(s)^2, closed form when the profile provides one."""
    t = np.asarray(t, float)
    if np.any(t < 0):
        raise ValueError("t must be non-negative")
    if prof.t_tilde_closed is not None:
        return prof.t_tilde_closed(t)
    f = lambda s: 1.0 / float(prof.C(s)) ** 2
    flat = np.array([quad(f, 0.0, float(tt), epsabs=1e-14, epsrel=1e-13)[0] for tt in t.ravel()])
    return flat.reshape(t.shape)


def transform_coords(prof, x, xp, t):
    """x~ = x/C(t) + A(t), x~' = x'/C(0) + A(0), t~ and the modulus prefactor (C(t)C(0))^(-1/2)."""
    x, xp, t = np.asarray(x, float), np.asarray(xp, float), np.asarray(t, float)
    c_t, c_0 = prof.C(t), prof.C(0.0)
    return MappedCoords(
        x_tilde=x / c_t + prof.A(t),
        xp_tilde=xp / c_0 + prof.A(0.0),
        t_tilde=t_tilde(prof, t),
        prefactor=1.0 / np.sqrt(c_t * c_0),
    )


def mapped_kernel(prof, base, p, x, t, xp):
    """Kernel of the mapped time-dependent problem built from a static ``base`` handle.

    ``p`` supplies m and hbar for the canonical phase; the base handle keeps
    its own parameters.  Profiles with a nonzero shift A(t) are rejected: the
    phase factor is only known for A = 0.
    """
    if not base.is_static:
        raise ValueError(f"base kernel {base.family.value} is not static")
    if prof.has_shift:
        raise NotImplementedError("mapped kernel for A(t) != 0 profiles")
    mc = transform_coords(prof, x, xp, t)
    x, xp, t = np.asarray(x, float), np.asarray(xp, float), np.asarray(t, float)
    phase = 0.5 * p.m / p.hbar * (x * x * prof.Cdot(t) / prof.C(t) - xp * xp * prof.Cdot(0.0) / prof.C(0.0))
    return mc.prefactor * np.exp(1j * phase) * base(mc.x_tilde, mc.t_tilde, mc.xp_tilde)
