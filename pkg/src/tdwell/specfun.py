"""Complex special functions: Gamma, Beta, erfc, Moshinsky and parabolic cylinder.

All functions accept scalars or numpy arrays and broadcast.  Arguments of the
Moshinsky function are dimensionless-by-caller: ``M(x, k, t)`` is defined with
``hbar = m = 1``, so physical call sites pass ``x``, ``k`` in reciprocal units
and ``t -> hbar t / m`` (a length squared).
"""

import math

import mpmath
import numpy as np
from scipy.special import wofz


class SpecialFunctionError(ArithmeticError):
    """Base class for special-function domain failures."""


class GammaPoleError(SpecialFunctionError):
    """Argument hits a pole of the Gamma function."""


class ConvergenceError(SpecialFunctionError):
    """A series did not reach its tolerance."""


# Lanczos g = 7, n = 9
_LANCZOS_G = 7.0
_LANCZOS = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_EXP_MINUS_IPI4 = (1.0 - 1.0j) / math.sqrt(2.0)


def _check_poles(z):
    re, im = np.real(z), np.imag(z)
    bad = (im == 0) & (re <= 0) & (re == np.round(re))
    if np.any(bad):
        raise GammaPoleError(f"Gamma pole at {np.asarray(z)[bad].ravel()[0]}")


def _log_sin_pi(z):
    """log(sin(pi z)) without overflow for large |Im z| (branch irrelevant)."""
    z = np.asarray(z, dtype=complex)
    out = np.empty_like(z)
    near = np.abs(z.imag) < 15.0
    out[near] = np.log(np.sin(np.pi * z[near]))
    up = ~near & (z.imag > 0)
    # sin(pi z) = (i/2) e^{-i pi z} (1 - e^{2 i pi z})
    zu = z[up]
    out[up] = -1j * np.pi * zu + math.log(0.5) + 0.5j * np.pi + np.log1p(-np.exp(2j * np.pi * zu))
    dn = ~near & (z.imag < 0)
    zd = z[dn]
    out[dn] = 1j * np.pi * zd + math.log(0.5) - 0.5j * np.pi + np.log1p(-np.exp(-2j * np.pi * zd))
    return out


def _loggamma_right(z):
    # valid for Re z >= 0.5
    z = z - 1.0
    acc = np.full_like(z, _LANCZOS[0])
    for i in range(1, len(_LANCZOS)):
        acc = acc + _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * np.log(t) - t + np.log(acc)


def loggamma_c(z):
    """log Gamma(z) via Lanczos with reflection; imaginary part is not branch-tracked."""
    z = np.asarray(z, dtype=complex)
    _check_poles(z)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    out = np.empty_like(z)
    right = z.real >= 0.5
    out[right] = _loggamma_right(z[right])
    left = ~right
    if np.any(left):
        zl = z[left]
        out[left] = math.log(math.pi) - _log_sin_pi(zl) - _loggamma_right(1.0 - zl)
    return out[0] if scalar else out


def gamma_c(z):
    """Euler Gamma for complex argument.

    Raises GammaPoleError at non-positive integers.
    """
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    z1 = np.atleast_1d(z)
    _check_poles(z1)
    out = np.empty_like(z1)
    # direct product is slightly more accurate than exp(log) at moderate |z|
    small = np.abs(z1) < 20.0
    zs = z1[small]
    if zs.size:
        right = zs.real >= 0.5
        vals = np.empty_like(zs)
        zr = zs[right] - 1.0
        acc = np.full_like(zr, _LANCZOS[0])
        for i in range(1, len(_LANCZOS)):
            acc = acc + _LANCZOS[i] / (zr + i)
        t = zr + _LANCZOS_G + 0.5
        vals[right] = math.sqrt(2 * math.pi) * t ** (zr + 0.5) * np.exp(-t) * acc
        if np.any(~right):
            zl = zs[~right]
            vals[~right] = np.pi / (np.sin(np.pi * zl) * gamma_c(1.0 - zl))
        out[small] = vals
    if np.any(~small):
        out[~small] = np.exp(loggamma_c(z1[~small]))
    return out[0] if scalar else out


def rgamma_c(z):
    """1/Gamma(z), entire: exactly zero at the Gamma poles."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    re, im = z.real, z.imag
    pole = (im == 0) & (re <= 0) & (re == np.round(re))
    out = np.zeros_like(z)
    if np.any(~pole):
        out[~pole] = 1.0 / gamma_c(z[~pole])
    return out


def beta_c(a, b):
    """Euler Beta B(a, b) = Gamma(a)Gamma(b)/Gamma(a+b), computed through log-Gamma."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    return np.exp(loggamma_c(a) + loggamma_c(b) - loggamma_c(a + b))


def faddeeva(z):
    """w(z) = exp(-z^2) erfc(-i z)."""
    return wofz(np.asarray(z, dtype=complex))


def erfc_c(z):
    """Complementary error function for complex z.

    Uses w(i z) in the right half-plane and the reflection erfc(z) = 2 - erfc(-z)
    in the left half-plane, so w is only ever called in the upper half-plane.
    """
    z = np.asarray(z, dtype=complex)
    right = z.real >= 0
    zz = np.where(right, z, -z)
    v = np.exp(-zz * zz) * wofz(1j * zz)
    return np.where(right, v, 2.0 - v)


def moshinsky(x, k, t):
    """Moshinsky function M(x, k, t) = 1/2 exp(ikx - ik^2 t/2) erfc[e^{-i pi/4}(x - kt)/sqrt(2t)].

    ``x`` real, ``k`` complex, ``t > 0``.  The exponential prefactor and
    ``exp(-u^2)`` of the erfc are merged analytically into ``exp(i x^2/(2t))``,
    which has unit modulus, so nothing overflows even for large ``|Im k|``.
    """
    x = np.asarray(x, dtype=float)
    k = np.asarray(k, dtype=complex)
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise ValueError("moshinsky requires t > 0")
    u = _EXP_MINUS_IPI4 * (x - k * t) / np.sqrt(2.0 * t)
    chirp = np.exp(0.5j * x * x / t)
    right = u.real >= 0
    w = wofz(1j * np.where(right, u, -u))
    half = 0.5 * chirp * w
    # e^{ikx - ik^2t/2}: only formed on the left branch, where erfc(u) ~ 2
    plane = np.exp(np.where(right, 0.0, 1j * k * x - 0.5j * k * k * t))
    return np.where(right, half, plane - half)


def _kummer_mp(a, b, w, maxterms):
    s = term = mpmath.mpc(1)
    n = 0
    eps = mpmath.mpf(2) ** (-mpmath.mp.prec)
    while True:
        term = term * (a + n) / (b + n) * w / (n + 1)
        s += term
        n += 1
        if abs(term) <= eps * abs(s) and n > abs(w):
            return s
        if n > maxterms:
            raise ConvergenceError(f"Kummer series did not converge (a={a}, b={b}, w={w})")


def _pcf_d_scalar(nu, z, tol, maxterms):
    prev = None
    dps = 20 + int(abs(z) ** 2 / 2 * math.log10(math.e)) + int(abs(nu))
    for _ in range(4):
        with mpmath.workdps(dps):
            nu_m, z_m = mpmath.mpc(nu), mpmath.mpc(z)
            w = z_m * z_m / 2
            m1 = _kummer_mp(-nu_m / 2, mpmath.mpf(0.5), w, maxterms)
            m2 = _kummer_mp((1 - nu_m) / 2, mpmath.mpf(1.5), w, maxterms)
            val = (mpmath.mpf(2) ** (nu_m / 2) * mpmath.exp(-z_m * z_m / 4)
                   * (mpmath.sqrt(mpmath.pi) * mpmath.rgamma((1 - nu_m) / 2) * m1
                      - mpmath.sqrt(2 * mpmath.pi) * z_m * mpmath.rgamma(-nu_m / 2) * m2))
            val = complex(val)
        if prev is not None and abs(val - prev) <= tol * max(abs(val), 1e-300):
            return val
        prev = val
        dps += 15
    raise ConvergenceError(f"D_nu({nu}, {z}) not stable under precision increase")


def pcf_d(nu, z, tol=1e-13, maxterms=20000):
    """Weber parabolic cylinder function D_nu(z) for complex nu and z.

    Two-term Kummer representation; the series are summed in extended
    precision (raised until two successive precisions agree) because the two
    terms cancel like exp(|z|^2/2) for large |z|.
    """
    nu_b, z_b = np.broadcast_arrays(np.asarray(nu, dtype=complex), np.asarray(z, dtype=complex))
    out = np.empty(nu_b.shape, dtype=complex)
    for idx in np.ndindex(nu_b.shape):
        out[idx] = _pcf_d_scalar(complex(nu_b[idx]), complex(z_b[idx]), tol, maxterms)
    return out[()] if out.ndim == 0 else out


